#include "mktsim/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace mktsim {

namespace {

std::optional<double> mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return std::nullopt;
    double sum = 0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

// Sample standard deviation (n-1); absent with fewer than two points.
std::optional<double> sample_std(const std::vector<double>& xs) {
    if (xs.size() < 2) return std::nullopt;
    const double m = *mean_of(xs);
    double ss = 0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::optional<double> autocorr(const std::vector<double>& xs, int lag) {
    if (lag <= 0 || xs.size() <= static_cast<std::size_t>(lag)) return std::nullopt;
    const double m = *mean_of(xs);
    double denom = 0;
    for (double x : xs) denom += (x - m) * (x - m);
    if (denom == 0.0) return std::nullopt;
    double num = 0;
    for (std::size_t i = 0; i + lag < xs.size(); ++i) num += (xs[i] - m) * (xs[i + lag] - m);
    return num / denom;
}

// z-scores standardized over the run with the population std; a metric with
// zero spread across windows carries no information and scores 0.
void add_z_scores(const std::vector<std::optional<double>>& raw, double sign,
                  std::vector<double>& z_sum, std::vector<int>& z_count) {
    double sum = 0;
    std::int64_t n = 0;
    for (const auto& v : raw)
        if (v) {
            sum += *v;
            ++n;
        }
    if (n == 0) return;
    const double mean = sum / static_cast<double>(n);
    double ss = 0;
    for (const auto& v : raw)
        if (v) ss += (*v - mean) * (*v - mean);
    const double stdev = std::sqrt(ss / static_cast<double>(n));
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!raw[i]) continue;
        const double z = stdev == 0.0 ? 0.0 : sign * (*raw[i] - mean) / stdev;
        z_sum[i] += z;
        z_count[i] += 1;
    }
}

}  // namespace

MetricsSeries compute_metrics(const std::vector<Trade>& tape, const std::vector<BookSnapshot>& snapshots,
                              const MetricsConfig& cfg) {
    MetricsSeries series;
    if (tape.empty() && snapshots.empty()) return series;

    TimeMs lo = std::numeric_limits<TimeMs>::max();
    TimeMs hi = std::numeric_limits<TimeMs>::min();
    for (const auto& t : tape) {
        lo = std::min(lo, t.time);
        hi = std::max(hi, t.time);
    }
    for (const auto& s : snapshots) {
        lo = std::min(lo, s.time);
        hi = std::max(hi, s.time);
    }
    const TimeMs w = cfg.window_ms;
    const TimeMs first = (lo / w) * w;
    const TimeMs last = (hi / w) * w;

    std::size_t ti = 0;  // tape cursor
    std::size_t si = 0;  // snapshot cursor
    std::size_t mi = 0;  // latest snapshot at or before current trade

    for (TimeMs start = first; start <= last; start += w) {
        const TimeMs end = start + w;
        MetricsRow row;
        row.window_start = start;
        row.window_end = end;

        std::vector<double> spreads;
        std::vector<double> depths;
        std::vector<double> mids;
        while (si < snapshots.size() && snapshots[si].time < end) {
            const auto& s = snapshots[si];
            if (s.bid_price && s.ask_price)
                spreads.push_back(static_cast<double>(*s.ask_price - *s.bid_price));
            if (s.depth_band) depths.push_back(static_cast<double>(*s.depth_band));
            if (auto m = s.mid()) mids.push_back(*m);
            ++si;
        }

        std::vector<double> eff;
        std::vector<double> amihud_terms;
        std::optional<Price> prev_trade_price;
        while (ti < tape.size() && tape[ti].time < end) {
            const auto& t = tape[ti];
            row.trade_volume += t.volume;
            row.trade_count += 1;
            while (mi < snapshots.size() && snapshots[mi].time <= t.time) ++mi;
            if (mi > 0) {
                // latest snapshot at or before the trade; one-sided books excluded
                if (auto m = snapshots[mi - 1].mid())
                    eff.push_back(2.0 * std::abs(static_cast<double>(t.price) - *m));
            }
            if (prev_trade_price) {
                const double ret = std::log(static_cast<double>(t.price) / static_cast<double>(*prev_trade_price));
                const double notional =
                    static_cast<double>(t.price) * static_cast<double>(cfg.tick_value) * static_cast<double>(t.volume);
                amihud_terms.push_back(std::abs(ret) / notional);
            }
            prev_trade_price = t.price;
            ++ti;
        }

        row.quoted_spread = mean_of(spreads);
        row.depth_band = mean_of(depths);
        row.effective_spread = mean_of(eff);
        row.amihud = mean_of(amihud_terms);

        std::vector<double> rets;
        for (std::size_t i = 1; i < mids.size(); ++i) rets.push_back(std::log(mids[i] / mids[i - 1]));
        row.realized_vol = sample_std(rets);
        row.return_autocorr = autocorr(rets, cfg.autocorr_lag);

        series.push_back(row);
    }

    // Composite index over the run.
    const std::size_t n = series.size();
    std::vector<std::optional<double>> qs(n), am(n), dp(n), vol(n);
    for (std::size_t i = 0; i < n; ++i) {
        qs[i] = series[i].quoted_spread;
        am[i] = series[i].amihud;
        dp[i] = series[i].depth_band;
        vol[i] = static_cast<double>(series[i].trade_volume);
    }
    std::vector<double> z_sum(n, 0.0);
    std::vector<int> z_count(n, 0);
    add_z_scores(qs, -1.0, z_sum, z_count);
    add_z_scores(am, -1.0, z_sum, z_count);
    add_z_scores(dp, +1.0, z_sum, z_count);
    add_z_scores(vol, +1.0, z_sum, z_count);
    for (std::size_t i = 0; i < n; ++i)
        if (z_count[i] > 0) series[i].liquidity_index = z_sum[i] / z_count[i];

    return series;
}

void fill_resting_times(MetricsSeries& series, const std::vector<QuoteLifecycle>& quotes) {
    if (series.empty()) return;
    const TimeMs w = series.front().window_end - series.front().window_start;
    const TimeMs first = series.front().window_start;
    std::vector<double> sums(series.size(), 0.0);
    std::vector<std::int64_t> counts(series.size(), 0);
    for (const auto& q : quotes) {
        if (!q.removal_time) continue;
        const TimeMs t = *q.removal_time;
        const auto idx = (t - first) / w;
        if (idx < 0 || static_cast<std::size_t>(idx) >= series.size()) continue;
        sums[idx] += static_cast<double>(t - q.submit_time);
        counts[idx] += 1;
    }
    for (std::size_t i = 0; i < series.size(); ++i)
        if (counts[i] > 0) series[i].mean_resting_time = sums[i] / static_cast<double>(counts[i]);
}

std::optional<double> mean_resting_time(const std::vector<QuoteLifecycle>& quotes) {
    double sum = 0;
    std::int64_t n = 0;
    for (const auto& q : quotes) {
        if (!q.removal_time) continue;
        sum += static_cast<double>(*q.removal_time - q.submit_time);
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

}  // namespace mktsim
