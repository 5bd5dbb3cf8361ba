#pragma once

#include <optional>
#include <vector>

#include "mktsim/types.hpp"

namespace mktsim {

// One book snapshot as persisted to the snapshot file. depth_band is the
// resting volume within +-band_fraction of mid at snapshot time (absent when
// the book is one-sided).
struct BookSnapshot {
    TimeMs time = 0;
    std::optional<Price> bid_price;
    Volume bid_size = 0;
    std::optional<Price> ask_price;
    Volume ask_size = 0;
    std::optional<Volume> depth_band;
    double band_fraction = 0.0;
    Volume resting_quotes = 0;

    std::optional<double> mid() const {
        if (!bid_price || !ask_price) return std::nullopt;
        return (static_cast<double>(*bid_price) + static_cast<double>(*ask_price)) / 2.0;
    }
};

// One quote lifecycle record (submit paired with removal, if removed).
struct QuoteLifecycle {
    QuoteId id = 0;
    TimeMs submit_time = 0;
    std::optional<TimeMs> removal_time;
    RemovalReason reason = RemovalReason::Fill;
};

struct MetricsRow {
    TimeMs window_start = 0;
    TimeMs window_end = 0;
    std::optional<double> quoted_spread;     // ticks, mean over snapshots
    std::optional<double> effective_spread;  // ticks, mean over trades of 2|p - mid|
    std::optional<double> depth_band;        // shares, mean over snapshots
    Volume trade_volume = 0;
    std::int64_t trade_count = 0;
    std::optional<double> realized_vol;      // std of log mid returns within the window
    std::optional<double> amihud;            // mean |log return| / notional over consecutive trades
    std::optional<double> return_autocorr;   // of within-window mid returns, at the configured lag
    std::optional<double> mean_resting_time; // ms, quotes removed in this window
    std::optional<double> liquidity_index;   // mean z-score of {-spread, -amihud, depth, volume}
};

struct MetricsConfig {
    TimeMs window_ms = 60000;
    double band_fraction = 0.01;
    int autocorr_lag = 1;
    Money tick_value = 1;
};

using MetricsSeries = std::vector<MetricsRow>;

// Batch computation over a time-sorted tape and snapshot series. Windows are
// anchored at t=0 and contiguous from the first to the last observation.
// Degenerate windows emit absent fields, never failures.
MetricsSeries compute_metrics(const std::vector<Trade>& tape, const std::vector<BookSnapshot>& snapshots,
                              const MetricsConfig& cfg);

// Per-window mean resting time from the quote lifecycle log, merged into an
// existing series (rows matched by window).
void fill_resting_times(MetricsSeries& series, const std::vector<QuoteLifecycle>& quotes);

// Whole-log mean resting time over quotes removed by any means; absent when
// no quote was removed.
std::optional<double> mean_resting_time(const std::vector<QuoteLifecycle>& quotes);

}  // namespace mktsim
