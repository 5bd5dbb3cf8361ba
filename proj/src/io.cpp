#include "mktsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mktsim/rng.hpp"

namespace mktsim {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no platform newline translation
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::optional<std::string> next_data_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        return line;
    }
    return std::nullopt;
}

const char* kTradesSchema = "mktsim.trades.v1";
const char* kSnapshotsSchema = "mktsim.snapshots.v1";
const char* kQuotesSchema = "mktsim.quotes.v1";
const char* kLedgerSchema = "mktsim.ledger.v1";
const char* kMetricsSchema = "mktsim.metrics.v1";
const char* kEventsSchema = "mktsim.events.v1";

std::string opt_str(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fnv_hex(const std::string& bytes) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

void write_trades_csv(const std::string& path, const std::vector<Trade>& tape, TimeMs day_length_ms) {
    auto out = open_out(path);
    out << "# schema: " << kTradesSchema << "\n";
    out << "time_ms,day,price_ticks,volume,buyer,seller,aggressor,maker_quote_id,taker_order_id,self_trade,haircut\n";
    for (const auto& t : tape) {
        out << t.time << ',' << (t.time / day_length_ms) << ',' << t.price << ',' << t.volume << ','
            << t.buyer << ',' << t.seller << ',' << to_string(t.aggressor) << ',' << t.maker_quote_id
            << ',' << t.taker_order_id << ',' << (t.self_trade ? 1 : 0) << ',' << t.haircut << "\n";
    }
}

void write_trades_jsonl(const std::string& path, const std::vector<Trade>& tape, TimeMs day_length_ms) {
    auto out = open_out(path);
    out << json{{"schema", kTradesSchema}}.dump() << "\n";
    for (const auto& t : tape) {
        json r{{"time_ms", t.time},
               {"day", t.time / day_length_ms},
               {"price_ticks", t.price},
               {"volume", t.volume},
               {"buyer", t.buyer},
               {"seller", t.seller},
               {"aggressor", to_string(t.aggressor)},
               {"maker_quote_id", t.maker_quote_id},
               {"taker_order_id", t.taker_order_id},
               {"self_trade", t.self_trade},
               {"haircut", t.haircut}};
        out << r.dump() << "\n";
    }
}

std::vector<Trade> read_trades_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<Trade> tape;
    auto header = next_data_line(in);
    if (!header) throw IoError("empty trades file: " + path);
    for (auto line = next_data_line(in); line; line = next_data_line(in)) {
        const auto f = split_csv(*line);
        if (f.size() != 11) throw IoError("bad trades row in " + path);
        Trade t;
        t.time = std::stoll(f[0]);
        t.price = std::stoll(f[2]);
        t.volume = std::stoll(f[3]);
        t.buyer = std::stoll(f[4]);
        t.seller = std::stoll(f[5]);
        t.aggressor = f[6] == "buy" ? Side::Buy : Side::Sell;
        t.maker_quote_id = std::stoull(f[7]);
        t.taker_order_id = std::stoull(f[8]);
        t.self_trade = f[9] == "1";
        t.haircut = std::stoll(f[10]);
        tape.push_back(t);
    }
    return tape;
}

void write_snapshots_csv(const std::string& path, const std::vector<BookSnapshot>& snaps, TimeMs day_length_ms) {
    auto out = open_out(path);
    out << "# schema: " << kSnapshotsSchema << "\n";
    out << "time_ms,day,bid_price,bid_size,ask_price,ask_size,depth_band,band_fraction,resting_quotes\n";
    for (const auto& s : snaps) {
        out << s.time << ',' << (s.time / day_length_ms) << ',';
        if (s.bid_price) out << *s.bid_price;
        out << ',' << s.bid_size << ',';
        if (s.ask_price) out << *s.ask_price;
        out << ',' << s.ask_size << ',';
        if (s.depth_band) out << *s.depth_band;
        out << ',' << format_double(s.band_fraction) << ',' << s.resting_quotes << "\n";
    }
}

void write_snapshots_jsonl(const std::string& path, const std::vector<BookSnapshot>& snaps, TimeMs day_length_ms) {
    auto out = open_out(path);
    out << json{{"schema", kSnapshotsSchema}}.dump() << "\n";
    for (const auto& s : snaps) {
        json r{{"time_ms", s.time},
               {"day", s.time / day_length_ms},
               {"bid_price", s.bid_price ? json(*s.bid_price) : json(nullptr)},
               {"bid_size", s.bid_size},
               {"ask_price", s.ask_price ? json(*s.ask_price) : json(nullptr)},
               {"ask_size", s.ask_size},
               {"depth_band", s.depth_band ? json(*s.depth_band) : json(nullptr)},
               {"band_fraction", s.band_fraction},
               {"resting_quotes", s.resting_quotes}};
        out << r.dump() << "\n";
    }
}

std::vector<BookSnapshot> read_snapshots_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<BookSnapshot> snaps;
    auto header = next_data_line(in);
    if (!header) throw IoError("empty snapshots file: " + path);
    for (auto line = next_data_line(in); line; line = next_data_line(in)) {
        const auto f = split_csv(*line);
        if (f.size() != 9) throw IoError("bad snapshots row in " + path);
        BookSnapshot s;
        s.time = std::stoll(f[0]);
        if (!f[2].empty()) s.bid_price = std::stoll(f[2]);
        s.bid_size = std::stoll(f[3]);
        if (!f[4].empty()) s.ask_price = std::stoll(f[4]);
        s.ask_size = std::stoll(f[5]);
        if (!f[6].empty()) s.depth_band = std::stoll(f[6]);
        s.band_fraction = std::stod(f[7]);
        s.resting_quotes = std::stoll(f[8]);
        snaps.push_back(s);
    }
    return snaps;
}

void write_quotes_csv(const std::string& path, const std::vector<QuoteLogRecord>& quotes) {
    auto out = open_out(path);
    out << "# schema: " << kQuotesSchema << "\n";
    out << "quote_id,owner,side,price_ticks,volume,validity_kind,validity_ms,submit_time_ms,removal_time_ms,removal_reason\n";
    for (const auto& q : quotes) {
        out << q.id << ',' << q.owner << ',' << to_string(q.side) << ',' << q.price << ',' << q.volume
            << ',' << (q.validity.is_rolling() ? "rolling" : "fixed") << ',' << q.validity.value << ','
            << q.submit_time << ',';
        if (q.removal_time)
            out << *q.removal_time << ',' << to_string(q.reason) << "\n";
        else
            out << ",\n";
    }
}

std::vector<QuoteLogRecord> read_quotes_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<QuoteLogRecord> quotes;
    auto header = next_data_line(in);
    if (!header) throw IoError("empty quotes file: " + path);
    for (auto line = next_data_line(in); line; line = next_data_line(in)) {
        const auto f = split_csv(*line);
        if (f.size() != 10) throw IoError("bad quotes row in " + path);
        QuoteLogRecord q;
        q.id = std::stoull(f[0]);
        q.owner = std::stoll(f[1]);
        q.side = f[2] == "buy" ? Side::Buy : Side::Sell;
        q.price = std::stoll(f[3]);
        q.volume = std::stoll(f[4]);
        q.validity = f[5] == "rolling" ? Validity::rolling(std::stoll(f[6])) : Validity::fixed(std::stoll(f[6]));
        q.submit_time = std::stoll(f[7]);
        if (!f[8].empty()) {
            q.removal_time = std::stoll(f[8]);
            if (f[9] == "fill")
                q.reason = RemovalReason::Fill;
            else if (f[9] == "expire")
                q.reason = RemovalReason::Expire;
            else if (f[9] == "cancel")
                q.reason = RemovalReason::Cancel;
            else
                q.reason = RemovalReason::SessionClose;
        }
        quotes.push_back(q);
    }
    return quotes;
}

void write_ledger_csv(const std::string& path, const std::vector<LedgerRow>& rows) {
    auto out = open_out(path);
    out << "# schema: " << kLedgerSchema << "\n";
    out << "day,owner,issuer,locked,unlocked,treasury\n";
    for (const auto& r : rows) {
        out << r.day << ',' << r.owner << ',' << r.issuer << ',' << r.locked << ',' << r.unlocked << ','
            << r.treasury << "\n";
    }
}

void write_ledger_jsonl(const std::string& path, const std::vector<LedgerRow>& rows) {
    auto out = open_out(path);
    out << json{{"schema", kLedgerSchema}}.dump() << "\n";
    for (const auto& r : rows) {
        json rec{{"day", r.day},   {"owner", r.owner},       {"issuer", r.issuer},
                 {"locked", r.locked}, {"unlocked", r.unlocked}, {"treasury", r.treasury}};
        out << rec.dump() << "\n";
    }
}

void write_metrics_csv(const std::string& path, const MetricsSeries& series) {
    auto out = open_out(path);
    out << "# schema: " << kMetricsSchema << "\n";
    out << "window_start_ms,window_end_ms,quoted_spread,effective_spread,depth_band,trade_volume,"
           "trade_count,realized_vol,amihud,return_autocorr,mean_resting_time,liquidity_index\n";
    for (const auto& r : series) {
        out << r.window_start << ',' << r.window_end << ',' << opt_str(r.quoted_spread) << ','
            << opt_str(r.effective_spread) << ',' << opt_str(r.depth_band) << ',' << r.trade_volume
            << ',' << r.trade_count << ',' << opt_str(r.realized_vol) << ',' << opt_str(r.amihud)
            << ',' << opt_str(r.return_autocorr) << ',' << opt_str(r.mean_resting_time) << ','
            << opt_str(r.liquidity_index) << "\n";
    }
}

void write_metrics_jsonl(const std::string& path, const MetricsSeries& series) {
    auto out = open_out(path);
    out << json{{"schema", kMetricsSchema}}.dump() << "\n";
    for (const auto& r : series) {
        json rec{{"window_start_ms", r.window_start},
                 {"window_end_ms", r.window_end},
                 {"quoted_spread", opt_json(r.quoted_spread)},
                 {"effective_spread", opt_json(r.effective_spread)},
                 {"depth_band", opt_json(r.depth_band)},
                 {"trade_volume", r.trade_volume},
                 {"trade_count", r.trade_count},
                 {"realized_vol", opt_json(r.realized_vol)},
                 {"amihud", opt_json(r.amihud)},
                 {"return_autocorr", opt_json(r.return_autocorr)},
                 {"mean_resting_time", opt_json(r.mean_resting_time)},
                 {"liquidity_index", opt_json(r.liquidity_index)}};
        out << rec.dump() << "\n";
    }
}

void write_events_jsonl(const std::string& path, const std::vector<SimEvent>& events) {
    auto out = open_out(path);
    out << json{{"schema", kEventsSchema}}.dump() << "\n";
    for (const auto& e : events) {
        json rec{{"time_ms", e.time}, {"kind", e.kind}, {"detail", e.detail}};
        out << rec.dump() << "\n";
    }
}

void write_manifest(const std::string& path, const RunManifest& m) {
    auto out = open_out(path);
    json rec{{"schema", "mktsim.manifest.v1"},
             {"code_version", m.code_version},
             {"config_name", m.config_name},
             {"config_hash", m.config_hash},
             {"seed", m.seed},
             {"trade_count", m.trade_count},
             {"files", m.files}};
    out << rec.dump(2) << "\n";
}

}  // namespace mktsim
