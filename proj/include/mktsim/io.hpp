#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mktsim/metrics.hpp"
#include "mktsim/types.hpp"

namespace mktsim {

struct QuoteLogRecord {
    QuoteId id = 0;
    AgentId owner = 0;
    Side side = Side::Buy;
    Price price = 0;
    Volume volume = 0;
    Validity validity;
    TimeMs submit_time = 0;
    std::optional<TimeMs> removal_time;
    RemovalReason reason = RemovalReason::Fill;
};

struct LedgerRow {
    Day day = 0;
    AgentId owner = 0;
    IssuerId issuer;
    Volume locked = 0;
    Volume unlocked = 0;
    Money treasury = 0;  // issuer treasury as of this day, repeated per row
};

struct SimEvent {
    TimeMs time = 0;
    std::string kind;    // phase / reject / halt / restart / unlock / force_unlock / ...
    std::string detail;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Stable formatting rules: integers as decimal, doubles via "%.17g", absent
// values as empty CSV fields / JSON nulls. Every file starts with a schema
// marker ("# schema: ..." comment in CSV, a {"schema": ...} record in JSONL).

void write_trades_csv(const std::string& path, const std::vector<Trade>& tape, TimeMs day_length_ms);
void write_trades_jsonl(const std::string& path, const std::vector<Trade>& tape, TimeMs day_length_ms);
std::vector<Trade> read_trades_csv(const std::string& path);

void write_snapshots_csv(const std::string& path, const std::vector<BookSnapshot>& snaps, TimeMs day_length_ms);
void write_snapshots_jsonl(const std::string& path, const std::vector<BookSnapshot>& snaps, TimeMs day_length_ms);
std::vector<BookSnapshot> read_snapshots_csv(const std::string& path);

void write_quotes_csv(const std::string& path, const std::vector<QuoteLogRecord>& quotes);
std::vector<QuoteLogRecord> read_quotes_csv(const std::string& path);

void write_ledger_csv(const std::string& path, const std::vector<LedgerRow>& rows);
void write_ledger_jsonl(const std::string& path, const std::vector<LedgerRow>& rows);

void write_metrics_csv(const std::string& path, const MetricsSeries& series);
void write_metrics_jsonl(const std::string& path, const MetricsSeries& series);

void write_events_jsonl(const std::string& path, const std::vector<SimEvent>& events);

struct RunManifest {
    std::string code_version;
    std::string config_name;
    std::string config_hash;  // fnv1a64 of the config text, hex
    std::uint64_t seed = 0;
    std::int64_t trade_count = 0;
    std::vector<std::string> files;
};

void write_manifest(const std::string& path, const RunManifest& m);

std::string format_double(double v);
std::string fnv_hex(const std::string& bytes);

}  // namespace mktsim
