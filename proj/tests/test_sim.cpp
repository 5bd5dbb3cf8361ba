#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mktsim/analysis.hpp"
#include "mktsim/compare.hpp"
#include "mktsim/sim.hpp"
#include "test_configs.hpp"

using namespace mktsim;
namespace fs = std::filesystem;

namespace {

std::string slurp_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kZiAgents =
    R"({"kind": "zi", "count": 4, "cash": 10000000, "shares": 2000,
        "params": {"arrival_prob": 0.3, "band_ticks": 10, "volume": 100, "validity_ms": 4000}},
       {"kind": "market_maker", "count": 1, "cash": 10000000, "shares": 2000,
        "params": {"handling": 1, "adverse": 1, "size": 100, "q_max": 2000,
                   "target_inventory": 2000, "validity_ms": 4000}})";

}  // namespace

TEST_CASE("hand-traced single value agent day") {
    // One patient buyer, no counterparty: a bid at V rests, expires on the 2s
    // grid every 10 s, and is reposted; the close sweep removes the last one.
    const auto cfg = parse_scenario(testing::mini_config(
        R"({"kind": "value", "count": 1, "cash": 100000000, "shares": 0,
            "params": {"theta": 0.0, "target": 500, "base_size": 100, "validity_ms": 10000}})"));
    const auto result = run_scenario(cfg);

    CHECK(result.tape.empty());
    REQUIRE(result.quote_log.size() == 6);  // t = 0, 10s, 20s, 30s, 40s, 50s
    for (std::size_t i = 0; i < result.quote_log.size(); ++i) {
        const auto& q = result.quote_log[i];
        CHECK(q.side == Side::Buy);
        CHECK(q.price == 100);
        CHECK(q.volume == 100);
        CHECK(q.submit_time == static_cast<TimeMs>(i) * 10000);
        REQUIRE(q.removal_time.has_value());
        CHECK(*q.removal_time - q.submit_time == 10000);
        CHECK(q.reason == (i + 1 == result.quote_log.size() ? RemovalReason::SessionClose
                                                            : RemovalReason::Expire));
    }

    REQUIRE(result.snapshots.size() == 60);
    int with_bid = 0;
    for (const auto& s : result.snapshots)
        if (s.bid_price) {
            ++with_bid;
            CHECK(*s.bid_price == 100);
        }
    CHECK(with_bid == 54);  // expiry-boundary snapshots see the book empty

    // no trades: every metrics window has absent spread but real resting times
    for (const auto& row : result.metrics) {
        CHECK(!row.quoted_spread.has_value());
        CHECK(row.trade_count == 0);
    }
}

TEST_CASE("same config and seed give byte-identical outputs") {
    const std::string text = testing::mini_config(kZiAgents);
    const auto cfg = parse_scenario(text);

    const fs::path dir1 = fs::temp_directory_path() / "mktsim_det_a";
    const fs::path dir2 = fs::temp_directory_path() / "mktsim_det_b";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    write_run_output(run_scenario(cfg), cfg, "mini.json", text, dir1.string());
    write_run_output(run_scenario(cfg), cfg, "mini.json", text, dir2.string());

    int compared = 0;
    for (const auto& entry : fs::directory_iterator(dir1)) {
        const auto name = entry.path().filename();
        CHECK(slurp_file(entry.path()) == slurp_file(dir2 / name));
        ++compared;
    }
    CHECK(compared == 11);  // ten data files plus the manifest
}

TEST_CASE("an inert extra agent leaves the shared streams untouched") {
    const auto base = parse_scenario(testing::mini_config(kZiAgents));
    const auto extended = parse_scenario(testing::mini_config(
        kZiAgents +
        std::string(R"(, {"kind": "zi", "count": 1, "cash": 0, "shares": 0,
                         "params": {"arrival_prob": 0.0}})")));

    const auto a = run_scenario(base);
    const auto b = run_scenario(extended);

    REQUIRE(a.tape.size() == b.tape.size());
    for (std::size_t i = 0; i < a.tape.size(); ++i) {
        CHECK(a.tape[i].price == b.tape[i].price);
        CHECK(a.tape[i].volume == b.tape[i].volume);
        CHECK(a.tape[i].time == b.tape[i].time);
        CHECK(a.tape[i].buyer == b.tape[i].buyer);
        CHECK(a.tape[i].seller == b.tape[i].seller);
    }
    REQUIRE(a.unlock_log.size() == b.unlock_log.size());
    for (std::size_t i = 0; i < a.unlock_log.size(); ++i) {
        CHECK(a.unlock_log[i].locked_before == b.unlock_log[i].locked_before);
        CHECK(a.unlock_log[i].unlocked == b.unlock_log[i].unlocked);
    }
}

TEST_CASE("cash and shares are conserved, haircuts land in the treasury") {
    const auto cfg = parse_scenario(testing::mini_config(kZiAgents));
    const auto result = run_scenario(cfg);

    Money initial_cash = 0, final_cash = 0;
    Volume initial_shares = 0, final_shares = 0;
    const auto specs = expand_agents(cfg);
    for (const auto& s : specs) {
        initial_cash += s.cash;
        initial_shares += s.shares;
    }
    for (const auto& a : result.agents) {
        final_cash += a.cash;
        final_shares += a.locked + a.unlocked;
    }
    CHECK(final_cash + result.issuer_treasury == initial_cash);
    CHECK(final_shares == initial_shares);
    CHECK(result.budget_rejections == 0);
    CHECK(result.total_haircut == result.issuer_treasury);
    CHECK(result.tape.size() > 10);  // the scenario actually trades

    // every trade happened inside the session
    for (const auto& t : result.tape) {
        CHECK(t.time >= 0);
        CHECK(t.time % cfg.day_length_ms < cfg.session.close_ms);
    }
    // event log is time-ordered
    for (std::size_t i = 1; i < result.events.size(); ++i)
        CHECK(result.events[i - 1].time <= result.events[i].time);
}

TEST_CASE("disabling the lock mechanism removes all haircuts") {
    const std::string base = testing::mini_config(kZiAgents);
    const auto on = parse_scenario(base);
    const auto off = parse_scenario(merge_override(base, R"({"lock": {"enabled": false}})"));
    const auto r_on = run_scenario(on);
    const auto r_off = run_scenario(off);
    CHECK(r_on.total_haircut > 0);
    CHECK(r_off.total_haircut == 0);
    CHECK(r_off.issuer_treasury == 0);
    for (const auto& t : r_off.tape) CHECK(t.haircut == 0);
}

TEST_CASE("identical override gives exactly zero deltas") {
    const std::string base = testing::mini_config(kZiAgents);
    const auto outcome = compare_regimes(base, "{}", {1, 2, 3});
    REQUIRE(outcome.pairs.size() == 3);
    for (const auto& p : outcome.pairs) {
        CHECK(p.base.trade_count == p.alt.trade_count);
        CHECK(p.base.total_volume == p.alt.total_volume);
        CHECK(p.base.momentum_profit == p.alt.momentum_profit);
        CHECK(p.base.total_haircut == p.alt.total_haircut);
    }
    CHECK_THROWS_AS((void)compare_regimes(base, "{}", {}), ConfigError);
}

TEST_CASE("restart mid-day reopens with a fresh ramp") {
    const std::string text = testing::mini_config(
        R"({"kind": "value", "count": 1, "cash": 100000000, "shares": 0,
            "params": {"theta": 0.0, "target": 500, "base_size": 100, "validity_ms": 4000}})",
        R"(, "halts": [{"day": 0, "halt_ms": 20000, "resume_ms": 30000}])");
    const auto cfg = parse_scenario(text);
    const auto result = run_scenario(cfg);

    bool saw_halt = false, saw_restart = false;
    for (const auto& e : result.events) {
        if (e.kind == "halt") saw_halt = true;
        if (e.kind == "restart") saw_restart = true;
    }
    CHECK(saw_halt);
    CHECK(saw_restart);
    // no quote survives the halt sweep, and none is posted while halted
    for (const auto& q : result.quote_log) {
        const bool alive_into_halt = q.submit_time < 20000 && q.removal_time && *q.removal_time > 20000;
        CHECK(!alive_into_halt);
        CHECK(!(q.submit_time > 20000 && q.submit_time < 30000));
    }
}

TEST_CASE("round-trip stats FIFO-match sells against buys") {
    std::vector<Trade> tape;
    Trade buy;
    buy.buyer = 7;
    buy.seller = 1;
    buy.price = 100;
    buy.volume = 10;
    buy.time = 1000;
    tape.push_back(buy);
    Trade buy2 = buy;
    buy2.price = 110;
    buy2.time = 2000;
    tape.push_back(buy2);
    Trade sell;
    sell.buyer = 2;
    sell.seller = 7;
    sell.price = 120;
    sell.volume = 15;
    sell.time = 5000;
    sell.haircut = 30;
    tape.push_back(sell);

    const auto stats = round_trip_stats(tape, 7, 1, 10000);
    // 10 @ +20 and 5 @ +10, minus the 30 haircut
    CHECK(stats.realized_profit == 200 + 50 - 30);
    CHECK(stats.haircuts_paid == 30);
    CHECK(stats.bought == 20);
    CHECK(stats.sold_matched == 15);
    // holding: 10 shares for 4 s, 5 for 3 s, 5 censored at 10 s (8 s)
    CHECK(stats.mean_holding_ms ==
          doctest::Approx((10 * 4000.0 + 5 * 3000.0 + 5 * 8000.0) / 20.0));
}
