#include "dim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "dim/errors.hpp"
#include "doctest.h"

using namespace dim;

namespace {

// a scenario of parked vehicles at fixed points, for controlled link tests
Scenario static_scenario(ScenarioKind kind, const std::vector<Position>& pts,
                         double duration_s) {
    Scenario s;
    s.duration_s = duration_s;
    s.config.duration_s = duration_s;
    s.config.geometry.kind = kind;
    for (size_t i = 0; i < pts.size(); ++i) {
        VehicleTrace tr;
        char buf[16];
        std::snprintf(buf, sizeof buf, "v%04zu", i);
        tr.vehicle_id = buf;
        tr.speed_mps = 0.0;
        tr.axis = 0;
        tr.cross = pts[i].y;
        tr.dir_sign = 1;
        tr.period = 1e6;  // irrelevant for parked vehicles
        tr.along = {pts[i].x};
        s.traces.push_back(std::move(tr));
    }
    return s;
}

RadioConfig no_shadow_config() {
    RadioConfig cfg;
    cfg.phy.shadow_sd_los_db = 0.0;
    cfg.phy.shadow_sd_nlos_db = 0.0;
    return cfg;
}

std::map<RxFail, int> fail_histogram(const EventLog& log) {
    std::map<RxFail, int> h;
    for (const auto& e : log.rx) h[e.fail]++;
    return h;
}

}  // namespace

TEST_SUITE("radio") {

TEST_CASE("path loss follows the dual slope model") {
    PhyConfig phy;
    CHECK(breakpoint_distance_m(phy) == doctest::Approx(177.0).epsilon(1e-4));
    CHECK(path_loss_db(1.0, LosClass::Los, phy) == doctest::Approx(47.8588).epsilon(1e-4));
    CHECK(path_loss_db(100.0, LosClass::Los, phy) ==
          doctest::Approx(87.8588).epsilon(1e-4));
    CHECK(path_loss_db(354.0, LosClass::Los, phy) ==
          doctest::Approx(104.8607).epsilon(1e-4));
    // NLOS adds a fixed penalty at every distance
    for (double d : {10.0, 100.0, 400.0})
        CHECK(path_loss_db(d, LosClass::Nlos, phy) -
                  path_loss_db(d, LosClass::Los, phy) ==
              doctest::Approx(10.0));
    // continuous across the breakpoint
    double bp = breakpoint_distance_m(phy);
    CHECK(path_loss_db(bp - 1e-9, LosClass::Los, phy) ==
          doctest::Approx(path_loss_db(bp + 1e-9, LosClass::Los, phy)).epsilon(1e-6));
    // slope doubles past the breakpoint
    double below = path_loss_db(bp, LosClass::Los, phy) -
                   path_loss_db(bp / 2, LosClass::Los, phy);
    double above = path_loss_db(2 * bp, LosClass::Los, phy) -
                   path_loss_db(bp, LosClass::Los, phy);
    CHECK(below == doctest::Approx(20.0 * std::log10(2.0)));
    CHECK(above == doctest::Approx(40.0 * std::log10(2.0)));
    CHECK_THROWS_AS(path_loss_db(0.0, LosClass::Los, phy), InvalidDistance);
    CHECK_THROWS_AS(path_loss_db(-5.0, LosClass::Los, phy), InvalidDistance);
}

TEST_CASE("noise floor and received power reference points") {
    PhyConfig phy;
    CHECK(noise_floor_dbm(phy) == doctest::Approx(-95.0).epsilon(1e-9));
    CHECK(rx_power_dbm(100.0, LosClass::Los, 0.0, phy) ==
          doctest::Approx(-58.8588).epsilon(1e-4));
    CHECK(rx_power_dbm(100.0, LosClass::Los, -3.0, phy) ==
          doctest::Approx(-61.8588).epsilon(1e-4));
    CHECK(rx_power_dbm(100.0, LosClass::Nlos, 0.0, phy) ==
          doctest::Approx(-68.8588).epsilon(1e-4));
    CHECK_THROWS_AS(rx_power_dbm(0.0, LosClass::Los, 0.0, phy), InvalidDistance);
}

TEST_CASE("contention-mac airtime at the base bitrate") {
    CHECK(dsrc_airtime_ns(1670) == 2266667);
    CHECK(dsrc_airtime_ns(90) == 160000);
    CHECK(dsrc_airtime_ns(0) == 40000);
    CHECK(dsrc_airtime_ns(800) == 1106667);
    CHECK(dsrc_airtime_ns(91) > dsrc_airtime_ns(90));
}

TEST_CASE("sidelink subchannel demand") {
    CHECK(sps_subchannels_for(90) == 1);
    CHECK(sps_subchannels_for(450) == 1);
    CHECK(sps_subchannels_for(451) == 2);
    CHECK(sps_subchannels_for(900) == 2);
    CHECK(sps_subchannels_for(1670) == 4);
    CHECK(sps_subchannels_for(100000) == 4);  // capped at a full subframe
}

TEST_CASE("sps candidate filtering excludes loud resources") {
    SpsConfig sps;
    // half the grid loud, half never sensed: only the quiet half remains
    std::vector<double> grid(16, -80.0);
    for (size_t i = 8; i < 16; ++i) grid[i] = -300.0;
    auto cands = sps_candidates(grid, sps);
    REQUIRE(cands.size() == 8);
    for (size_t i : cands) CHECK(i >= 8);

    // everything loud: the threshold walks up until the whole grid qualifies
    std::fill(grid.begin(), grid.end(), -80.0);
    cands = sps_candidates(grid, sps);
    CHECK(cands.size() == 16);

    // one quiet resource is not enough at 20%: threshold rises, all return
    std::fill(grid.begin(), grid.end(), -80.0);
    grid[3] = -300.0;
    cands = sps_candidates(grid, sps);
    CHECK(cands.size() == 16);

    // quiet fifth exactly meets the 20% bar
    std::fill(grid.begin(), grid.end(), -80.0);
    for (size_t i = 0; i < 4; ++i) grid[i] = -300.0;
    cands = sps_candidates(grid, sps);
    REQUIRE(cands.size() == 4);
    for (size_t i = 0; i < 4; ++i) CHECK(cands[i] == i);
}

TEST_CASE("decode verdicts follow the precedence order") {
    PhyConfig phy;
    auto mw = [](double dbm) { return std::pow(10.0, dbm / 10.0); };
    // a busy receiver trumps everything else
    CHECK(classify_rx(-40.0, 0.0, true, phy) == RxFail::HalfDuplex);
    CHECK(classify_rx(-95.0, 1.0, true, phy) == RxFail::HalfDuplex);
    // below the sensitivity floor (inclusive at the boundary)
    CHECK(classify_rx(-90.001, 0.0, false, phy) == RxFail::BelowSense);
    CHECK(classify_rx(-90.0, 0.0, false, phy) == RxFail::LowSinr);
    // audible but too weak against noise alone
    CHECK(classify_rx(-89.0, 0.0, false, phy) == RxFail::LowSinr);
    // clean strong signal decodes; 8 dB over noise is exactly enough
    CHECK(classify_rx(-80.0, 0.0, false, phy) == RxFail::None);
    CHECK(classify_rx(-87.0, 0.0, false, phy) == RxFail::None);
    // an equal-power interferer drags sinr to ~0 dB: collision
    CHECK(classify_rx(-80.0, mw(-80.0), false, phy) == RxFail::Collision);
}

TEST_CASE("two parked vehicles exchange every beacon over csma") {
    Scenario s = static_scenario(ScenarioKind::Highway, {{100, -2}, {150, -2}}, 10.0);
    EventLog log = run_radio(s, Mac::Dsrc, 90, 1, {});
    CHECK(log.tx.size() == 200);  // 10 Hz, 10 s, 2 vehicles
    CHECK(log.rx.size() == 200);  // one receiver per transmission
    auto hist = fail_histogram(log);
    CHECK(hist[RxFail::None] == 200);
    // unloaded medium: access delay is exactly the arbitration gap
    for (const auto& e : log.rx) {
        const TxEvent& tx = log.tx[static_cast<size_t>(e.tx_index)];
        CHECK(tx.t_air_ns - tx.t_gen_ns == 58000);
        CHECK(e.distance_m == doctest::Approx(50.0));
    }
    // occupancy: own beacon plus the neighbour's, 160 us each per 100 ms
    REQUIRE(log.occupancy.size() == 200);
    double mean = 0;
    for (const auto& o : log.occupancy) mean += o.busy_fraction;
    mean /= static_cast<double>(log.occupancy.size());
    CHECK(mean == doctest::Approx(0.0032).epsilon(0.02));
}

TEST_CASE("a lone vehicle only hears itself") {
    Scenario s = static_scenario(ScenarioKind::Highway, {{100, -2}}, 10.0);
    EventLog dsrc = run_radio(s, Mac::Dsrc, 90, 1, {});
    CHECK(dsrc.tx.size() == 100);
    CHECK(dsrc.rx.empty());
    REQUIRE(dsrc.occupancy.size() == 100);
    double mean = 0;
    for (const auto& o : dsrc.occupancy) mean += o.busy_fraction;
    CHECK(mean / 100.0 == doctest::Approx(0.0016).epsilon(0.02));

    EventLog cv = run_radio(s, Mac::Cv2x, 90, 1, {});
    CHECK(cv.tx.size() >= 99);  // a grant can fall just past the run end
    CHECK(cv.tx.size() <= 100);
    CHECK(cv.rx.empty());
    REQUIRE(cv.occupancy.size() == 100);
    // one subchannel-subframe per beacon; reselection may shift a beacon
    // across a window boundary, so windows hold 0..2 marked resources
    double total = 0;
    int single = 0;
    for (const auto& o : cv.occupancy) {
        double units = o.busy_fraction * 400.0;
        CHECK(units == doctest::Approx(std::round(units)));
        CHECK(units <= 2.5);
        if (std::abs(units - 1.0) < 1e-6) ++single;
        total += o.busy_fraction;
    }
    CHECK(total * 400.0 == doctest::Approx(static_cast<double>(cv.tx.size())));
    CHECK(single >= 80);
}

TEST_CASE("saturated contention produces deferrals and losses") {
    std::vector<Position> pts;
    for (int i = 0; i < 60; ++i)
        pts.push_back({5.0 * i, i % 2 == 0 ? -2.0 : 2.0});
    Scenario s = static_scenario(ScenarioKind::Highway, pts, 2.0);
    EventLog log = run_radio(s, Mac::Dsrc, 1670, 3, {});
    CHECK(!log.tx.empty());
    CHECK(log.tx.size() <= 60 * 20);
    int deferred = 0;
    for (const auto& tx : log.tx)
        if (tx.t_air_ns - tx.t_gen_ns > 58000) ++deferred;
    CHECK(deferred > 0);
    auto hist = fail_histogram(log);
    CHECK(hist[RxFail::Collision] + hist[RxFail::HalfDuplex] > 0);
    CHECK(hist[RxFail::None] > 0);
}

TEST_CASE("sidelink grants repeat on a 100 ms lattice") {
    Scenario s = static_scenario(ScenarioKind::Highway, {{100, -2}, {150, -2}}, 10.0);
    EventLog log = run_radio(s, Mac::Cv2x, 90, 7, {});
    REQUIRE(log.tx.size() >= 198);  // final beacon may miss the run end
    REQUIRE(log.tx.size() <= 200);
    CHECK(log.rx.size() == log.tx.size());
    auto hist = fail_histogram(log);
    CHECK(hist[RxFail::None] == static_cast<int>(log.rx.size()));
    std::map<int32_t, std::vector<int64_t>> per_sender;
    for (const auto& tx : log.tx) {
        CHECK(tx.t_air_ns % 1000000 == 0);  // subframe aligned
        int64_t age = tx.t_air_ns - tx.t_gen_ns;
        CHECK(age >= 0);
        CHECK(age <= 100000000);
        per_sender[tx.sender].push_back(tx.t_air_ns);
    }
    for (const auto& [sender, times] : per_sender) {
        REQUIRE(times.size() >= 99);
        std::set<int64_t> offsets;
        int exact_period = 0;
        for (size_t i = 0; i < times.size(); ++i) {
            offsets.insert(times[i] % 100000000);
            if (i > 0 && times[i] - times[i - 1] == 100000000) ++exact_period;
        }
        // the grant persists between reselections: few distinct offsets,
        // mostly exact 100 ms spacing
        CHECK(offsets.size() <= 25);
        CHECK(exact_period >= 70);
    }
}

TEST_CASE("receivers beyond twice the evaluation range are not logged") {
    RadioConfig cfg = no_shadow_config();
    Scenario far = static_scenario(ScenarioKind::Highway, {{0, -2}, {1500, -2}}, 1.0);
    EventLog none = run_radio(far, Mac::Dsrc, 90, 1, cfg);
    CHECK(none.tx.size() == 20);
    CHECK(none.rx.empty());

    Scenario edge = static_scenario(ScenarioKind::Highway, {{0, -2}, {900, -2}}, 1.0);
    EventLog weak = run_radio(edge, Mac::Dsrc, 90, 1, cfg);
    REQUIRE(!weak.rx.empty());
    auto hist = fail_histogram(weak);
    CHECK(hist[RxFail::BelowSense] == static_cast<int>(weak.rx.size()));
}

TEST_CASE("around-the-corner links carry the obstruction penalty") {
    RadioConfig cfg = no_shadow_config();
    Scenario s =
        static_scenario(ScenarioKind::Urban, {{100, 252}, {252, 100}}, 1.0);
    EventLog log = run_radio(s, Mac::Dsrc, 90, 1, cfg);
    REQUIRE(!log.rx.empty());
    double d = std::sqrt(2.0) * 152.0;
    double expect = rx_power_dbm(d, LosClass::Nlos, 0.0, cfg.phy);
    for (const auto& e : log.rx) {
        CHECK(e.distance_m == doctest::Approx(d).epsilon(1e-4));
        CHECK(e.rx_dbm == doctest::Approx(expect).epsilon(1e-4));
    }
}

TEST_CASE("runs are reproducible") {
    ScenarioConfig sc;
    sc.geometry.kind = ScenarioKind::Urban;
    sc.vehicles_per_km = 10;
    sc.duration_s = 2.0;
    sc.seed = 5;
    Scenario s = build_scenario(sc);
    for (Mac mac : {Mac::Dsrc, Mac::Cv2x}) {
        EventLog a = run_radio(s, mac, 90, 11, {});
        EventLog b = run_radio(s, mac, 90, 11, {});
        CHECK(export_events_csv(a) == export_events_csv(b));
        CHECK(export_occupancy_csv(a) == export_occupancy_csv(b));
        CHECK(a.tx.size() == b.tx.size());
        CHECK(a.rx.size() == b.rx.size());
    }
}

TEST_CASE("event exports carry the expected headers") {
    Scenario s = static_scenario(ScenarioKind::Highway, {{100, -2}, {150, -2}}, 1.0);
    EventLog log = run_radio(s, Mac::Dsrc, 90, 1, {});
    std::string ev = export_events_csv(log);
    CHECK(ev.rfind("t,sender,receiver,distance,sinr,decoded,reason\n", 0) == 0);
    CHECK(ev.find("v0000") != std::string::npos);
    CHECK(ev.find(",1,none") != std::string::npos);
    std::string occ = export_occupancy_csv(log);
    CHECK(occ.rfind("receiver,t_window,busy_fraction\n", 0) == 0);
    CHECK(occ.find("v0001,0.0,") != std::string::npos);
}

}  // TEST_SUITE
