// Acceptance gate.  Eight checks across the stack, each printing one
// PASS/FAIL line: handshake correctness, adversary containment, replicated
// ledger agreement, metric-oracle equality, radio spot values, desk-scale
// trend reproduction, beacon-size overhead bands, and byte determinism of
// the sweep pipeline.  Exits nonzero when any check fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dim/adversary.hpp"
#include "dim/experiment.hpp"
#include "dim/handshake.hpp"
#include "dim/hash.hpp"
#include "dim/ledger.hpp"
#include "dim/metrics.hpp"
#include "dim/mobility.hpp"
#include "dim/radio.hpp"
#include "dim/rng.hpp"

using namespace dim;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// pinned tolerances
constexpr double kPhyTolDb = 0.01;          // path loss / noise floor spot values
constexpr double kAirtimeTolMs = 0.001;     // DSRC frame airtime
constexpr double kTrendEps = 0.01;          // PRR trend slack for 3-seed noise
constexpr long long kMinBinAttempts = 200;  // bins below this are too noisy to judge
constexpr double kUrbanBandLo = 0.02;       // sidelink urban PRR reduction band
constexpr double kUrbanBandHi = 0.15;
constexpr double kHighwayReductionMax = 0.45;
constexpr double kCbrIncreaseMax = 0.25;
constexpr double kAgeIncreaseMaxS = 0.12;
constexpr double kRunBudgetS = 300.0;       // per simulator run

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct CheckResult {
    std::string headline;
    std::vector<std::string> notes;
    bool ok = false;
};

// ---- 1: handshake correctness -------------------------------------------

CheckResult check_handshake() {
    CheckResult r;
    auto t0 = Clock::now();
    const int n = 1000;
    int established = 0, keys_equal = 0;
    for (int i = 0; i < n; ++i) {
        LedgerNetwork net = make_network(4);
        Participant a = make_participant("veh-0001", mix_seed(0xc1, static_cast<uint64_t>(i), 1));
        Participant b = make_participant("veh-0002", mix_seed(0xc1, static_cast<uint64_t>(i), 2));
        register_participant(net, a, 1000);
        register_participant(net, b, 1000);
        HandshakeConfig cfg;
        HandshakeOutcome out = run_handshake(a, b, net, 0,
                                             mix_seed(0xc1, static_cast<uint64_t>(i), 3),
                                             2000 + i, cfg);
        if (out.established) ++established;
        if (out.established && !out.initiator_key.key.empty() &&
            out.initiator_key == out.responder_key)
            ++keys_equal;
    }
    double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/%d established, %d/%d byte-equal keys, %.1f s",
                  established, n, keys_equal, n, secs);
    r.headline = buf;
    r.ok = established == n && keys_equal == n && secs < 30.0;
    return r;
}

// ---- 2: attack suite -----------------------------------------------------

CheckResult check_attacks() {
    CheckResult r;
    HandshakeConfig honest;
    AttackReport base = attack_suite(100, 0xa77ac4, honest);
    bool ok = base.successes == 0 && base.attempts == 500;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/%d successes with all verifications on",
                  base.successes, base.attempts);
    r.notes.push_back(buf);

    const std::vector<std::string> guards = {"freshness", "key-match", "commitment",
                                             "binding", "revocation"};
    for (const std::string& g : guards) {
        AttackReport weak = attack_suite(100, 0xa77ac4, disable_guards({g}));
        std::snprintf(buf, sizeof buf, "without %-10s -> %d successes", g.c_str(),
                      weak.successes);
        r.notes.push_back(buf);
        if (weak.successes < 1) ok = false;
    }
    std::snprintf(buf, sizeof buf,
                  "0/500 with guards on; each single disabled guard admits >= 1");
    r.headline = ok ? buf : "guard containment broken";
    r.ok = ok;
    return r;
}

// ---- 3: ledger agreement -------------------------------------------------

std::vector<std::vector<int>> crash_patterns(int n, int max_size) {
    std::vector<std::vector<int>> out;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> p;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) p.push_back(i);
        if (static_cast<int>(p.size()) <= max_size) out.push_back(p);
    }
    return out;
}

// 200 rounds of random register/revoke traffic against a network with the
// given nodes down.  Returns (commits, live digests all equal).
std::pair<int, bool> stir_ledger(int n, const std::vector<int>& crashed, uint64_t seed) {
    LedgerNetwork net = make_network(n);
    for (int i : crashed) crash_node(net, static_cast<size_t>(i));
    SimRng rng(seed);
    std::vector<std::string> registered;
    int counter = 0, commits = 0;
    for (int round = 0; round < 200; ++round) {
        int ntx = static_cast<int>(rng.uniform_int(0, 2));
        for (int t = 0; t < ntx; ++t) {
            if (!registered.empty() && rng.uniform() < 0.15) {
                size_t pick = rng.uniform_int(0, registered.size() - 1);
                submit_tx(net, make_revoke_tx(registered[pick], net.nodes[0].node_id,
                                              static_cast<uint64_t>(counter++)));
            } else {
                IdentityRecord rec;
                rec.id = "veh-" + std::to_string(counter++);
                rec.public_key = sha256(as_span(rec.id));
                rec.timestamp_ms = 1000 + round;
                rec.x = rng.uniform() * 1000.0;
                rec.y = rng.uniform() * 1000.0;
                rec.commitment = sha256(as_span(rec.public_key));
                submit_tx(net, make_register_tx(rec, rec.id,
                                                static_cast<uint64_t>(counter)));
                registered.push_back(rec.id);
            }
        }
        if (run_consensus_round(net).committed) ++commits;
    }
    Bytes first;
    bool agree = true, have = false;
    for (const VerifierNode& node : net.nodes) {
        if (!node.alive) continue;
        Bytes d = chain_digest(node);
        if (!have) {
            first = d;
            have = true;
        } else if (d != first) {
            agree = false;
        }
    }
    return {commits, agree};
}

CheckResult check_ledger() {
    CheckResult r;
    bool ok = true;
    int patterns_checked = 0;
    char buf[200];
    for (int n : {3, 4, 5, 7}) {
        int f = (n - 1) / 2;
        uint64_t pi = 0;
        for (const std::vector<int>& p : crash_patterns(n, f)) {
            auto [commits, agree] = stir_ledger(n, p, mix_seed(0xc3, static_cast<uint64_t>(n), pi++));
            ++patterns_checked;
            if (!agree || commits < 1) {
                ok = false;
                std::snprintf(buf, sizeof buf,
                              "n=%d crashed=%zu: commits=%d agree=%d", n, p.size(),
                              commits, agree ? 1 : 0);
                r.notes.push_back(buf);
            }
        }
        // one past the tolerance: quorum unreachable, nothing may commit
        std::vector<int> over(static_cast<size_t>(f) + 1);
        for (int i = 0; i <= f; ++i) over[static_cast<size_t>(i)] = i;
        auto [commits, agree] = stir_ledger(n, over, mix_seed(0xc3, static_cast<uint64_t>(n), 999));
        (void)agree;
        if (commits != 0) {
            ok = false;
            std::snprintf(buf, sizeof buf, "n=%d with %d crashes committed %d blocks",
                          n, f + 1, commits);
            r.notes.push_back(buf);
        }
    }
    std::snprintf(buf, sizeof buf,
                  "%d crash patterns x 200 rounds agree; f+1 crashes never commit",
                  patterns_checked);
    r.headline = buf;
    r.ok = ok;
    return r;
}

// ---- 4: metric oracles ---------------------------------------------------

CheckResult check_metric_oracles() {
    CheckResult r;
    SimRng rng(0xc4);
    int mismatches = 0;
    const int trials = 500;
    for (int trial = 0; trial < trials; ++trial) {
        EventLog log;
        log.vehicle_count = 8;
        int ntx = static_cast<int>(rng.uniform_int(1, 20));
        for (int i = 0; i < ntx; ++i) {
            int64_t gen = static_cast<int64_t>(rng.uniform_int(0, 5000000000LL));
            log.tx.push_back({gen + static_cast<int64_t>(rng.uniform_int(0, 100000000LL)),
                              gen, static_cast<int32_t>(rng.uniform_int(0, 7)), 90});
        }
        int nrx = static_cast<int>(rng.uniform_int(0, 50));
        for (int i = 0; i < nrx; ++i) {
            RxEvent e;
            e.tx_index = static_cast<int32_t>(rng.uniform_int(0, ntx - 1));
            e.receiver = static_cast<int32_t>(rng.uniform_int(0, 7));
            e.distance_m = static_cast<float>(rng.uniform() * 620.0);
            e.rx_dbm = static_cast<float>(-40.0 - rng.uniform() * 60.0);
            e.sinr_db = static_cast<float>(rng.uniform() * 40.0 - 5.0);
            e.fail = static_cast<RxFail>(rng.uniform_int(0, 4));
            log.rx.push_back(e);
        }
        int nocc = static_cast<int>(rng.uniform_int(0, 30));
        for (int i = 0; i < nocc; ++i)
            log.occupancy.push_back({static_cast<int32_t>(rng.uniform_int(0, 7)),
                                     static_cast<int32_t>(rng.uniform_int(0, 9)),
                                     static_cast<float>(rng.uniform())});

        bool same = true;

        // binned reception ratio against a per-bin counting pass
        DistanceBins bins{20.0, 500.0};
        auto got = prr_by_distance(log, bins);
        size_t gi = 0;
        for (int b = 0; b < 25; ++b) {
            long long at = 0, dec = 0;
            for (const RxEvent& e : log.rx) {
                double d = e.distance_m;
                if (d < 0 || d >= 500.0) continue;
                if (static_cast<int>(d / 20.0) != b) continue;
                ++at;
                if (e.fail == RxFail::None) ++dec;
            }
            if (at == 0) continue;
            if (gi >= got.size() || got[gi].bin_lo != b * 20 || got[gi].attempts != at ||
                got[gi].decoded != dec ||
                got[gi].value != static_cast<double>(dec) / at)
                same = false;
            ++gi;
        }
        if (gi != got.size()) same = false;

        // 150 m headline ratio
        {
            int64_t at = 0, dec = 0;
            for (const RxEvent& e : log.rx)
                if (e.distance_m <= 150.0) {
                    ++at;
                    if (e.fail == RxFail::None) ++dec;
                }
            auto got150 = prr_within(log, 150.0);
            if (at == 0) {
                if (got150.has_value()) same = false;
            } else if (!got150.has_value() ||
                       *got150 != static_cast<double>(dec) / static_cast<double>(at)) {
                same = false;
            }
        }

        // busy ratio and data age with the same accumulation shape
        {
            double sum = 0;
            for (const OccupancySample& s : log.occupancy) sum += s.busy_fraction;
            double want = log.occupancy.empty()
                              ? 0.0
                              : sum / static_cast<double>(log.occupancy.size());
            if (mean_cbr(log) != want) same = false;
        }
        {
            double sum = 0;
            for (const TxEvent& t : log.tx)
                sum += static_cast<double>(t.t_air_ns - t.t_gen_ns);
            double want = sum / static_cast<double>(log.tx.size()) / 1e9;
            if (mean_data_age_s(log) != want) same = false;
        }

        // neighbors on a random parked layout, ordered-pair recount
        {
            Scenario s;
            size_t nveh = rng.uniform_int(2, 8);
            size_t samples = rng.uniform_int(5, 21);
            s.duration_s = 0.1 * static_cast<double>(samples - 1);
            for (size_t v = 0; v < nveh; ++v) {
                VehicleTrace tr;
                tr.vehicle_id = "v" + std::to_string(v);
                tr.axis = static_cast<int>(rng.uniform_int(0, 1));
                tr.cross = rng.uniform() * 400.0;
                for (size_t k = 0; k < samples; ++k)
                    tr.along.push_back(rng.uniform() * 400.0);
                s.traces.push_back(tr);
            }
            int64_t cnt = 0;
            for (size_t k = 0; k < samples; ++k) {
                std::vector<Position> pos(nveh);
                for (size_t i = 0; i < nveh; ++i) {
                    const VehicleTrace& tr = s.traces[i];
                    pos[i] = tr.axis == 0 ? Position{tr.along[k], tr.cross}
                                          : Position{tr.cross, tr.along[k]};
                }
                for (size_t i = 0; i < nveh; ++i)
                    for (size_t j = 0; j < nveh; ++j) {
                        if (i == j) continue;
                        double dx = pos[i].x - pos[j].x, dy = pos[i].y - pos[j].y;
                        if (dx * dx + dy * dy <= 150.0 * 150.0) ++cnt;
                    }
            }
            double want = static_cast<double>(cnt) /
                          static_cast<double>(nveh * samples);
            if (mean_neighbors(s, 150.0) != want) same = false;
        }

        if (!same) ++mismatches;
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/%d random logs equal the naive recounts exactly",
                  trials - mismatches, trials);
    r.headline = buf;
    r.ok = mismatches == 0;
    return r;
}

// ---- 5: radio spot values ------------------------------------------------

CheckResult check_phy_spots() {
    CheckResult r;
    double pl = path_loss_db(100.0, LosClass::Los, PhyConfig{});
    double nf = noise_floor_dbm(PhyConfig{});
    double air_ms = static_cast<double>(dsrc_airtime_ns(1670, DsrcConfig{})) / 1e6;
    bool ok = std::fabs(pl - 87.86) <= kPhyTolDb && std::fabs(nf - (-95.0)) <= kPhyTolDb &&
              std::fabs(air_ms - 2.267) <= kAirtimeTolMs;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "path loss(100 m)=%.4f dB, noise=%.4f dBm, airtime(1670 B)=%.6f ms",
                  pl, nf, air_ms);
    r.headline = buf;
    r.ok = ok;
    return r;
}

// ---- 6 + 7: desk sweeps --------------------------------------------------

struct Combo {
    std::map<int, std::array<long long, 2>> bins;    // native grid: lo -> {attempts, decoded}
    std::map<int, std::array<long long, 2>> bins20;  // common 20 m grid to 300 m
    double prr150 = 0, cbr = 0, age = 0, neighbors = 0;
    bool prr150_ok = true;
};

using ComboKey = std::tuple<std::string, std::string, int, int>;  // preset, mac, bytes, density

std::map<ComboKey, Combo> run_desk_sweeps(double& max_run_s) {
    std::map<ComboKey, Combo> combos;
    max_run_s = 0;
    for (const std::string& preset : {std::string("desk-highway"), std::string("desk-urban")}) {
        ExperimentConfig cfg = preset_config(preset);
        for (Mac mac : cfg.macs) {
            for (int bytes : cfg.beacon_bytes) {
                for (int density : cfg.densities) {
                    Combo c;
                    for (int seed = 1; seed <= cfg.seeds; ++seed) {
                        std::fprintf(stderr, "[desk] %s %s %dB %d veh/km seed %d\n",
                                     preset.c_str(), mac_name(mac), bytes, density, seed);
                        auto t0 = Clock::now();
                        ScenarioConfig scfg;
                        scfg.geometry = cfg.geometry;
                        scfg.vehicles_per_km = density;
                        scfg.duration_s = cfg.duration_s;
                        scfg.seed = static_cast<uint64_t>(seed);
                        Scenario scn = build_scenario(scfg);
                        RadioConfig rcfg;
                        rcfg.sps.p_keep = cfg.p_keep;
                        EventLog log = run_radio(scn, mac, bytes,
                                                 static_cast<uint64_t>(seed), rcfg);
                        for (const BinnedPrr& b :
                             prr_by_distance(log, default_bins(cfg.geometry.kind))) {
                            c.bins[static_cast<int>(b.bin_lo)][0] += b.attempts;
                            c.bins[static_cast<int>(b.bin_lo)][1] += b.decoded;
                        }
                        for (const BinnedPrr& b : prr_by_distance(log, {20.0, 300.0})) {
                            c.bins20[static_cast<int>(b.bin_lo)][0] += b.attempts;
                            c.bins20[static_cast<int>(b.bin_lo)][1] += b.decoded;
                        }
                        if (auto p = prr_within(log, 150.0))
                            c.prr150 += *p;
                        else
                            c.prr150_ok = false;
                        c.cbr += mean_cbr(log);
                        c.age += mean_data_age_s(log);
                        c.neighbors += mean_neighbors(scn, 150.0);
                        max_run_s = std::max(max_run_s, seconds_since(t0));
                    }
                    c.prr150 /= cfg.seeds;
                    c.cbr /= cfg.seeds;
                    c.age /= cfg.seeds;
                    c.neighbors /= cfg.seeds;
                    combos[{preset, mac_name(mac), bytes, density}] = c;
                }
            }
        }
    }
    return combos;
}

double pooled(const std::map<int, std::array<long long, 2>>& bins, int lo) {
    auto it = bins.find(lo);
    return static_cast<double>(it->second[1]) / static_cast<double>(it->second[0]);
}

CheckResult check_trends(const std::map<ComboKey, Combo>& combos, double max_run_s) {
    CheckResult r;
    char buf[240];
    int checked = 0, violations = 0;
    auto note_violation = [&](const char* fmt, auto... args) {
        ++violations;
        if (r.notes.size() < 12) {
            std::snprintf(buf, sizeof buf, fmt, args...);
            r.notes.push_back(buf);
        }
    };

    const std::vector<std::string> presets = {"desk-highway", "desk-urban"};
    const std::vector<std::string> macs = {"dsrc", "cv2x"};
    const std::vector<int> sizes = {90, 1670};
    auto densities = [](const std::string& preset) {
        return preset == "desk-highway" ? std::vector<int>{50, 100, 150}
                                        : std::vector<int>{150, 200, 250};
    };

    // (a) reception ratio falls (within noise) along distance...
    for (const auto& preset : presets)
        for (const auto& mac : macs)
            for (int bytes : sizes)
                for (int density : densities(preset)) {
                    const Combo& c = combos.at({preset, mac, bytes, density});
                    double prev = 2.0;
                    for (const auto& [lo, ad] : c.bins) {
                        if (ad[0] < kMinBinAttempts) continue;
                        double v = static_cast<double>(ad[1]) / static_cast<double>(ad[0]);
                        ++checked;
                        if (v > prev + kTrendEps)
                            note_violation("6a %s %s %dB %d: bin %d rises %.3f -> %.3f",
                                           preset.c_str(), mac.c_str(), bytes, density,
                                           lo, prev, v);
                        prev = std::min(prev, v);
                    }
                }
    // ...and along density at 150 m
    for (const auto& preset : presets)
        for (const auto& mac : macs)
            for (int bytes : sizes) {
                double prev = 2.0;
                for (int density : densities(preset)) {
                    const Combo& c = combos.at({preset, mac, bytes, density});
                    ++checked;
                    if (c.prr150 > prev + kTrendEps)
                        note_violation("6a %s %s %dB: prr150 rises with density at %d",
                                       preset.c_str(), mac.c_str(), bytes, density);
                    prev = std::min(prev, c.prr150);
                }
            }

    // (b) urban never beats highway at the shared density, bin by bin
    for (const auto& mac : macs)
        for (int bytes : sizes) {
            const Combo& hw = combos.at({"desk-highway", mac, bytes, 150});
            const Combo& ur = combos.at({"desk-urban", mac, bytes, 150});
            for (const auto& [lo, ad] : ur.bins20) {
                auto it = hw.bins20.find(lo);
                if (it == hw.bins20.end()) continue;
                if (ad[0] < kMinBinAttempts || it->second[0] < kMinBinAttempts) continue;
                double u = static_cast<double>(ad[1]) / static_cast<double>(ad[0]);
                double h = static_cast<double>(it->second[1]) /
                           static_cast<double>(it->second[0]);
                ++checked;
                if (u > h + kTrendEps)
                    note_violation("6b %s %dB bin %d: urban %.3f > highway %.3f",
                                   mac.c_str(), bytes, lo, u, h);
            }
        }

    // (c) sidelink holds the 150 m ratio at or above contention MAC
    for (const auto& preset : presets)
        for (int bytes : sizes)
            for (int density : densities(preset)) {
                const Combo& d = combos.at({preset, "dsrc", bytes, density});
                const Combo& c = combos.at({preset, "cv2x", bytes, density});
                ++checked;
                if (!(c.prr150 >= d.prr150))
                    note_violation("6c %s %dB %d: cv2x %.4f < dsrc %.4f", preset.c_str(),
                                   bytes, density, c.prr150, d.prr150);
            }

    // (d) busy ratio and neighbor count strictly grow with density
    for (const auto& preset : presets)
        for (const auto& mac : macs)
            for (int bytes : sizes) {
                double pc = -1, pn = -1;
                for (int density : densities(preset)) {
                    const Combo& c = combos.at({preset, mac, bytes, density});
                    checked += 2;
                    if (!(c.cbr > pc))
                        note_violation("6d %s %s %dB: cbr not increasing at %d",
                                       preset.c_str(), mac.c_str(), bytes, density);
                    if (!(c.neighbors > pn))
                        note_violation("6d %s %s %dB: neighbors not increasing at %d",
                                       preset.c_str(), mac.c_str(), bytes, density);
                    pc = c.cbr;
                    pn = c.neighbors;
                }
            }

    bool budget_ok = max_run_s < kRunBudgetS;
    std::snprintf(buf, sizeof buf,
                  "%d trend comparisons, %d violations; longest run %.1f s", checked,
                  violations, max_run_s);
    r.headline = buf;
    r.ok = violations == 0 && budget_ok;
    if (!budget_ok) r.notes.push_back("a run exceeded the 300 s budget");
    return r;
}

CheckResult check_overhead_bands(const std::map<ComboKey, Combo>& combos) {
    CheckResult r;
    char buf[240];
    bool ok = true;
    auto reduction = [&](const std::string& preset, const std::string& mac,
                         int density) {
        const Combo& small = combos.at({preset, mac, 90, density});
        const Combo& big = combos.at({preset, mac, 1670, density});
        return (small.prr150 - big.prr150) / small.prr150;
    };

    // urban sidelink reduction, averaged over the preset densities
    double urban_mean = 0;
    for (int d : {150, 200, 250}) {
        double red = reduction("desk-urban", "cv2x", d);
        urban_mean += red / 3.0;
        std::snprintf(buf, sizeof buf, "urban cv2x %d veh/km: prr150 reduction %.1f%%",
                      d, red * 100);
        r.notes.push_back(buf);
    }
    std::snprintf(buf, sizeof buf, "urban cv2x mean reduction %.1f%% (band [%g%%, %g%%])",
                  urban_mean * 100, kUrbanBandLo * 100, kUrbanBandHi * 100);
    r.notes.push_back(buf);
    if (!(urban_mean >= kUrbanBandLo && urban_mean <= kUrbanBandHi)) ok = false;

    // highway sidelink reduction at the top density
    double hw_red = reduction("desk-highway", "cv2x", 150);
    std::snprintf(buf, sizeof buf, "highway cv2x 150 veh/km: prr150 reduction %.1f%% (max %g%%)",
                  hw_red * 100, kHighwayReductionMax * 100);
    r.notes.push_back(buf);
    if (!(hw_red <= kHighwayReductionMax)) ok = false;

    // sidelink busy-ratio increase, relative, worst preset mean
    for (const std::string& preset : {std::string("desk-highway"), std::string("desk-urban")}) {
        std::vector<int> ds = preset == "desk-highway" ? std::vector<int>{50, 100, 150}
                                                       : std::vector<int>{150, 200, 250};
        double mean = 0;
        for (int d : ds) {
            const Combo& small = combos.at({preset, "cv2x", 90, d});
            const Combo& big = combos.at({preset, "cv2x", 1670, d});
            mean += (big.cbr - small.cbr) / small.cbr / 3.0;
        }
        std::snprintf(buf, sizeof buf, "%s cv2x mean relative cbr increase %.1f%% (max %g%%)",
                      preset.c_str(), mean * 100, kCbrIncreaseMax * 100);
        r.notes.push_back(buf);
        if (!(mean <= kCbrIncreaseMax)) ok = false;
    }

    // sidelink data-age increase, absolute, worst combination
    double worst_age = -1;
    for (const std::string& preset : {std::string("desk-highway"), std::string("desk-urban")}) {
        std::vector<int> ds = preset == "desk-highway" ? std::vector<int>{50, 100, 150}
                                                       : std::vector<int>{150, 200, 250};
        for (int d : ds) {
            const Combo& small = combos.at({preset, "cv2x", 90, d});
            const Combo& big = combos.at({preset, "cv2x", 1670, d});
            worst_age = std::max(worst_age, big.age - small.age);
        }
    }
    std::snprintf(buf, sizeof buf, "worst cv2x age increase %.4f s (max %g s)", worst_age,
                  kAgeIncreaseMaxS);
    r.notes.push_back(buf);
    if (!(worst_age <= kAgeIncreaseMaxS)) ok = false;

    // contention MAC must pay strictly more than sidelink, everywhere
    int dsrc_worse = 0, pairs = 0;
    for (const std::string& preset : {std::string("desk-highway"), std::string("desk-urban")}) {
        std::vector<int> ds = preset == "desk-highway" ? std::vector<int>{50, 100, 150}
                                                       : std::vector<int>{150, 200, 250};
        for (int d : ds) {
            ++pairs;
            double rd = reduction(preset, "dsrc", d), rc = reduction(preset, "cv2x", d);
            if (rd > rc) ++dsrc_worse;
            else {
                std::snprintf(buf, sizeof buf,
                              "%s %d veh/km: dsrc reduction %.1f%% <= cv2x %.1f%%",
                              preset.c_str(), d, rd * 100, rc * 100);
                r.notes.push_back(buf);
            }
        }
    }
    if (dsrc_worse != pairs) ok = false;
    std::snprintf(buf, sizeof buf, "dsrc pays more than cv2x in %d/%d combinations",
                  dsrc_worse, pairs);
    r.notes.push_back(buf);

    r.headline = ok ? "overhead inside all bands" : "overhead outside at least one band";
    r.ok = ok;
    return r;
}

// ---- 8: determinism ------------------------------------------------------

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        out[fs::relative(e.path(), root).generic_string()] =
            std::string(std::istreambuf_iterator<char>(in),
                        std::istreambuf_iterator<char>());
    }
    return out;
}

CheckResult check_determinism() {
    CheckResult r;
    ExperimentConfig cfg;
    cfg.geometry.kind = ScenarioKind::Highway;
    cfg.geometry.highway_length_m = 1000.0;
    cfg.densities = {30};
    cfg.duration_s = 2.0;
    cfg.seeds = 2;
    fs::path a = fs::temp_directory_path() / "dim_accept_run_a";
    fs::path b = fs::temp_directory_path() / "dim_accept_run_b";
    fs::remove_all(a);
    fs::remove_all(b);
    run_experiment(cfg, a.string());
    run_experiment(cfg, b.string());
    auto ta = tree_bytes(a), tb = tree_bytes(b);
    bool ok = !ta.empty() && ta == tb;
    char buf[120];
    std::snprintf(buf, sizeof buf, "%zu files, trees %s", ta.size(),
                  ok ? "byte-identical" : "DIFFER");
    r.headline = buf;
    r.ok = ok;
    fs::remove_all(a);
    fs::remove_all(b);
    return r;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        CheckResult result;
    };
    std::vector<Entry> entries;

    entries.push_back({"handshake correctness", check_handshake()});
    entries.push_back({"attack containment", check_attacks()});
    entries.push_back({"ledger agreement", check_ledger()});
    entries.push_back({"metric oracles", check_metric_oracles()});
    entries.push_back({"radio spot values", check_phy_spots()});

    double max_run_s = 0;
    auto combos = run_desk_sweeps(max_run_s);
    entries.push_back({"desk trend reproduction", check_trends(combos, max_run_s)});
    entries.push_back({"overhead bands", check_overhead_bands(combos)});
    entries.push_back({"sweep determinism", check_determinism()});

    int failed = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
        const Entry& e = entries[i];
        std::printf("[%zu] %-24s %s  (%s)\n", i + 1, e.name,
                    e.result.ok ? "PASS" : "FAIL", e.result.headline.c_str());
        for (const std::string& n : e.result.notes) std::printf("      - %s\n", n.c_str());
        if (!e.result.ok) ++failed;
    }
    std::printf("%zu/%zu acceptance checks passed\n", entries.size() - failed,
                entries.size());
    return failed == 0 ? 0 : 1;
}
