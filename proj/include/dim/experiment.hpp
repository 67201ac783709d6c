#pragma once
// Configuration-driven experiment runner.  A text config (or a named preset)
// selects scenario geometry, densities, MAC layers, beacon sizes and seed
// count; run_experiment sweeps every combination, writes one metrics CSV per
// (combination, seed), a seed-mean summary and a manifest, all byte-stable
// across reruns and worker counts.  compare_overhead reads a results
// directory back and reports what the larger beacon costs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dim/handshake.hpp"
#include "dim/metrics.hpp"
#include "dim/mobility.hpp"
#include "dim/radio.hpp"

namespace dim {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kResultsFormat = 1;

struct ExperimentConfig {
    ScenarioGeometry geometry;
    std::vector<int> densities;  // vehicles per km of road
    std::vector<Mac> macs = {Mac::Dsrc, Mac::Cv2x};
    std::vector<int> beacon_bytes = {90, 1670};  // plain beacon vs. identity-carrying
    double duration_s = 60.0;
    int seeds = 10;                  // runs seeds 1..n per combination
    double p_keep = 0.0;             // sidelink reselection keep probability
    int64_t freshness_window_ms = 5000;
    std::string output_dir = "results";
};

// Parses the key-value config format (see canonical_config_text for the
// shape).  Unknown sections or keys, missing required keys, malformed values
// and broken invariants all throw ConfigError naming the offender.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

// Normalized rendering of a config: every key on its own line, fixed section
// order, defaults spelled out.  parse_config_text(canonical_config_text(c))
// reproduces c; its SHA-256 is the config hash in the manifest.
std::string canonical_config_text(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

// Shipped presets: paper-highway, paper-urban (full-scale sweeps) and
// desk-highway, desk-urban (1 km strip / single crossroads, 10 s, 3 seeds).
// Unknown name -> ConfigError.
ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

const char* scenario_name(ScenarioKind kind);

struct SummaryRow {
    std::string scenario;
    std::string mac;
    int beacon_bytes = 0;
    int density = 0;
    double prr150 = 0;    // seed mean of the 150 m packet reception ratio
    double cbr = 0;       // seed mean channel busy ratio
    double age_s = 0;     // seed mean data age, seconds
    double neighbors = 0; // seed mean neighbor count (150 m range)
};

struct ExperimentResult {
    std::filesystem::path dir;
    int runs = 0;
    std::vector<SummaryRow> summary;
};

// Sweeps every (mac, beacon, density) x seed, one radio run each, and writes
//   runs/<scenario>_<mac>_<bytes>B_<density>_s<seed>.csv   per-run metrics
//   summary.csv                                            seed means
//   manifest.json                                          config + file list
// under out_dir (created if absent; out_dir empty -> cfg.output_dir).  Jobs
// execute on a worker pool sized by DIMV2X_WORKERS (default: hardware
// threads); outputs are written in job order so bytes never depend on the
// pool size.  Run failures rethrow after all workers stop.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir = "");

std::vector<SummaryRow> read_summary(const std::string& path);

struct OverheadRow {
    std::string scenario;
    std::string mac;
    int density = 0;
    std::string metric;    // prr150 | cbr | age
    double baseline = 0;   // 90 B value
    double dim = 0;        // 1670 B value
    double delta = 0;      // prr150: (base-dim)/base; cbr: (dim-base)/base; age: dim-base
};

// Pairs the two beacon profiles for every (scenario, mac, density) in a
// results directory's summary.  A combination missing either profile throws
// IncompleteResults.
std::vector<OverheadRow> compare_overhead(const std::string& results_dir);
std::string format_overhead_report(const std::vector<OverheadRow>& rows);
std::string overhead_csv(const std::vector<OverheadRow>& rows);

// ---- interactive demo ----------------------------------------------------

struct DemoOptions {
    uint64_t seed = 1;
    bool revoke_peer = false;   // revoke the responder before the handshake
    int crash_node = -1;        // crash this verifier first (quorum permitting)
    int64_t freshness_window_ms = 5000;
};

struct DemoResult {
    bool established = false;
    RejectReason reason = RejectReason::None;
    int64_t latency_ms = 0;     // lookup through key confirmation
    std::string transcript;
};

// Stands up a 4-verifier ledger and two vehicles, registers both, runs the
// mutual authentication, and pushes one encrypted beacon through the session.
// Timing uses a logical clock: each message costs its airtime at 6 Mb/s
// (minimum 1 ms), each consensus round a fixed 10 ms.
DemoResult handshake_demo(const DemoOptions& opt);

// Guard names accepted on the command line:
// freshness|key-match|commitment|binding|revocation.  Unknown name ->
// ConfigError.
HandshakeConfig disable_guards(const std::vector<std::string>& names);

}  // namespace dim
