// Command line front end.
//
//   dimv2x run             sweep a config or preset and write metrics CSVs
//   dimv2x compare         report what the larger beacon costs vs the 90 B one
//   dimv2x handshake-demo  ledger + two vehicles, one authenticated session
//   dimv2x attack-suite    scripted attacks against the handshake
//   dimv2x export-traces   vehicle position samples as CSV
//
// Exit codes: 0 ok, 1 security check failed, 2 bad configuration, 3 runtime
// error.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dim/adversary.hpp"
#include "dim/errors.hpp"
#include "dim/experiment.hpp"
#include "dim/mobility.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& preset,
            const std::string& out_dir, int seeds_override) {
    dim::ExperimentConfig cfg;
    if (!preset.empty())
        cfg = dim::preset_config(preset);
    else
        cfg = dim::parse_config(config_path);
    if (seeds_override > 0) cfg.seeds = seeds_override;
    dim::ExperimentResult res = dim::run_experiment(cfg, out_dir);
    std::printf("%d runs -> %s\n", res.runs, res.dir.string().c_str());
    std::printf("summary: %s\n", (res.dir / "summary.csv").string().c_str());
    return 0;
}

int cmd_compare(const std::string& results_dir, const std::string& out_file) {
    std::vector<dim::OverheadRow> rows = dim::compare_overhead(results_dir);
    std::fputs(dim::format_overhead_report(rows).c_str(), stdout);
    if (!out_file.empty()) {
        std::string csv = dim::overhead_csv(rows);
        FILE* f = std::fopen(out_file.c_str(), "wb");
        if (!f) throw dim::IoError("cannot open for writing: " + out_file);
        std::fwrite(csv.data(), 1, csv.size(), f);
        std::fclose(f);
    }
    return 0;
}

int cmd_demo(const dim::DemoOptions& opt) {
    dim::DemoResult res = dim::handshake_demo(opt);
    std::fputs(res.transcript.c_str(), stdout);
    if (!res.established) {
        std::printf("handshake refused: %s\n", dim::reason_string(res.reason));
        return 1;
    }
    return 0;
}

int cmd_attacks(int instances, uint64_t seed, const std::vector<std::string>& disabled) {
    dim::HandshakeConfig cfg = dim::disable_guards(disabled);
    dim::AttackReport report = dim::attack_suite(instances, seed, cfg);
    std::fputs(dim::format_report(report).c_str(), stdout);
    return report.successes > 0 ? 1 : 0;
}

int cmd_traces(const std::string& kind, int density, double duration, uint64_t seed,
               const std::string& out_file) {
    dim::ScenarioConfig cfg;
    if (kind == "highway")
        cfg.geometry.kind = dim::ScenarioKind::Highway;
    else if (kind == "urban")
        cfg.geometry.kind = dim::ScenarioKind::Urban;
    else
        throw dim::ConfigError("bad scenario kind: '" + kind + "'");
    cfg.vehicles_per_km = density;
    cfg.duration_s = duration;
    cfg.seed = seed;
    dim::Scenario scn = dim::build_scenario(cfg);
    std::string csv = dim::export_traces_csv(scn);
    FILE* f = std::fopen(out_file.c_str(), "wb");
    if (!f) throw dim::IoError("cannot open for writing: " + out_file);
    std::fwrite(csv.data(), 1, csv.size(), f);
    std::fclose(f);
    std::printf("%zu vehicles -> %s\n", scn.traces.size(), out_file.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decentralized identity overhead studies for vehicular networks"};
    app.require_subcommand(1);

    std::string config_path, preset, out_dir;
    int seeds_override = 0;
    CLI::App* run = app.add_subcommand("run", "sweep a config and write metrics");
    CLI::Option* oc = run->add_option("--config", config_path, "config file path");
    CLI::Option* op = run->add_option("--preset", preset,
                                      "paper-highway|paper-urban|desk-highway|desk-urban");
    oc->excludes(op);
    run->add_option("--out", out_dir, "results directory (default: from config)");
    run->add_option("--seeds", seeds_override, "override seed count");

    std::string results_dir, compare_out;
    CLI::App* compare = app.add_subcommand("compare", "beacon-size overhead report");
    compare->add_option("dir", results_dir, "results directory")->required();
    compare->add_option("--out", compare_out, "also write the report as CSV");

    dim::DemoOptions demo_opt;
    CLI::App* demo = app.add_subcommand("handshake-demo",
                                        "ledger-backed mutual authentication, verbose");
    demo->add_option("--seed", demo_opt.seed, "key material seed");
    demo->add_flag("--revoke-peer", demo_opt.revoke_peer,
                   "revoke the responder before the handshake");
    demo->add_option("--crash-node", demo_opt.crash_node, "crash one verifier (0..3)");

    int instances = 100;
    uint64_t attack_seed = 1;
    std::vector<std::string> disabled;
    CLI::App* attacks = app.add_subcommand("attack-suite", "scripted adversary runs");
    attacks->add_option("--instances", instances, "instances per attack kind");
    attacks->add_option("--seed", attack_seed, "attack seed");
    attacks->add_option("--disable-guard", disabled,
                        "disable a verification for this run (repeatable)");

    std::string trace_kind = "highway", trace_out;
    int trace_density = 100;
    double trace_duration = 10.0;
    uint64_t trace_seed = 1;
    CLI::App* traces = app.add_subcommand("export-traces", "write position samples");
    traces->add_option("--scenario", trace_kind, "highway|urban");
    traces->add_option("--density", trace_density, "vehicles per km");
    traces->add_option("--duration", trace_duration, "seconds");
    traces->add_option("--seed", trace_seed, "scenario seed");
    traces->add_option("--out", trace_out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad usage is a configuration error
    }

    try {
        if (run->parsed()) {
            if (config_path.empty() && preset.empty())
                throw dim::ConfigError("run needs --config or --preset");
            return cmd_run(config_path, preset, out_dir, seeds_override);
        }
        if (compare->parsed()) return cmd_compare(results_dir, compare_out);
        if (demo->parsed()) return cmd_demo(demo_opt);
        if (attacks->parsed()) return cmd_attacks(instances, attack_seed, disabled);
        if (traces->parsed())
            return cmd_traces(trace_kind, trace_density, trace_duration, trace_seed,
                              trace_out);
    } catch (const dim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
