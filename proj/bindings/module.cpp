// Python surface for the library: scenario construction, the radio runs, the
// channel metrics, the experiment sweep, and the ledger-backed handshake and
// adversary drivers.  Heavy structs stay opaque; results cross as plain
// dicts, tuples and CSV strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>

#include "dim/adversary.hpp"
#include "dim/errors.hpp"
#include "dim/experiment.hpp"
#include "dim/metrics.hpp"
#include "dim/mobility.hpp"
#include "dim/radio.hpp"

namespace py = pybind11;
using namespace dim;

namespace {

ScenarioKind parse_kind(const std::string& kind) {
    if (kind == "highway") return ScenarioKind::Highway;
    if (kind == "urban") return ScenarioKind::Urban;
    throw ConfigError("bad scenario kind: '" + kind + "'");
}

Mac parse_mac(const std::string& mac) {
    if (mac == "dsrc") return Mac::Dsrc;
    if (mac == "cv2x") return Mac::Cv2x;
    throw ConfigError("bad mac: '" + mac + "'");
}

py::dict summary_dict(const SummaryRow& r) {
    py::dict d;
    d["scenario"] = r.scenario;
    d["mac"] = r.mac;
    d["beacon_bytes"] = r.beacon_bytes;
    d["density"] = r.density;
    d["prr150"] = r.prr150;
    d["cbr"] = r.cbr;
    d["age_s"] = r.age_s;
    d["neighbors"] = r.neighbors;
    return d;
}

}  // namespace

PYBIND11_MODULE(dimv2x, m) {
    m.doc() = "ledger-anchored vehicle identity and its V2X channel cost";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IncompleteResults>(m, "IncompleteResults", PyExc_ValueError);
    py::register_exception<OutOfRange>(m, "OutOfRange", PyExc_IndexError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    // ---- mobility -------------------------------------------------------
    py::class_<Scenario>(m, "Scenario")
        .def_property_readonly(
            "vehicle_count", [](const Scenario& s) { return s.traces.size(); })
        .def_property_readonly("duration_s",
                               [](const Scenario& s) { return s.duration_s; })
        .def_property_readonly("vehicle_ids",
                               [](const Scenario& s) {
                                   std::vector<std::string> ids;
                                   for (const VehicleTrace& t : s.traces)
                                       ids.push_back(t.vehicle_id);
                                   return ids;
                               })
        .def("position_at",
             [](const Scenario& s, size_t vehicle, double t) {
                 Position p = position_at(s, vehicle, t);
                 return std::make_pair(p.x, p.y);
             },
             py::arg("vehicle"), py::arg("t"))
        .def("traces_csv", &export_traces_csv);

    m.def(
        "build_scenario",
        [](const std::string& kind, int density, double duration_s, uint64_t seed,
           double highway_length_m, std::pair<int, int> urban_streets) {
            ScenarioConfig cfg;
            cfg.geometry.kind = parse_kind(kind);
            cfg.geometry.highway_length_m = highway_length_m;
            cfg.geometry.urban_v_streets = urban_streets.first;
            cfg.geometry.urban_h_streets = urban_streets.second;
            cfg.vehicles_per_km = density;
            cfg.duration_s = duration_s;
            cfg.seed = seed;
            return build_scenario(cfg);
        },
        py::arg("kind") = "highway", py::arg("density") = 100,
        py::arg("duration_s") = 10.0, py::arg("seed") = 1,
        py::arg("highway_length_m") = 5000.0,
        py::arg("urban_streets") = std::make_pair(3, 3));

    // ---- radio ----------------------------------------------------------
    py::class_<EventLog>(m, "EventLog")
        .def_property_readonly(
            "mac", [](const EventLog& l) { return std::string(mac_name(l.mac)); })
        .def_readonly("beacon_bytes", &EventLog::beacon_bytes)
        .def_readonly("seed", &EventLog::seed)
        .def_property_readonly("tx_count",
                               [](const EventLog& l) { return l.tx.size(); })
        .def_property_readonly("rx_count",
                               [](const EventLog& l) { return l.rx.size(); })
        .def("events_csv", &export_events_csv)
        .def("occupancy_csv", &export_occupancy_csv);

    m.def(
        "run_radio",
        [](const Scenario& s, const std::string& mac, int beacon_bytes, uint64_t seed,
           double p_keep) {
            RadioConfig cfg;
            cfg.sps.p_keep = p_keep;
            return run_radio(s, parse_mac(mac), beacon_bytes, seed, cfg);
        },
        py::arg("scenario"), py::arg("mac") = "dsrc", py::arg("beacon_bytes") = 90,
        py::arg("seed") = 1, py::arg("p_keep") = 0.0);

    // ---- metrics --------------------------------------------------------
    m.def(
        "prr_by_distance",
        [](const EventLog& log, double bin_width_m, double max_m) {
            std::vector<std::tuple<int, int64_t, int64_t, double>> out;
            for (const BinnedPrr& b : prr_by_distance(log, {bin_width_m, max_m}))
                out.emplace_back(static_cast<int>(b.bin_lo),
                                 static_cast<int64_t>(b.attempts),
                                 static_cast<int64_t>(b.decoded), b.value);
            return out;
        },
        py::arg("log"), py::arg("bin_width_m") = 20.0, py::arg("max_m") = 500.0,
        "per-bin (lower_edge, attempts, decoded, ratio)");
    m.def(
        "prr_within",
        [](const EventLog& log, double max_m) -> std::optional<double> {
            return prr_within(log, max_m);
        },
        py::arg("log"), py::arg("max_m") = 150.0);
    m.def("mean_cbr", &mean_cbr, py::arg("log"));
    m.def("mean_data_age_s", &mean_data_age_s, py::arg("log"));
    m.def("mean_neighbors", &mean_neighbors, py::arg("scenario"),
          py::arg("range_m") = 150.0);

    // ---- experiment sweep ----------------------------------------------
    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_readwrite("duration_s", &ExperimentConfig::duration_s)
        .def_readwrite("seeds", &ExperimentConfig::seeds)
        .def_readwrite("p_keep", &ExperimentConfig::p_keep)
        .def_readwrite("densities", &ExperimentConfig::densities)
        .def_readwrite("beacon_bytes", &ExperimentConfig::beacon_bytes)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def_property_readonly("text", &canonical_config_text)
        .def_property_readonly("hash", &config_hash)
        .def("__repr__", [](const ExperimentConfig& c) {
            return "<ExperimentConfig " + config_hash(c).substr(0, 12) + ">";
        });
    m.def("parse_config_text", &parse_config_text, py::arg("text"));
    m.def("parse_config", &parse_config, py::arg("path"));
    m.def("preset_config", &preset_config, py::arg("name"));
    m.def("preset_names", &preset_names);
    m.def(
        "run_experiment",
        [](const ExperimentConfig& cfg, const std::string& out_dir) {
            ExperimentResult r = run_experiment(cfg, out_dir);
            py::dict d;
            d["dir"] = r.dir.string();
            d["runs"] = r.runs;
            py::list rows;
            for (const SummaryRow& row : r.summary) rows.append(summary_dict(row));
            d["summary"] = rows;
            return d;
        },
        py::arg("config"), py::arg("out_dir") = "");
    m.def(
        "compare_overhead",
        [](const std::string& results_dir) {
            py::list rows;
            for (const OverheadRow& r : compare_overhead(results_dir)) {
                py::dict d;
                d["scenario"] = r.scenario;
                d["mac"] = r.mac;
                d["density"] = r.density;
                d["metric"] = r.metric;
                d["baseline"] = r.baseline;
                d["dim"] = r.dim;
                d["delta"] = r.delta;
                rows.append(d);
            }
            return rows;
        },
        py::arg("results_dir"));

    // ---- handshake + adversaries ---------------------------------------
    m.def(
        "handshake_demo",
        [](uint64_t seed, bool revoke_peer, int crash_node) {
            DemoOptions opt;
            opt.seed = seed;
            opt.revoke_peer = revoke_peer;
            opt.crash_node = crash_node;
            DemoResult r = handshake_demo(opt);
            py::dict d;
            d["established"] = r.established;
            d["reason"] = std::string(reason_string(r.reason));
            d["latency_ms"] = r.latency_ms;
            d["transcript"] = r.transcript;
            return d;
        },
        py::arg("seed") = 1, py::arg("revoke_peer") = false,
        py::arg("crash_node") = -1);
    m.def(
        "attack_suite",
        [](int instances, uint64_t seed, const std::vector<std::string>& disabled) {
            AttackReport rep = attack_suite(instances, seed, disable_guards(disabled));
            py::dict d;
            d["attempts"] = rep.attempts;
            d["successes"] = rep.successes;
            py::list kinds;
            for (const AttackStats& s : rep.per_kind) {
                py::dict k;
                k["attack"] = std::string(attack_name(s.kind));
                k["attempts"] = s.attempts;
                k["successes"] = s.successes;
                k["rejections"] = s.rejections;
                kinds.append(k);
            }
            d["per_kind"] = kinds;
            d["report"] = format_report(rep);
            return d;
        },
        py::arg("instances") = 100, py::arg("seed") = 1,
        py::arg("disable_guards") = std::vector<std::string>{});
}
