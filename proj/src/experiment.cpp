#include "dim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "dim/errors.hpp"
#include "dim/hash.hpp"
#include "dim/rng.hpp"
#include "dim/wire.hpp"
#include "nlohmann/json.hpp"

namespace dim {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(v);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!v.empty() && v.back() == ',') out.push_back("");
    return out;
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long long n = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return n;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": '" + v + "'");
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": '" + v + "'");
    }
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "scenario.kind",          "scenario.densities",  "scenario.highway_length_m",
        "scenario.urban_streets", "scenario.duration_s", "scenario.seeds",
        "radio.macs",             "radio.beacon_bytes",  "radio.p_keep",
        "handshake.freshness_window_ms", "output.dir",
    };
    return keys;
}

const std::set<std::string>& known_sections() {
    static const std::set<std::string> sections = {"scenario", "radio", "handshake",
                                                   "output"};
    return sections;
}

}  // namespace

const char* scenario_name(ScenarioKind kind) {
    return kind == ScenarioKind::Highway ? "highway" : "urban";
}

ExperimentConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::string section;
    std::stringstream ss(text);
    std::string raw;
    while (std::getline(ss, raw)) {
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header: " + raw);
            section = trim(line.substr(1, line.size() - 2));
            if (!known_sections().count(section))
                throw ConfigError("unknown section: [" + section + "]");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("malformed line: " + raw);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("malformed line: " + raw);
        if (section.empty()) throw ConfigError("key outside any section: " + key);
        std::string full = section + "." + key;
        if (!known_keys().count(full)) throw ConfigError("unknown key: " + full);
        if (kv.count(full)) throw ConfigError("duplicate key: " + full);
        kv[full] = value;
    }

    auto get = [&](const char* k) -> const std::string* {
        auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto need = [&](const char* k) -> const std::string& {
        auto it = kv.find(k);
        if (it == kv.end()) throw ConfigError(std::string("missing required key: ") + k);
        return it->second;
    };

    ExperimentConfig cfg;
    const std::string& kind = need("scenario.kind");
    if (kind == "highway")
        cfg.geometry.kind = ScenarioKind::Highway;
    else if (kind == "urban")
        cfg.geometry.kind = ScenarioKind::Urban;
    else
        throw ConfigError("bad value for scenario.kind: '" + kind + "'");

    cfg.densities.clear();
    for (const std::string& d : split_list(need("scenario.densities"))) {
        long long n = parse_int("scenario.densities", d);
        if (n <= 0) throw ConfigError("scenario.densities entries must be positive");
        cfg.densities.push_back(static_cast<int>(n));
    }
    if (cfg.densities.empty()) throw ConfigError("scenario.densities is empty");

    if (const std::string* v = get("scenario.highway_length_m")) {
        double len = parse_double("scenario.highway_length_m", *v);
        if (len <= 0) throw ConfigError("scenario.highway_length_m must be positive");
        cfg.geometry.highway_length_m = len;
    }
    if (const std::string* v = get("scenario.urban_streets")) {
        int vs = 0, hs = 0;
        char extra = 0;
        if (std::sscanf(v->c_str(), "%dx%d%c", &vs, &hs, &extra) != 2 || vs < 0 ||
            hs < 0 || vs > 3 || hs > 3 || vs + hs == 0)
            throw ConfigError("bad value for scenario.urban_streets: '" + *v +
                              "' (want VxH, each 0..3, at least one street)");
        cfg.geometry.urban_v_streets = vs;
        cfg.geometry.urban_h_streets = hs;
    }
    if (const std::string* v = get("scenario.duration_s")) {
        cfg.duration_s = parse_double("scenario.duration_s", *v);
        if (cfg.duration_s <= 0) throw ConfigError("scenario.duration_s must be positive");
    }
    if (const std::string* v = get("scenario.seeds")) {
        long long n = parse_int("scenario.seeds", *v);
        if (n < 1) throw ConfigError("scenario.seeds must be at least 1");
        cfg.seeds = static_cast<int>(n);
    }

    if (const std::string* v = get("radio.macs")) {
        cfg.macs.clear();
        for (const std::string& m : split_list(*v)) {
            if (m == "dsrc")
                cfg.macs.push_back(Mac::Dsrc);
            else if (m == "cv2x")
                cfg.macs.push_back(Mac::Cv2x);
            else
                throw ConfigError("bad value for radio.macs: '" + m + "'");
        }
        if (cfg.macs.empty()) throw ConfigError("radio.macs is empty");
        if (cfg.macs.size() > 1 && cfg.macs[0] == cfg.macs[1])
            throw ConfigError("radio.macs lists the same layer twice");
    }

    if (const std::string* v = get("radio.beacon_bytes")) {
        cfg.beacon_bytes.clear();
        for (const std::string& b : split_list(*v)) {
            long long n = parse_int("radio.beacon_bytes", b);
            if (n <= 0) throw ConfigError("radio.beacon_bytes entries must be positive");
            cfg.beacon_bytes.push_back(static_cast<int>(n));
        }
        if (cfg.beacon_bytes.empty()) throw ConfigError("radio.beacon_bytes is empty");
    }

    if (const std::string* v = get("radio.p_keep")) {
        cfg.p_keep = parse_double("radio.p_keep", *v);
        if (cfg.p_keep < 0.0 || cfg.p_keep > 1.0)
            throw ConfigError("radio.p_keep must be in [0, 1]");
    }
    if (const std::string* v = get("handshake.freshness_window_ms")) {
        long long n = parse_int("handshake.freshness_window_ms", *v);
        if (n <= 0) throw ConfigError("handshake.freshness_window_ms must be positive");
        cfg.freshness_window_ms = n;
    }
    if (const std::string* v = get("output.dir")) {
        if (v->empty()) throw ConfigError("output.dir is empty");
        cfg.output_dir = *v;
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string canonical_config_text(const ExperimentConfig& cfg) {
    std::string out;
    out += "[scenario]\n";
    out += std::string("kind = ") + scenario_name(cfg.geometry.kind) + "\n";
    out += "densities = ";
    for (size_t i = 0; i < cfg.densities.size(); ++i)
        out += (i ? ", " : "") + std::to_string(cfg.densities[i]);
    out += "\n";
    if (cfg.geometry.kind == ScenarioKind::Highway)
        out += "highway_length_m = " + fmt17(cfg.geometry.highway_length_m) + "\n";
    else
        out += "urban_streets = " + std::to_string(cfg.geometry.urban_v_streets) + "x" +
               std::to_string(cfg.geometry.urban_h_streets) + "\n";
    out += "duration_s = " + fmt17(cfg.duration_s) + "\n";
    out += "seeds = " + std::to_string(cfg.seeds) + "\n";
    out += "\n[radio]\n";
    out += "macs = ";
    for (size_t i = 0; i < cfg.macs.size(); ++i)
        out += (i ? std::string(", ") : std::string()) + mac_name(cfg.macs[i]);
    out += "\n";
    out += "beacon_bytes = ";
    for (size_t i = 0; i < cfg.beacon_bytes.size(); ++i)
        out += (i ? ", " : "") + std::to_string(cfg.beacon_bytes[i]);
    out += "\n";
    out += "p_keep = " + fmt17(cfg.p_keep) + "\n";
    out += "\n[handshake]\n";
    out += "freshness_window_ms = " + std::to_string(cfg.freshness_window_ms) + "\n";
    out += "\n[output]\n";
    out += "dir = " + cfg.output_dir + "\n";
    return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
    std::string text = canonical_config_text(cfg);
    return to_hex(sha256(as_span(text)));
}

ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig cfg;
    if (name == "paper-highway") {
        cfg.geometry.kind = ScenarioKind::Highway;
        cfg.geometry.highway_length_m = 5000.0;
        cfg.densities = {100, 200, 300};
    } else if (name == "paper-urban") {
        cfg.geometry.kind = ScenarioKind::Urban;
        cfg.geometry.urban_v_streets = 3;
        cfg.geometry.urban_h_streets = 3;
        cfg.densities = {300, 400, 500};
    } else if (name == "desk-highway") {
        cfg.geometry.kind = ScenarioKind::Highway;
        cfg.geometry.highway_length_m = 1000.0;
        cfg.densities = {50, 100, 150};
        cfg.duration_s = 10.0;
        cfg.seeds = 3;
    } else if (name == "desk-urban") {
        cfg.geometry.kind = ScenarioKind::Urban;
        cfg.geometry.urban_v_streets = 1;
        cfg.geometry.urban_h_streets = 1;
        cfg.densities = {150, 200, 250};
        cfg.duration_s = 10.0;
        cfg.seeds = 3;
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    cfg.output_dir = "results/" + name;
    return cfg;
}

std::vector<std::string> preset_names() {
    return {"paper-highway", "paper-urban", "desk-highway", "desk-urban"};
}

namespace {

struct RunScalars {
    bool has_prr150 = false;
    double prr150 = 0, cbr = 0, age = 0, neighbors = 0;
};

struct Job {
    Mac mac;
    int beacon_bytes;
    int density;
    int seed;
};

struct RunOutput {
    std::vector<MetricSample> samples;
    RunScalars scalars;
};

RunOutput execute_job(const ExperimentConfig& cfg, const Job& job) {
    ScenarioConfig scfg;
    scfg.geometry = cfg.geometry;
    scfg.vehicles_per_km = job.density;
    scfg.duration_s = cfg.duration_s;
    scfg.seed = static_cast<uint64_t>(job.seed);
    Scenario scn = build_scenario(scfg);

    RadioConfig rcfg;
    rcfg.sps.p_keep = cfg.p_keep;
    EventLog log = run_radio(scn, job.mac, job.beacon_bytes,
                             static_cast<uint64_t>(job.seed), rcfg);

    RunOutput out;
    const char* scen = scenario_name(cfg.geometry.kind);
    const char* mac = mac_name(job.mac);
    auto push = [&](const char* metric, int bin, double value) {
        out.samples.push_back({scen, mac, job.beacon_bytes, job.density, job.seed,
                               metric, bin, value});
    };
    for (const BinnedPrr& b : prr_by_distance(log, default_bins(cfg.geometry.kind)))
        push("prr", static_cast<int>(b.bin_lo), b.value);
    if (auto p = prr_within(log, 150.0)) {
        out.scalars.has_prr150 = true;
        out.scalars.prr150 = *p;
        push("prr150", job.density, *p);
    }
    out.scalars.cbr = mean_cbr(log);
    out.scalars.age = mean_data_age_s(log);
    out.scalars.neighbors = mean_neighbors(scn, 150.0);
    push("cbr", job.density, out.scalars.cbr);
    push("age", job.density, out.scalars.age);
    push("neighbors", job.density, out.scalars.neighbors);
    return out;
}

size_t worker_count(size_t jobs) {
    size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("DIMV2X_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw ConfigError("DIMV2X_WORKERS must be a positive integer");
        n = static_cast<size_t>(v);
    }
    return std::min(n, std::max<size_t>(jobs, 1));
}

std::string run_file_name(ScenarioKind kind, const Job& job) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s_%s_%dB_%d_s%d.csv", scenario_name(kind),
                  mac_name(job.mac), job.beacon_bytes, job.density, job.seed);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

constexpr const char* kSummaryHeader =
    "scenario,mac,beacon_bytes,density,prr150,cbr,age_s,neighbors";

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    if (cfg.densities.empty() || cfg.macs.empty() || cfg.beacon_bytes.empty())
        throw ConfigError("experiment config has an empty sweep list");
    if (cfg.duration_s <= 0) throw ConfigError("scenario.duration_s must be positive");
    if (cfg.seeds < 1) throw ConfigError("scenario.seeds must be at least 1");

    std::vector<Job> jobs;
    for (Mac mac : cfg.macs)
        for (int bytes : cfg.beacon_bytes)
            for (int density : cfg.densities)
                for (int seed = 1; seed <= cfg.seeds; ++seed)
                    jobs.push_back({mac, bytes, density, seed});

    std::vector<RunOutput> outputs(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<size_t> next{0};
    size_t nworkers = worker_count(jobs.size());
    auto work = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                outputs[i] = execute_job(cfg, jobs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (nworkers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < nworkers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);

    ExperimentResult result;
    result.dir = out_dir.empty() ? std::filesystem::path(cfg.output_dir)
                                 : std::filesystem::path(out_dir);
    std::filesystem::create_directories(result.dir / "runs");

    std::vector<std::string> files;
    for (size_t i = 0; i < jobs.size(); ++i) {
        std::string name = run_file_name(cfg.geometry.kind, jobs[i]);
        write_csv(outputs[i].samples, (result.dir / "runs" / name).string());
        files.push_back("runs/" + name);
    }
    result.runs = static_cast<int>(jobs.size());

    // seed means per combination, in job-group order
    for (size_t base = 0; base < jobs.size(); base += static_cast<size_t>(cfg.seeds)) {
        SummaryRow row;
        row.scenario = scenario_name(cfg.geometry.kind);
        row.mac = mac_name(jobs[base].mac);
        row.beacon_bytes = jobs[base].beacon_bytes;
        row.density = jobs[base].density;
        double prr_sum = 0;
        int prr_n = 0;
        for (int s = 0; s < cfg.seeds; ++s) {
            const RunScalars& r = outputs[base + static_cast<size_t>(s)].scalars;
            if (r.has_prr150) {
                prr_sum += r.prr150;
                ++prr_n;
            }
            row.cbr += r.cbr;
            row.age_s += r.age;
            row.neighbors += r.neighbors;
        }
        row.prr150 = prr_n ? prr_sum / prr_n : std::nan("");
        row.cbr /= cfg.seeds;
        row.age_s /= cfg.seeds;
        row.neighbors /= cfg.seeds;
        result.summary.push_back(row);
    }
    std::sort(result.summary.begin(), result.summary.end(),
              [](const SummaryRow& a, const SummaryRow& b) {
                  return std::tie(a.scenario, a.mac, a.beacon_bytes, a.density) <
                         std::tie(b.scenario, b.mac, b.beacon_bytes, b.density);
              });

    std::string summary = std::string(kSummaryHeader) + "\n";
    for (const SummaryRow& r : result.summary) {
        summary += r.scenario + "," + r.mac + "," + std::to_string(r.beacon_bytes) +
                   "," + std::to_string(r.density) + "," + fmt17(r.prr150) + "," +
                   fmt17(r.cbr) + "," + fmt17(r.age_s) + "," + fmt17(r.neighbors) + "\n";
    }
    write_text(result.dir / "summary.csv", summary);
    files.push_back("summary.csv");
    std::sort(files.begin(), files.end());

    ordered_json manifest;
    manifest["format"] = "dimv2x-results";
    manifest["format_version"] = kResultsFormat;
    manifest["version"] = kVersion;
    manifest["config_sha256"] = config_hash(cfg);
    manifest["config"] = canonical_config_text(cfg);
    std::vector<int> seed_list;
    for (int s = 1; s <= cfg.seeds; ++s) seed_list.push_back(s);
    manifest["seeds"] = seed_list;
    ordered_json combos = ordered_json::array();
    for (const SummaryRow& r : result.summary)
        combos.push_back({{"scenario", r.scenario},
                          {"mac", r.mac},
                          {"beacon_bytes", r.beacon_bytes},
                          {"density", r.density}});
    manifest["combinations"] = combos;
    manifest["files"] = files;
    write_text(result.dir / "manifest.json", manifest.dump(2) + "\n");
    return result;
}

std::vector<SummaryRow> read_summary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open summary: " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != kSummaryHeader)
        throw IoError("bad summary header in " + path);
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> f = split_list(line);
        if (f.size() != 8) throw IoError("malformed summary row: " + line);
        try {
            SummaryRow r;
            r.scenario = f[0];
            r.mac = f[1];
            r.beacon_bytes = std::stoi(f[2]);
            r.density = std::stoi(f[3]);
            r.prr150 = std::stod(f[4]);
            r.cbr = std::stod(f[5]);
            r.age_s = std::stod(f[6]);
            r.neighbors = std::stod(f[7]);
            rows.push_back(r);
        } catch (const std::exception&) {
            throw IoError("malformed summary row: " + line);
        }
    }
    return rows;
}

std::vector<OverheadRow> compare_overhead(const std::string& results_dir) {
    auto rows = read_summary((std::filesystem::path(results_dir) / "summary.csv").string());
    std::map<std::tuple<std::string, std::string, int>, std::map<int, SummaryRow>> combos;
    for (const SummaryRow& r : rows)
        combos[{r.scenario, r.mac, r.density}][r.beacon_bytes] = r;

    std::vector<OverheadRow> out;
    for (const auto& [key, profiles] : combos) {
        if (profiles.size() < 2) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "%s/%s at %d veh/km has a single beacon profile (%d B)",
                          std::get<0>(key).c_str(), std::get<1>(key).c_str(),
                          std::get<2>(key), profiles.begin()->first);
            throw IncompleteResults(buf);
        }
        const SummaryRow& base = profiles.begin()->second;
        const SummaryRow& dim = profiles.rbegin()->second;
        auto rel = [](double b, double d) { return b != 0.0 ? (d - b) / b : 0.0; };
        OverheadRow o{base.scenario, base.mac, base.density, "", 0, 0, 0};
        o.metric = "prr150";
        o.baseline = base.prr150;
        o.dim = dim.prr150;
        o.delta = -rel(base.prr150, dim.prr150);  // positive = reduction
        out.push_back(o);
        o.metric = "cbr";
        o.baseline = base.cbr;
        o.dim = dim.cbr;
        o.delta = rel(base.cbr, dim.cbr);  // positive = increase
        out.push_back(o);
        o.metric = "age";
        o.baseline = base.age_s;
        o.dim = dim.age_s;
        o.delta = dim.age_s - base.age_s;  // absolute seconds
        out.push_back(o);
    }
    return out;
}

std::string format_overhead_report(const std::vector<OverheadRow>& rows) {
    std::string out =
        "scenario  mac   density  metric   baseline      larger     overhead\n";
    for (const OverheadRow& r : rows) {
        char buf[160];
        char delta[48];
        if (r.metric == "prr150")
            std::snprintf(delta, sizeof delta, "%6.2f %% reduction", r.delta * 100.0);
        else if (r.metric == "cbr")
            std::snprintf(delta, sizeof delta, "%6.2f %% increase", r.delta * 100.0);
        else
            std::snprintf(delta, sizeof delta, "%+8.4f s", r.delta);
        std::snprintf(buf, sizeof buf, "%-8s  %-4s  %7d  %-7s  %10.6f  %10.6f  %s\n",
                      r.scenario.c_str(), r.mac.c_str(), r.density, r.metric.c_str(),
                      r.baseline, r.dim, delta);
        out += buf;
    }
    return out;
}

std::string overhead_csv(const std::vector<OverheadRow>& rows) {
    std::string out = "scenario,mac,density,metric,baseline,dim,delta\n";
    for (const OverheadRow& r : rows)
        out += r.scenario + "," + r.mac + "," + std::to_string(r.density) + "," +
               r.metric + "," + fmt17(r.baseline) + "," + fmt17(r.dim) + "," +
               fmt17(r.delta) + "\n";
    return out;
}

HandshakeConfig disable_guards(const std::vector<std::string>& names) {
    HandshakeConfig cfg;
    for (const std::string& g : names) {
        if (g == "freshness")
            cfg.guards.freshness = false;
        else if (g == "key-match")
            cfg.guards.key_match = false;
        else if (g == "commitment")
            cfg.guards.commitment = false;
        else if (g == "binding")
            cfg.guards.binding = false;
        else if (g == "revocation")
            cfg.guards.revocation = false;
        else
            throw ConfigError(
                "unknown guard: " + g +
                " (want freshness|key-match|commitment|binding|revocation)");
    }
    return cfg;
}

// ---- handshake demo ------------------------------------------------------

namespace {

// Logical transmission cost at 6 Mb/s, whole milliseconds, at least one.
int64_t wire_cost_ms(size_t bytes) {
    double ms = static_cast<double>(bytes) * 8.0 / 6000.0;
    return std::max<int64_t>(1, static_cast<int64_t>(std::ceil(ms)));
}

constexpr int64_t kConsensusRoundMs = 10;

}  // namespace

DemoResult handshake_demo(const DemoOptions& opt) {
    DemoResult out;
    int64_t t = 0;
    std::string& log = out.transcript;
    auto line = [&](const std::string& s) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "t=%4lld ms  ", static_cast<long long>(t));
        log += buf + s + "\n";
    };

    LedgerNetwork net = make_network(4);
    line("ledger up: 4 verifiers, quorum " + std::to_string(quorum_size(net)));
    if (opt.crash_node >= 0) {
        if (opt.crash_node >= static_cast<int>(net.nodes.size()))
            throw ConfigError("crash-node index out of range (0..3)");
        crash_node(net, static_cast<size_t>(opt.crash_node));
        line("node-" + std::to_string(opt.crash_node) + " crashed");
    }

    Participant alice = make_participant("veh-0001", mix_seed(opt.seed, 1));
    Participant bob = make_participant("veh-0002", mix_seed(opt.seed, 2));
    for (Participant* p : {&alice, &bob}) {
        uint64_t before = net.round;
        bool ok = register_participant(net, *p, t);
        t += kConsensusRoundMs * static_cast<int64_t>(net.round - before);
        if (!ok) {
            line(p->id + " registration failed: no quorum");
            out.reason = RejectReason::UnknownPeer;
            return out;
        }
        line(p->id + " registered (" + std::to_string(net.round - before) +
             " consensus round)");
    }
    if (opt.revoke_peer) {
        revoke_identity(net, bob.id, net.nodes[0].node_id);
        uint64_t before = net.round;
        while (net.round - before < net.nodes.size()) {
            if (run_consensus_round(net).committed) break;
        }
        t += kConsensusRoundMs * static_cast<int64_t>(net.round - before);
        line(bob.id + " revoked by node-0");
    }

    size_t node = 0;
    while (node < net.nodes.size() && !net.nodes[node].alive) ++node;

    HandshakeConfig hcfg;
    hcfg.freshness_window_ms = opt.freshness_window_ms;

    int64_t t0 = t;
    line(alice.id + " -> node-" + std::to_string(node) + "  identity lookup " +
         bob.id + "  (" + std::to_string(kQueryWireSize) + " B)");
    t += wire_cost_ms(kQueryWireSize);
    InitiateResult init = initiate(alice, bob.id, net, node, mix_seed(opt.seed, 10), t,
                                   hcfg);
    if (!init.ok) {
        line("node-" + std::to_string(node) + " -> " + alice.id + "  refused: " +
             reason_string(init.reason));
        out.reason = init.reason;
        return out;
    }
    t += 1;  // record reply
    line("node-" + std::to_string(node) + " -> " + alice.id + "  record: registered");

    line(alice.id + " -> " + bob.id + "  sealed challenge  (" +
         std::to_string(init.wire.size()) + " B)");
    t += wire_cost_ms(init.wire.size());

    line(bob.id + " -> node-" + std::to_string(node) + "  identity lookup " +
         alice.id + "  (" + std::to_string(kQueryWireSize) + " B)");
    t += wire_cost_ms(kQueryWireSize);
    t += 1;  // record reply
    line("node-" + std::to_string(node) + " -> " + bob.id + "  record: registered");
    RespondResult resp = respond(bob, init.wire, alice.id, net, node,
                                 mix_seed(opt.seed, 11), t, hcfg);
    if (!resp.ok) {
        line(bob.id + " refused challenge: " + reason_string(resp.reason));
        out.reason = resp.reason;
        return out;
    }

    line(bob.id + " -> " + alice.id + "  sealed response  (" +
         std::to_string(resp.wire.size()) + " B)");
    t += wire_cost_ms(resp.wire.size());
    FinalizeResult fin = finalize(alice, resp.wire, bob.id, t, hcfg);
    if (!fin.ok) {
        line(alice.id + " refused response: " + reason_string(fin.reason));
        out.reason = fin.reason;
        return out;
    }
    if (!(fin.key == resp.key)) {
        line("session keys disagree");
        out.reason = RejectReason::SessionViolation;
        return out;
    }
    out.established = true;
    out.latency_ms = t - t0;
    line("session established, keys match, id " + to_hex(fin.session_id).substr(0, 16) +
         "...  (handshake latency " + std::to_string(out.latency_ms) + " ms)");

    SecureChannel a_ch = make_channel(fin.session_id, fin.key, 0);
    SecureChannel b_ch = make_channel(resp.session_id, resp.key, 1);
    std::string beacon = "beacon 1 from " + alice.id + ": x=120.4 y=6.0 v=33.1";
    Bytes record = channel_send(a_ch, as_span(beacon));
    line(alice.id + " -> " + bob.id + "  encrypted beacon  (" +
         std::to_string(record.size()) + " B)");
    t += wire_cost_ms(record.size());
    ChannelRecv got = channel_recv(b_ch, record);
    if (!got.ok) {
        out.established = false;
        out.reason = got.reason;
        line(bob.id + " refused beacon: " + reason_string(got.reason));
        return out;
    }
    line(bob.id + "  beacon authenticated, payload " +
         std::to_string(got.plaintext.size()) + " B");
    return out;
}

}  // namespace dim
