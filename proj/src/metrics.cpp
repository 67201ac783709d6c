#include "dim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <tuple>

#include "dim/errors.hpp"

namespace dim {

DistanceBins default_bins(ScenarioKind kind) {
    return kind == ScenarioKind::Highway ? DistanceBins{20.0, 500.0}
                                         : DistanceBins{10.0, 300.0};
}

std::vector<BinnedPrr> prr_by_distance(const EventLog& log, const DistanceBins& bins) {
    int nbins = static_cast<int>(std::llround(bins.max_m / bins.width_m));
    std::vector<int> attempts(static_cast<size_t>(nbins), 0);
    std::vector<int> decoded(static_cast<size_t>(nbins), 0);
    for (const RxEvent& e : log.rx) {
        double d = e.distance_m;
        if (d < 0 || d >= bins.max_m) continue;
        int b = static_cast<int>(d / bins.width_m);
        if (b >= nbins) continue;
        ++attempts[static_cast<size_t>(b)];
        if (e.fail == RxFail::None) ++decoded[static_cast<size_t>(b)];
    }
    std::vector<BinnedPrr> out;
    for (int b = 0; b < nbins; ++b) {
        if (attempts[static_cast<size_t>(b)] == 0) continue;  // omitted, not zero
        BinnedPrr p;
        p.bin_lo = static_cast<int>(std::llround(b * bins.width_m));
        p.attempts = attempts[static_cast<size_t>(b)];
        p.decoded = decoded[static_cast<size_t>(b)];
        p.value = static_cast<double>(p.decoded) / p.attempts;
        out.push_back(p);
    }
    return out;
}

std::optional<double> prr_within(const EventLog& log, double max_distance_m) {
    int64_t attempts = 0, decoded = 0;
    for (const RxEvent& e : log.rx) {
        if (e.distance_m > max_distance_m) continue;
        ++attempts;
        if (e.fail == RxFail::None) ++decoded;
    }
    if (attempts == 0) return std::nullopt;
    return static_cast<double>(decoded) / static_cast<double>(attempts);
}

double mean_cbr(const EventLog& log) {
    if (log.occupancy.empty()) return 0.0;
    double sum = 0;
    for (const OccupancySample& s : log.occupancy) sum += s.busy_fraction;
    return sum / static_cast<double>(log.occupancy.size());
}

double mean_data_age_s(const EventLog& log) {
    if (log.tx.empty()) return 0.0;
    double sum = 0;
    for (const TxEvent& t : log.tx)
        sum += static_cast<double>(t.t_air_ns - t.t_gen_ns);
    return sum / static_cast<double>(log.tx.size()) / 1e9;
}

double mean_neighbors(const Scenario& scenario, double range_m) {
    if (range_m <= 0) throw OutOfRange("neighbor range must be positive");
    size_t n = scenario.traces.size();
    if (n == 0) return 0.0;
    size_t samples = scenario.traces[0].along.size();
    if (samples == 0) return 0.0;
    double r2 = range_m * range_m;
    int64_t within = 0;
    std::vector<Position> pos(n);
    for (size_t k = 0; k < samples; ++k) {
        for (size_t i = 0; i < n; ++i) {
            const VehicleTrace& tr = scenario.traces[i];
            pos[i] = tr.axis == 0 ? Position{tr.along[k], tr.cross}
                                  : Position{tr.cross, tr.along[k]};
        }
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                double dx = pos[i].x - pos[j].x, dy = pos[i].y - pos[j].y;
                if (dx * dx + dy * dy <= r2) within += 2;  // counts for both ends
            }
    }
    return static_cast<double>(within) /
           static_cast<double>(n * samples);
}

namespace {

std::string format_value(double v) {
    // max_digits10 so parsing the text recovers the exact double
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string to_csv(std::vector<MetricSample> samples) {
    std::stable_sort(samples.begin(), samples.end(),
                     [](const MetricSample& a, const MetricSample& b) {
                         return std::tie(a.metric, a.bin, a.seed, a.scenario, a.mac,
                                         a.beacon_bytes, a.density) <
                                std::tie(b.metric, b.bin, b.seed, b.scenario, b.mac,
                                         b.beacon_bytes, b.density);
                     });
    std::string out = "scenario,mac,beacon_bytes,density,seed,metric,bin,value\n";
    char buf[256];
    for (const MetricSample& s : samples) {
        std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%lld,%s,%d,%s\n",
                      s.scenario.c_str(), s.mac.c_str(), s.beacon_bytes, s.density,
                      static_cast<long long>(s.seed), s.metric.c_str(), s.bin,
                      format_value(s.value).c_str());
        out += buf;
    }
    return out;
}

std::vector<MetricSample> from_csv(const std::string& text) {
    std::vector<MetricSample> out;
    size_t pos = 0;
    auto next_line = [&](std::string& line) {
        if (pos >= text.size()) return false;
        size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            line = text.substr(pos);
            pos = text.size();
        } else {
            line = text.substr(pos, nl - pos);
            pos = nl + 1;
        }
        return true;
    };
    std::string line;
    if (!next_line(line) || line != "scenario,mac,beacon_bytes,density,seed,metric,bin,value")
        throw IoError("unexpected metrics csv header");
    while (next_line(line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        size_t start = 0;
        for (size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                f.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (f.size() != 8) throw IoError("malformed metrics csv row");
        MetricSample s;
        s.scenario = f[0];
        s.mac = f[1];
        try {
            s.beacon_bytes = std::stoi(f[2]);
            s.density = std::stoi(f[3]);
            s.seed = std::stoll(f[4]);
            s.metric = f[5];
            s.bin = std::stoi(f[6]);
            s.value = std::stod(f[7]);
        } catch (const std::exception&) {
            throw IoError("malformed metrics csv field");
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_csv(const std::vector<MetricSample>& samples, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    std::string body = to_csv(samples);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw IoError("write failed: " + path);
}

}  // namespace dim
