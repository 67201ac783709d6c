// Evaluation outputs computed from a radio EventLog and a mobility scenario:
// packet reception ratio (overall and per distance bin), channel busy ratio,
// data age (generation to start of air), and time-averaged neighbor counts.
// Samples serialize to a flat CSV with a fixed header and ordering so that
// reruns are byte-identical.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dim/mobility.hpp"
#include "dim/radio.hpp"

namespace dim {

struct MetricSample {
    std::string scenario;  // "highway" | "urban"
    std::string mac;       // "dsrc" | "cv2x"
    int beacon_bytes = 0;
    int density = 0;       // vehicles per km
    int64_t seed = 0;      // -1 marks a seed-mean row
    std::string metric;    // "prr", "prr150", "cbr", "age", "neighbors"
    int bin = 0;           // distance bin lower edge for "prr", density otherwise
    double value = 0;
};

struct DistanceBins {
    double width_m = 20.0;
    double max_m = 500.0;
};

// 20 m bins to 500 m on the highway, 10 m bins to 300 m in the grid.
DistanceBins default_bins(ScenarioKind kind);

struct BinnedPrr {
    int bin_lo = 0;  // meters
    int attempts = 0;
    int decoded = 0;
    double value = 0;
};

// Reception ratio per distance bin; bins nobody fell into are omitted.
std::vector<BinnedPrr> prr_by_distance(const EventLog& log, const DistanceBins& bins);

// Reception ratio over all attempts at distance <= max_distance_m; empty when
// no attempt qualifies.
std::optional<double> prr_within(const EventLog& log, double max_distance_m);

// Mean busy fraction over all occupancy samples (receivers x windows).
double mean_cbr(const EventLog& log);

// Mean generation-to-air delay over transmissions, in seconds.
double mean_data_age_s(const EventLog& log);

// Time-averaged count of other vehicles within range, averaged over vehicles.
double mean_neighbors(const Scenario& scenario, double range_m = 150.0);

// Serialize with header scenario,mac,beacon_bytes,density,seed,metric,bin,value
// sorted by (metric, bin, seed); LF endings.
std::string to_csv(std::vector<MetricSample> samples);

// Parse to_csv output back into samples.  Throws IoError on malformed text.
std::vector<MetricSample> from_csv(const std::string& text);

// Write to_csv output to a file; throws IoError when the path is unwritable.
void write_csv(const std::vector<MetricSample>& samples, const std::string& path);

}  // namespace dim
