#pragma once
// Deterministic vehicle traces for two map families: a straight bidirectional
// highway strip and a Manhattan-style street grid with building blocks.
// Vehicles keep a constant speed in a fixed lane, continue straight through
// intersections, and wrap around toroidally so density stays constant.

#include <cstdint>
#include <string>
#include <vector>

namespace dim {

enum class ScenarioKind : uint8_t { Highway, Urban };
enum class LosClass : uint8_t { Los, Nlos };

// Shared road geometry constants.
inline constexpr double kLaneWidth = 4.0;          // meters
inline constexpr int kLanesPerDirection = 4;
inline constexpr double kStreetHalfWidth = kLaneWidth * kLanesPerDirection;  // 16 m
inline constexpr double kStreetSpacing = 250.0;    // urban street pitch
inline constexpr double kCorridorLength = 500.0;   // urban street length

// Default speed profiles, meters/second (drawn Normal, clipped to +-3 sd).
inline constexpr double kHighwayMeanSpeed = 120.0 / 3.6;
inline constexpr double kHighwaySpeedSd = 20.0 / 3.6;
inline constexpr double kUrbanMeanSpeed = 60.0 / 3.6;
inline constexpr double kUrbanSpeedSd = 15.0 / 3.6;

struct ScenarioGeometry {
    ScenarioKind kind = ScenarioKind::Highway;
    double highway_length_m = 5000.0;
    // Urban streets sit at multiples of 250 m starting from 0; the full map
    // has three per axis (0, 250, 500) enclosing four building blocks.
    int urban_v_streets = 3;  // north-south corridors
    int urban_h_streets = 3;  // east-west corridors
};

struct ScenarioConfig {
    ScenarioGeometry geometry;
    int vehicles_per_km = 100;
    double duration_s = 10.0;
    uint64_t seed = 1;
    // <= 0 picks the per-kind default profile above
    double mean_speed_mps = 0.0;
    double speed_sd_mps = 0.0;
};

struct Position {
    double x = 0;
    double y = 0;
};

// One vehicle: motion runs along one axis at a fixed cross coordinate,
// wrapping inside [0, period).  Positions are also sampled every 100 ms for
// export; position_at evaluates the same uniform motion analytically.
struct VehicleTrace {
    std::string vehicle_id;
    double speed_mps = 0;
    int axis = 0;          // 0: moves in x, 1: moves in y
    double cross = 0;      // fixed lane-center coordinate on the other axis
    double dir_sign = 1;   // +1 or -1 along the axis
    double period = 0;     // wrap length along the axis
    std::vector<double> along;  // sampled along-axis coordinate, 100 ms steps
};

struct Scenario {
    ScenarioConfig config;
    std::vector<VehicleTrace> traces;
    double duration_s = 0;
};

// Axis-aligned building block (strict interior blocks line of sight).
struct BlockRect {
    double x0, y0, x1, y1;
};

double road_length_km(const ScenarioGeometry& g);
int vehicle_count(const ScenarioGeometry& g, int vehicles_per_km);
std::vector<BlockRect> building_blocks(const ScenarioGeometry& g);

// Deterministic in (geometry, density, seed).  Throws InvalidScenario on a
// non-positive duration or density, or an empty street grid.
Scenario build_scenario(const ScenarioConfig& cfg);

// Position of one vehicle at time t (seconds).  Throws OutOfRange outside
// [0, duration].
Position position_at(const Scenario& s, size_t vehicle_index, double t_s);

// All vehicle positions at one instant, trace order.
std::vector<Position> positions_at(const Scenario& s, double t_s);

// Highway pairs are always line-of-sight; urban pairs lose it when the
// connecting segment crosses a building-block interior.
LosClass los_between(const Position& a, const Position& b, const ScenarioGeometry& g);

// CSV export, header `t,vehicle_id,x,y`, one row per 100 ms sample.
std::string export_traces_csv(const Scenario& s);

}  // namespace dim
