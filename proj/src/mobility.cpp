#include "dim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dim/errors.hpp"
#include "dim/rng.hpp"

namespace dim {

namespace {

double wrap_pos(double v, double period) {
    double w = std::fmod(v, period);
    return w < 0 ? w + period : w;
}

// lane center offset from the street/road centerline, lane 0 innermost
double lane_offset(int lane) { return kLaneWidth / 2 + kLaneWidth * lane; }

std::string vehicle_name(size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "v%04zu", i);
    return buf;
}

void check_config(const ScenarioConfig& cfg) {
    if (cfg.duration_s <= 0) throw InvalidScenario("duration must be positive");
    if (cfg.vehicles_per_km <= 0) throw InvalidScenario("density must be positive");
    const ScenarioGeometry& g = cfg.geometry;
    if (g.kind == ScenarioKind::Highway) {
        if (g.highway_length_m <= 0) throw InvalidScenario("highway length must be positive");
    } else {
        if (g.urban_v_streets < 0 || g.urban_v_streets > 3 || g.urban_h_streets < 0 ||
            g.urban_h_streets > 3)
            throw InvalidScenario("urban streets per axis must be 0..3");
        if (g.urban_v_streets + g.urban_h_streets == 0)
            throw InvalidScenario("urban grid needs at least one street");
    }
}

// True when the segment spends positive length strictly inside the rect.
bool crosses_interior(const Position& a, const Position& b, const BlockRect& r) {
    constexpr double eps = 1e-6;
    double x0 = r.x0 + eps, x1 = r.x1 - eps;
    double y0 = r.y0 + eps, y1 = r.y1 - eps;
    double dx = b.x - a.x, dy = b.y - a.y;
    double t0 = 0.0, t1 = 1.0;
    auto clip = [&](double p, double q) {  // keep p*t <= q
        if (p == 0) return q >= 0;
        double t = q / p;
        if (p < 0) {
            if (t > t1) return false;
            if (t > t0) t0 = t;
        } else {
            if (t < t0) return false;
            if (t < t1) t1 = t;
        }
        return true;
    };
    if (!clip(-dx, a.x - x0)) return false;
    if (!clip(dx, x1 - a.x)) return false;
    if (!clip(-dy, a.y - y0)) return false;
    if (!clip(dy, y1 - a.y)) return false;
    return t1 - t0 > 1e-9;
}

}  // namespace

double road_length_km(const ScenarioGeometry& g) {
    if (g.kind == ScenarioKind::Highway) return g.highway_length_m / 1000.0;
    // each street: corridor length, both directions counted
    return (g.urban_v_streets + g.urban_h_streets) * (kCorridorLength / 1000.0) * 2.0;
}

int vehicle_count(const ScenarioGeometry& g, int vehicles_per_km) {
    return static_cast<int>(std::llround(road_length_km(g) * vehicles_per_km));
}

std::vector<BlockRect> building_blocks(const ScenarioGeometry& g) {
    std::vector<BlockRect> blocks;
    if (g.kind != ScenarioKind::Urban) return blocks;
    for (int i = 0; i + 1 < g.urban_v_streets; ++i) {
        for (int j = 0; j + 1 < g.urban_h_streets; ++j) {
            BlockRect r;
            r.x0 = i * kStreetSpacing + kStreetHalfWidth;
            r.x1 = (i + 1) * kStreetSpacing - kStreetHalfWidth;
            r.y0 = j * kStreetSpacing + kStreetHalfWidth;
            r.y1 = (j + 1) * kStreetSpacing - kStreetHalfWidth;
            blocks.push_back(r);
        }
    }
    return blocks;
}

Scenario build_scenario(const ScenarioConfig& cfg) {
    check_config(cfg);
    const ScenarioGeometry& g = cfg.geometry;
    bool highway = g.kind == ScenarioKind::Highway;
    double mean = cfg.mean_speed_mps > 0 ? cfg.mean_speed_mps
                                         : (highway ? kHighwayMeanSpeed : kUrbanMeanSpeed);
    double sd = cfg.speed_sd_mps > 0 ? cfg.speed_sd_mps
                                     : (highway ? kHighwaySpeedSd : kUrbanSpeedSd);

    int n = vehicle_count(g, cfg.vehicles_per_km);
    size_t samples = static_cast<size_t>(std::floor(cfg.duration_s / 0.1 + 1e-9)) + 1;
    SimRng rng(cfg.seed);

    Scenario s;
    s.config = cfg;
    s.duration_s = cfg.duration_s;
    s.traces.reserve(static_cast<size_t>(n));
    int total_streets = g.urban_v_streets + g.urban_h_streets;

    for (int i = 0; i < n; ++i) {
        VehicleTrace tr;
        tr.vehicle_id = vehicle_name(static_cast<size_t>(i));
        if (highway) {
            int lane = rng.uniform_int(0, 2 * kLanesPerDirection - 1);
            tr.axis = 0;
            tr.period = g.highway_length_m;
            if (lane < kLanesPerDirection) {  // right-hand side, heading +x
                tr.cross = -lane_offset(lane);
                tr.dir_sign = 1;
            } else {
                tr.cross = lane_offset(lane - kLanesPerDirection);
                tr.dir_sign = -1;
            }
        } else {
            int street = rng.uniform_int(0, total_streets - 1);
            int dir = rng.uniform_int(0, 1);
            int lane = rng.uniform_int(0, kLanesPerDirection - 1);
            bool vertical = street < g.urban_v_streets;
            double center =
                (vertical ? street : street - g.urban_v_streets) * kStreetSpacing;
            tr.axis = vertical ? 1 : 0;
            tr.period = kCorridorLength;
            tr.dir_sign = dir == 0 ? 1 : -1;
            tr.cross = center + tr.dir_sign * lane_offset(lane);
        }
        double start = rng.uniform() * tr.period;
        double speed = rng.normal(mean, sd);
        tr.speed_mps = std::clamp(speed, mean - 3 * sd, mean + 3 * sd);

        tr.along.resize(samples);
        for (size_t k = 0; k < samples; ++k)
            tr.along[k] =
                wrap_pos(start + tr.dir_sign * tr.speed_mps * 0.1 * static_cast<double>(k),
                         tr.period);
        s.traces.push_back(std::move(tr));
    }
    return s;
}

Position position_at(const Scenario& s, size_t vehicle_index, double t_s) {
    if (vehicle_index >= s.traces.size()) throw OutOfRange("vehicle index out of range");
    if (t_s < -1e-9 || t_s > s.duration_s + 1e-9)
        throw OutOfRange("time outside scenario duration");
    const VehicleTrace& tr = s.traces[vehicle_index];
    double along = wrap_pos(tr.along[0] + tr.dir_sign * tr.speed_mps * t_s, tr.period);
    Position p;
    if (tr.axis == 0) {
        p.x = along;
        p.y = tr.cross;
    } else {
        p.x = tr.cross;
        p.y = along;
    }
    return p;
}

std::vector<Position> positions_at(const Scenario& s, double t_s) {
    std::vector<Position> out;
    out.reserve(s.traces.size());
    for (size_t i = 0; i < s.traces.size(); ++i) out.push_back(position_at(s, i, t_s));
    return out;
}

LosClass los_between(const Position& a, const Position& b, const ScenarioGeometry& g) {
    if (g.kind == ScenarioKind::Highway) return LosClass::Los;
    for (const BlockRect& r : building_blocks(g))
        if (crosses_interior(a, b, r)) return LosClass::Nlos;
    return LosClass::Los;
}

std::string export_traces_csv(const Scenario& s) {
    std::string out = "t,vehicle_id,x,y\n";
    size_t samples = s.traces.empty() ? 0 : s.traces[0].along.size();
    char buf[128];
    for (size_t k = 0; k < samples; ++k) {
        double t = 0.1 * static_cast<double>(k);
        for (const VehicleTrace& tr : s.traces) {
            Position p;
            if (tr.axis == 0) {
                p.x = tr.along[k];
                p.y = tr.cross;
            } else {
                p.x = tr.cross;
                p.y = tr.along[k];
            }
            std::snprintf(buf, sizeof buf, "%.1f,%s,%.9g,%.9g\n", t, tr.vehicle_id.c_str(),
                          p.x, p.y);
            out += buf;
        }
    }
    return out;
}

}  // namespace dim
