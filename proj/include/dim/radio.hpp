// V2X radio layer: dual-slope path loss with static per-link shadowing, a
// contention-based MAC (CSMA/CA as used by DSRC) and a semi-persistent
// scheduling MAC (sensing-based SPS as used by C-V2X sidelink), both driving
// the same decode model.  A run replays a mobility scenario at 10 Hz beacon
// rate and records every transmission, every reception attempt within the
// evaluation range, and per-receiver channel occupancy per 100 ms window.
//
// All times are integer nanoseconds.  Every random draw comes from SimRng
// streams derived from the run seed, so a run is reproducible bit-for-bit.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dim/mobility.hpp"

namespace dim {

enum class Mac { Dsrc = 0, Cv2x = 1 };

const char* mac_name(Mac mac);

// Why a reception attempt failed.  None means the frame decoded.
enum class RxFail : uint8_t {
    None = 0,
    HalfDuplex,   // receiver was transmitting itself
    BelowSense,   // received power under the sensitivity floor
    Collision,    // interference pushed an otherwise decodable frame under SINR
    LowSinr,      // signal alone was too weak relative to noise
};

const char* fail_name(RxFail f);

struct PhyConfig {
    double freq_hz = 5.9e9;
    double tx_power_dbm = 23.0;
    double tx_gain_db = 3.0;
    double rx_gain_db = 3.0;
    double antenna_height_m = 1.5;
    double bandwidth_hz = 10e6;
    double noise_figure_db = 9.0;
    double sensitivity_dbm = -90.0;
    double sinr_threshold_db = 8.0;
    double shadow_sd_los_db = 3.0;
    double shadow_sd_nlos_db = 4.0;
    double nlos_penalty_db = 10.0;
};

// Dual-slope breakpoint 4*h_tx*h_rx*f/c with c = 3e8 m/s (~177 m at 5.9 GHz).
double breakpoint_distance_m(const PhyConfig& phy);

// Free-space intercept at 1 m plus 20 dB/decade up to the breakpoint and
// 40 dB/decade beyond it; NLOS adds a fixed penalty.  Throws InvalidDistance
// for non-positive distances.
double path_loss_db(double distance_m, LosClass los, const PhyConfig& phy);

// Thermal noise over the channel bandwidth plus the receiver noise figure.
double noise_floor_dbm(const PhyConfig& phy);

// Transmit power + antenna gains - path loss + shadowing.
double rx_power_dbm(double distance_m, LosClass los, double shadow_db,
                    const PhyConfig& phy);

struct DsrcConfig {
    double cs_threshold_dbm = -85.0;  // carrier sense
    int contention_window = 15;       // backoff drawn uniform in [0, cw] slots
    int64_t slot_ns = 13000;
    int64_t aifs_ns = 58000;
    double bitrate_bps = 6e6;
    int64_t preamble_ns = 40000;
};

// Preamble plus payload serialization at the base bitrate.
int64_t dsrc_airtime_ns(int bytes, const DsrcConfig& cfg = {});

struct SpsConfig {
    int subchannels = 4;                    // per 1 ms subframe
    int subchannel_capacity_bytes = 450;    // payload that fits one subchannel
    int64_t subframe_ns = 1000000;
    double rssi_exclude_dbm = -110.0;       // initial sensing exclusion threshold
    double rssi_step_db = 3.0;              // raise when too few candidates remain
    double min_candidate_fraction = 0.2;
    int sensing_window_ms = 1000;
    int select_after_ms = 4;                // selection window lower edge
    int select_before_ms = 100;             // selection window upper edge
    int resel_counter_min = 5;
    int resel_counter_max = 15;
    double p_keep = 0.0;                    // chance to keep the grant at counter expiry
    double cbr_busy_dbm = -94.0;            // occupancy threshold for CBR
};

// Subchannels a payload occupies, capped at a full subframe.
int sps_subchannels_for(int bytes, const SpsConfig& cfg = {});

// Candidate filtering for SPS selection: drop resources whose average sensed
// RSSI exceeds the exclusion threshold, raising the threshold in steps until
// at least min_candidate_fraction of the grid remains.  avg_rssi_dbm uses
// -infinity (or any value <= -200) for never-sensed resources.
std::vector<size_t> sps_candidates(const std::vector<double>& avg_rssi_dbm,
                                   const SpsConfig& cfg);

struct RadioConfig {
    PhyConfig phy;
    DsrcConfig dsrc;
    SpsConfig sps;
    double beacon_rate_hz = 10.0;
    // Reception attempts are logged for receivers within twice this distance;
    // zero picks the per-scenario default (500 m highway, 300 m urban).
    double max_eval_distance_m = 0.0;
};

double eval_distance_m(ScenarioKind kind);

// Pure decode verdict given received power and summed interference.
RxFail classify_rx(double rx_dbm, double interference_mw, bool receiver_busy,
                   const PhyConfig& phy);

struct TxEvent {
    int64_t t_air_ns = 0;  // transmission start
    int64_t t_gen_ns = 0;  // beacon generation time
    int32_t sender = 0;
    int32_t bytes = 0;
};

struct RxEvent {
    int32_t tx_index = 0;  // into EventLog::tx
    int32_t receiver = 0;
    float distance_m = 0;
    float rx_dbm = 0;
    float sinr_db = 0;
    RxFail fail = RxFail::None;
};

struct OccupancySample {
    int32_t receiver = 0;
    int32_t window = 0;      // 100 ms window index
    float busy_fraction = 0; // DSRC: busy time share; C-V2X: busy resources share
};

struct EventLog {
    Mac mac = Mac::Dsrc;
    int32_t beacon_bytes = 0;
    double duration_s = 0;
    uint64_t seed = 0;
    size_t vehicle_count = 0;
    std::vector<std::string> vehicle_ids;
    std::vector<TxEvent> tx;
    std::vector<RxEvent> rx;
    std::vector<OccupancySample> occupancy;
};

// Replay `scenario` under the given MAC with fixed-size beacons.
EventLog run_radio(const Scenario& scenario, Mac mac, int beacon_bytes,
                   uint64_t seed, const RadioConfig& cfg = {});

// Per-event projection: t,sender,receiver,distance,sinr,decoded,reason
std::string export_events_csv(const EventLog& log);

// Per-receiver occupancy projection: receiver,t_window,busy_fraction
std::string export_occupancy_csv(const EventLog& log);

}  // namespace dim
