#include "dim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <tuple>

#include "dim/errors.hpp"
#include "dim/rng.hpp"

namespace dim {

namespace {

constexpr int64_t kWindowNs = 100000000;  // 100 ms occupancy / snapshot window
constexpr double kSpeedOfLight = 3e8;
constexpr double kNeverSensedDbm = -300.0;

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

}  // namespace

const char* mac_name(Mac mac) { return mac == Mac::Dsrc ? "dsrc" : "cv2x"; }

const char* fail_name(RxFail f) {
    switch (f) {
        case RxFail::None: return "none";
        case RxFail::HalfDuplex: return "half-duplex";
        case RxFail::BelowSense: return "below-sense";
        case RxFail::Collision: return "collision";
        case RxFail::LowSinr: return "low-sinr";
    }
    return "unknown";
}

double breakpoint_distance_m(const PhyConfig& phy) {
    return 4.0 * phy.antenna_height_m * phy.antenna_height_m * phy.freq_hz /
           kSpeedOfLight;
}

double path_loss_db(double distance_m, LosClass los, const PhyConfig& phy) {
    if (distance_m <= 0) throw InvalidDistance("path loss needs a positive distance");
    double pl0 = 20.0 * std::log10(4.0 * M_PI * phy.freq_hz / kSpeedOfLight);
    double bp = breakpoint_distance_m(phy);
    double pl = distance_m <= bp
                    ? pl0 + 20.0 * std::log10(distance_m)
                    : pl0 + 20.0 * std::log10(bp) + 40.0 * std::log10(distance_m / bp);
    if (los == LosClass::Nlos) pl += phy.nlos_penalty_db;
    return pl;
}

double noise_floor_dbm(const PhyConfig& phy) {
    return -174.0 + 10.0 * std::log10(phy.bandwidth_hz) + phy.noise_figure_db;
}

double rx_power_dbm(double distance_m, LosClass los, double shadow_db,
                    const PhyConfig& phy) {
    return phy.tx_power_dbm + phy.tx_gain_db + phy.rx_gain_db -
           path_loss_db(distance_m, los, phy) + shadow_db;
}

int64_t dsrc_airtime_ns(int bytes, const DsrcConfig& cfg) {
    double payload_ns = bytes * 8.0 / cfg.bitrate_bps * 1e9;
    return cfg.preamble_ns + static_cast<int64_t>(std::llround(payload_ns));
}

int sps_subchannels_for(int bytes, const SpsConfig& cfg) {
    int n = (bytes + cfg.subchannel_capacity_bytes - 1) / cfg.subchannel_capacity_bytes;
    return std::clamp(n, 1, cfg.subchannels);
}

std::vector<size_t> sps_candidates(const std::vector<double>& avg_rssi_dbm,
                                   const SpsConfig& cfg) {
    size_t need = static_cast<size_t>(
        std::ceil(avg_rssi_dbm.size() * cfg.min_candidate_fraction));
    if (need == 0) need = 1;
    double thr = cfg.rssi_exclude_dbm;
    std::vector<size_t> out;
    while (true) {
        out.clear();
        for (size_t i = 0; i < avg_rssi_dbm.size(); ++i)
            if (!(avg_rssi_dbm[i] > thr)) out.push_back(i);
        if (out.size() >= need || thr > 0) return out;
        thr += cfg.rssi_step_db;
    }
}

double eval_distance_m(ScenarioKind kind) {
    return kind == ScenarioKind::Highway ? 500.0 : 300.0;
}

RxFail classify_rx(double rx_dbm, double interference_mw, bool receiver_busy,
                   const PhyConfig& phy) {
    if (receiver_busy) return RxFail::HalfDuplex;
    if (rx_dbm < phy.sensitivity_dbm) return RxFail::BelowSense;
    double sig = dbm_to_mw(rx_dbm);
    double noise = dbm_to_mw(noise_floor_dbm(phy));
    double sinr_db = mw_to_dbm(sig / (noise + interference_mw));
    if (sinr_db >= phy.sinr_threshold_db) return RxFail::None;
    double snr_db = mw_to_dbm(sig / noise);
    return snr_db >= phy.sinr_threshold_db ? RxFail::Collision : RxFail::LowSinr;
}

namespace {

// Per-window channel snapshot: positions, pairwise distance and received
// power with the static per-link shadowing applied.  Windows are revisited
// rarely (boundary straddling, occupancy pass), so a single cached window
// keeps memory at one n*n matrix.
struct ChannelModel {
    const Scenario& sc;
    const RadioConfig& cfg;
    size_t n;
    double noise_mw;
    double cutoff_m;  // receivers beyond this are not evaluated
    std::vector<float> shadow_z;  // one static draw per directed link
    int cur_window = -1;
    std::vector<Position> wpos;
    std::vector<float> dist_m;
    std::vector<float> rxp_dbm;

    ChannelModel(const Scenario& s, const RadioConfig& c, uint64_t seed)
        : sc(s), cfg(c), n(s.traces.size()) {
        noise_mw = dbm_to_mw(noise_floor_dbm(cfg.phy));
        double eval = cfg.max_eval_distance_m > 0 ? cfg.max_eval_distance_m
                                                  : eval_distance_m(sc.config.geometry.kind);
        cutoff_m = 2.0 * eval;
        shadow_z.assign(n * n, 0.0f);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                SimRng r(mix_seed(seed ^ 0x5ad05ad0ull, i, j));
                shadow_z[i * n + j] = static_cast<float>(r.normal(0.0, 1.0));
            }
        dist_m.assign(n * n, 0.0f);
        rxp_dbm.assign(n * n, 0.0f);
    }

    void ensure_window(int w) {
        if (w == cur_window) return;
        cur_window = w;
        wpos = positions_at(sc, 0.1 * w);
        const ScenarioGeometry& g = sc.config.geometry;
        for (size_t s = 0; s < n; ++s) {
            for (size_t r = 0; r < n; ++r) {
                if (s == r) continue;
                double dx = wpos[s].x - wpos[r].x;
                double dy = wpos[s].y - wpos[r].y;
                double d = std::sqrt(dx * dx + dy * dy);
                dist_m[s * n + r] = static_cast<float>(d);
                if (d > cutoff_m) continue;  // never read past the cutoff
                LosClass los = los_between(wpos[s], wpos[r], g);
                double sd = los == LosClass::Los ? cfg.phy.shadow_sd_los_db
                                                 : cfg.phy.shadow_sd_nlos_db;
                double shadow = shadow_z[s * n + r] * sd;
                // closer than the 1 m reference distance: evaluate at 1 m
                double d_eff = std::max(d, 1.0);
                rxp_dbm[s * n + r] =
                    static_cast<float>(rx_power_dbm(d_eff, los, shadow, cfg.phy));
            }
        }
    }

    float dist(size_t s, size_t r) const { return dist_m[s * n + r]; }
    float rxp(size_t s, size_t r) const { return rxp_dbm[s * n + r]; }
};

std::vector<int64_t> beacon_phases(size_t n, uint64_t seed, int64_t period_ns) {
    std::vector<int64_t> phases(n);
    for (size_t i = 0; i < n; ++i) {
        SimRng r(mix_seed(seed ^ 0xbeac0000ull, i));
        phases[i] = r.uniform_int(0, period_ns - 1);
    }
    return phases;
}

void init_log(EventLog& log, const Scenario& sc, Mac mac, int bytes, uint64_t seed) {
    log.mac = mac;
    log.beacon_bytes = bytes;
    log.duration_s = sc.duration_s;
    log.seed = seed;
    log.vehicle_count = sc.traces.size();
    log.vehicle_ids.reserve(sc.traces.size());
    for (const auto& tr : sc.traces) log.vehicle_ids.push_back(tr.vehicle_id);
}

// ---------------------------------------------------------------- DSRC ----

struct AirFrame {
    int32_t sender;
    int64_t start, end;
    int32_t tx_index;
};

struct DsrcVehicle {
    int64_t next_gen = 0;
    bool has_frame = false;
    int64_t gen_t = 0;
    int backoff = -1;        // slots left; -1 = none drawn yet
    int64_t defer_base = -1; // when the current idle countdown began
    int64_t attempt_t = -1;
    uint64_t version = 0;    // invalidates queued attempts
    int64_t tx_until = -1;
    bool busy_view = false;
    SimRng rng{0};
};

struct DsrcEvent {
    int64_t t;
    int kind;  // 0 = tx end, 1 = generation, 2 = attempt
    int32_t veh;
    uint64_t aux;  // attempt: state version; tx end: air index
    bool operator>(const DsrcEvent& o) const {
        return std::tie(t, kind, veh, aux) > std::tie(o.t, o.kind, o.veh, o.aux);
    }
};

class DsrcSim {
  public:
    DsrcSim(const Scenario& sc, int bytes, uint64_t seed, const RadioConfig& cfg,
            EventLog& log)
        : sc_(sc), cfg_(cfg), log_(log), ch_(sc, cfg, seed), bytes_(bytes),
          airtime_(dsrc_airtime_ns(bytes, cfg.dsrc)),
          cs_mw_(dbm_to_mw(cfg.dsrc.cs_threshold_dbm)),
          duration_ns_(static_cast<int64_t>(std::llround(sc.duration_s * 1e9))) {
        size_t n = sc.traces.size();
        veh_.resize(n);
        int64_t period = static_cast<int64_t>(std::llround(1e9 / cfg.beacon_rate_hz));
        auto phases = beacon_phases(n, seed, period);
        for (size_t i = 0; i < n; ++i) {
            veh_[i].rng = SimRng(mix_seed(seed ^ 0x3ac0ull, i));
            veh_[i].next_gen = phases[i];
            if (phases[i] < duration_ns_)
                push({phases[i], 1, static_cast<int32_t>(i), 0});
        }
        period_ = period;
    }

    void run() {
        while (!q_.empty()) {
            DsrcEvent ev = q_.top();
            q_.pop();
            switch (ev.kind) {
                case 0: on_tx_end(ev); break;
                case 1: on_gen(ev); break;
                case 2: on_attempt(ev); break;
            }
        }
        occupancy_pass();
    }

  private:
    const Scenario& sc_;
    const RadioConfig& cfg_;
    EventLog& log_;
    ChannelModel ch_;
    int bytes_;
    int64_t airtime_;
    double cs_mw_;
    int64_t duration_ns_;
    int64_t period_ = 0;
    std::vector<DsrcVehicle> veh_;
    std::vector<AirFrame> air_;
    size_t air_live_ = 0;  // air_[air_live_..] may still overlap current time
    std::priority_queue<DsrcEvent, std::vector<DsrcEvent>, std::greater<DsrcEvent>> q_;

    void push(DsrcEvent ev) { q_.push(ev); }

    bool medium_busy(int32_t v, int64_t t) {
        ch_.ensure_window(static_cast<int>(t / kWindowNs));
        double sum = 0;
        for (size_t i = air_live_; i < air_.size(); ++i) {
            const AirFrame& a = air_[i];
            if (a.end <= t || a.start > t) continue;
            if (a.sender == v) continue;
            if (ch_.dist(static_cast<size_t>(a.sender), static_cast<size_t>(v)) >
                ch_.cutoff_m)
                continue;
            sum += dbm_to_mw(ch_.rxp(static_cast<size_t>(a.sender),
                                     static_cast<size_t>(v)));
        }
        return sum >= cs_mw_;
    }

    void on_gen(const DsrcEvent& ev) {
        DsrcVehicle& st = veh_[static_cast<size_t>(ev.veh)];
        st.next_gen += period_;
        if (st.next_gen < duration_ns_) push({st.next_gen, 1, ev.veh, 0});
        if (st.has_frame || st.tx_until > ev.t) {
            // beacon replacement: newest payload wins, contention state stays
            st.has_frame = true;
            st.gen_t = ev.t;
            return;
        }
        st.has_frame = true;
        st.gen_t = ev.t;
        st.backoff = -1;
        st.busy_view = medium_busy(ev.veh, ev.t);
        if (!st.busy_view) {
            st.defer_base = ev.t;
            st.attempt_t = ev.t + cfg_.dsrc.aifs_ns;
            push({st.attempt_t, 2, ev.veh, ++st.version});
        } else {
            st.backoff = static_cast<int>(
                st.rng.uniform_int(0, cfg_.dsrc.contention_window));
        }
    }

    void on_attempt(const DsrcEvent& ev) {
        DsrcVehicle& st = veh_[static_cast<size_t>(ev.veh)];
        if (ev.aux != st.version || !st.has_frame) return;
        st.has_frame = false;
        st.attempt_t = -1;
        st.defer_base = -1;
        st.backoff = -1;
        st.tx_until = ev.t + airtime_;
        st.busy_view = true;  // own transmission: treated busy until it ends
        int32_t tx_index = static_cast<int32_t>(log_.tx.size());
        log_.tx.push_back({ev.t, st.gen_t, ev.veh, bytes_});
        air_.push_back({ev.veh, ev.t, st.tx_until, tx_index});
        push({st.tx_until, 0, ev.veh, static_cast<uint64_t>(air_.size() - 1)});
        update_waiters(ev.t);
    }

    void on_tx_end(const DsrcEvent& ev) {
        const AirFrame frame = air_[ev.aux];
        veh_[static_cast<size_t>(frame.sender)].tx_until = -1;
        receive(frame);
        while (air_live_ < air_.size() && air_[air_live_].end <= ev.t - 10000000)
            ++air_live_;
        update_waiters(ev.t);
    }

    void update_waiters(int64_t t) {
        for (size_t v = 0; v < veh_.size(); ++v) {
            DsrcVehicle& st = veh_[v];
            if (st.tx_until > t) continue;
            if (!st.has_frame) {
                st.busy_view = false;
                continue;
            }
            bool now = medium_busy(static_cast<int32_t>(v), t);
            if (now == st.busy_view) continue;
            st.busy_view = now;
            if (now)
                on_busy(st, t);
            else
                on_idle(st, static_cast<int32_t>(v), t);
        }
    }

    void on_busy(DsrcVehicle& st, int64_t t) {
        if (st.attempt_t == t) return;  // attempt fires this instant: collision
        if (st.backoff < 0) {
            st.backoff = static_cast<int>(
                st.rng.uniform_int(0, cfg_.dsrc.contention_window));
        } else if (st.defer_base >= 0) {
            int64_t elapsed = t - (st.defer_base + cfg_.dsrc.aifs_ns);
            if (elapsed > 0) {
                int done = static_cast<int>(elapsed / cfg_.dsrc.slot_ns);
                st.backoff = std::max(0, st.backoff - done);
            }
        }
        st.defer_base = -1;
        st.attempt_t = -1;
        ++st.version;
    }

    void on_idle(DsrcVehicle& st, int32_t v, int64_t t) {
        st.defer_base = t;
        st.attempt_t =
            t + cfg_.dsrc.aifs_ns + std::max(st.backoff, 0) * cfg_.dsrc.slot_ns;
        push({st.attempt_t, 2, v, ++st.version});
    }

    void receive(const AirFrame& frame) {
        size_t n = veh_.size();
        ch_.ensure_window(static_cast<int>(frame.start / kWindowNs));
        size_t sender = static_cast<size_t>(frame.sender);
        for (size_t r = 0; r < n; ++r) {
            if (r == sender) continue;
            double d = ch_.dist(sender, r);
            if (d > ch_.cutoff_m) continue;
            bool half = false;
            double interf = 0;
            for (size_t i = air_live_; i < air_.size(); ++i) {
                const AirFrame& o = air_[i];
                if (o.tx_index == frame.tx_index) continue;
                if (o.end <= frame.start || o.start >= frame.end) continue;
                if (o.sender == static_cast<int32_t>(r)) {
                    half = true;
                    continue;
                }
                if (ch_.dist(static_cast<size_t>(o.sender), r) > ch_.cutoff_m) continue;
                interf += dbm_to_mw(ch_.rxp(static_cast<size_t>(o.sender), r));
            }
            double rxp = ch_.rxp(sender, r);
            double sinr = mw_to_dbm(dbm_to_mw(rxp) / (ch_.noise_mw + interf));
            RxFail fail = classify_rx(rxp, interf, half, cfg_.phy);
            log_.rx.push_back({frame.tx_index, static_cast<int32_t>(r),
                               static_cast<float>(d), static_cast<float>(rxp),
                               static_cast<float>(sinr), fail});
        }
    }

    void occupancy_pass() {
        int windows = static_cast<int>(duration_ns_ / kWindowNs);
        size_t n = veh_.size();
        size_t lo = 0;
        std::vector<std::pair<int64_t, int64_t>> ivals;
        for (int w = 0; w < windows; ++w) {
            int64_t wstart = w * kWindowNs, wend = wstart + kWindowNs;
            ch_.ensure_window(w);
            while (lo < air_.size() && air_[lo].end <= wstart) ++lo;
            size_t hi = lo;
            while (hi < air_.size() && air_[hi].start < wend) ++hi;
            for (size_t r = 0; r < n; ++r) {
                ivals.clear();
                for (size_t i = lo; i < hi; ++i) {
                    const AirFrame& a = air_[i];
                    if (a.end <= wstart) continue;
                    bool own = a.sender == static_cast<int32_t>(r);
                    if (!own) {
                        size_t s = static_cast<size_t>(a.sender);
                        if (ch_.dist(s, r) > ch_.cutoff_m) continue;
                        if (dbm_to_mw(ch_.rxp(s, r)) < cs_mw_) continue;
                    }
                    ivals.emplace_back(std::max(a.start, wstart), std::min(a.end, wend));
                }
                std::sort(ivals.begin(), ivals.end());
                int64_t busy = 0, cur_s = -1, cur_e = -1;
                for (auto [s, e] : ivals) {
                    if (s > cur_e) {
                        busy += cur_e - cur_s;
                        cur_s = s;
                        cur_e = e;
                    } else {
                        cur_e = std::max(cur_e, e);
                    }
                }
                if (cur_e > cur_s) busy += cur_e - cur_s;
                log_.occupancy.push_back(
                    {static_cast<int32_t>(r), w,
                     static_cast<float>(static_cast<double>(busy) / kWindowNs)});
            }
        }
    }
};

// --------------------------------------------------------------- C-V2X ----

struct SpsVehicle {
    int64_t next_gen = 0;
    bool pending = false;
    int64_t gen_t = 0;
    bool granted = false;
    int offset = 0;    // subframe index within the 100 ms period
    int subch0 = 0;
    int rc = 0;
    SimRng rng{0};
};

class Cv2xSim {
  public:
    Cv2xSim(const Scenario& sc, int bytes, uint64_t seed, const RadioConfig& cfg,
            EventLog& log)
        : sc_(sc), cfg_(cfg), log_(log), ch_(sc, cfg, seed), bytes_(bytes),
          nsub_(sps_subchannels_for(bytes, cfg.sps)),
          duration_ns_(static_cast<int64_t>(std::llround(sc.duration_s * 1e9))) {
        size_t n = sc.traces.size();
        sf_per_window_ = static_cast<int>(kWindowNs / cfg.sps.subframe_ns);
        subch_ = cfg.sps.subchannels;
        busy_mw_ = dbm_to_mw(cfg.sps.cbr_busy_dbm);
        int64_t period = static_cast<int64_t>(std::llround(1e9 / cfg.beacon_rate_hz));
        period_ = period;
        auto phases = beacon_phases(n, seed, period);
        veh_.resize(n);
        for (size_t i = 0; i < n; ++i) {
            veh_[i].rng = SimRng(mix_seed(seed ^ 0x3ac0ull, i));
            veh_[i].next_gen = phases[i];
        }
        int ring = cfg.sps.sensing_window_ms;
        sense_.assign(n * static_cast<size_t>(ring) * static_cast<size_t>(subch_),
                      0.0f);
        ring_ = ring;
        busy_count_.assign(n, 0);
    }

    void run() {
        int64_t total_sf = duration_ns_ / cfg_.sps.subframe_ns;
        std::vector<int32_t> txs;
        for (int64_t sf = 0; sf < total_sf; ++sf) {
            int64_t t = sf * cfg_.sps.subframe_ns;
            ch_.ensure_window(static_cast<int>(t / kWindowNs));

            // 1. reserved transmissions due this subframe
            txs.clear();
            int sf_offset = static_cast<int>(sf % sf_per_window_);
            for (size_t v = 0; v < veh_.size(); ++v) {
                SpsVehicle& st = veh_[v];
                if (!st.pending || !st.granted || st.offset != sf_offset) continue;
                if (st.gen_t > t) continue;
                txs.push_back(static_cast<int32_t>(v));
                log_.tx.push_back({t, st.gen_t, static_cast<int32_t>(v), bytes_});
                st.pending = false;
                if (--st.rc <= 0) {
                    if (st.rng.uniform() < cfg_.sps.p_keep)
                        st.rc = static_cast<int>(st.rng.uniform_int(
                            cfg_.sps.resel_counter_min, cfg_.sps.resel_counter_max));
                    else
                        st.granted = false;
                }
            }

            // 2. reception attempts
            size_t first_tx = log_.tx.size() - txs.size();
            for (size_t k = 0; k < txs.size(); ++k) {
                size_t sender = static_cast<size_t>(txs[k]);
                const SpsVehicle& sv = veh_[sender];
                for (size_t r = 0; r < veh_.size(); ++r) {
                    if (r == sender) continue;
                    double d = ch_.dist(sender, r);
                    if (d > ch_.cutoff_m) continue;
                    bool half = std::find(txs.begin(), txs.end(),
                                          static_cast<int32_t>(r)) != txs.end();
                    double interf = 0;
                    for (size_t m = 0; m < txs.size(); ++m) {
                        if (m == k) continue;
                        size_t other = static_cast<size_t>(txs[m]);
                        if (other == r) continue;
                        if (!overlap(sv.subch0, veh_[other].subch0)) continue;
                        if (ch_.dist(other, r) > ch_.cutoff_m) continue;
                        interf += dbm_to_mw(ch_.rxp(other, r));
                    }
                    double rxp = ch_.rxp(sender, r);
                    double sinr = mw_to_dbm(dbm_to_mw(rxp) / (ch_.noise_mw + interf));
                    RxFail fail = classify_rx(rxp, interf, half, cfg_.phy);
                    log_.rx.push_back({static_cast<int32_t>(first_tx + k),
                                       static_cast<int32_t>(r), static_cast<float>(d),
                                       static_cast<float>(rxp),
                                       static_cast<float>(sinr), fail});
                }
            }

            // 3. sensing + occupancy accounting
            int row = static_cast<int>(sf % ring_);
            for (size_t v = 0; v < veh_.size(); ++v) {
                float* cell = &sense_[(v * static_cast<size_t>(ring_) +
                                       static_cast<size_t>(row)) *
                                      static_cast<size_t>(subch_)];
                bool own_tx = std::find(txs.begin(), txs.end(),
                                        static_cast<int32_t>(v)) != txs.end();
                if (own_tx) {
                    // transmitting: nothing sensed, own resources marked busy
                    for (int c = 0; c < subch_; ++c) cell[c] = -1.0f;
                    busy_count_[v] += nsub_;
                    continue;
                }
                for (int c = 0; c < subch_; ++c) {
                    double p = 0;
                    for (int32_t s : txs) {
                        const SpsVehicle& sv = veh_[static_cast<size_t>(s)];
                        if (c < sv.subch0 || c >= sv.subch0 + nsub_) continue;
                        if (ch_.dist(static_cast<size_t>(s), v) > ch_.cutoff_m)
                            continue;
                        p += dbm_to_mw(ch_.rxp(static_cast<size_t>(s), v));
                    }
                    cell[c] = static_cast<float>(p);
                    if (p > busy_mw_) ++busy_count_[v];
                }
            }
            if (sf_offset == sf_per_window_ - 1) {
                int w = static_cast<int>(sf / sf_per_window_);
                int total = sf_per_window_ * subch_;
                for (size_t v = 0; v < veh_.size(); ++v) {
                    log_.occupancy.push_back(
                        {static_cast<int32_t>(v), w,
                         static_cast<float>(static_cast<double>(busy_count_[v]) /
                                            total)});
                    busy_count_[v] = 0;
                }
            }

            // 4. beacon arrivals within this subframe
            for (size_t v = 0; v < veh_.size(); ++v) {
                SpsVehicle& st = veh_[v];
                while (st.next_gen < duration_ns_ &&
                       st.next_gen < t + cfg_.sps.subframe_ns) {
                    st.pending = true;
                    st.gen_t = st.next_gen;
                    if (!st.granted) select_grant(st, st.gen_t, sf);
                    st.next_gen += period_;
                }
            }
        }
    }

  private:
    const Scenario& sc_;
    const RadioConfig& cfg_;
    EventLog& log_;
    ChannelModel ch_;
    int bytes_;
    int nsub_;
    int64_t duration_ns_;
    int64_t period_ = 0;
    int sf_per_window_ = 100;
    int subch_ = 4;
    int ring_ = 1000;
    double busy_mw_ = 0;
    std::vector<SpsVehicle> veh_;
    std::vector<float> sense_;
    std::vector<int> busy_count_;

    bool overlap(int a0, int b0) const {
        return a0 < b0 + nsub_ && b0 < a0 + nsub_;
    }

    void select_grant(SpsVehicle& st, int64_t gen_t, int64_t cur_sf) {
        int64_t first_sf =
            (gen_t + cfg_.sps.select_after_ms * 1000000LL + cfg_.sps.subframe_ns - 1) /
            cfg_.sps.subframe_ns;
        int64_t last_sf =
            (gen_t + cfg_.sps.select_before_ms * 1000000LL) / cfg_.sps.subframe_ns;
        int starts = subch_ - nsub_ + 1;
        size_t veh_index = static_cast<size_t>(&st - veh_.data());

        struct Cand { int64_t sf; int c0; };
        std::vector<Cand> res;
        std::vector<double> avg;
        for (int64_t s = first_sf; s <= last_sf; ++s) {
            for (int c0 = 0; c0 < starts; ++c0) {
                double sum = 0;
                int cnt = 0;
                for (int64_t occ = s - sf_per_window_; occ >= 0 && occ > cur_sf - ring_;
                     occ -= sf_per_window_) {
                    if (occ > cur_sf) continue;
                    const float* cell =
                        &sense_[(veh_index * static_cast<size_t>(ring_) +
                                 static_cast<size_t>(occ % ring_)) *
                                static_cast<size_t>(subch_)];
                    for (int c = c0; c < c0 + nsub_; ++c) {
                        if (cell[c] < 0) continue;  // own transmission, unmeasured
                        sum += cell[c];
                        ++cnt;
                    }
                }
                res.push_back({s, c0});
                avg.push_back(cnt > 0 && sum > 0 ? mw_to_dbm(sum / cnt)
                                                 : kNeverSensedDbm);
            }
        }
        std::vector<size_t> cands = sps_candidates(avg, cfg_.sps);
        size_t pick = cands[static_cast<size_t>(
            st.rng.uniform_int(0, static_cast<int64_t>(cands.size()) - 1))];
        st.offset = static_cast<int>(res[pick].sf % sf_per_window_);
        st.subch0 = res[pick].c0;
        st.rc = static_cast<int>(
            st.rng.uniform_int(cfg_.sps.resel_counter_min, cfg_.sps.resel_counter_max));
        st.granted = true;
    }
};

}  // namespace

EventLog run_radio(const Scenario& scenario, Mac mac, int beacon_bytes,
                   uint64_t seed, const RadioConfig& cfg) {
    if (beacon_bytes <= 0) throw OutOfRange("beacon size must be positive");
    if (scenario.traces.empty()) throw InvalidScenario("scenario has no vehicles");
    EventLog log;
    init_log(log, scenario, mac, beacon_bytes, seed);
    if (mac == Mac::Dsrc) {
        DsrcSim sim(scenario, beacon_bytes, seed, cfg, log);
        sim.run();
    } else {
        Cv2xSim sim(scenario, beacon_bytes, seed, cfg, log);
        sim.run();
    }
    return log;
}

std::string export_events_csv(const EventLog& log) {
    std::string out = "t,sender,receiver,distance,sinr,decoded,reason\n";
    char buf[192];
    for (const RxEvent& e : log.rx) {
        const TxEvent& tx = log.tx[static_cast<size_t>(e.tx_index)];
        std::snprintf(buf, sizeof buf, "%.6f,%s,%s,%.2f,%.2f,%d,%s\n",
                      tx.t_air_ns / 1e9,
                      log.vehicle_ids[static_cast<size_t>(tx.sender)].c_str(),
                      log.vehicle_ids[static_cast<size_t>(e.receiver)].c_str(),
                      static_cast<double>(e.distance_m),
                      static_cast<double>(e.sinr_db), e.fail == RxFail::None ? 1 : 0,
                      fail_name(e.fail));
        out += buf;
    }
    return out;
}

std::string export_occupancy_csv(const EventLog& log) {
    std::string out = "receiver,t_window,busy_fraction\n";
    char buf[96];
    for (const OccupancySample& s : log.occupancy) {
        std::snprintf(buf, sizeof buf, "%s,%.1f,%.6f\n",
                      log.vehicle_ids[static_cast<size_t>(s.receiver)].c_str(),
                      s.window * 0.1, static_cast<double>(s.busy_fraction));
        out += buf;
    }
    return out;
}

}  // namespace dim
