"""Sanity checks of the python module against a freshly built extension."""

import math

import pytest

import dimv2x


def test_version_and_surface():
    assert dimv2x.__version__ == "0.1.0"
    assert set(dimv2x.preset_names()) == {
        "paper-highway",
        "paper-urban",
        "desk-highway",
        "desk-urban",
    }


def test_scenario_and_positions():
    s = dimv2x.build_scenario(kind="highway", density=20, duration_s=2.0, seed=7,
                              highway_length_m=1000)
    assert s.vehicle_count == 20
    assert s.duration_s == 2.0
    assert s.vehicle_ids[0] == "v0000"
    x, y = s.position_at(0, 0.0)
    assert 0.0 <= x < 1000.0
    assert abs(y) in (2.0, 6.0, 10.0, 14.0)
    with pytest.raises(IndexError):
        s.position_at(0, 5.0)
    csv = s.traces_csv()
    assert csv.startswith("t,vehicle_id,x,y\n")

    again = dimv2x.build_scenario(kind="highway", density=20, duration_s=2.0, seed=7,
                                  highway_length_m=1000)
    assert again.traces_csv() == csv

    with pytest.raises(ValueError):
        dimv2x.build_scenario(kind="gravel-road")


def test_radio_and_metrics():
    s = dimv2x.build_scenario(kind="highway", density=10, duration_s=1.0, seed=1,
                              highway_length_m=1000)
    log = dimv2x.run_radio(s, mac="dsrc", beacon_bytes=90, seed=1)
    assert log.mac == "dsrc"
    assert log.beacon_bytes == 90
    assert log.tx_count == 100  # 10 vehicles, 10 Hz, 1 s
    assert log.rx_count > 0
    assert log.events_csv().startswith("t,sender,receiver,distance,sinr,decoded,reason\n")
    assert log.occupancy_csv().startswith("receiver,t_window,busy_fraction\n")

    prr = dimv2x.prr_within(log, 150.0)
    assert prr is not None and 0.0 <= prr <= 1.0
    bins = dimv2x.prr_by_distance(log, bin_width_m=20.0, max_m=500.0)
    assert bins and all(0.0 <= v <= 1.0 for (_, _, _, v) in bins)
    total_attempts = sum(a for (_, a, _, _) in bins)
    assert total_attempts <= log.rx_count
    assert 0.0 <= dimv2x.mean_cbr(log) <= 1.0
    assert dimv2x.mean_data_age_s(log) >= 0.0
    assert dimv2x.mean_neighbors(s, 150.0) > 0.0

    cv = dimv2x.run_radio(s, mac="cv2x", beacon_bytes=1670, seed=1)
    assert cv.mac == "cv2x"
    assert dimv2x.mean_data_age_s(cv) <= 0.1


def test_experiment_sweep(tmp_path):
    cfg = dimv2x.parse_config_text(
        "[scenario]\n"
        "kind = highway\n"
        "densities = 8\n"
        "highway_length_m = 1000\n"
        "duration_s = 1\n"
        "seeds = 1\n"
        "[radio]\n"
        "macs = dsrc\n"
    )
    assert cfg.seeds == 1
    assert len(cfg.hash) == 64
    assert "kind = highway" in cfg.text

    out = dimv2x.run_experiment(cfg, str(tmp_path / "results"))
    assert out["runs"] == 2
    rows = out["summary"]
    assert [r["beacon_bytes"] for r in rows] == [90, 1670]
    assert all(0.0 <= r["prr150"] <= 1.0 for r in rows)

    cmp_rows = dimv2x.compare_overhead(str(tmp_path / "results"))
    metrics = [r["metric"] for r in cmp_rows]
    assert metrics == ["prr150", "cbr", "age"]
    for r in cmp_rows:
        assert math.isfinite(r["delta"])

    with pytest.raises(ValueError):
        dimv2x.parse_config_text("[scenario]\nkind = highway\n")
    with pytest.raises(OSError):
        dimv2x.compare_overhead(str(tmp_path / "missing"))


def test_handshake_demo_and_attacks():
    ok = dimv2x.handshake_demo(seed=3)
    assert ok["established"]
    assert ok["latency_ms"] > 0
    assert "(1623 B)" in ok["transcript"]

    refused = dimv2x.handshake_demo(seed=3, revoke_peer=True)
    assert not refused["established"]
    assert refused["reason"] == "revoked-peer"

    crash = dimv2x.handshake_demo(seed=3, crash_node=0)
    assert crash["established"]

    rep = dimv2x.attack_suite(instances=2, seed=5)
    assert rep["attempts"] == 10
    assert rep["successes"] == 0
    assert len(rep["per_kind"]) == 5

    weakened = dimv2x.attack_suite(instances=2, seed=5, disable_guards=["freshness"])
    assert weakened["successes"] > 0
    with pytest.raises(ValueError):
        dimv2x.attack_suite(instances=1, disable_guards=["wingspan"])
