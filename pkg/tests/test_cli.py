"""CLI contract: config validation, exit codes, artifacts, reproducibility."""

import json

import numpy as np
import pytest

from erlangshot.cli import main


def _write(tmp_path, name, cfg):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def _wave_cfg(**over):
    cfg = {
        "schema_version": 1,
        "m_values": [1, 2],
        "beta_values": [1.0],
        "gamma": 1.0,
        "xi_lo": -10.0,
        "xi_hi": 36.0,
        "n_xi": 3001,
        "seed": 0,
    }
    cfg.update(over)
    return cfg


def test_wave_analytic_run(tmp_path):
    cfg = _write(tmp_path, "w.json", _wave_cfg())
    out = tmp_path / "out"
    assert main(["wave", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["metrics"]["C1"] == pytest.approx(1.781072417990198, rel=1e-9)
    assert report["metrics"]["C2"] == pytest.approx(4.841456788992367, rel=1e-9)
    assert report["metrics"]["C2_over_C1"] == pytest.approx(np.e, rel=1e-9)
    assert abs(report["metrics"]["mass_m1_beta1"] - 1.0) < 1e-6
    body = (out / "wave_m1_beta1.csv").read_text()
    assert body.splitlines()[0] == "xi,density"
    assert (out / "config_echo.json").exists()


def test_wave_rerun_byte_identical(tmp_path):
    cfg = _write(tmp_path, "w.json", _wave_cfg(m_values=[1]))
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["wave", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["wave", "--config", cfg, "--out", str(out2)]) == 0
    assert (out1 / "wave_m1_beta1.csv").read_bytes() == (out2 / "wave_m1_beta1.csv").read_bytes()


def test_wave_invalid_gamma_exits_2(tmp_path):
    cfg = _write(tmp_path, "w.json", _wave_cfg(gamma=-1.0))
    out = tmp_path / "out"
    assert main(["wave", "--config", cfg, "--out", str(out)]) == 2
    assert not out.exists()  # nothing written on invalid config


def test_unknown_key_rejected(tmp_path):
    cfg = _write(tmp_path, "w.json", _wave_cfg(extra_knob=3))
    assert main(["wave", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


def test_bad_schema_version(tmp_path):
    cfg = _write(tmp_path, "w.json", _wave_cfg(schema_version=99))
    assert main(["wave", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


def test_verify_master_run(tmp_path):
    cfg = _write(
        tmp_path,
        "vm.json",
        {
            "schema_version": 1,
            "m_values": [1, 2, 3, 4],
            "grid_sizes": [513, 1025, 2049, 4097],
            "gamma": 0.7,
            "lambda": 0.8,
            "x_lo": -8.0,
            "x_hi": 10.0,
            "drift": {"kind": "linear_restoring", "alpha": 0.6},
            "sigma": 0.3,
            "n_test_densities": 2,
            "seed": 1,
        },
    )
    out = tmp_path / "out"
    assert main(["verify-master", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    for m in (1, 2, 3, 4):
        assert report["metrics"][f"order_m{m}"] >= 1.7
    assert report["metrics"]["m1_direct_form_gap"] < 1e-10


def test_verify_master_single_grid_exits_2(tmp_path):
    cfg = _write(
        tmp_path,
        "vm.json",
        {
            "schema_version": 1,
            "m_values": [1],
            "grid_sizes": [513],
            "gamma": 0.7,
            "lambda": 0.8,
            "x_lo": -6.0,
            "x_hi": 10.0,
            "seed": 1,
        },
    )
    assert main(["verify-master", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


def _stationary_cfg(**over):
    cfg = {
        "schema_version": 1,
        "m": 2,
        "alpha": 1.0,
        "lambda": 2.0,
        "gamma": 1.0,
        "grid": {"x_lo": 1e-4, "x_hi": 40.0, "n": 2001},
        "sim": {"dt": 0.01, "t_end": 15.0, "n_paths": 30000, "record_stride": 100},
        "n_bins": 60,
        "seed": 2,
    }
    cfg.update(over)
    return cfg


def test_stationary_run(tmp_path):
    cfg = _write(tmp_path, "s.json", _stationary_cfg())
    out = tmp_path / "out"
    assert main(["stationary", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["metrics"]["analytic_mean"] == pytest.approx(4.0, rel=1e-8)
    assert report["metrics"]["ks"] < 0.02
    assert (out / "analytic_density.csv").exists()
    assert (out / "mc_histogram.csv").exists()


def test_stationary_m1_csv_matches_gamma_law(tmp_path):
    # at (m=1, alpha=1, lambda=2, gamma=1) the emitted density is the
    # Gamma(2, 1) law x e^{-x}, pointwise to 1e-8
    cfg = _stationary_cfg(m=1)
    cfg["sim"] = {"dt": 0.02, "t_end": 8.0, "n_paths": 5000, "record_stride": 50}
    path = _write(tmp_path, "s.json", cfg)
    out = tmp_path / "out"
    assert main(["stationary", "--config", path, "--out", str(out)]) in (0, 1)
    body = (out / "analytic_density.csv").read_text().splitlines()[1:]
    data = np.array([[float(v) for v in line.split(",")] for line in body])
    x, dens = data[:, 0], data[:, 1]
    assert np.max(np.abs(dens - x * np.exp(-x))) < 1e-8


def test_stationary_lambda_zero_degenerate(tmp_path):
    cfg = _write(tmp_path, "s.json", _stationary_cfg(**{"lambda": 0.0}))
    assert main(["stationary", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


def test_stationary_failed_tolerance_exits_1(tmp_path):
    # starved sampling cannot meet the KS tolerance: executed-but-failed
    cfg = _stationary_cfg()
    cfg["sim"] = {"dt": 0.05, "t_end": 0.5, "n_paths": 300, "record_stride": 10}
    path = _write(tmp_path, "s.json", cfg)
    out = tmp_path / "o"
    assert main(["stationary", "--config", path, "--out", str(out)]) == 1
    assert (out / "report.json").exists()


def _transient_cfg(**over):
    cfg = {
        "schema_version": 1,
        "alpha": 1.0,
        "lambda": 2.0,
        "gamma": 1.0,
        "x0": 0.5,
        "times": [0.3, 0.7],
        "u_values": [1.0],
        "t_u": 1.0,
        "n_samples": 30000,
        "seed": 3,
    }
    cfg.update(over)
    return cfg


def test_transient_run(tmp_path):
    cfg = _write(tmp_path, "t.json", _transient_cfg())
    out = tmp_path / "out"
    assert main(["transient", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["metrics"]["mass_t1"] == pytest.approx(1.0, abs=1e-4)
    assert report["metrics"]["ks_t1"] < 0.02
    assert (out / "density_t1.csv").exists()


def test_transient_t_zero_exits_2(tmp_path):
    cfg = _write(tmp_path, "t.json", _transient_cfg(times=[0.0, 0.5]))
    assert main(["transient", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


def _tanh_cfg(**over):
    cfg = {
        "schema_version": 1,
        "alpha": 1.0,
        "lambda": 1.0,
        "gamma": 2.0,
        "beta": 0.5,
        "t": 1.0,
        "sim": {"dt": 0.002, "t_end": 1.0, "n_paths": 50000, "record_stride": 500},
        "seed": 4,
    }
    cfg.update(over)
    return cfg


def test_tanh_run(tmp_path):
    cfg = _write(tmp_path, "th.json", _tanh_cfg())
    out = tmp_path / "out"
    assert main(["tanh", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["metrics"]["transient_mass"] == pytest.approx(1.0, abs=1e-4)
    assert report["metrics"]["transient_ks"] < 0.02


def test_tanh_beta_above_gamma_exits_2(tmp_path):
    cfg = _write(tmp_path, "th.json", _tanh_cfg(beta=2.5))
    assert main(["tanh", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


def test_verify_specfun_run(tmp_path):
    cfg = _write(tmp_path, "sf.json", {"schema_version": 1, "n_samples": 100, "seed": 5})
    out = tmp_path / "out"
    assert main(["verify-specfun", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert all(report["flags"].values())
    assert report["metrics"]["max_err_kummer_u"] < 1e-8


def test_seed_override(tmp_path):
    cfg = _write(tmp_path, "w.json", _wave_cfg(m_values=[1]))
    out = tmp_path / "out"
    assert main(["wave", "--config", cfg, "--out", str(out), "--seed", "42"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["seed"] == 42


def test_missing_config_file(tmp_path):
    assert main(["wave", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o")]) == 2
