import json
import os

import numpy as np
import pytest

from mchist import io
from mchist.cli import main
from mchist.config import DEFAULTS, load_config, validate
from mchist.errors import ConfigError, DataIOError
from mchist.phase import SpectralPoint, circle_angle_for_speed, circle_norming_constant


def circle_gen(v):
    w = np.exp(1j * circle_angle_for_speed(v))
    c = circle_norming_constant(w)
    return {"zeta": [w.real, w.imag], "C": [c.real, c.imag], "kind": "ON_CIRCLE"}


def write_cfg(tmp_path, name="cfg.json", **over):
    cfg = {"schema_version": 1, "out": str(tmp_path / "out")}
    cfg.update(over)
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def test_columns_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    a, b = rng.normal(size=17), rng.normal(size=17) * 1e-300
    f = tmp_path / "sub" / "c.txt"
    io.write_columns(f, [a, b], ["a", "b"])
    assert f.read_text().startswith("# a b\n")
    back = io.read_columns(f, 2)
    assert np.array_equal(back[:, 0], a) and np.array_equal(back[:, 1], b)


def test_record_is_canonical(tmp_path):
    rec = {"b": 1.0 / 3, "a": [1 + 2j, 3], "c": {"z": None, "y": True}}
    io.write_record(tmp_path / "r1.json", rec)
    io.write_record(tmp_path / "r2.json", dict(reversed(list(rec.items()))))
    assert (tmp_path / "r1.json").read_bytes() == (tmp_path / "r2.json").read_bytes()
    back = io.read_record(tmp_path / "r1.json")
    assert list(back) == ["a", "b", "c"]
    assert back["b"] == 1.0 / 3 and back["a"][0] == [1.0, 2.0]


def test_spectrum_round_trip(tmp_path):
    pts = [SpectralPoint(0.6 + 1.6j, 1 - 1j, "OFF_CIRCLE"),
           SpectralPoint(np.exp(2.5j), -1j * np.exp(2.5j), "ON_CIRCLE")]
    io.write_spectrum(tmp_path / "s.txt", pts)
    back = io.read_spectrum(tmp_path / "s.txt")
    assert [(p.zeta, p.C, p.kind) for p in back] == [(p.zeta, p.C, p.kind) for p in pts]


def test_spectrum_parse_error(tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("# header\n0.5 1.5 1 0 OFF_CIRCLE\n0.1 0.5 1\n")
    with pytest.raises(DataIOError, match=":3:"):
        io.read_spectrum(f)


def test_config_defaults_and_errors(tmp_path):
    cfg = validate({"schema_version": 1, "grids": {"n": 1024}})
    assert cfg["grids"]["n"] == 1024 and cfg["grids"]["L"] == DEFAULTS["grids"]["L"]
    for bad in ({"schema_version": 2}, {"schema_version": 1, "bogus": 1},
                {"schema_version": 1, "grids": {"n": 1000}},
                {"schema_version": 1, "ctx": {"rho": 0.3}},
                {"schema_version": 1, "grids": {"z_n": 201}}):
        with pytest.raises(ConfigError):
            validate(bad)
    p = tmp_path / "broken.json"
    p.write_text("{\n  \"seed\": ,\n}")
    with pytest.raises(ConfigError, match=":2:"):
        load_config(p)


def test_cli_bad_config_exit_code(tmp_path):
    assert main(["scatter", "--config", write_cfg(tmp_path, bogus=1), "--quiet"]) == 2
    assert main(["scatter", "--config", str(tmp_path / "nope.json"), "--quiet"]) == 2


def test_cli_malformed_profile_exit_code(tmp_path, capsys):
    prof = tmp_path / "m.txt"
    prof.write_text("-1 0\n0 0.2\n1 oops\n")
    cfg = write_cfg(tmp_path, profile={"kind": "file", "path": str(prof)})
    assert main(["scatter", "--config", cfg, "--quiet"]) == 4
    assert "m.txt:3" in capsys.readouterr().err


def test_cli_scatter_is_deterministic(tmp_path):
    cfg = write_cfg(tmp_path, grids={"z_n": 40, "h": 0.02})
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        assert main(["scatter", "--config", cfg, "--out", str(out), "--quiet"]) == 0
        outs.append({f: (out / f).read_bytes() for f in sorted(os.listdir(out))})
    assert outs[0] == outs[1]
    assert set(outs[0]) == {"reflection.txt", "scatter_report.json"}


def test_cli_zero_profile(tmp_path):
    cfg = write_cfg(tmp_path, profile={"kind": "zero"}, grids={"z_n": 20})
    assert main(["scatter", "--config", cfg, "--quiet"]) == 0
    cols = io.read_columns(tmp_path / "out" / "reflection.txt", 5)
    assert np.all(cols[:, 1:3] == 0) and np.all(cols[:, 3] == 1)


def test_cli_sectors_seeded(tmp_path):
    cfg = write_cfg(tmp_path, ctx={"xi": -0.3}, sectors={"phi": np.pi / 16, "samples": 2000})
    for seed in (1, 1, 2):
        assert main(["sectors", "--config", cfg, "--seed", str(seed), "--quiet"]) == 0
    rec = io.read_record(tmp_path / "out" / "sectors.json")
    assert rec["seed"] == 2 and rec["samples"] == 2000 and rec["regime"] == "LEFT"


def test_cli_partition_and_solitons(tmp_path):
    cfg = write_cfg(tmp_path, spectrum=[circle_gen(3.0)], ctx={"xi": 3.0}, times=[1.0],
                    x_grid={"start": -10.0, "stop": 10.0, "num": 21})
    assert main(["partition", "--config", cfg, "--quiet"]) == 0
    part = io.read_record(tmp_path / "out" / "partition.json")
    assert part["lambda"] == [0, 1] and part["regime"] == "RIGHT"
    assert main(["solitons", "--config", cfg, "--quiet"]) == 0
    u = io.read_columns(tmp_path / "out" / "soliton_t1.txt", 2)[:, 1]
    assert u.max() > 0.1


def test_cli_predict_empty_lambda_is_flat(tmp_path):
    cfg = write_cfg(tmp_path, profile={"kind": "soliton", "generators": [circle_gen(3.0)]},
                    ctx={"xi": 6.0}, times=[10.0], x_grid={"start": 40.0, "stop": 80.0, "num": 41})
    assert main(["predict", "--config", cfg, "--quiet"]) == 0
    cols = io.read_columns(tmp_path / "out" / "prediction_t10.txt", 3)
    assert np.all(cols[:, 1] == 0)


def test_cli_compare_reflectionless(tmp_path):
    cfg = write_cfg(tmp_path, profile={"kind": "soliton", "generators": [circle_gen(3.0)]},
                    ctx={"xi": 3.0}, times=[2.0, 4.0, 6.0],
                    grids={"L": 100.0, "x0": -30.0, "n": 1024, "dt": 0.005})
    assert main(["compare", "--config", cfg, "--quiet"]) == 0
    cols = io.read_columns(tmp_path / "out" / "errors.txt", 4)
    assert np.all(cols[:, 1] < 1e-3)
    assert np.all(cols[:, 3] < 1e-3)
    assert "slope" in io.read_record(tmp_path / "out" / "decay_fit.json")


def test_cli_evolve(tmp_path):
    cfg = write_cfg(tmp_path, profile={"kind": "soliton", "generators": [circle_gen(3.0)]},
                    times=[0.5, 1.0], grids={"L": 100.0, "x0": -50.0, "n": 1024, "dt": 0.005})
    assert main(["evolve", "--config", cfg, "--quiet"]) == 0
    ts = io.read_columns(tmp_path / "out" / "timeseries.txt", 4)
    assert ts.shape == (3, 4)
    assert np.ptp(ts[:, 2]) < 1e-10
    # residual is limited by the spatial resolution of this coarse grid
    assert np.all(ts[1:, 3] < 1e-2)
