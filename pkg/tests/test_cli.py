import csv
import json
import math

import numpy as np
import pytest

from cyclewalk.cli import EXIT_CONFIG, EXIT_IO, EXIT_ORACLE, main

H = math.sqrt(0.5)
CS_A = ["--p0", repr(math.sin(math.pi / 8)), "--phi", "0"]
CS_C = ["--p0", repr(H), "--phi", repr(math.pi / 2)]
HAD = ["--a", repr(H)]


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def run(*argv):
    return main([str(a) for a in argv])


def write_config(path, n, a, p0, phi, x0=0):
    doc = {"n": n, "coin": {"a": a, "b": math.sqrt(1 - a * a)},
           "init": {"x0": x0, "p0": p0, "q0": math.sqrt(1 - p0 * p0), "phi": phi}}
    path.write_text(json.dumps(doc))
    return path


def test_eigen_table(tmp_path):
    out = tmp_path / "eigen.csv"
    assert run("eigen", "--n", 4, *HAD, *CS_C, "--out", out) == 0
    table = rows(out)
    assert list(table[0]) == ["j", "sign", "theta", "re_u", "im_u", "z", "m"]
    assert len(table) == 8
    assert [(r["j"], r["sign"]) for r in table[:4]] == [("1", "+"), ("1", "-"), ("2", "+"), ("2", "-")]
    assert float(table[0]["re_u"]) == 0.0 and float(table[0]["im_u"]) == 1.0
    for r in table:
        assert abs(float(r["re_u"]) ** 2 + float(r["im_u"]) ** 2 - 1) <= 1e-12
    manifest = json.loads((tmp_path / "eigen.csv.manifest.json").read_text())
    assert manifest["command"] == "eigen" and manifest["configs"][0]["n"] == 4


def test_evolve_symmetric_and_normalized(tmp_path):
    out = tmp_path / "p.csv"
    assert run("evolve", "--n", 200, *HAD, *CS_C, "--t-max", 150, "--stride", 50, "--out", out) == 0
    table = rows(out)
    assert len(table) == 4 * 200
    for t in (0, 50, 100, 150):
        block = {int(r["d"]): float(r["p"]) for r in table if int(r["t"]) == t}
        assert set(block) == set(range(-100, 100))
        assert abs(sum(block.values()) - 1) <= 1e-10
        assert max(abs(block[d] - block[-d]) for d in range(1, 100)) <= 1e-12


def test_evolve_t0_delta(tmp_path):
    out = tmp_path / "p.csv"
    assert run("evolve", "--n", 5, *HAD, *CS_A, "--t-max", 0, "--out", out) == 0
    table = rows(out)
    assert [(r["d"], float(r["p"])) for r in table if float(r["p"]) > 0] == [("0", 1.0)]


def test_limiting_with_oracle(tmp_path):
    out = tmp_path / "pi.csv"
    assert run("limiting", "--n", 16, "--a", 0.6, "--p0", 0.3, "--phi", 1.1,
               "--with-oracle", "--out", out) == 0
    table = rows(out)
    assert list(table[0]) == ["d", "pi", "s2", "pi_oracle", "abs_err"]
    assert max(float(r["abs_err"]) for r in table) <= 1e-12
    assert abs(sum(float(r["pi"]) for r in table) - 1) <= 1e-10


def test_limiting_three_states_identical(tmp_path):
    cols = []
    for k, state in enumerate((CS_A, ["--p0", repr(math.sqrt((5 - math.sqrt(5)) / 10)),
                                      "--phi", repr(math.pi / 3)], CS_C)):
        out = tmp_path / f"pi{k}.csv"
        assert run("limiting", "--n", 200, *HAD, *state, "--out", out) == 0
        cols.append([round(float(r["pi"]), 12) for r in rows(out)])
    assert cols[0] == cols[1] == cols[2]


def test_oracle_scale_exit_code(tmp_path):
    assert run("limiting", "--n", 600, *HAD, *CS_A, "--with-oracle",
               "--out", tmp_path / "x.csv") == EXIT_ORACLE


def test_config_error_exit_code(tmp_path):
    assert run("eigen", "--n", 2, *HAD, *CS_A, "--out", tmp_path / "e.csv") == EXIT_CONFIG
    assert run("eigen", "--n", 5, "--out", tmp_path / "e.csv") == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("eigen", "--config", bad, "--out", tmp_path / "e.csv") == EXIT_CONFIG
    assert run("symmetry", "--n", 8, *HAD, *CS_A, "--t-max", 10,
               "--epsilon-grid", "0.1,0.5", "--out", tmp_path / "s") == EXIT_CONFIG


def test_io_error_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run("eigen", "--n", 4, *HAD, *CS_A, "--out", blocker / "e.csv") == EXIT_IO
    assert run("eigen", "--config", tmp_path / "missing.json", "--out", tmp_path / "e.csv") == EXIT_IO


def test_flags_override_config_file(tmp_path):
    cfg = write_config(tmp_path / "c.json", 6, 0.6, 0.3, 0.5, x0=2)
    out = tmp_path / "e.csv"
    assert run("eigen", "--config", cfg, "--n", 9, "--out", out) == 0
    manifest = json.loads((tmp_path / "e.csv.manifest.json").read_text())
    resolved = manifest["configs"][0]
    assert resolved["n"] == 9
    assert resolved["coin"]["a"] == 0.6 and resolved["init"]["x0"] == 2
    assert len(rows(out)) == 18


def test_symmetry_outputs(tmp_path):
    out = tmp_path / "sym"
    p0 = repr(math.sqrt((5 - math.sqrt(5)) / 10))
    assert run("symmetry", "--n", 200, *HAD, "--p0", p0, "--phi", repr(math.pi / 3),
               "--t-max", 2000, "--epsilon-grid", "0.5,0.3,0.2,0.1", "--out", out) == 0
    v = rows(out / "variation.csv")
    assert len(v) == 2000 and v[0]["t"] == "1"
    m = rows(out / "mixing.csv")
    taus = [float("inf") if r["M_epsilon"] == "not_converged" else int(r["M_epsilon"])
            for r in m]
    assert taus == sorted(taus)  # eps descending, so M_eps nondecreasing down the file
    report = json.loads((out / "report.json").read_text())
    assert report["residual"] <= 1e-14
    np.testing.assert_allclose(sorted(report["symmetric_phases"]),
                               [-math.pi / 3, math.pi / 3], atol=1e-14)
    assert report["envelope_slope"] is not None
    assert (out / "manifest.json").exists()


def grid_file(path, **spec):
    path.write_text(json.dumps(spec))
    return path


def test_sweep_flags_symmetric_rows(tmp_path):
    s5 = math.sqrt(5)
    pts = [
        (math.sin(math.pi / 8), 0.0), (math.sqrt((5 - s5) / 10), math.pi / 3),
        (math.sqrt((5 - s5) / 10), -math.pi / 3), (H, math.pi / 2), (H, -math.pi / 2),
        (H, 0.0), (H, math.pi), (0.3, 0.0), (0.6, 1.0),
    ]
    spec = grid_file(tmp_path / "g.json", x0=0,
                     points=[{"n": 24, "a": H, "p0": p, "phi": f} for p, f in pts])
    out = tmp_path / "sweep.csv"
    assert run("sweep", "--grid", spec, "--out", out) == 0
    table = rows(out)
    assert len(table) == 9
    for r in table:
        symmetric = float(r["residual"]) <= 1e-12
        assert (float(r["max_asymmetry"]) <= 1e-12) == symmetric
    assert sum(float(r["residual"]) <= 1e-12 for r in table) == 5


def test_sweep_cartesian_with_dynamics(tmp_path, monkeypatch):
    monkeypatch.setenv("CYCLEWALK_THREADS", "3")
    spec = grid_file(tmp_path / "g.json", n=[8, 9], a=[0.6, H], p0=[0.4], phi=[0.0, 1.0],
                     t_max=300, epsilon=0.2)
    out = tmp_path / "sweep.csv"
    assert run("sweep", "--grid", spec, "--out", out) == 0
    table = rows(out)
    assert [(r["n"], r["a"], r["phi"]) for r in table][:3] == [
        ("8", "0.6", "0.0"), ("8", "0.6", "1.0"), ("8", repr(H), "0.0")]
    assert len(table) == 8 and "m_epsilon" in table[0]


def test_sweep_empty_grid(tmp_path):
    out = tmp_path / "sweep.csv"
    assert run("sweep", "--grid", grid_file(tmp_path / "g.json", n=[], a=[H]), "--out", out) == 0
    assert out.read_text() == "n,a,b,p0,q0,phi,x0,residual,max_asymmetry\n"


def test_sweep_bad_threads(tmp_path, monkeypatch):
    monkeypatch.setenv("CYCLEWALK_THREADS", "many")
    spec = grid_file(tmp_path / "g.json", n=[5], a=[H], p0=[H], phi=[0.0])
    assert run("sweep", "--grid", spec, "--out", tmp_path / "s.csv") == EXIT_CONFIG
