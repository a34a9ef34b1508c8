import csv
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from innerapprox import (
    Colligation,
    MatrixPolynomial,
    io,
    random_colligation,
    scalar_blaschke_product,
)
from innerapprox.cli import parse_depths, run

from oracles import qr_unitary


@pytest.fixture
def files(tmp_path):
    paths = {}

    def put(name, obj):
        paths[name] = str(tmp_path / f"{name}.json")
        io.save(paths[name], obj)

    put("rc42", random_colligation(2, 3, 42))
    put("unitary", Colligation.from_system_matrix(qr_unitary(5, 1), 2))
    put("poly", MatrixPolynomial(np.array([[[0.2]], [[0.3]], [[0.1]]])))
    put("f22", random_colligation(2, 2, 3))
    put("half", MatrixPolynomial(np.array([np.zeros((2, 2)), 0.5 * np.eye(2)])))
    put("b", scalar_blaschke_product([0.5]))
    put("l", MatrixPolynomial(np.array([[[0.0]], [[0.5]]])))
    put("big", MatrixPolynomial(np.array([[[1.5]]])))
    put("swap", Colligation(np.array([[0, 1], [1, 0.0]]), np.zeros((2, 0)), np.zeros((0, 2)), np.zeros((0, 0))))
    paths["bad"] = str(tmp_path / "bad.json")
    with open(paths["bad"], "w") as fh:
        fh.write("{not json")
    paths["dir"] = str(tmp_path)
    return paths


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_parse_depths():
    assert parse_depths("8") == [8]
    assert parse_depths("3..6") == [3, 4, 5, 6]
    assert parse_depths("4,6") == [4, 6]


def test_unitary_input_report(files, tmp_path):
    out = str(tmp_path / "r.csv")
    assert run(["approx-disc", "--col", files["unitary"], "--m", "4", "--report", out]) == 0
    rows = read_csv(out)
    assert all(float(r["grid_error"]) <= 1e-11 for r in rows)


def test_tail_bound_column(files, tmp_path):
    out = str(tmp_path / "r.csv")
    assert run(["approx-disc", "--col", files["rc42"], "--m", "3..10", "--rho", "0.8", "--report", out]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["m", "rho", "grid_error", "tail_bound", "unitarity_defect"]
    tb = [float(r["tail_bound"]) for r in rows]
    assert np.allclose(tb, [2 * 0.8 ** m / 0.2 for m in range(3, 11)], rtol=1e-11)
    assert np.all(np.diff(tb) < 0)
    assert all(float(r["grid_error"]) <= float(r["tail_bound"]) for r in rows)


def test_pg_verify(files, tmp_path):
    out = str(tmp_path / "v.json")
    args = ["pg", "--fn", files["f22"], "--p", "1", "--q", "1", "--mode", "verify", "--pairs", "10", "--seed", "1"]
    assert run(args + ["--out", out]) == 0
    rep = json.load(open(out))
    assert rep["kernel_defect"] <= 1e-9 and rep["roundtrip_defect"] <= 1e-10
    assert run(args[:-2]) == 2  # seed is mandatory for verification


def test_realize_dilate_chain(files, tmp_path):
    col, dil = str(tmp_path / "col.json"), str(tmp_path / "dil.json")
    assert run(["realize", "--poly", files["poly"], "--out", col, "--samples", "14"]) == 0
    assert run(["dilate", "--col", col, "--m", "5", "--out", dil]) == 0
    u = io.colligation_from_json(json.load(open(dil))).system_matrix
    assert np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() <= 1e-10
    back = io.load(col)
    assert abs(back(0.3)[0, 0] - (0.2 + 0.09 + 0.009)) <= 1e-8


def test_other_verbs_succeed(files, tmp_path):
    t = lambda name: str(tmp_path / name)
    assert run(["approx-bidisc", "--col", files["rc42"], "--d1", "2", "--d2", "1", "--m", "4,6",
                "--grid", "16", "--report", t("bd.csv")]) == 0
    assert run(["random-inner", "--n", "2", "--m", "3", "--seed", "7", "--out", t("ri.json")]) == 0
    assert run(["check-inner", "--fn", t("ri.json"), "--out", t("ci.json")]) == 0
    assert json.load(open(t("ci.json")))["inner"] is True
    assert run(["fisher", "--fn", files["half"], "--eps", "0.1", "--out", t("combo.json")]) == 0
    assert io.load(t("combo.json")).residual <= 0.1
    assert run(["j-approx", "--fn", files["half"], "--from-transform", "--p", "1", "--q", "1",
                "--m", "4..6", "--report", t("j.csv")]) == 0
    errs = [float(r["grid_error"]) for r in read_csv(t("j.csv"))]
    assert np.all(np.diff(errs) < 0)
    assert run(["kl-approx", "--b", files["b"], "--l", files["l"], "--m", "4,8", "--report", t("kl.csv")]) == 0
    assert run(["kl-approx", "--b", files["b"], "--l", files["l"], "--mode", "circle", "--report", t("klc.csv")]) == 0
    assert run(["gamma-approx", "--fn", files["f22"], "--m", "4,8", "--report", t("g.csv")]) == 0
    assert run(["tetra-approx", "--fn", files["f22"], "--m", "4,8", "--format", "json", "--report", t("x.json")]) == 0
    assert len(json.load(open(t("x.json")))) == 2


def test_membership_verbs():
    assert run(["gamma-check", "--s", "2,0", "--p", "1,0", "--boundary"]) == 0
    assert run(["gamma-check", "--s", "3,0", "--p", "0,0"]) == 3
    assert run(["tetra-check", "--x1", "0,0", "--x2", "0,0", "--x3", "0,0", "--open"]) == 0
    assert run(["tetra-check", "--x1", "1,0", "--x2", "1,0", "--x3", "0,0"]) == 3


def test_failure_fixtures(files, tmp_path):
    out = str(tmp_path / "never.json")
    assert run(["dilate", "--col", files["bad"], "--m", "4", "--out", out]) == 2
    assert run(["dilate", "--col", files["big"], "--m", "4", "--out", out]) == 3
    assert run(["j-approx", "--fn", files["swap"], "--from-transform", "--p", "1", "--q", "1",
                "--m", "4", "--report", out]) == 4
    assert run(["check-inner", "--fn", files["poly"], "--out", out]) == 3
    assert not os.path.exists(out) or json.load(open(out))["inner"] is False
    os.remove(out)
    assert run(["dilate", "--col", files["rc42"], "--m", "2", "--out", out]) == 2
    assert run(["approx-disc", "--col", files["rc42"], "--rho", "1.2"]) == 2
    assert run(["approx-disc", "--col", files["rc42"], "--m", "x..3"]) == 2
    assert run(["no-such-verb"]) == 2
    assert not os.path.exists(out)
    assert sorted(os.listdir(files["dir"])) == sorted(
        os.path.basename(p) for k, p in files.items() if k != "dir"
    )


def _cli(args, env=None):
    full = dict(os.environ, **(env or {}))
    return subprocess.run([sys.executable, "-m", "innerapprox.cli", *args], capture_output=True, env=full)


def test_outputs_are_byte_identical(files, tmp_path):
    runs = []
    for threads in ("1", "4"):
        res = _cli(["approx-disc", "--col", files["rc42"], "--m", "3..8"], {"INNERAPPROX_THREADS": threads})
        assert res.returncode == 0
        runs.append(res.stdout)
    assert runs[0] == runs[1]
    a = _cli(["random-inner", "--n", "3", "--m", "4", "--seed", "11"]).stdout
    b = _cli(["random-inner", "--n", "3", "--m", "4", "--seed", "11"]).stdout
    assert a == b and a


def test_emitted_files_round_trip(files, tmp_path):
    for verb in (["random-inner", "--n", "2", "--m", "2", "--seed", "3"],
                 ["realize", "--poly", files["poly"]]):
        path = str(tmp_path / "o.json")
        assert run(verb + ["--out", path]) == 0
        text = open(path).read()
        assert io.dumps(io.function_to_json(io.load(path))) == text


def test_bad_thread_env(files):
    res = _cli(["approx-disc", "--col", files["rc42"]], {"INNERAPPROX_THREADS": "many"})
    assert res.returncode == 2
