import json
import os
import subprocess
import sys

import pytest

from feec_weights.cli import main, parse_range, parse_triangle, UsageError


def run(*argv):
    return main(list(argv))


def test_parse_helpers():
    assert parse_range("2..6") == [2, 3, 4, 5, 6]
    assert parse_range("3") == [3]
    for bad in ("2-6", "a..b", "6..2"):
        with pytest.raises(UsageError):
            parse_range(bad)
    tri = parse_triangle("0/1,0/1 1/1,0/1 0/1,1/1")
    assert tri.area == 0.5
    with pytest.raises(UsageError):
        parse_triangle("0,0 1,1 2,2")


def test_dims(capsys):
    assert run("dims", "--r", "2..6") == 0
    out = capsys.readouterr().out.splitlines()
    assert "3,10,12,3,10,12,3" in out
    assert run("dims", "--r", "2-6") == 2


def test_certify(tmp_path, capsys):
    assert run("certify", "--r", "2..4", "--out", str(tmp_path)) == 0
    rep = json.loads((tmp_path / "certify_r3.json").read_text())
    assert rep["full_rank"] and rep["commuting"]
    assert run("certify", "--r", "2", "--triangle", "0/1,0/1 1/1,0/1 0/1,1/1") == 0


def test_certify_negative_controls(tmp_path):
    g = tmp_path / "gamma.txt"
    g.write_text("# duplicated point\n1,0,0\n1/3,2/3,0\n1/3,2/3,0\n")
    assert run("certify", "--r", "3", "--gamma-file", str(g)) == 1
    assert run("certify", "--r", "3", "--drop-edge", "0") == 1


def test_cond(tmp_path, capsys):
    assert run("cond", "--self-test") == 0
    assert capsys.readouterr().out.strip() == "1.0"
    assert run("cond", "--r", "1..6", "--out", str(tmp_path)) == 0
    lines = (tmp_path / "conditioning.csv").read_text().splitlines()
    assert lines[0] == "r,k0,k1,k2"
    rows = [line.split(",") for line in lines[1:]]
    assert rows[0][1] and rows[5][2] == "" and rows[5][3] == "" and rows[4][3] == ""
    k0 = [float(r[1]) for r in rows]
    assert k0 == sorted(k0)


def test_interp_outputs_deterministic(tmp_path):
    a, b = tmp_path / "a" / "nested", tmp_path / "b"
    for d in (a, b):
        assert run("interp", "--r-max", "3", "--norm-density", "12", "--quad-order", "10", "--out", str(d)) == 0
    for name in ("convergence.csv", "convergence_wide.csv", "plot_k0.csv", "plot_k1.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    head = (a / "convergence.csv").read_text().splitlines()[0]
    assert head == "r,k,residual_norm,norm_reference"
    assert (a / "convergence_wide.csv").read_text().splitlines()[0] == "r,k0,k1"


def test_cells_svg(tmp_path):
    assert run("cells", "--r", "2..3", "--out", str(tmp_path), "--format", "svg") == 0
    svg = (tmp_path / "cells_r2.svg").read_text()
    assert svg.count("<polygon") == 1
    assert svg.count('fill="gray"') == 1 and svg.split('<g id="gamma"')[1].count("<circle") == 1
    first = (tmp_path / "cells_r3.svg").read_bytes()
    run("cells", "--r", "3", "--out", str(tmp_path), "--format", "svg")
    assert (tmp_path / "cells_r3.svg").read_bytes() == first


def test_module_entry_point():
    env = dict(os.environ, FEEC_WEIGHTS_SEED="3")
    res = subprocess.run([sys.executable, "-m", "feec_weights", "dims", "--r", "2..3"],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 0 and "2,6,6,1,6,6,1" in res.stdout
