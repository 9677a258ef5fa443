import json
import subprocess
import sys

import numpy as np
import pytest

from hullkit import VRep, load_hrep, load_vrep, save_vrep

FIG_QUAD = np.array([[0.0, 0.0], [2.0, 0.0], [3.0, 2.0], [1.0, 1.0], [0.0, 1.0]])


def run_cli(*args, cwd=None):
    proc = subprocess.run([sys.executable, "-m", "hullkit", *args],
                          capture_output=True, text=True, cwd=cwd, timeout=120)
    return proc.returncode, proc.stdout, proc.stderr


def test_gen_random(tmp_path):
    out = str(tmp_path / "pts.vrep.json")
    code, stdout, _ = run_cli("gen", "random", "--m", "50", "--n", "5",
                              "--seed", "7", "--out", out)
    assert code == 0
    assert stdout.split() == ["random", "50", "5", "7", out]
    assert load_vrep(out).n_points == 50


def test_gen_cube_writes_both_files(tmp_path):
    base = str(tmp_path / "cube3")
    code, stdout, _ = run_cli("gen", "cube", "--n", "3", "--out", base)
    assert code == 0
    assert load_vrep(base + ".vrep.json").n_points == 8
    assert load_hrep(base + ".hrep.json").n_halfspaces == 6


def test_gen_engine_csv(tmp_path):
    out = str(tmp_path / "engine.csv")
    code, stdout, _ = run_cli("gen", "engine", "--inputs", "9", "--seed", "1",
                              "--out", out)
    assert code == 0
    assert "engine 875 9 1" in stdout
    lines = open(out).read().strip().splitlines()
    assert len(lines) == 876  # header + rows


def test_gen_usage_error():
    code, _, _ = run_cli("gen", "sphere")
    assert code == 2


def test_convert_and_contains(tmp_path):
    vpath = str(tmp_path / "quad.vrep.json")
    save_vrep(VRep(FIG_QUAD), vpath)
    code, stdout, _ = run_cli("convert", vpath)
    assert code == 0
    assert stdout.startswith("facets 4 ")
    hrep = load_hrep(vpath + ".hrep.json")
    assert hrep.n_halfspaces == 4

    code, stdout, _ = run_cli("contains", vpath, "--query", "1,1",
                              "--query", "5,5")
    assert code == 0
    lines = stdout.strip().splitlines()
    assert lines[0].startswith("inside")
    assert lines[1].startswith("outside")
    assert lines[0].endswith("us")


def test_contains_cube_queries(tmp_path):
    base = str(tmp_path / "cube3")
    run_cli("gen", "cube", "--n", "3", "--out", base)
    code, stdout, _ = run_cli("contains", base + ".vrep.json",
                              "--query", "0.5,0.5,0.5", "--query", "2,0,0")
    assert code == 0
    lines = stdout.strip().splitlines()
    assert lines[0].startswith("inside")
    assert lines[1].startswith("outside")


def test_contains_dimension_error(tmp_path):
    vpath = str(tmp_path / "quad.vrep.json")
    save_vrep(VRep(FIG_QUAD), vpath)
    code, _, stderr = run_cli("contains", vpath, "--query", "1,1,1")
    assert code == 2


def test_contains_missing_file():
    code, _, _ = run_cli("contains", "/nonexistent/file.json", "--query", "1,1")
    assert code == 3


def test_vertices(tmp_path):
    vpath = str(tmp_path / "quad.vrep.json")
    save_vrep(VRep(FIG_QUAD), vpath)
    code, stdout, _ = run_cli("vertices", vpath)
    assert code == 0
    assert "extreme 4 of 5" in stdout
    pruned = load_vrep(vpath + ".pruned.json")
    assert pruned.n_points == 4


def test_optimize_vrep_route(tmp_path):
    vpath = str(tmp_path / "quad.vrep.json")
    save_vrep(VRep(FIG_QUAD), vpath)
    code, stdout, _ = run_cli("optimize", "--vrep", vpath, "--target", "1,1",
                              "--route", "both")
    assert code == 0
    lines = stdout.strip().splitlines()
    assert lines[0].startswith("vrep objective")
    assert lines[1].startswith("hrep objective")
    assert float(lines[0].split()[2]) <= 1e-4  # target (1,1) is interior


def test_optimize_requires_one_source(tmp_path):
    code, _, _ = run_cli("optimize", "--target", "1,1")
    assert code == 2


def test_bench_conversion_cli(tmp_path):
    out = str(tmp_path / "table.csv")
    code, _, _ = run_cli("bench-conversion", "--grid", "30x3", "--seeds", "2",
                         "--out", out)
    assert code == 0
    lines = open(out).read().strip().splitlines()
    assert lines[0] == "m,n,seed,metric,value,unit,timed_out"
    assert any("conversion_time_s" in line for line in lines[1:])
    assert any("facet_count" in line for line in lines[1:])


def test_bench_membership_cli_markdown():
    code, stdout, _ = run_cli("bench-membership", "--grid", "30x3",
                              "--seeds", "1", "--queries", "6",
                              "--format", "markdown")
    assert code == 0
    assert stdout.startswith("| m | n | seed |")


def test_bench_conversion_bad_grid():
    code, _, _ = run_cli("bench-conversion", "--grid", "oops")
    assert code == 2


def test_bench_conversion_out_of_caps():
    code, _, _ = run_cli("bench-conversion", "--grid", "600x3")
    assert code == 2


def test_unwritable_output_is_io_error(tmp_path):
    code, _, _ = run_cli("bench-conversion", "--grid", "20x2", "--seeds", "1",
                         "--out", "/nonexistent/dir/table.csv")
    assert code == 3


def test_model_workflow_via_cli(tmp_path):
    from hullkit import build_boundary_model, group_by_operating_point, \
        save_model, synth_engine_dataset
    ds = synth_engine_dataset(1, 4)
    key, block = group_by_operating_point(ds)[0]
    model = build_boundary_model(block, (0, 1, 2, 3), name="op0", op_point_key=key)
    mpath = str(tmp_path / "model.json")
    save_model(model, mpath)
    inside = ",".join(str(float(c)) for c in block[:, :4].mean(axis=0))
    # leading negative coordinates require the --query=... form
    code, stdout, _ = run_cli("contains", mpath, f"--query={inside}")
    assert code == 0
    assert stdout.startswith("inside")
