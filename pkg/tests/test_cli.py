import hashlib
import json
import subprocess
import sys

import pytest

from fuzzychip import __version__, flc, ga, problems
from fuzzychip.cli import main
from fuzzychip.flcref import quantization_bound
from fuzzychip.tracksim import TRACE_HEADER, save_waypoints, straight_waypoints

# ---- fixtures ----


@pytest.fixture()
def core_spec_file(tmp_path):
    path = tmp_path / "core.json"
    flc.dump_spec(flc.default_core_spec(), path)
    return str(path)


@pytest.fixture()
def small_spec_file(tmp_path):
    # single-input two-triangle controller; cheap to sweep exhaustively
    spec = flc.FlcSpec(
        in_bits=9,
        out_bits=12,
        alpha_bits=8,
        cons_bits=8,
        partitions=(
            (
                flc.MembershipFunction(0, 0, 0, 320),
                flc.MembershipFunction(0, 316, 511, 511),
            ),
        ),
        singletons=(35, 175),
    )
    path = tmp_path / "small.json"
    flc.dump_spec(spec, path)
    return str(path)


@pytest.fixture()
def gapped_spec_file(tmp_path):
    spec = flc.FlcSpec(
        in_bits=8,
        out_bits=10,
        alpha_bits=8,
        cons_bits=8,
        partitions=(
            (
                flc.MembershipFunction(0, 0, 0, 40),
                flc.MembershipFunction(200, 255, 255, 255),
            ),
        ),
        singletons=(0, 255),
    )
    path = tmp_path / "gapped.json"
    flc.dump_spec(spec, path)
    return str(path)


@pytest.fixture()
def ga_config_file(tmp_path):
    path = tmp_path / "ga.json"
    ga.dump_config(ga.GaConfig(max_gen=3), path)
    return str(path)


@pytest.fixture()
def tsp_config_file(tmp_path):
    path = tmp_path / "tsp.json"
    ga.dump_config(
        ga.GaConfig(genom_lngt=40, max_gen=2, mut_method=ga.BIT_FLIP), path
    )
    return str(path)


@pytest.fixture()
def burma_file(tmp_path):
    path = tmp_path / "burma14.tsp"
    path.write_text(problems.format_tsplib(problems.load_builtin("burma14")))
    return str(path)


@pytest.fixture()
def waypoint_file(tmp_path):
    path = tmp_path / "straight.txt"
    save_waypoints(straight_waypoints(3000.0), path)
    return str(path)


def _hash_tree(out_dir, skip=("manifest.json",)):
    digests = {}
    for p in sorted(out_dir.iterdir()):
        if p.name in skip:
            continue
        digests[p.name] = hashlib.md5(p.read_bytes()).hexdigest()
    return digests


# ---- version and argument plumbing ----


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip() == __version__


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "fuzzychip.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert out.stdout.strip() == __version__


def test_fn_and_instance_are_exclusive(ga_config_file, burma_file, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(
            ["ga", "--config", ga_config_file, "--fn", "sphere",
             "--instance", burma_file, "--out", str(tmp_path / "o")]
        )
    assert exc.value.code == 2


# ---- flc validate ----


def test_validate_ok(core_spec_file, capsys):
    assert main(["flc", "validate", "--spec", core_spec_file]) == 0
    assert capsys.readouterr().out.strip() == "ok"


def test_validate_reports_problems(gapped_spec_file, capsys):
    assert main(["flc", "validate", "--spec", gapped_spec_file]) == 1
    out = capsys.readouterr().out
    assert out.startswith("problem: ")


def test_validate_missing_file(tmp_path, capsys):
    rc = main(["flc", "validate", "--spec", str(tmp_path / "nope.json")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_validate_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["flc", "validate", "--spec", str(bad)]) == 2


# ---- flc eval / timing ----


def test_eval_frozen_output(core_spec_file, capsys):
    rc = main(["flc", "eval", "--spec", core_spec_file, "--input", "2048,1024,0,4095"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "fixed_code=1776"
    assert lines[1] == "fixed_value=0.433593750"
    assert lines[2].startswith("real_value=")
    assert lines[3].startswith("abs_error=")
    assert lines[4].startswith("bound=")


def test_eval_wrong_arity(core_spec_file, capsys):
    assert main(["flc", "eval", "--spec", core_spec_file, "--input", "1,2"]) == 1


def test_eval_requires_input(core_spec_file):
    assert main(["flc", "eval", "--spec", core_spec_file]) == 2


def test_eval_rejects_invalid_spec(gapped_spec_file):
    assert main(["flc", "eval", "--spec", gapped_spec_file, "--input", "10"]) == 1


def test_timing_frozen_output(core_spec_file, capsys):
    assert main(["flc", "timing", "--spec", core_spec_file]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "stages=11 clock_ns=10 mode=standard"
    assert lines[1] == "latency_ns=110.000"
    assert lines[2] == "cycles_per_sample=16"
    assert lines[3] == "sample_rate_hz=6250000.000"


# ---- flc sweep ----


def test_sweep_writes_grid_and_manifest(small_spec_file, tmp_path, capsys):
    out = tmp_path / "sweep_out"
    rc = main(["flc", "sweep", "--spec", small_spec_file, "--out", str(out)])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "sweep.csv: 512 rows"

    lines = (out / "sweep.csv").read_text().strip().split("\n")
    assert lines[0] == "x0,fixed_code,real_value,abs_error"
    assert len(lines) == 513
    bound = quantization_bound(flc.load_spec(small_spec_file))
    for line in lines[1:]:
        x0, code, real, err = line.split(",")
        assert 0 <= int(x0) < 512
        assert float(err) <= bound + 1e-9

    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["tool_version"] == __version__
    assert manifest["command"] == "flc sweep"
    assert manifest["outputs"] == ["sweep.csv"]
    assert manifest["argv"][0] == "flc"


def test_sweep_rejects_many_inputs(core_spec_file, tmp_path):
    rc = main(["flc", "sweep", "--spec", core_spec_file, "--out", str(tmp_path / "o")])
    assert rc == 1  # four inputs cannot be swept


# ---- ga / tsp ----


def test_ga_benchmark_run(ga_config_file, tmp_path, capsys):
    out = tmp_path / "ga_out"
    rc = main(["ga", "--config", ga_config_file, "--fn", "sphere", "--out", str(out)])
    assert rc == 0
    assert capsys.readouterr().out.startswith("run 000: best_f=")

    gens = (out / "generations_000.csv").read_text().strip().split("\n")
    assert gens[0] == "generation,best_score,mean_score,best_genome"
    assert len(gens) == 5  # generations 0..3 plus header
    assert gens[1].startswith("0,")

    doc = json.loads((out / "result_000.json").read_text())
    assert doc["fn"] == "sphere"
    assert doc["stop_reason"] == "max_gen"
    assert doc["generations_run"] == 3
    assert doc["best_genome"].startswith("0x")
    assert len(doc["best_x"]) == 2
    assert doc["seeds"] == [0xACE1, 0x1234, 0x5EED, 0x0F0F]


def test_ga_max_gen_override(ga_config_file, tmp_path):
    out = tmp_path / "ga0"
    rc = main(
        ["ga", "--config", ga_config_file, "--fn", "rastrigin",
         "--max-gen", "0", "--out", str(out)]
    )
    assert rc == 0
    gens = (out / "generations_000.csv").read_text().strip().split("\n")
    assert len(gens) == 2  # header plus generation 0 only
    doc = json.loads((out / "result_000.json").read_text())
    assert doc["generations_run"] == 0


def test_ga_multiple_seed_sets(ga_config_file, tmp_path):
    out = tmp_path / "multi"
    rc = main(
        ["ga", "--config", ga_config_file, "--fn", "sphere",
         "--seeds", "0x1111,0x2222,0x3333,0x4444",
         "--seeds", "0x5555,0x6666,0x7777,0x8888",
         "--out", str(out)]
    )
    assert rc == 0
    for i in (0, 1):
        assert (out / f"generations_{i:03d}.csv").exists()
        assert (out / f"result_{i:03d}.json").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seeds"] == [
        [0x1111, 0x2222, 0x3333, 0x4444],
        [0x5555, 0x6666, 0x7777, 0x8888],
    ]
    a = json.loads((out / "result_000.json").read_text())
    b = json.loads((out / "result_001.json").read_text())
    assert a["seeds"] != b["seeds"]


def test_ga_rejects_invalid_config(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"pop_sz": 7}))
    rc = main(["ga", "--config", str(cfg), "--fn", "sphere", "--out", str(tmp_path / "o")])
    assert rc == 1
    assert "pop_sz" in capsys.readouterr().err


def test_ga_rejects_zero_seed(ga_config_file, tmp_path):
    rc = main(
        ["ga", "--config", ga_config_file, "--fn", "sphere",
         "--seeds", "0,1,2,3", "--out", str(tmp_path / "o")]
    )
    assert rc == 1


def test_ga_config_file_errors(tmp_path):
    missing = str(tmp_path / "nope.json")
    rc = main(["ga", "--config", missing, "--fn", "sphere", "--out", str(tmp_path / "o")])
    assert rc == 2
    malformed = tmp_path / "broken.json"
    malformed.write_text("[1, 2")
    rc = main(
        ["ga", "--config", str(malformed), "--fn", "sphere", "--out", str(tmp_path / "o")]
    )
    assert rc == 2


def test_tsp_run(tsp_config_file, burma_file, tmp_path, capsys):
    out = tmp_path / "tsp_out"
    rc = main(
        ["tsp", "--config", tsp_config_file, "--instance", burma_file,
         "--out", str(out)]
    )
    assert rc == 0
    assert capsys.readouterr().out.startswith("run 000: length=")
    doc = json.loads((out / "result_000.json").read_text())
    assert doc["instance"] == "burma14"
    assert doc["dimension"] == 14
    assert sorted(doc["tour"]) == list(range(14))
    assert doc["tour_length"] > 3000
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "tsp"


def test_tsp_rejects_narrow_genome(ga_config_file, burma_file, tmp_path, capsys):
    # 16-bit genomes cannot index 14! tours
    rc = main(
        ["tsp", "--config", ga_config_file, "--instance", burma_file,
         "--out", str(tmp_path / "o")]
    )
    assert rc == 1
    assert "need at least 37 bits" in capsys.readouterr().err


def test_tsp_instance_parse_error(tsp_config_file, tmp_path):
    bad = tmp_path / "bad.tsp"
    bad.write_text("DIMENSION: nope\n")
    rc = main(
        ["tsp", "--config", tsp_config_file, "--instance", str(bad),
         "--out", str(tmp_path / "o")]
    )
    assert rc == 2


# ---- track ----


def test_track_run(waypoint_file, tmp_path, capsys):
    out = tmp_path / "track_out"
    rc = main(["track", "--path", waypoint_file, "--out", str(out)])
    assert rc == 0
    stdout = capsys.readouterr().out
    assert stdout.startswith("seed 0: rows=")
    assert "final_path_distance=" in stdout

    trace = (out / "trace_000.csv").read_text().strip().split("\n")
    assert trace[0] == TRACE_HEADER
    assert len(trace) > 100
    summaries = json.loads((out / "summary.json").read_text())
    assert len(summaries) == 1
    assert summaries[0]["seed"] == 0
    assert summaries[0]["rows"] == len(trace) - 1
    assert summaries[0]["max_abs_e_d_mm"] < 5.0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["outputs"] == ["trace_000.csv", "summary.json"]


def test_track_multiple_seeds_with_noise(waypoint_file, tmp_path):
    out = tmp_path / "noisy"
    rc = main(
        ["track", "--path", waypoint_file, "--noise", "0.05,0.001",
         "--seeds", "1,2", "--out", str(out)]
    )
    assert rc == 0
    a = (out / "trace_000.csv").read_bytes()
    b = (out / "trace_001.csv").read_bytes()
    assert a != b
    summaries = json.loads((out / "summary.json").read_text())
    assert [s["seed"] for s in summaries] == [1, 2]


def test_track_bad_waypoints(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2 3\n")
    rc = main(["track", "--path", str(bad), "--out", str(tmp_path / "o")])
    assert rc == 2


def test_track_rejects_bad_numbers(waypoint_file, tmp_path):
    rc = main(
        ["track", "--path", waypoint_file, "--spacing", "-5",
         "--out", str(tmp_path / "o")]
    )
    assert rc == 1


# ---- rerun and parallel determinism ----


def test_rerun_reproduces_bytes(ga_config_file, tmp_path, capsys):
    out = tmp_path / "orig"
    argv = ["ga", "--config", ga_config_file, "--fn", "step", "--out", str(out)]
    assert main(argv) == 0
    before = _hash_tree(out)
    for name in before:
        (out / name).unlink()
    assert main(["rerun", str(out / "manifest.json")]) == 0
    assert _hash_tree(out) == before


def test_rerun_missing_manifest(tmp_path):
    assert main(["rerun", str(tmp_path / "nope.json")]) == 2


def test_rerun_rejects_manifest_without_argv(tmp_path):
    doc = tmp_path / "manifest.json"
    doc.write_text(json.dumps({"outputs": []}))
    assert main(["rerun", str(doc)]) == 2


def test_parallel_jobs_byte_identical(ga_config_file, tmp_path):
    seeds = ["--seeds", "0x1111,0x2222,0x3333,0x4444",
             "--seeds", "0x5555,0x6666,0x7777,0x8888",
             "--seeds", "0x0AAA,0x0BBB,0x0CCC,0x0DDD"]
    serial = tmp_path / "serial"
    parallel = tmp_path / "parallel"
    base = ["ga", "--config", ga_config_file, "--fn", "rosenbrock"]
    assert main(base + seeds + ["--out", str(serial), "--jobs", "1"]) == 0
    assert main(base + seeds + ["--out", str(parallel), "--jobs", "3"]) == 0
    assert _hash_tree(serial) == _hash_tree(parallel)
