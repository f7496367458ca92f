"""Command-line front end over the inference, GA, TSP, and tracking engines.

Every run is driven entirely by explicit seeds and config files; there is no
ambient entropy, so identical invocations produce identical bytes. Commands
that write files first write a manifest.json capturing the invocation
(version, argv, seeds, planned outputs), then each result file atomically
(temp + rename), so an interrupted run leaves the manifest but no partial
results. `rerun manifest.json` replays the stored argv.

Exit codes: 0 success, 1 validation failure, 2 I/O or parse error. Set
FUZZYCHIP_LOG=debug|info|warning for progress logging on stderr.
"""

from __future__ import annotations

import argparse
import functools
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from . import __version__, flc, ga, problems, tracksim
from .flcref import infer_real, lift, quantization_bound

log = logging.getLogger("fuzzychip")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


class CliError(Exception):
    """Carries the exit code; main() prints the message as one line."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _setup_logging() -> None:
    level = os.environ.get("FUZZYCHIP_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


# ---- deterministic file plumbing ----


def _write_text(path: str, text: str) -> None:
    """Atomic write: a reader never observes a half-written result."""
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)
    log.info("wrote %s (%d bytes)", path, len(text))


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write_manifest(out_dir, command, argv, config, seeds, outputs) -> None:
    doc = {
        "tool_version": __version__,
        "command": command,
        "argv": list(argv),
        "config": config,
        "seeds": seeds,
        "outputs": list(outputs),
    }
    _write_text(os.path.join(out_dir, "manifest.json"), _json_text(doc))


def _prepare_out_dir(args) -> str:
    if not args.out:
        raise CliError(EXIT_IO, "this command requires --out DIR")
    try:
        os.makedirs(args.out, exist_ok=True)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot create {args.out}: {exc}") from exc
    return args.out


def _load_flc_spec(path: str) -> flc.FlcSpec:
    if not path:
        raise CliError(EXIT_IO, "this command requires --spec FILE")
    try:
        return flc.load_spec(path)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise CliError(EXIT_IO, f"{path}: {exc}") from exc


def _load_ga_config(path: str) -> ga.GaConfig:
    if not path:
        raise CliError(EXIT_IO, "this command requires --config FILE")
    try:
        return ga.load_config(path)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise CliError(EXIT_IO, f"{path}: {exc}") from exc


def _load_instance(path: str) -> problems.TspInstance:
    if not path:
        raise CliError(EXIT_IO, "this command requires --instance FILE")
    try:
        return problems.load_tsplib(path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"{path}: {exc}") from exc
    except problems.TsplibParseError as exc:
        raise CliError(EXIT_IO, str(exc)) from exc


def _require_valid(spec: flc.FlcSpec) -> None:
    report = flc.validate_spec(spec)
    if not report.ok:
        raise CliError(EXIT_INVALID, "; ".join(report.problems))


# ---- flag value parsers (argparse type= hooks; errors exit 2) ----


def _seed_set(text: str) -> tuple[int, ...]:
    parts = [int(p, 0) for p in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected 4 comma-separated seeds")
    return tuple(parts)


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(p, 0) for p in text.split(","))


def _noise_pair(text: str) -> tuple[float, float]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected sigma_d,sigma_theta")
    return parts[0], parts[1]


def _pose_triple(text: str) -> tuple[float, float, float]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected x,y,theta")
    return parts[0], parts[1], parts[2]


# ---- flc subcommands ----


def cmd_flc_validate(args) -> int:
    spec = _load_flc_spec(args.spec)
    report = flc.validate_spec(spec)
    if report.ok:
        print("ok")
        return EXIT_OK
    for problem in report.problems:
        print(f"problem: {problem}")
    return EXIT_INVALID


def cmd_flc_eval(args) -> int:
    spec = _load_flc_spec(args.spec)
    _require_valid(spec)
    if args.input is None:
        raise CliError(EXIT_IO, "flc eval requires --input x0[,x1,...]")
    try:
        out = flc.infer(spec, args.input)
    except flc.DenominatorZero as exc:
        raise CliError(EXIT_INVALID, str(exc)) from exc
    except ValueError as exc:
        raise CliError(EXIT_INVALID, str(exc)) from exc
    fixed_value = out.value / (1 << spec.out_bits)
    real = infer_real(lift(spec), [x / (1 << spec.in_bits) for x in args.input])
    print(f"fixed_code={out.value}")
    print(f"fixed_value={fixed_value:.9f}")
    print(f"real_value={real:.9f}")
    print(f"abs_error={abs(fixed_value - real):.3e}")
    print(f"bound={quantization_bound(spec):.3e}")
    return EXIT_OK


def cmd_flc_timing(args) -> int:
    spec = _load_flc_spec(args.spec)
    _require_valid(spec)
    report = flc.estimate_timing(spec)
    print(f"stages={spec.stages} clock_ns={spec.clock_ns:g} mode={spec.mode}")
    print(f"latency_ns={report.latency_ns:.3f}")
    print(f"cycles_per_sample={report.cycles_per_sample}")
    print(f"sample_rate_hz={report.sample_rate_hz:.3f}")
    return EXIT_OK


def cmd_flc_sweep(args) -> int:
    spec = _load_flc_spec(args.spec)
    _require_valid(spec)
    if spec.n > 2:
        raise CliError(EXIT_INVALID, f"sweep supports 1 or 2 inputs, spec has {spec.n}")
    out_dir = _prepare_out_dir(args)
    _write_manifest(out_dir, "flc sweep", args.argv, args.spec, None, ["sweep.csv"])

    rspec = lift(spec)
    in_scale = 1 << spec.in_bits
    out_scale = 1 << spec.out_bits
    grid = range(in_scale)
    lines = ["x0,fixed_code,real_value,abs_error" if spec.n == 1
             else "x0,x1,fixed_code,real_value,abs_error"]
    points = ((x,) for x in grid) if spec.n == 1 else (
        (x0, x1) for x0 in grid for x1 in grid)
    try:
        for xs in points:
            code = flc.infer(spec, xs).value
            real = infer_real(rspec, [x / in_scale for x in xs])
            err = abs(code / out_scale - real)
            prefix = ",".join(str(x) for x in xs)
            lines.append(f"{prefix},{code},{real:.9f},{err:.3e}")
    except flc.DenominatorZero as exc:
        raise CliError(EXIT_INVALID, str(exc)) from exc
    _write_text(os.path.join(out_dir, "sweep.csv"), "\n".join(lines) + "\n")
    print(f"sweep.csv: {len(lines) - 1} rows")
    return EXIT_OK


# ---- ga / tsp ----


@functools.lru_cache(maxsize=None)
def _benchmark_fitness(name: str, score_sz: int) -> problems.BenchmarkFitness:
    return problems.BenchmarkFitness(name, score_sz)


def _ga_payload(cfg_dict: dict, fitness_desc: tuple, index: int) -> tuple[str, str, str]:
    """One GA run; returns (generations csv, result json, stdout line).

    Module-level and argument-picklable so --jobs can farm runs out to
    worker processes; all text is assembled here and written by the parent
    in run order, keeping output bytes independent of scheduling.
    """
    cfg = ga.config_from_dict(cfg_dict)
    kind = fitness_desc[0]
    if kind == "benchmark":
        fit = _benchmark_fitness(fitness_desc[1], cfg.score_sz)
    else:
        inst = problems.parse_tsplib(fitness_desc[1])
        fit = problems.TspFitness(inst, cfg.genom_lngt, cfg.score_sz)

    rows = ["generation,best_score,mean_score,best_genome"]

    def observe(gen: int, pop: ga.Population) -> None:
        best = pop.best_index()
        mean = sum(pop.scores) / len(pop.scores)
        rows.append(f"{gen},{pop.scores[best]},{mean:.3f},0x{pop.genomes[best]:X}")

    result = ga.run(cfg, fit, on_generation=observe)
    doc = {
        "best_genome": f"0x{result.best_genome:X}",
        "best_score": result.best_score,
        "generations_run": result.generations_run,
        "stop_reason": result.stop_reason,
        "seeds": list(cfg.seeds),
    }
    if kind == "benchmark":
        x1, x2 = fit.decode(result.best_genome)
        doc["fn"] = fit.name
        doc["best_x"] = [round(x1, 9), round(x2, 9)]
        doc["best_f"] = round(float(problems.BENCHMARKS[fit.name][0](x1, x2)), 9)
        line = (f"run {index:03d}: best_f={doc['best_f']:g} "
                f"score={result.best_score} stop={result.stop_reason}")
    else:
        tour = fit.decode(result.best_genome)
        doc["instance"] = fit.inst.name
        doc["dimension"] = fit.inst.dimension
        doc["tour"] = list(tour)
        doc["tour_length"] = fit.length(tour)
        line = (f"run {index:03d}: length={doc['tour_length']} "
                f"tour={'-'.join(str(c) for c in tour)} stop={result.stop_reason}")
    return "\n".join(rows) + "\n", _json_text(doc), line


def _run_ga_command(args, fitness_desc: tuple, command: str) -> int:
    cfg = _load_ga_config(args.config)
    if args.max_gen is not None:
        cfg = replace(cfg, max_gen=args.max_gen)
    seed_sets = args.seeds if args.seeds else [cfg.seeds]
    problems_found = replace(cfg, seeds=tuple(seed_sets[0])).problems()
    if problems_found:
        raise CliError(EXIT_INVALID, "; ".join(problems_found))
    for seeds in seed_sets:
        if len(seeds) != 4 or any(not 0 < s < (1 << 16) for s in seeds):
            raise CliError(EXIT_INVALID, f"bad seed set {seeds}")

    out_dir = _prepare_out_dir(args)
    outputs = []
    for i in range(len(seed_sets)):
        outputs += [f"generations_{i:03d}.csv", f"result_{i:03d}.json"]
    _write_manifest(out_dir, command, args.argv, args.config,
                    [list(s) for s in seed_sets], outputs)

    cfg_dicts = [ga.config_to_dict(replace(cfg, seeds=tuple(s))) for s in seed_sets]
    # validate fitness construction once up front so bad pairings exit 1
    try:
        _ga_payload(cfg_dicts[0] | {"max_gen": 0, "fitness_limit": None},
                    fitness_desc, 0)
    except ValueError as exc:
        raise CliError(EXIT_INVALID, str(exc)) from exc

    jobs = min(args.jobs, len(seed_sets))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            payloads = list(pool.map(_ga_payload, cfg_dicts,
                                     [fitness_desc] * len(cfg_dicts),
                                     range(len(cfg_dicts))))
    else:
        payloads = [_ga_payload(d, fitness_desc, i) for i, d in enumerate(cfg_dicts)]

    for i, (gen_csv, result_json, line) in enumerate(payloads):
        _write_text(os.path.join(out_dir, f"generations_{i:03d}.csv"), gen_csv)
        _write_text(os.path.join(out_dir, f"result_{i:03d}.json"), result_json)
        print(line)
    return EXIT_OK


def cmd_ga(args) -> int:
    if args.fn:
        return _run_ga_command(args, ("benchmark", args.fn), "ga")
    inst = _load_instance(args.instance)
    return _run_ga_command(args, ("tsp", problems.format_tsplib(inst)), "ga")


def cmd_tsp(args) -> int:
    inst = _load_instance(args.instance)
    return _run_ga_command(args, ("tsp", problems.format_tsplib(inst)), "tsp")


# ---- track ----


def _track_payload(waypoints, params_dict, noise, seed, steps, spacing, start):
    params = tracksim.TrackerParams(**params_dict)
    start_pose = tracksim.Pose(*start) if start else None
    trace = tracksim.simulate(list(waypoints), params, start=start_pose,
                              noise=noise, seed=seed, steps=steps, spacing=spacing)
    if not trace.rows:  # start pose already beside the final sample
        return trace.to_csv_text(), {"seed": seed, "rows": 0}
    last = trace.rows[-1]
    summary = {
        "seed": seed,
        "rows": len(trace.rows),
        "final_e_d_mm": round(last.e_d, 6),
        "final_path_distance_mm": round(
            tracksim.path_distance(trace.path, last.pose.x, last.pose.y), 6),
        "max_abs_e_d_mm": round(max(abs(r.e_d) for r in trace.rows), 6),
        "max_abs_kappa": round(max(abs(r.kappa) for r in trace.rows), 9),
    }
    return trace.to_csv_text(), summary


def cmd_track(args) -> int:
    if not args.path:
        raise CliError(EXIT_IO, "track requires --path FILE")
    try:
        waypoints = tracksim.load_waypoints(args.path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"{args.path}: {exc}") from exc
    except ValueError as exc:
        raise CliError(EXIT_IO, str(exc)) from exc
    if args.spacing <= 0 or args.steps <= 0:
        raise CliError(EXIT_INVALID, "--spacing and --steps must be positive")

    seeds = list(args.seeds) if args.seeds else [0]
    out_dir = _prepare_out_dir(args)
    outputs = [f"trace_{i:03d}.csv" for i in range(len(seeds))] + ["summary.json"]
    _write_manifest(out_dir, "track", args.argv, None, seeds, outputs)

    params_dict = {}  # defaults live in TrackerParams
    payload_args = [(tuple(waypoints), params_dict, args.noise, s,
                     args.steps, args.spacing, args.start) for s in seeds]
    jobs = min(args.jobs, len(seeds))
    try:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                payloads = list(pool.map(_track_payload, *zip(*payload_args)))
        else:
            payloads = [_track_payload(*a) for a in payload_args]
    except ValueError as exc:  # < 2 distinct waypoints, non-positive speed
        raise CliError(EXIT_INVALID, str(exc)) from exc

    summaries = []
    for i, (csv_text, summary) in enumerate(payloads):
        _write_text(os.path.join(out_dir, f"trace_{i:03d}.csv"), csv_text)
        summaries.append(summary)
        dist = summary.get("final_path_distance_mm")
        print(f"seed {summary['seed']}: rows={summary['rows']} "
              f"final_path_distance={'n/a' if dist is None else f'{dist:.3f}mm'}")
    _write_text(os.path.join(out_dir, "summary.json"), _json_text(summaries))
    return EXIT_OK


# ---- rerun ----


def cmd_rerun(args) -> int:
    try:
        with open(args.manifest, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_IO, f"{args.manifest}: {exc}") from exc
    argv = doc.get("argv")
    if not isinstance(argv, list) or not argv:
        raise CliError(EXIT_IO, f"{args.manifest}: no argv recorded")
    log.info("replaying: %s", " ".join(argv))
    return main([str(a) for a in argv])


# ---- parser wiring ----


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzychip",
        description="Fixed-point fuzzy inference, hardware-style GA, and "
                    "path-tracking simulation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_flc = sub.add_parser("flc", help="fuzzy inference engine")
    flc_sub = p_flc.add_subparsers(dest="flc_command", required=True)

    p = flc_sub.add_parser("validate", help="check a spec file")
    p.add_argument("--spec", required=True)
    p.set_defaults(func=cmd_flc_validate)

    p = flc_sub.add_parser("eval", help="evaluate one input vector")
    p.add_argument("--spec", required=True)
    p.add_argument("--input", type=_int_list, help="input codes, e.g. 2048,1024")
    p.set_defaults(func=cmd_flc_eval)

    p = flc_sub.add_parser("timing", help="pipeline latency and sample rate")
    p.add_argument("--spec", required=True)
    p.set_defaults(func=cmd_flc_timing)

    p = flc_sub.add_parser("sweep", help="full input-grid CSV (1 or 2 inputs)")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_flc_sweep)

    p = sub.add_parser("ga", help="GA run on a benchmark or TSP instance")
    p.add_argument("--config", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--fn", choices=sorted(problems.BENCHMARKS))
    src.add_argument("--instance")
    p.add_argument("--seeds", type=_seed_set, action="append",
                   help="4 comma-separated seeds; repeat for multiple runs")
    p.add_argument("--max-gen", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_ga)

    p = sub.add_parser("tsp", help="GA tour search; prints the decoded tour")
    p.add_argument("--config", required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--seeds", type=_seed_set, action="append")
    p.add_argument("--max-gen", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_tsp)

    p = sub.add_parser("track", help="closed-loop path tracking simulation")
    p.add_argument("--path", required=True, help="waypoint file, 'x y' per line")
    p.add_argument("--noise", type=_noise_pair, default=(0.0, 0.0))
    p.add_argument("--seeds", type=_int_list, help="one run per seed")
    p.add_argument("--steps", type=int, default=20000)
    p.add_argument("--spacing", type=float, default=100.0)
    p.add_argument("--start", type=_pose_triple, default=None,
                   help="x,y,theta start pose (default: path start)")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("rerun", help="replay a manifest byte-identically")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_rerun)

    return parser


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    _setup_logging()
    args = build_parser().parse_args(argv)
    args.argv = list(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
