"""Command-line harness: world generation, single solves, batch benchmarks.

Exit codes: 0 success, 1 usage error (bad flags or config values), 2 runtime
failure (unschedulable request, unreadable or malformed files).  The
``MEDSCHED_SEED`` environment variable supplies the default seed wherever
``--seed`` is omitted.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Sequence

from .bench import (
    ALL_ALGORITHMS,
    BenchConfig,
    run_algorithm,
    run_bench,
    write_bench_csvs,
)
from .datagen import WorldConfig, generate_request, generate_world
from .fitness import compute_penalties, fitness
from .ga import GAConfig, UnschedulableError, Variant, filter_search_space
from .metrics import mann_whitney_u, solution_metrics
from .worldio import (
    load_request,
    load_world,
    save_request,
    save_solution,
    save_world,
    solution_to_dict,
    write_csv,
)

SOLVE_ALGORITHMS = ("ga",) + ALL_ALGORITHMS


def _env_seed() -> int:
    raw = os.environ.get("MEDSCHED_SEED", "42")
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"MEDSCHED_SEED must be an integer, got {raw!r}") from None


def _seed(args: argparse.Namespace) -> int:
    return args.seed if args.seed is not None else _env_seed()


def _add_ga_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--generations", type=int, default=200)
    parser.add_argument("--population", type=int, default=100)
    parser.add_argument("--tournament-k", type=int, default=7)
    parser.add_argument("--mutation-rate", type=float, default=0.10)


def _add_request_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--acts", type=int, default=5, help="acts per request")
    parser.add_argument("--start-day", type=int, default=None)
    parser.add_argument(
        "--prefer-facility", action="append", default=None, metavar="ID"
    )
    parser.add_argument(
        "--prefer-practitioner", action="append", default=None, metavar="ID"
    )


def _ga_config(args: argparse.Namespace, seed: int, variant: Variant) -> GAConfig:
    return GAConfig(
        population=args.population,
        generations=args.generations,
        tournament_k=args.tournament_k,
        mutation_rate=args.mutation_rate,
        variant=variant,
        seed=seed,
    )


def _load_or_generate_world(args: argparse.Namespace, seed: int):
    if args.world is not None:
        return load_world(Path(args.world))
    return generate_world(WorldConfig(seed=seed))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medsched",
        description="Multi-appointment scheduling: world generator, solvers, benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_world = sub.add_parser("gen-world", help="generate a synthetic world file")
    p_world.add_argument("--seed", type=int, default=None)
    p_world.add_argument("--out", default=".", help="output directory")
    p_world.add_argument("--rule-count", type=int, default=None)
    p_world.add_argument("--horizon-days", type=int, default=None)
    p_world.set_defaults(func=cmd_gen_world)

    p_solve = sub.add_parser("solve", help="run one algorithm on one request")
    p_solve.add_argument("--seed", type=int, default=None)
    p_solve.add_argument("--out", default=".", help="output directory")
    p_solve.add_argument("--world", default=None, help="world.json path")
    p_solve.add_argument("--request", default=None, help="request.json path")
    p_solve.add_argument("--algo", choices=SOLVE_ALGORITHMS, default="ga")
    p_solve.add_argument(
        "--variant",
        choices=[v.value for v in Variant],
        default=Variant.ORDERED.value,
        help="initialization variant when --algo ga",
    )
    _add_request_flags(p_solve)
    _add_ga_flags(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_bench = sub.add_parser("bench", help="run the batch benchmark")
    p_bench.add_argument("--seed", type=int, default=None)
    p_bench.add_argument("--out", default=".", help="output directory")
    p_bench.add_argument("--world", default=None, help="world.json path")
    p_bench.add_argument("--trials", type=int, default=25)
    p_bench.add_argument(
        "--algo",
        action="append",
        choices=ALL_ALGORITHMS,
        default=None,
        help="repeatable; default: all algorithms",
    )
    p_bench.add_argument("--acts", type=int, default=5, help="acts per request")
    _add_ga_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_stats = sub.add_parser(
        "stats", help="pairwise rank-sum comparisons from per-trial value CSVs"
    )
    p_stats.add_argument("files", nargs="+", help="per-trial CSVs (algorithm,trial,value)")
    p_stats.add_argument("--out", default=None, help="write stats.csv into this directory")
    p_stats.set_defaults(func=cmd_stats)

    return parser


def cmd_gen_world(args: argparse.Namespace) -> int:
    seed = _seed(args)
    overrides: dict[str, Any] = {"seed": seed}
    if args.rule_count is not None:
        overrides["rule_count"] = args.rule_count
    if args.horizon_days is not None:
        overrides["horizon_days"] = args.horizon_days
    config = WorldConfig(**overrides)
    world = generate_world(config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "world.json"
    save_world(world, path)
    print(
        f"wrote {path} ({len(world.exams)} exams, {len(world.rules)} rules, "
        f"{len(world.slots)} slots)"
    )
    return 0


def _resolve_algorithm(args: argparse.Namespace) -> str:
    if args.algo != "ga":
        return args.algo
    return f"ga-{args.variant}"


def cmd_solve(args: argparse.Namespace) -> int:
    seed = _seed(args)
    world = _load_or_generate_world(args, seed)
    if args.request is not None:
        request = load_request(Path(args.request))
    else:
        request = generate_request(list(world.exams), world.config, args.acts, seed=seed)
    if args.start_day is not None:
        request = replace(request, start_day=args.start_day)
    if args.prefer_facility is not None:
        request = replace(request, preferred_facilities=frozenset(args.prefer_facility))
    if args.prefer_practitioner is not None:
        request = replace(
            request, preferred_practitioners=frozenset(args.prefer_practitioner)
        )

    space = filter_search_space(world.slots, request)
    if all(not block for block in space.per_act_slots):
        raise UnschedulableError(
            f"no candidate slots for any act of {list(request.acts)}"
        )

    algorithm = _resolve_algorithm(args)
    ga = _ga_config(args, seed, Variant.ORDERED)
    schedule, history = run_algorithm(
        algorithm, world, request, ga, ga_seed=seed, random_seed=seed
    )
    penalties = compute_penalties(schedule, request, world.rules)
    score = fitness(penalties)
    metrics = solution_metrics(schedule, world.rules, len(request.acts))

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_request(request, out_dir / "request.json")
    document = solution_to_dict(algorithm, request, schedule, penalties, score, metrics)
    save_solution(document, out_dir / "solution.json")
    written = ["request.json", "solution.json"]
    if history is not None:
        write_csv(
            out_dir / "convergence.csv",
            ("generation", "best_fitness", "mean_fitness"),
            [(s.generation, s.best_fitness, s.mean_fitness) for s in history],
        )
        written.append("convergence.csv")
    print(
        f"{algorithm}: fitness {score:.6f}, {len(schedule)}/{len(request.acts)} acts "
        f"scheduled, penalties {penalties.total():.1f} -> "
        + ", ".join(str(out_dir / name) for name in written)
    )
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    seed = _seed(args)
    world = _load_or_generate_world(args, seed)
    algorithms = tuple(args.algo) if args.algo else ALL_ALGORITHMS
    ga = _ga_config(args, seed, Variant.ORDERED)
    config = BenchConfig(
        world=world.config,
        trials=args.trials,
        acts_per_request=args.acts,
        algorithms=algorithms,
        ga=ga,
    )
    result = run_bench(config, world)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_world(world, out_dir / "world.json")
    paths = write_bench_csvs(result, out_dir)
    failures = [r for r in result.records if r.error is not None]
    for record in failures:
        print(
            f"trial {record.trial} {record.algorithm}: {record.error}",
            file=sys.stderr,
        )
    print(
        f"{config.trials} trials x {len(algorithms)} algorithms "
        f"({len(failures)} failed) -> "
        + ", ".join(str(p) for p in [out_dir / 'world.json', *paths])
    )
    return 0


def _read_value_csv(path: Path) -> tuple[str, dict[str, list[float]]]:
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or len(header) < 3:
            raise ValueError(f"{path}: expected header algorithm,trial,<metric>")
        metric = header[2]
        samples: dict[str, list[float]] = {}
        for row in reader:
            if len(row) < 3 or row[2] == "":
                continue
            samples.setdefault(row[0], []).append(float(row[2]))
    return metric, samples


def cmd_stats(args: argparse.Namespace) -> int:
    rows: list[tuple[Any, ...]] = []
    for name in args.files:
        metric, samples = _read_value_csv(Path(name))
        names = list(samples)
        for i, algo_a in enumerate(names):
            for algo_b in names[i + 1 :]:
                a, b = samples[algo_a], samples[algo_b]
                if not a or not b:
                    rows.append((metric, algo_a, algo_b, "", ""))
                    continue
                u, p = mann_whitney_u(a, b)
                rows.append((metric, algo_a, algo_b, u, p))
    header = ("metric", "algo_a", "algo_b", "u", "p")
    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "stats.csv"
        write_csv(path, header, rows)
        print(f"wrote {path}")
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except UnschedulableError as exc:
        print(f"error: unschedulable: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON: {exc}", file=sys.stderr)
        return 2
    except (OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
