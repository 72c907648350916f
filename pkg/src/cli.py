"""
Command-line front end.

    cyclesynth synth --in f.spec [--method kcycle|mmd|hybrid] [--out f.tfc] [--report r.txt]
    cyclesynth verify f.tfc f.spec
    cyclesynth cost f.tfc [--lnn]
    cyclesynth bench --family hwb|random --n 7 8 [--seed 0] [--count 10] [--workers 4] [--csv out.csv]
    cyclesynth analyze f.spec [--diff-csv d.csv]

Exit codes: 0 success, 1 verification failure or timeout, 2 format or usage error.
"""
import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from src.DTOs.models import ConfigError, RouterConfig, SimulationConfig
from src.core.circuit_ir import (
    CircuitError, LnnUnsupportedError, SimulationCapacityError, circuit_cost, gate_class_counts, lnn_cost,
)
from src.core.pipeline import (
    SynthesisError, analyze_permutation, synthesize_hybrid, synthesize_kcycle, synthesize_mmd, verify,
)
from src.parsers.circuit_parser import CircuitParserError, load_circuit, save_circuit
from src.parsers.spec_parser import SpecParserError, load_spec
from src.utils.generators import gen_hwb, gen_random_perm
from src.utils.reporting import bench_frame, bench_row, format_report, write_difference_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_FORMAT = 2

METHODS = {
    "kcycle": synthesize_kcycle,
    "mmd": synthesize_mmd,
    "hybrid": synthesize_hybrid,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclesynth", description="Cycle-based reversible logic synthesis.")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log progress at DEBUG level.")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="Synthesize a circuit from a specification file.")
    synth.add_argument("--in", dest="spec", required=True, help="Specification file.")
    synth.add_argument("--method", choices=sorted(METHODS), default="hybrid")
    synth.add_argument("--out", help="Write the circuit here.")
    synth.add_argument("--report", help="Write the key=value report here instead of stdout.")
    synth.add_argument("--no-verify", action="store_true", help="Skip the simulation check.")
    synth.add_argument("--timeout", type=float, help="Abandon the run after this many seconds.")

    check = sub.add_parser("verify", help="Check a circuit against a specification.")
    check.add_argument("circuit")
    check.add_argument("spec")

    cost = sub.add_parser("cost", help="Quantum cost of a circuit.")
    cost.add_argument("circuit")
    cost.add_argument("--lnn", action="store_true", help="Also report the linear-nearest-neighbour cost.")

    bench = sub.add_parser("bench", help="Synthesize generated benchmark functions.")
    bench.add_argument("--family", choices=("hwb", "random"), default="random")
    bench.add_argument("--n", type=int, nargs="+", required=True)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--count", type=int, default=1, help="Random permutations per width.")
    bench.add_argument("--method", choices=sorted(METHODS), default="kcycle")
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--csv", help="Write the run table here.")

    analyze = sub.add_parser("analyze", help="Metrics and cycle structure of a specification.")
    analyze.add_argument("spec")
    analyze.add_argument("--diff-csv", help="Write i, f(i), f(i)-i as CSV.")
    return parser


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _cmd_synth(args: argparse.Namespace) -> int:
    p = load_spec(args.spec)
    try:
        circuit, report = METHODS[args.method](p, RouterConfig(), SimulationConfig.from_env(),
                                               args.timeout, not args.no_verify)
    except SynthesisError as e:
        logger.error("%s", e)
        return EXIT_FAILED
    if args.out:
        save_circuit(circuit, args.out)
    _emit(format_report(report), args.report)
    return EXIT_FAILED if report.verified is False else EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    circuit = load_circuit(args.circuit)
    p = load_spec(args.spec)
    if circuit.width != p.width:
        logger.error("circuit width %d does not match specification width %d", circuit.width, p.width)
        return EXIT_FORMAT
    ok = verify(circuit, p)
    sys.stdout.write(f"verified={'true' if ok else 'false'}\n")
    return EXIT_OK if ok else EXIT_FAILED


def _cmd_cost(args: argparse.Namespace) -> int:
    circuit = load_circuit(args.circuit)
    lines = [f"n={circuit.width}", f"gates={len(circuit)}", f"cost={circuit_cost(circuit)}"]
    lines.extend(f"class.{kind}={count}" for kind, count in gate_class_counts(circuit).items())
    if args.lnn:
        lines.append(f"lnn_cost={lnn_cost(circuit)}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _bench_one(family: str, n: int, seed: int, method: str) -> dict:
    p = gen_hwb(n) if family == "hwb" else gen_random_perm(n, seed)
    _, report = METHODS[method](p)
    return bench_row(family, seed, report)


def _cmd_bench(args: argparse.Namespace) -> int:
    jobs = []
    for n in args.n:
        seeds = [args.seed] if args.family == "hwb" else range(args.seed, args.seed + args.count)
        jobs.extend((args.family, n, s, args.method) for s in seeds)
    logger.info("bench: %d runs on %d worker(s)", len(jobs), args.workers)
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(lambda job: _bench_one(*job), jobs))
    else:
        rows = [_bench_one(*job) for job in jobs]
    df = bench_frame(rows)
    if args.csv:
        df.to_csv(args.csv, index=False)
    summary = df.groupby("n").agg(runs=("cost", "size"), mean_cost=("cost", "mean"),
                                  max_cost=("cost", "max"), mean_cost_per_n2n=("cost_per_n2n", "mean"))
    sys.stdout.write(summary.to_string() + "\n")
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    p = load_spec(args.spec)
    report = analyze_permutation(p)
    if args.diff_csv:
        write_difference_csv(p, args.diff_csv)
    sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    return EXIT_OK


COMMANDS = {
    "synth": _cmd_synth,
    "verify": _cmd_verify,
    "cost": _cmd_cost,
    "bench": _cmd_bench,
    "analyze": _cmd_analyze,
}


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_FORMAT
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (SimulationCapacityError, SynthesisError) as e:
        logger.error("%s", e)
        sys.stderr.write(f"{e}\n")
        return EXIT_FAILED
    except (SpecParserError, CircuitParserError, CircuitError, LnnUnsupportedError, ConfigError) as e:
        logger.error("%s", e)
        sys.stderr.write(f"{e}\n")
        return EXIT_FORMAT


def main() -> None:
    sys.exit(cli_main())


if __name__ == '__main__':
    main()
