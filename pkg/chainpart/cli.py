"""
chainpart command line.

Usage:
    chainpart solve --input FILE [--algorithm fast|naive|exhaustive] [--emit-partition] [--json]
    chainpart gen --n N --seed S --shape SHAPE [--w-max W] [--s-max S] [--w0-mode tight|loose]
    chainpart verify --count K --n-max N --seed S [--workers W] [--audit-file PATH]
    chainpart bench --sizes 10000,20000 --shape SHAPE --reps R --seed S

Exit codes: 0 success, 1 verification mismatch, 2 input or configuration error.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from chainpart import __version__
from chainpart.audit import AuditLogger
from chainpart.bench import parse_sizes, run_bench
from chainpart.config.settings import LOG_LEVELS, ConfigError, Settings
from chainpart.instance import (
    SHAPES,
    W0_MODES,
    InstanceError,
    augment,
    emit_text,
    generate_random,
    parse_bytes,
    parse_file,
)
from chainpart.oracle import OracleError, exhaustive_solve, naive_solve
from chainpart.solver import reconstruct, solve
from chainpart.verify import Verifier, VerifyOptions

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2


def _sizes(text: str) -> List[int]:
    try:
        return parse_sizes(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    gen = settings.generator
    ver = settings.verify
    ben = settings.bench

    parser = argparse.ArgumentParser(
        prog="chainpart", description="Sum-of-max chain partition of weighted trees"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="Path to a settings YAML overriding the defaults")
    parser.add_argument("--log-level", choices=LOG_LEVELS, help="Logging level (stderr)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="Solve an instance file")
    p.add_argument("--input", required=True, help="Instance file, or - for stdin")
    p.add_argument("--algorithm", choices=("fast", "naive", "exhaustive"), default="fast")
    p.add_argument("--emit-partition", action="store_true", help="Also print the F array and chains")
    p.add_argument("--json", action="store_true", help="Print a JSON result object")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("gen", help="Generate a random instance on stdout")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--seed", type=_non_negative, required=True)
    p.add_argument("--shape", choices=SHAPES, default=gen["shape"])
    p.add_argument("--w-max", type=_positive, default=gen["w_max"])
    p.add_argument("--s-max", type=_non_negative, default=gen["s_max"])
    p.add_argument("--w0-mode", choices=W0_MODES, default=gen["w0_mode"])
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("verify", help="Cross-check the fast solver against the oracles")
    p.add_argument("--count", type=_non_negative, default=ver["count"])
    p.add_argument("--n-max", type=_positive, default=ver["n_max"])
    p.add_argument("--seed", type=_non_negative, default=ver["seed"])
    p.add_argument("--workers", type=_positive, default=ver["workers"])
    p.add_argument("--audit-file", help="Append one JSONL record per checked instance")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("bench", help="Time the fast solver over a list of sizes (CSV)")
    p.add_argument("--sizes", type=_sizes, default=list(ben["sizes"]))
    p.add_argument("--shape", choices=SHAPES, default=ben["shape"])
    p.add_argument("--reps", type=_positive, default=ben["reps"])
    p.add_argument("--seed", type=_non_negative, default=ben["seed"])
    p.add_argument("--no-warmup", dest="warmup", action="store_false", default=ben["warmup"])
    p.set_defaults(handler=cmd_bench)
    return parser


def cmd_solve(args: argparse.Namespace, settings: Settings) -> int:
    key_bits = settings.limits["key_bits"]
    if args.input == "-":
        inst = parse_bytes(sys.stdin.buffer.read(), key_bits)
    else:
        inst = parse_file(args.input, key_bits)

    F = chains = None
    if args.algorithm == "exhaustive":
        optimal = exhaustive_solve(inst, settings.limits["exhaustive_guard"])
    else:
        t = augment(inst)
        sol = solve(t) if args.algorithm == "fast" else naive_solve(t)
        optimal, F = sol.optimal, list(sol.F)
        chains = reconstruct(t, sol).to_lists()
    logger.info(f"{args.algorithm} solver: optimal cost {optimal} for n={inst.n}")

    if args.json:
        print(json.dumps({"optimal_cost": optimal, "F": F, "chains": chains}))
        return EXIT_OK
    print(optimal)
    if args.emit_partition and F is not None and chains is not None:
        print("F " + " ".join(str(x) for x in F))
        for chain in chains:
            print(" ".join(str(v) for v in chain))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace, settings: Settings) -> int:
    inst = generate_random(args.n, args.w0_mode, args.shape, args.w_max, args.s_max, args.seed)
    sys.stdout.write(emit_text(inst))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    ver, gen, limits = settings.verify, settings.generator, settings.limits
    options = VerifyOptions(
        count=args.count,
        n_max=args.n_max,
        seed=args.seed,
        workers=args.workers,
        exhaustive_max_n=ver["exhaustive_max_n"],
        exhaustive_guard=limits["exhaustive_guard"],
        w_max=gen["w_max"],
        s_max=gen["s_max"],
    )
    verifier = Verifier(options, audit=AuditLogger(args.audit_file))
    return EXIT_OK if verifier.run() == 0 else EXIT_MISMATCH


def cmd_bench(args: argparse.Namespace, settings: Settings) -> int:
    gen = settings.generator
    run_bench(
        args.sizes,
        shape=args.shape,
        reps=args.reps,
        seed=args.seed,
        warmup=args.warmup,
        w0_mode=gen["w0_mode"],
        w_max=gen["w_max"],
        s_max=gen["s_max"],
    )
    return EXIT_OK


def _config_path(argv: Optional[List[str]]) -> Optional[str]:
    """Find --config before the full parse so its defaults can feed the parser."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    return known.config


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point."""
    logging.basicConfig(
        level=logging.WARNING,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        settings = Settings(_config_path(argv))
        parser = build_parser(settings)
        args = parser.parse_args(argv)
        logging.getLogger().setLevel(args.log_level or settings.log_level)
        return args.handler(args, settings)
    except (InstanceError, ConfigError, OracleError) as e:
        logger.error(str(e))
        return EXIT_INPUT
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_INPUT
    except KeyboardInterrupt:
        logger.info("Interrupted")
        return 130


if __name__ == "__main__":
    sys.exit(main())
