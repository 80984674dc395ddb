"""
Command Line Front End
======================

Usage:
    python main.py relabel --method STEPHENS,ECR --p p.lsa --z z.lsa --zpivot zp.lsa --out-dir out
    python main.py permute --mcmc mcmc.lsa --permutations permutations_ECR.lsa --out mcmc_ECR.lsa
    python main.py simulate --preset separated-normal --seed 1 --out-dir fixture
    python main.py inject --in-dir fixture --out-dir switched --seed 2
    python main.py map-pivot --model normal --mcmc mcmc.lsa --z z.lsa --data data.lsa
    python main.py serve          # MCP stdio server
    python main.py self-test      # quick smoke run

Exit codes: 0 on success, 1 on usage errors, 2 on data errors.
"""

import argparse
import json
import sys
import tempfile
from pathlib import Path
from typing import List, Optional

from .commands import (
    inject_command,
    load_cli_config,
    map_pivot_command,
    permute_command,
    relabel_command,
    simulate_command,
)
from ..config import APP_CONFIG
from ..samplers import PRESETS
from ..utils.errors import LabelSwitchError, UsageError
from ..utils.logging_setup import get_logger, setup_logging

logger = get_logger("cli")


class ArgumentParser(argparse.ArgumentParser):
    """Raises instead of exiting so that bad flags map to exit code 1."""

    def error(self, message):
        raise UsageError(message)


def _add_relabel(subparsers) -> None:
    parser = subparsers.add_parser("relabel", help="Run relabelling methods on MCMC output")
    parser.add_argument("--config", help="key = value configuration file; explicit flags override it")
    parser.add_argument("--method", action="append", help="Method(s), comma separated or repeated")
    parser.add_argument("--z", help="Allocations, integer m x n (1-based)")
    parser.add_argument("--mcmc", help="Parameter chain, float m x K x J")
    parser.add_argument("--p", help="Classification probabilities, float m x n x K")
    parser.add_argument("--data", help="Observed data, float n or n x d")
    parser.add_argument("--zpivot", help="Allocation pivot(s), integer n or d x n")
    parser.add_argument("--prapivot", help="Parameter pivot, float K x J")
    parser.add_argument("--constraint", help="Parameter type (1-based) for AIC, or ALL")
    parser.add_argument("--ground-truth", dest="ground_truth", help="True allocation, integer n")
    parser.add_argument("--model", help="normal, bivariate-normal or poisson-hmm")
    parser.add_argument("--K", dest="K", type=int, help="Number of components")
    parser.add_argument("--sjw-init", dest="sjw_init", type=int, help="Initial iteration for SJW (1-based)")
    for name in ("ecr", "ste", "sjw"):
        parser.add_argument(f"--thr-{name}", dest=f"thr_{name}", type=float)
        parser.add_argument(f"--max-{name}", dest=f"max_{name}", type=int)
    parser.add_argument("--user-perm", dest="user_perm", action="append", help="Permutation file, integer m x K")
    parser.add_argument("--out-dir", dest="out_dir")
    parser.add_argument("--threads", type=int)
    parser.add_argument("--seed", type=int)


def _add_commands(subparsers) -> None:
    permute = subparsers.add_parser("permute", help="Reorder a parameter chain with a permutation file")
    permute.add_argument("--mcmc", required=True)
    permute.add_argument("--permutations", required=True)
    permute.add_argument("--out", required=True)
    permute.add_argument("--model", help="Use the family's permutation action (needed for poisson-hmm)")

    simulate = subparsers.add_parser("simulate", help="Simulate a fixture chain")
    simulate.add_argument("--preset", choices=sorted(PRESETS))
    simulate.add_argument("--truth", help="Truth configuration file")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--iterations", type=int)
    simulate.add_argument("--burn", type=int)
    simulate.add_argument("--K", dest="K", type=int, help="Number of fitted components")
    simulate.add_argument("--threads", type=int, default=1)
    simulate.add_argument("--out-dir", dest="out_dir", required=True)

    inject = subparsers.add_parser("inject", help="Apply random label switches to a fixture")
    inject.add_argument("--in-dir", dest="in_dir", required=True)
    inject.add_argument("--out-dir", dest="out_dir", required=True)
    inject.add_argument("--seed", type=int, default=0)
    inject.add_argument("--switch-probability", dest="switch_probability", type=float, default=1.0)

    pivot = subparsers.add_parser("map-pivot", help="Print the complete-MAP iteration (1-based)")
    pivot.add_argument("--model", required=True)
    pivot.add_argument("--mcmc", required=True)
    pivot.add_argument("--z", required=True)
    pivot.add_argument("--data", required=True)
    pivot.add_argument("--threads", type=int, default=1)

    subparsers.add_parser("serve", help="Start the MCP server on stdio")
    subparsers.add_parser("self-test", help="Run the quick smoke suite")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="labelswitch", description=APP_CONFIG.description)
    parser.add_argument("--version", action="version", version=f"{APP_CONFIG.name} {APP_CONFIG.version}")
    subparsers = parser.add_subparsers(dest="command", parser_class=ArgumentParser)
    subparsers.required = True
    _add_relabel(subparsers)
    _add_commands(subparsers)
    return parser


def _report(result) -> None:
    print(json.dumps(result, indent=2, sort_keys=True))


def self_test() -> bool:
    """Simulate, switch and relabel a small chain; every method must undo the switches."""
    logger.info("Running labelswitch self-tests...")
    try:
        with tempfile.TemporaryDirectory() as tmp:
            root = Path(tmp)
            simulated = simulate_command(root / "fixture", preset="separated-normal", seed=7, iterations=300, burn=100)
            assert simulated["m"] == 200
            logger.info("✓ Fixture simulation working")

            injected = inject_command(root / "fixture", root / "switched", seed=8)
            assert injected["m"] == 200
            logger.info("✓ Label-switch injection working")

            switched = root / "switched"
            cli = load_cli_config(None, {
                "method": ["STEPHENS", "ECR", "ECR-ITERATIVE-1", "DATA-BASED"],
                "z": str(switched / "z.lsa"),
                "p": str(switched / "p.lsa"),
                "data": str(switched / "data.lsa"),
                "zpivot": str(switched / "zpivot.lsa"),
                "out_dir": str(root / "out"),
            })
            relabelled = relabel_command(cli)
            similarity = relabelled["summary"]["similarity"]
            assert min(min(row) for row in similarity) > 0.99
            logger.info("✓ Relabelling methods agree")

        logger.info("🎉 All self-tests passed successfully!")
        return True
    except Exception as e:
        logger.error(f"❌ Self-test failed: {e}")
        return False


def _serve() -> int:
    from ..server import LabelSwitchServer

    try:
        server = LabelSwitchServer()
    except Exception as e:
        logger.error(f"Failed to initialize server: {e}")
        return 2
    try:
        logger.info("Starting stdio mode...")
        server.run()
    except KeyboardInterrupt:
        logger.info("Server shutting down gracefully...")
    return 0


def dispatch(args: argparse.Namespace) -> int:
    if args.command == "relabel":
        overrides = {key: value for key, value in vars(args).items() if key not in ("command", "config")}
        _report(relabel_command(load_cli_config(args.config, overrides)))
    elif args.command == "permute":
        _report(permute_command(args.mcmc, args.permutations, args.out, args.model))
    elif args.command == "simulate":
        _report(simulate_command(
            args.out_dir, preset=args.preset, truth=args.truth, seed=args.seed,
            iterations=args.iterations, burn=args.burn, K=args.K, threads=args.threads,
        ))
    elif args.command == "inject":
        _report(inject_command(args.in_dir, args.out_dir, args.seed, args.switch_probability))
    elif args.command == "map-pivot":
        result = map_pivot_command(args.model, args.mcmc, args.z, args.data, args.threads)
        print(result["map_index"])
    elif args.command == "serve":
        return _serve()
    elif args.command == "self-test":
        return 0 if self_test() else 1
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv`` and run one subcommand; returns the process exit code."""
    setup_logging()
    try:
        args = build_parser().parse_args(argv)
        return dispatch(args)
    except LabelSwitchError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
