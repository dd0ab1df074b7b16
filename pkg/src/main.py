#!/usr/bin/env python3
"""
mpf-lab - Multi-product formula experiments

Computes well-conditioned multi-product formula weights, reproduces the
Ising, Bernoulli and ZNE simulation studies, and estimates circuit resources.
Every run writes a headered CSV or JSON artifact reproducible from its
config and seed.
"""

import sys
import os
import argparse
import logging
from typing import List, Optional

# Add the project root to Python path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.models.experiment import ExperimentConfig
from src.services.artifact_writer import ArtifactWriter
from src.services.experiments import ExperimentOutcome, ExperimentRunner
from src.utils.errors import InvalidInputError, MpfLabError
from src.utils.helpers import setup_logging, print_separator, print_summary_table
from config.settings import EXPERIMENT_DEFAULTS, SEED_ENV_VAR, TOOL_NAME, VERSION

logger = logging.getLogger(__name__)

# Subcommands whose JSON document goes to stdout unless --output is given
STDOUT_JSON_COMMANDS = ("weights", "lcu-cost", "scaling")


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--log-level',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
        default='WARNING',
        help='Logging level (default: WARNING)'
    )
    common.add_argument('--log-file', type=str, help='Log file path (optional)')
    common.add_argument('--config', type=str, help='Flat key=value config file (flags override it)')
    common.add_argument('--seed', type=int, help=f'RNG seed (default: config file, then ${SEED_ENV_VAR})')
    common.add_argument('--output', '-o', type=str, help='Artifact path (.csv or .json)')
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per experiment"""
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Well-conditioned multi-product formulas: weights, demos and resource estimates",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s weights --k 1,2,7 --base s1           # exact extrapolation weights
  %(prog)s ising-demo --output data/output/ising.csv
  %(prog)s bernoulli-demo --samples 10000 --repeats 100
  %(prog)s zne-demo --b 0.5 --shots 100000
  %(prog)s lcu-cost --k 1,2,7                   # LCU vs classical CNOT counts
  %(prog)s scaling --nq 11 --eps 1e-4 --t 10
  %(prog)s search --l 2 --base s1 --range 1:5 --threshold 3
  %(prog)s repetitions --models "1,1;1,2" --eps 1e-2 --orders 1,2
        """
    )
    parser.add_argument('--version', action='version', version=f"{TOOL_NAME} {VERSION}")
    common = _common_parser()
    commands = parser.add_subparsers(dest='command', required=True)

    weights = commands.add_parser('weights', parents=[common], help='Solve MPF weights for one sequence')
    weights.add_argument('--k', type=str, help='Trotter exponents, e.g. 1,2,7')
    weights.add_argument('--base', type=str, help='Base formula: s1, s2, s4, ...')
    weights.add_argument('--symmetric', type=str, help='auto, true or false')

    ising = commands.add_parser('ising-demo', parents=[common], help='Ising-chain magnetization study')
    ising.add_argument('--n-spins', dest='n_spins', type=int, help='Chain length')
    ising.add_argument('--J', dest='J', type=float, help='ZZ coupling')
    ising.add_argument('--h', dest='h', type=float, help='Transverse field')
    ising.add_argument('--t', type=float, help='Evolution time')
    ising.add_argument('--observable', type=str, help='z0 or z_avg')
    ising.add_argument('--initial-state', dest='initial_state', type=int, help='Basis-state index')
    ising.add_argument('--tilt', type=float, help='R_y angle applied to every qubit of |0...0> (overrides --initial-state)')
    ising.add_argument('--max-k', dest='max_k', type=int, help='Largest S_1 exponent in the sweep')
    ising.add_argument('--eps-prime', dest='eps_prime', type=float, help='Injected perturbation')
    ising.add_argument('--alpha', type=float, help='Sequence rescaling factor')
    ising.add_argument('--well-conditioned', dest='well_conditioned', type=str, help='Sequences, e.g. "1,2;1,3"')
    ising.add_argument('--ill-conditioned', dest='ill_conditioned', type=str, help='Sequences, e.g. "6,7"')

    bernoulli = commands.add_parser('bernoulli-demo', parents=[common], help='Sampling-noise amplification')
    bernoulli.add_argument('--p', type=float, help='Bernoulli probability')
    bernoulli.add_argument('--samples', type=str, help='Samples per point, e.g. 100,10000')
    bernoulli.add_argument('--l-max', dest='l_max', type=int, help='Largest number of points')
    bernoulli.add_argument('--base', type=str, help='Base formula: s1 or s2')
    bernoulli.add_argument('--repeats', type=int, help='Seeds per cell')

    zne = commands.add_parser('zne-demo', parents=[common], help='Synthetic exponential ZNE round trip')
    zne.add_argument('--e-ideal', dest='e_ideal', type=float, help='Noiseless expectation value')
    zne.add_argument('--b', type=float, help='Decay rate')
    zne.add_argument('--d', type=float, help='Asymptote')
    zne.add_argument('--shots', type=int, help='Shots per stretch point')
    zne.add_argument('--points', type=int, help='Number of stretch points')
    zne.add_argument('--c-min', dest='c_min', type=float, help='Smallest stretch factor')
    zne.add_argument('--c-max', dest='c_max', type=float, help='Largest stretch factor')
    zne.add_argument('--repeats', type=int, help='Independent repeats')

    lcu = commands.add_parser('lcu-cost', parents=[common], help='LCU vs classical CNOT counts')
    lcu.add_argument('--k', type=str, help='Three Trotter exponents')
    lcu.add_argument('--n-spins', dest='n_spins', type=int, help='Ising chain length')

    scaling = commands.add_parser('scaling', parents=[common], help='MPF depth scaling estimate')
    scaling.add_argument('--nq', type=int, help='Qubit count')
    scaling.add_argument('--eps', type=float, help='Target accuracy')
    scaling.add_argument('--t', type=float, help='Evolution time')
    scaling.add_argument('--alpha', type=float, help='Rescaling factor (0 uses t)')

    search = commands.add_parser('search', parents=[common], help='Search well-conditioned sequences')
    search.add_argument('--l', type=int, help='Sequence length')
    search.add_argument('--base', type=str, help='Base formula: s1, s2, ...')
    search.add_argument('--symmetric', type=str, help='auto, true or false')
    search.add_argument('--range', type=str, help='Inclusive range k_min:k_max')
    search.add_argument('--threshold', type=float, help='Largest accepted ||a||_1 (0 uses the base default)')
    search.add_argument('--objective', choices=['min-norm1', 'min-depth'], help='Ranking objective')
    search.add_argument('--workers', type=int, help='Solver threads')
    search.add_argument('--limit', type=int, help='Keep at most this many candidates (0 keeps all)')

    repetitions = commands.add_parser('repetitions', parents=[common], help='Spin-boson repetitions to accuracy')
    repetitions.add_argument('--models', type=str, help='M,n_max pairs, e.g. "1,1;1,2"')
    repetitions.add_argument('--eps', type=str, help='Target accuracies, e.g. 1e-2,1e-3')
    repetitions.add_argument('--orders', type=str, help='Formula orders, e.g. 1,2,4')
    repetitions.add_argument('--t', type=float, help='Evolution time')
    repetitions.add_argument('--metric', choices=['operator-norm', 'observable'], help='Error metric')
    repetitions.add_argument('--omega', type=float, help='Mode frequency')
    repetitions.add_argument('--omega-s', dest='omega_s', type=float, help='Spin splitting')
    repetitions.add_argument('--delta', type=float, help='Spin tunnelling')
    repetitions.add_argument('--g', type=float, help='Spin-mode coupling')

    return parser


def emit(outcome: ExperimentOutcome, config: ExperimentConfig, writer: ArtifactWriter) -> Optional[str]:
    """
    Write or print the artifacts of a run

    JSON-first commands print their document on stdout unless --output is
    given; table commands always write a file. The --output suffix picks
    the format, and .csv is rejected for runs that produce no table.

    Returns:
        Path of the written file, None when printed
    """
    output = config.output
    output_format = writer.output_format(output) if output is not None else None
    if output_format == "csv" and outcome.table is None:
        raise InvalidInputError(f"{config.experiment} produces a JSON document; use a .json output path")
    wants_json = output_format == "json"

    if outcome.table is not None and not wants_json and (
        output is not None or config.experiment not in STDOUT_JSON_COMMANDS
    ):
        path = writer.save_table(outcome.table, config)
        print_summary_table(outcome.summary, config.experiment)
        print(f"Output saved to: {path}")
        return path

    if outcome.document is None:
        raise MpfLabError(f"{config.experiment} produces no JSON document")
    if output is not None:
        path = writer.save_json(outcome.document, config)
        print_summary_table(outcome.summary, config.experiment)
        print(f"Output saved to: {path}")
        return path

    print(writer.render_json(outcome.document, config))
    return None


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    setup_logging(args.log_level, args.log_file)

    overrides = {
        key: getattr(args, key)
        for key in EXPERIMENT_DEFAULTS[args.command]
        if hasattr(args, key)
    }

    try:
        config = ExperimentConfig.resolve(args.command, overrides, args.config, args.seed, args.output)
        writer = ArtifactWriter()
        outcome = ExperimentRunner(writer).run(config)
        emit(outcome, config, writer)

    except MpfLabError as e:
        logger.error(f"{args.command} failed: {str(e)}")
        print(f"Error: {str(e)}", file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        print_separator()
        print("Operation cancelled by user", file=sys.stderr)
        return 130

    return 0


if __name__ == "__main__":
    sys.exit(main())
