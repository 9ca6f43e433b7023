#!/usr/bin/env python3
"""
Semi-Bandit Lab - Command Line Orchestrator
Runs combinatorial semi-bandit experiments, prints static optima and evaluates regret bounds
"""

import os
import sys
import argparse
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Import project modules
from harness.config import load_run_config
from harness.runner import run, run_compare, write_compare_csv, write_summary_csv, write_trace_csv
from harness.scenarios import build_experiment, builtin_scenario
from regret.bounds import bound_lemma1, bound_lemma2, bound_lemma3, bound_lemma4
from regret.ledger import static_optimum
from utils.errors import BanditError, BoundDomainError, ConfigError
from utils.logger import logger

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3


class UsageError(Exception):
    """Bad command-line arguments detected after parsing"""


class SemiBanditLab:
    """Thin orchestrator mapping CLI verbs onto library calls"""

    def run(self, config_path, out_dir, raw_units=False):
        """Run one experiment and write trace.csv and summary.csv"""
        config = load_run_config(config_path)
        logger.info(
            f"🚀 Running {config.scenario.value}: policy {config.policy.value}, oracle {config.oracle_mode.value}, "
            f"n={config.horizon}, replications={config.replications}, seed={config.seed}"
        )
        traces, summary = run(config)

        os.makedirs(out_dir, exist_ok=True)
        trace_path = os.path.join(out_dir, "trace.csv")
        summary_path = os.path.join(out_dir, "summary.csv")
        write_trace_csv(traces, trace_path, scale=summary.scale if raw_units else 1.0)
        write_summary_csv(summary, summary_path, raw_units=raw_units)

        logger.info(f"✅ Wrote {trace_path} and {summary_path}")
        print(trace_path)
        print(summary_path)

    def optimum(self, scenario=None, config_path=None):
        """Print the static optimum in normalised and raw units"""
        config = builtin_scenario(scenario) if scenario else load_run_config(config_path)
        experiment = build_experiment(config)
        strategy, lambda1 = static_optimum(experiment.template, experiment.problem)
        print(f"{strategy} {lambda1:.9g} raw={lambda1 * experiment.scale:.9g}")

    def bound(self, lemma, n, k, cap_n, beta=None, delta=None):
        """Evaluate one of the four regret bounds"""
        if lemma in (3, 4) and beta is None:
            raise UsageError(f"--beta is required for lemma {lemma}")
        if lemma in (2, 4) and delta is None:
            raise UsageError(f"--delta is required for lemma {lemma}")

        if lemma == 1:
            value = bound_lemma1(n, k, cap_n)
        elif lemma == 2:
            value = bound_lemma2(n, k, cap_n, delta)
        elif lemma == 3:
            value = bound_lemma3(n, k, cap_n, beta)
        else:
            value = bound_lemma4(n, k, cap_n, beta, delta)
        print(f"{value:.12g}")

    def compare(self, config_path, policies, out_dir, raw_units=False):
        """Run several policies on common seeds and write compare.csv"""
        config = load_run_config(config_path)
        names = policies.split(",")
        logger.info(f"📊 Comparing {', '.join(names)} on {config.scenario.value}")
        frame = run_compare(config, names, raw_units=raw_units)

        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, "compare.csv")
        write_compare_csv(frame, path)
        logger.info(f"✅ Wrote {path}")
        print(path)


def build_parser():
    parser = argparse.ArgumentParser(description='Combinatorial semi-bandit experiments')
    commands = parser.add_subparsers(dest='command', required=True)

    run_cmd = commands.add_parser('run', help='Run an experiment from a JSON config')
    run_cmd.add_argument('--config', required=True, help='Path to the run config (JSON)')
    run_cmd.add_argument('--out', required=True, help='Output directory for trace.csv and summary.csv')
    run_cmd.add_argument('--raw-units', action='store_true', help='Report rewards and regret in raw units')

    optimum_cmd = commands.add_parser('optimum', help='Print the static optimum')
    source = optimum_cmd.add_mutually_exclusive_group(required=True)
    source.add_argument('--scenario', help='Built-in scenario name')
    source.add_argument('--config', help='Path to the run config (JSON)')

    bound_cmd = commands.add_parser('bound', help='Evaluate a regret bound')
    bound_cmd.add_argument('--lemma', type=int, choices=[1, 2, 3, 4], required=True)
    bound_cmd.add_argument('--n', type=float, required=True, help='Horizon')
    bound_cmd.add_argument('--k', type=float, required=True, help='Number of arms K')
    bound_cmd.add_argument('--cap-n', type=float, required=True, help='Maximum strategy size N')
    bound_cmd.add_argument('--beta', type=float, help='Approximation factor (lemmas 3 and 4)')
    bound_cmd.add_argument('--delta', type=float, help='Minimum gap (lemmas 2 and 4)')

    compare_cmd = commands.add_parser('compare', help='Compare policies on common seeds')
    compare_cmd.add_argument('--config', required=True, help='Path to the run config (JSON)')
    compare_cmd.add_argument('--policies', required=True, help='Comma-separated policy names, e.g. dfl,llr')
    compare_cmd.add_argument('--out', required=True, help='Output directory for compare.csv')
    compare_cmd.add_argument('--raw-units', action='store_true', help='Report regret in raw units')

    return parser


def main(argv=None):
    """Main CLI interface; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    lab = SemiBanditLab()
    try:
        if args.command == 'run':
            lab.run(args.config, args.out, args.raw_units)
        elif args.command == 'optimum':
            lab.optimum(scenario=args.scenario, config_path=args.config)
        elif args.command == 'bound':
            lab.bound(args.lemma, args.n, args.k, args.cap_n, args.beta, args.delta)
        else:
            lab.compare(args.config, args.policies, args.out, args.raw_units)
        return EXIT_OK

    except (ConfigError, UsageError, BoundDomainError) as e:
        logger.error(f"Invalid input: {str(e)}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BanditError as e:
        logger.error(f"Run failed [{e.component}]: {str(e)}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as e:
        logger.error(f"I/O error: {str(e)}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except KeyboardInterrupt:
        logger.info("Operation interrupted by user")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
