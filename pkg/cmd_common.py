#!/usr/bin/env python3
"""
Shared command-line plumbing: flags, logging setup, banners and the
error-to-exit-code mapping used by every cmd_* script.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Tuple

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from config import Config
from processors.errors import BudgetExceeded, GuessLeakError, VerificationViolation

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def exit_code_for(error: BaseException) -> int:
    """1 verification violation, 3 budget exceeded, 2 any other input error"""
    if isinstance(error, VerificationViolation):
        return EXIT_VIOLATION
    if isinstance(error, BudgetExceeded):
        return EXIT_BUDGET
    return EXIT_INPUT


def run_guarded(command: Callable[[], int]) -> int:
    """Run a command body, printing errors and mapping them to exit codes"""
    try:
        return command()
    except BudgetExceeded as e:
        print(f"❌ {e}")
        print("   Re-run with --heuristic to fall back to local search, or raise --budget")
        return EXIT_BUDGET
    except VerificationViolation as e:
        print(f"❌ Verification violation: {e}")
        return EXIT_VIOLATION
    except (GuessLeakError, ValueError) as e:
        print(f"❌ Input error: {e}")
        return EXIT_INPUT


def setup_logging(verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )


def print_banner(title: str) -> None:
    print(f"\n{'='*80}")
    print(f"  {title}")
    print(f"{'='*80}\n")


def parse_eta_grid(raw: Optional[str]) -> Optional[Tuple[float, ...]]:
    if raw is None:
        return None
    values = tuple(float(part) for part in raw.split(',') if part.strip())
    if not values:
        raise ValueError(f"--eta-grid is empty: {raw!r}")
    return values


def default_report_path(command: str, name: Optional[str]) -> Path:
    stem = f"{command}_{name}" if name else command
    return Config.get_output_dir() / f"{stem}.json"


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--budget', type=int, default=None,
                        help='Exact-search candidate budget (default: GUESSLEAK_BUDGET or 10,000,000)')
    parser.add_argument('--workers', type=int, default=None,
                        help='Worker processes (default: GUESSLEAK_WORKERS or 1)')
    parser.add_argument('--seed', type=int, default=0,
                        help='Seed for local search and instance families (default: 0)')
    parser.add_argument('--out', type=str, default=None,
                        help='Report JSON path; a Markdown summary is written alongside')
    parser.add_argument('--verbose', action='store_true',
                        help='Debug logging')
    parser.add_argument('--show-config', action='store_true',
                        help='Print resolved configuration before running')


def add_instance_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--instance', type=str, required=True,
                        help='Instance JSON file (x_labels, y_labels, pxy, optional phi_y/l_size/m_size)')
    parser.add_argument('--l-size', type=int, default=None,
                        help='|L|, the Y-encoder range (default: instance l_size or |Y|)')
    parser.add_argument('--m-size', type=int, default=None,
                        help='|M|, the X-encoder range for Case 1 (default: instance m_size or 2)')


def resolved(value, getter):
    return getter() if value is None else value


def prepare(args: argparse.Namespace) -> None:
    setup_logging(getattr(args, 'verbose', False))
    if getattr(args, 'show_config', False):
        Config.print_config()
