#!/usr/bin/env python3
"""
Search: exact or heuristic optimal encoders for Cases 1 and 2
"""

import argparse
import sys
from pathlib import Path
from typing import Optional

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from cmd_common import (
    EXIT_OK,
    add_common_arguments,
    add_instance_arguments,
    default_report_path,
    prepare,
    print_banner,
    resolved,
    run_guarded,
)
from config import get_budget, get_restarts, get_workers
from processors.analysis import SearchProcessor
from processors.base_processor import ProcessorType
from processors.instance_io import RunReport, load_instance
from processors.report_generator import generate_run_report


def run_search(
    instance_path: Path,
    l_size: Optional[int] = None,
    m_size: Optional[int] = None,
    heuristic: bool = False,
    local_only: bool = False,
    restarts: Optional[int] = None,
    seed: int = 0,
    budget: Optional[int] = None,
    workers: Optional[int] = None,
    out: Optional[Path] = None
) -> RunReport:
    """
    Find the case optima with their encoders and estimators.

    local_only skips the exact search and runs local search for Case 2
    (requires heuristic).
    """
    print_banner("Search: optimal encoders and estimators")

    instance = load_instance(Path(instance_path))
    print(f"📁 Instance: {instance_path} ({len(instance.pxy)}x{len(instance.pxy[0])})")

    processor = SearchProcessor(
        ProcessorType.HEURISTIC if heuristic else ProcessorType.EXACT,
        budget=resolved(budget, get_budget),
        workers=resolved(workers, get_workers),
        restarts=resolved(restarts, get_restarts),
        seed=seed,
    )
    output = processor.execute({
        'instance': instance,
        'l_size': l_size,
        'm_size': m_size,
        'force_local_search': local_only,
    })
    report: RunReport = output['report']

    for key, entry in sorted(report.search.items()):
        print(f"📊 {key}: {entry['best_value']:.9f} via {entry['method']} "
              f"({entry['candidates_evaluated']:,} candidates)")
        if entry.get('best_phi_x') is not None:
            print(f"   phi_x = {entry['best_phi_x']}")
        print(f"   phi_y = {entry['best_phi_y']}")
        print(f"   psi   = {entry['best_psi']}")
    if 'case1' not in report.search:
        print("⚠️  Case 1 not searched (over budget or local-search run)")

    paths = generate_run_report(report, Path(out) if out else default_report_path('search', instance.name))
    print(f"\n✅ Report saved: {paths['json']}")
    return report


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_instance_arguments(parser)
    parser.add_argument('--heuristic', action='store_true',
                        help='Allow local search when the exact search is over budget')
    parser.add_argument('--local-only', action='store_true',
                        help='Skip the exact search and run local search for Case 2 (implies --heuristic)')
    parser.add_argument('--restarts', type=int, default=None,
                        help='Local-search restarts (default: GUESSLEAK_RESTARTS or 20)')
    add_common_arguments(parser)


def main(args: argparse.Namespace) -> int:
    prepare(args)

    def body() -> int:
        run_search(
            Path(args.instance),
            l_size=args.l_size,
            m_size=args.m_size,
            heuristic=args.heuristic or args.local_only,
            local_only=args.local_only,
            restarts=args.restarts,
            seed=args.seed,
            budget=args.budget,
            workers=args.workers,
            out=Path(args.out) if args.out else None,
        )
        return EXIT_OK

    return run_guarded(body)


if __name__ == '__main__':
    parser = argparse.ArgumentParser(
        description='Search optimal encoders (exact set-partition enumeration or local search)',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python cmd_search.py --instance instances/worked.json
  python cmd_search.py --instance instances/worked.json --l-size 2 --m-size 2 --workers 4
  python cmd_search.py --instance big.json --heuristic --restarts 50
  python cmd_search.py --instance big.json --local-only --seed 7

Exact search enumerates one representative per set partition
(Stirling numbers of the second kind), refusing to start beyond --budget.
"""
    )
    add_arguments(parser)
    sys.exit(main(parser.parse_args()))
