#!/usr/bin/env python3
"""
Verify: randomized and exhaustive sweeps over every checked inequality
"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from cmd_common import (
    EXIT_OK,
    EXIT_VIOLATION,
    add_common_arguments,
    default_report_path,
    parse_eta_grid,
    prepare,
    print_banner,
    resolved,
    run_guarded,
)
from config import get_budget, get_eta_grid, get_workers
from processors.analysis import VerifyProcessor
from processors.instance_io import RunReport
from processors.report_generator import generate_run_report


def run_verify(
    instances: int = 200,
    seed: int = 0,
    x_max: int = 3,
    y_max: int = 4,
    l_max: int = 3,
    m_max: int = 2,
    eta_grid: Optional[Sequence[float]] = None,
    nu_points: int = 50,
    budget: Optional[int] = None,
    workers: Optional[int] = None,
    out: Optional[Path] = None,
    progress: bool = True
) -> RunReport:
    """Run every sweep; the report's `violations` is the total across sweeps"""
    print_banner("Verify: property sweeps")
    print(f"📊 {instances} instances, seed {seed}, |X| <= {x_max}, |Y| <= {y_max}, |L| <= {l_max}")

    processor = VerifyProcessor(
        workers=resolved(workers, get_workers),
        budget=resolved(budget, get_budget),
        progress=progress,
    )
    output = processor.execute({
        'instances': instances,
        'seed': seed,
        'x_max': x_max,
        'y_max': y_max,
        'l_max': l_max,
        'm_max': m_max,
        'eta_grid': eta_grid or get_eta_grid(),
        'nu_points': nu_points,
    })
    report: RunReport = output['report']

    print()
    for sweep in output['sweeps'].values():
        emoji = '✅' if sweep.passed else '❌'
        print(f"{emoji} {sweep.to_report()}")

    paths = generate_run_report(report, Path(out) if out else default_report_path('verify', f"seed{seed}"))
    print(f"\n📁 Report saved: {paths['json']}")
    if report.violations:
        print(f"❌ {report.violations} violation(s)")
    else:
        print("✅ All checks passed")
    return report


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--instances', type=int, default=200,
                        help='Random instances in the theorem sweep (default: 200)')
    parser.add_argument('--xmax', type=int, default=3, help='Largest |X| (default: 3)')
    parser.add_argument('--ymax', type=int, default=4, help='Largest |Y| (default: 4)')
    parser.add_argument('--lmax', type=int, default=3, help='Largest |L| (default: 3)')
    parser.add_argument('--mmax', type=int, default=2,
                        help='Largest |M| in the exhaustive triple sweep (default: 2)')
    parser.add_argument('--eta-grid', type=str, default=None,
                        help='Comma-separated eta values (default: GUESSLEAK_ETA_GRID)')
    parser.add_argument('--nu-points', type=int, default=50,
                        help='Interior nu points per (instance, phi_y) (default: 50)')
    parser.add_argument('--no-progress', action='store_true',
                        help='Hide progress bars')
    add_common_arguments(parser)


def main(args: argparse.Namespace) -> int:
    prepare(args)

    def body() -> int:
        report = run_verify(
            instances=args.instances,
            seed=args.seed,
            x_max=args.xmax,
            y_max=args.ymax,
            l_max=args.lmax,
            m_max=args.mmax,
            eta_grid=parse_eta_grid(args.eta_grid),
            nu_points=args.nu_points,
            budget=args.budget,
            workers=args.workers,
            out=Path(args.out) if args.out else None,
            progress=not args.no_progress,
        )
        return EXIT_VIOLATION if report.violations else EXIT_OK

    return run_guarded(body)


if __name__ == '__main__':
    parser = argparse.ArgumentParser(
        description='Randomized and exhaustive verification sweeps',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python cmd_verify.py --instances 200 --seed 3 --xmax 3 --ymax 4 --lmax 3
  python cmd_verify.py --instances 20 --workers 4 --no-progress

Sweeps:
  lemma1 / prop1            exhaustive (phi_x, phi_y, psi) triples
  thm1 / tail_bound         every phi_y partition, interior nu grid
  corollary / thm1_optimum  dominance and the MI-maximizing encoder
  ordering                  P1 >= P2 >= P3 = p_max
  no_help                   product-form instances
  map_vs_exhaustive_psi     MAP estimator against all estimator tables
  partitions_vs_raw         partition representatives against raw functions
  nu_grid / nu_convexity    line-search correctness

Exit code 1 when any sweep records a violation.
"""
    )
    add_arguments(parser)
    sys.exit(main(parser.parse_args()))
