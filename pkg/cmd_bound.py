#!/usr/bin/env python3
"""
Bound: nu sweep and optimized mutual-information bound, with CSV plot data
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
    default_report_path,
    prepare,
    print_banner,
    run_guarded,
)
from config import get_nu_grid
from processors.analysis import BoundProcessor
from processors.instance_io import RunReport, load_instance, write_plot_csv
from processors.report_generator import generate_run_report


def run_bound(
    instance_path: Path,
    nu: Optional[float] = None,
    nu_points: Optional[int] = None,
    seed: int = 0,
    out: Optional[Path] = None,
    csv_path: Optional[Path] = None
) -> RunReport:
    """
    Evaluate the bounds at one nu, or over a log-spaced grid of nu_points.

    The plot CSV goes to csv_path (default: the report path with .csv).
    """
    print_banner("Bound: information-spectrum and mutual-information bounds")

    instance = load_instance(Path(instance_path))
    print(f"📁 Instance: {instance_path} ({len(instance.pxy)}x{len(instance.pxy[0])})")

    processor = BoundProcessor(seed=seed)
    output = processor.execute({
        'instance': instance,
        'nu': nu,
        'nu_grid': None if nu is not None else (nu_points or get_nu_grid()),
    })
    report: RunReport = output['report']

    optimized = report.bounds[0]
    if optimized.get('degenerate_flag'):
        print("⚠️  Degenerate instance (p_max = 1): bound is trivially 1")
    else:
        print(f"📊 I(X; phi_y(Y)) = {optimized['mi_bits']:.9f} bits, p_max = {optimized['p_max']:.9f}")
        print(f"📊 Optimized bound {optimized['thm1_bound']:.9f} at nu={optimized['nu']:.6f}")
        print(f"📊 Exact P_c {optimized['exact_pc']:.9f} (slack {optimized['slack']:.9f})")
    print(f"📊 {len(output['rows'])} grid rows")

    report_path = Path(out) if out else default_report_path('bound', instance.name)
    paths = generate_run_report(report, report_path)
    csv_file = write_plot_csv(output['rows'], Path(csv_path) if csv_path else paths['json'].with_suffix('.csv'))
    print(f"\n✅ Report saved: {paths['json']}")
    print(f"✅ Plot data saved: {csv_file}")
    return report


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--instance', type=str, required=True,
                        help='Instance JSON file; phi_y in the file is used, identity otherwise')
    grid = parser.add_mutually_exclusive_group()
    grid.add_argument('--nu', type=float, default=None,
                      help='Evaluate at a single nu')
    grid.add_argument('--nu-grid', type=int, default=None,
                      help='Number of log-spaced nu points (default: GUESSLEAK_NU_GRID or 100)')
    parser.add_argument('--csv', type=str, default=None,
                        help='Plot CSV path (nu,thm1_bound,cor_bound,exact_pc,p_max)')
    add_common_arguments(parser)


def main(args: argparse.Namespace) -> int:
    prepare(args)

    def body() -> int:
        run_bound(
            Path(args.instance),
            nu=args.nu,
            nu_points=args.nu_grid,
            seed=args.seed,
            out=Path(args.out) if args.out else None,
            csv_path=Path(args.csv) if args.csv else None,
        )
        return EXIT_OK

    return run_guarded(body)


if __name__ == '__main__':
    parser = argparse.ArgumentParser(
        description='Sweep nu and optimize the mutual-information bound for one encoder',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python cmd_bound.py --instance instances/worked.json --nu-grid 100 --csv worked.csv
  python cmd_bound.py --instance instances/worked.json --nu 0.5

Output:
  reports/
  ├── bound_<name>.json
  ├── bound_<name>.md
  └── bound_<name>.csv   (nu,thm1_bound,cor_bound,exact_pc,p_max)
"""
    )
    add_arguments(parser)
    sys.exit(main(parser.parse_args()))
