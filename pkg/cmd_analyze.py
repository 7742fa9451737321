#!/usr/bin/env python3
"""
Analyze: Cases 1-3, mutual information and bounds for one instance
"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from cmd_common import (
    EXIT_OK,
    add_common_arguments,
    add_instance_arguments,
    default_report_path,
    parse_eta_grid,
    prepare,
    print_banner,
    resolved,
    run_guarded,
)
from config import get_budget, get_eta_grid, get_restarts, get_workers
from processors.analysis import AnalyzeProcessor
from processors.base_processor import ProcessorType
from processors.instance_io import RunReport, load_instance
from processors.report_generator import generate_run_report


def run_analyze(
    instance_path: Path,
    l_size: Optional[int] = None,
    m_size: Optional[int] = None,
    nu: Optional[float] = None,
    eta_grid: Optional[Sequence[float]] = None,
    heuristic: bool = False,
    restarts: Optional[int] = None,
    seed: int = 0,
    budget: Optional[int] = None,
    workers: Optional[int] = None,
    out: Optional[Path] = None
) -> RunReport:
    """
    Run the analysis and write the JSON report plus Markdown summary.

    Raises:
        BudgetExceeded: an exact search is over budget and heuristic is off
        VerificationViolation: the case ordering or report re-evaluation fails
        GuessLeakError: instance or argument errors
    """
    print_banner("Analyze: guessing probability under encoded side information")

    instance = load_instance(Path(instance_path))
    print(f"📁 Instance: {instance_path} ({len(instance.pxy)}x{len(instance.pxy[0])})")

    processor = AnalyzeProcessor(
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
        'nu': nu,
        'eta_grid': eta_grid or get_eta_grid(),
    })
    report: RunReport = output['report']

    optima = report.case_optima
    print("📊 Case optima:")
    for key in ('P1', 'P2', 'P3'):
        value = optima.get(key)
        print(f"   {key}: {'(omitted, over budget)' if value is None else f'{value:.9f}'}")
    print(f"   p_max: {optima['p_max']:.9f}")
    print(f"📊 I(X; phi_y(Y)) = {report.mi_bits['phi_y']:.9f} bits "
          f"(identity: {report.mi_bits['identity']:.9f})")

    optimized = report.bounds[0]
    if optimized.get('degenerate_flag'):
        print("⚠️  Degenerate instance (p_max = 1): bound is trivially 1")
    else:
        print(f"📊 Optimized bound {optimized['thm1_bound']:.9f} at nu={optimized['nu']:.6f} "
              f"(exact {optimized['exact_pc']:.9f})")

    paths = generate_run_report(report, Path(out) if out else default_report_path('analyze', instance.name))
    print(f"\n✅ Report saved: {paths['json']}")
    print(f"✅ Summary saved: {paths['markdown']}")
    return report


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_instance_arguments(parser)
    parser.add_argument('--nu', type=float, default=None,
                        help='Also evaluate the bounds at this nu')
    parser.add_argument('--eta-grid', type=str, default=None,
                        help='Comma-separated eta values for the spectrum bound')
    parser.add_argument('--heuristic', action='store_true',
                        help='Allow local search when the exact search is over budget')
    parser.add_argument('--restarts', type=int, default=None,
                        help='Local-search restarts (default: GUESSLEAK_RESTARTS or 20)')
    add_common_arguments(parser)


def main(args: argparse.Namespace) -> int:
    prepare(args)

    def body() -> int:
        run_analyze(
            Path(args.instance),
            l_size=args.l_size,
            m_size=args.m_size,
            nu=args.nu,
            eta_grid=parse_eta_grid(args.eta_grid),
            heuristic=args.heuristic,
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
        description='Analyze one instance: case optima, mutual information and bounds',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python cmd_analyze.py --instance instances/worked.json
  python cmd_analyze.py --instance instances/worked.json --nu 0.5
  python cmd_analyze.py --instance big.json --heuristic --restarts 50 --seed 3

Output:
  reports/
  ├── analyze_<name>.json   (RunReport, machine-readable)
  └── analyze_<name>.md     (summary)

Exit codes:
  1 verification violation, 2 input error, 3 budget exceeded without --heuristic
"""
    )
    add_arguments(parser)
    sys.exit(main(parser.parse_args()))
