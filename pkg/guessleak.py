#!/usr/bin/env python3
"""
Guess-Leak command line

Subcommands:
    analyze   Cases 1-3, mutual information and bounds for one instance
    search    Exact or heuristic optimal encoders
    bound     nu sweep, optimized bound and CSV plot data
    verify    Randomized and exhaustive property sweeps
    generate  Seeded Dirichlet instance files
"""

import argparse
import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

import cmd_analyze
import cmd_bound
import cmd_search
import cmd_verify
from cmd_common import EXIT_OK, prepare, print_banner, run_guarded
from processors import __version__
from processors.instance_io import gen_product, gen_random, save_instance


def run_generate(
    x_size: int,
    y_size: int,
    out: Path,
    count: int = 1,
    concentration: float = 1.0,
    seed: int = 0,
    product: bool = False
) -> list:
    """
    Write `count` instance files. With count > 1, out is a directory and
    instance i uses seed + i.
    """
    print_banner("Generate: seeded Dirichlet instances")
    make = gen_product if product else gen_random
    out = Path(out)

    paths = []
    for i in range(count):
        instance = make(x_size, y_size, concentration, seed + i)
        if count == 1 and out.suffix == '.json':
            path = out
        else:
            path = out / f"{instance.name}.json"
        paths.append(save_instance(instance, path))
        print(f"✅ {path}")
    print(f"\n📁 {len(paths)} instance(s), {'product' if product else 'joint'} Dirichlet({concentration:g})")
    return paths


def _add_generate_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--xsize', type=int, required=True, help='|X|')
    parser.add_argument('--ysize', type=int, required=True, help='|Y|')
    parser.add_argument('--count', type=int, default=1, help='Number of instances (default: 1)')
    parser.add_argument('--concentration', type=float, default=1.0,
                        help='Symmetric Dirichlet concentration (default: 1.0)')
    parser.add_argument('--product', action='store_true',
                        help='Product-form p_X x p_Y instances (Y carries no information)')
    parser.add_argument('--seed', type=int, default=0, help='Seed (default: 0)')
    parser.add_argument('--out', type=str, required=True,
                        help='Output .json file (count 1) or directory')
    parser.add_argument('--verbose', action='store_true', help='Debug logging')


def _generate_main(args: argparse.Namespace) -> int:
    prepare(args)

    def body() -> int:
        run_generate(args.xsize, args.ysize, Path(args.out), args.count,
                     args.concentration, args.seed, args.product)
        return EXIT_OK

    return run_guarded(body)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='guessleak',
        description='Guessing probability of a secret from encoded correlated data',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python guessleak.py generate --xsize 2 --ysize 3 --seed 7 --out instances/demo.json
  python guessleak.py analyze --instance instances/demo.json --nu 0.5
  python guessleak.py search --instance instances/demo.json --l-size 2
  python guessleak.py bound --instance instances/demo.json --nu-grid 100 --csv demo.csv
  python guessleak.py verify --instances 200 --seed 3 --xmax 3 --ymax 4 --lmax 3

Exit codes:
  0 ok, 1 verification violation, 2 input error, 3 budget exceeded without --heuristic
"""
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', required=True)

    for name, module, help_text in (
        ('analyze', cmd_analyze, 'Case optima, MI and bounds for one instance'),
        ('search', cmd_search, 'Optimal encoders by exact or local search'),
        ('bound', cmd_bound, 'nu sweep and optimized bound with CSV plot data'),
        ('verify', cmd_verify, 'Property sweeps; exit 1 on any violation'),
    ):
        sub = subparsers.add_parser(name, help=help_text)
        module.add_arguments(sub)
        sub.set_defaults(handler=module.main)

    generate = subparsers.add_parser('generate', help='Write seeded Dirichlet instance files')
    _add_generate_arguments(generate)
    generate.set_defaults(handler=_generate_main)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == '__main__':
    sys.exit(main())
