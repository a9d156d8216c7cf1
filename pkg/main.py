"""Command-line entry point for the Packed Interval Covering workbench.

Exit codes follow the SAT-competition convention:
    10  positive / SAT verdict          20  negative / UNSAT verdict
     0  neutral success                  1  usage, parse or input error
     2  internal invariant breach (solver disagreement, broken construction)
"""
import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import List, Optional

from bench import BenchSuite, format_report, run_bench, suite_record
from config import Config
from database import BenchDatabase
from exceptions import (
    B2ValidationError,
    DecodeError,
    InternalInvariantError,
    ParseError,
    WorkbenchError,
)
from formats import (
    parse_assignment,
    parse_dimacs,
    parse_map,
    parse_pic,
    parse_witness,
    print_assignment,
    print_dimacs,
    print_map,
    print_pic,
    print_witness,
)
from generators import GenConfig, gen_random_b2sat, gen_random_pic
from pic_core import compress, is_wellformed, verify_cover
from reduction import extract_valuation, lift_valuation, normalize_selection, reduce
from sat_core import validate_b2
from solvers import SOLVERS, solve_portfolio
from svg_render import render_svg

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2
EXIT_POSITIVE = 10
EXIT_NEGATIVE = 20


def setup_logging(verbose: bool = False):
    """Configure logging to stderr, plus a log file when PIC_LOG_FILE is set."""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if Config.LOG_FILE:
        handlers.append(logging.FileHandler(Config.LOG_FILE, encoding='utf-8'))
    logging.basicConfig(
        level=logging.DEBUG if verbose else Config.log_level(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


class WorkbenchArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; 2 is reserved for internal breaches here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    data = Path(path).read_bytes()
    try:
        return data.decode('utf-8')
    except UnicodeDecodeError as e:
        line = data.count(b'\n', 0, e.start) + 1
        raise ParseError(line, f"{path}: not valid UTF-8 (byte {data[e.start]:#04x})") from None


def _write(path: Optional[str], text: str):
    if path is None or path == '-':
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding='utf-8')
        logger.info(f"📝 Wrote {path}")


def cmd_solve(args) -> int:
    instance = parse_pic(_read(args.instance))
    if args.solver == 'portfolio':
        winner, selection = asyncio.run(solve_portfolio(instance))
        logger.info(f"Portfolio verdict from {winner}")
    else:
        selection = SOLVERS[args.solver](instance)

    if selection is None:
        sys.stdout.write("negative\n")
        return EXIT_NEGATIVE
    if not verify_cover(instance, selection):
        raise InternalInvariantError("solver returned a witness that does not verify")
    sys.stdout.write("positive\n" + print_witness(selection))
    if args.witness:
        _write(args.witness, print_witness(selection))
    return EXIT_POSITIVE


def cmd_verify(args) -> int:
    instance = parse_pic(_read(args.instance))
    selection = parse_witness(_read(args.witness), instance)
    if verify_cover(instance, selection):
        sys.stdout.write("valid\n")
        return EXIT_POSITIVE
    sys.stdout.write("invalid\n")
    return EXIT_NEGATIVE


def cmd_check(args) -> int:
    instance = parse_pic(_read(args.instance))
    report = is_wellformed(instance)
    for violation in report.violations:
        sys.stdout.write(f"violation: {violation}\n")
    if not report.ok:
        return EXIT_USAGE
    sys.stdout.write(
        f"ok\nN\t{instance.n_bound}\npacks\t{instance.pack_count}\nintervals\t{instance.interval_count}\n"
        f"segments\t{compress(instance).segment_count}\nselections\t{instance.selection_space()}\n")
    return EXIT_OK


def cmd_reduce(args) -> int:
    formula = parse_dimacs(_read(args.cnf))
    try:
        b2 = validate_b2(formula)
    except B2ValidationError as e:
        for violation in e.violations:
            sys.stderr.write(f"violation: {violation}\n")
        return EXIT_USAGE
    instance, reduction_map = reduce(b2)
    _write(args.output, print_pic(instance))
    if args.map:
        _write(args.map, print_map(reduction_map))
    return EXIT_OK


def cmd_lift(args) -> int:
    reduction_map = parse_map(_read(args.map))
    valuation = parse_assignment(_read(args.assignment), reduction_map.num_variables)
    selection = lift_valuation(reduction_map, valuation)
    if not verify_cover(reduction_map.to_instance(), selection):
        logger.warning("⚠️ Assignment does not satisfy the formula; lifted selection is not a cover")
    sys.stdout.write(print_witness(selection))
    return EXIT_OK


def cmd_extract(args) -> int:
    reduction_map = parse_map(_read(args.map))
    selection = parse_witness(_read(args.witness), reduction_map.to_instance())
    if args.normalize:
        selection = normalize_selection(reduction_map, selection)
    valuation = extract_valuation(reduction_map, selection)
    sys.stdout.write(print_assignment(valuation))
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == 'pic':
        config = GenConfig(seed=args.seed, n_bound=args.n_bound, packs=args.packs, max_pack_size=args.max_pack_size)
        sys.stdout.write(print_pic(gen_random_pic(config)))
    else:
        config = GenConfig(seed=args.seed, variables=args.n)
        sys.stdout.write(print_dimacs(gen_random_b2sat(config).formula))
    return EXIT_OK


def cmd_render(args) -> int:
    instance = parse_pic(_read(args.instance))
    selection = parse_witness(_read(args.witness), instance) if args.witness else None
    _write(args.output, render_svg(instance, selection))
    return EXIT_OK


async def _bench(args) -> int:
    database = BenchDatabase(args.db) if (args.record or args.history) else None
    if database:
        await database.init_db()
    if args.history:
        for run in await database.recent_runs(Config.BENCH_HISTORY_LIMIT):
            for row in run['results']:
                sys.stdout.write(f"{run['id']}\t{run['started_at']}\t{row['solver']}\t{row['positive']}"
                                 f"\t{row['negative']}\t{row['skipped']}\t{row['total_seconds']:.6f}\n")
        return EXIT_OK

    suite = BenchSuite(count=args.count, seed=args.seed, n_bound=args.n_bound, packs=args.packs,
                       max_pack_size=args.max_pack_size, b2_count=args.b2_count, b2_n=args.b2_n)
    report = await run_bench(suite, parallel=args.parallel)
    sys.stdout.write(format_report(report))
    if database:
        await database.record_run(suite_record(suite), report.cases, True, [row.as_record() for row in report.rows])
    return EXIT_OK


def cmd_bench(args) -> int:
    return asyncio.run(_bench(args))


def build_parser() -> argparse.ArgumentParser:
    parser = WorkbenchArgumentParser(prog='pic-workbench', description=__doc__.splitlines()[0])
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging on stderr')
    commands = parser.add_subparsers(dest='command', required=True)

    solve = commands.add_parser('solve', help='decide an instance')
    solve.add_argument('instance')
    solve.add_argument('--solver', choices=sorted(SOLVERS) + ['portfolio'], default='backtrack')
    solve.add_argument('--witness', help='write the witness here when positive')
    solve.set_defaults(handler=cmd_solve)

    verify = commands.add_parser('verify', help='check a witness against an instance')
    verify.add_argument('instance')
    verify.add_argument('witness')
    verify.set_defaults(handler=cmd_verify)

    check = commands.add_parser('check', help='well-formedness report and size figures')
    check.add_argument('instance')
    check.set_defaults(handler=cmd_check)

    reduce_cmd = commands.add_parser('reduce', help='(3,B2)-SAT DIMACS to PIC instance')
    reduce_cmd.add_argument('cnf')
    reduce_cmd.add_argument('-o', '--output', help='instance file (default stdout)')
    reduce_cmd.add_argument('--map', help='reduction map sidecar file')
    reduce_cmd.set_defaults(handler=cmd_reduce)

    lift = commands.add_parser('lift', help='assignment to witness through a reduction map')
    lift.add_argument('map')
    lift.add_argument('assignment')
    lift.set_defaults(handler=cmd_lift)

    extract = commands.add_parser('extract', help='witness to assignment through a reduction map')
    extract.add_argument('map')
    extract.add_argument('witness')
    extract.add_argument('--normalize', action='store_true', help='normalise the witness first')
    extract.set_defaults(handler=cmd_extract)

    gen = commands.add_parser('gen', help='seeded random instance or formula')
    gen.add_argument('kind', choices=['pic', 'b2sat'])
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--n-bound', type=int, default=9)
    gen.add_argument('--packs', type=int, default=3)
    gen.add_argument('--max-pack-size', type=int, default=3)
    gen.add_argument('--n', type=int, default=3, help='variables of a (3,B2) formula')
    gen.set_defaults(handler=cmd_gen)

    render = commands.add_parser('render', help='draw an instance as SVG')
    render.add_argument('instance')
    render.add_argument('--witness')
    render.add_argument('-o', '--output', help='SVG file (default stdout)')
    render.set_defaults(handler=cmd_render)

    bench = commands.add_parser('bench', help='time all solvers on a seeded suite')
    bench.add_argument('--count', type=int, default=Config.BENCH_COUNT)
    bench.add_argument('--seed', type=int, default=Config.BENCH_SEED)
    bench.add_argument('--n-bound', type=int, default=Config.BENCH_N_BOUND)
    bench.add_argument('--packs', type=int, default=Config.BENCH_PACKS)
    bench.add_argument('--max-pack-size', type=int, default=Config.BENCH_MAX_PACK_SIZE)
    bench.add_argument('--b2-count', type=int, default=Config.BENCH_B2_COUNT)
    bench.add_argument('--b2-n', type=int, default=Config.BENCH_B2_N)
    bench.add_argument('--parallel', action='store_true', help='one worker thread per solver')
    bench.add_argument('--record', action='store_true', help='store the run in the bench database')
    bench.add_argument('--history', action='store_true', help='list recorded runs and exit')
    bench.add_argument('--db', default=Config.BENCH_DB_PATH)
    bench.set_defaults(handler=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if not Config.validate():
        sys.stderr.write("error: invalid configuration, see the log above\n")
        return EXIT_USAGE
    setup_logging(args.verbose)

    try:
        return args.handler(args)
    except (InternalInvariantError, DecodeError) as e:
        logger.error(f"❌ Internal invariant breach: {e}")
        sys.stderr.write(f"internal error: {e}\n")
        return EXIT_INTERNAL
    except (WorkbenchError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
