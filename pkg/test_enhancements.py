"""Text formats, SVG rendering, the bench runner, its history store and the solver portfolio."""
import asyncio
import random
import re
import time

import pytest

from bench import BenchSuite, build_cases, format_report, run_bench, suite_record
from conftest import fixture_text
from database import BenchDatabase
from exceptions import GuardExceededError, InternalInvariantError, ParseError, PartialValuationError, SolverDisagreementError
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
from pic_core import Interval, PicInstance, Selection, verify_cover
from reduction import reduce
from sat_core import Valuation
from solvers import SOLVERS, solve_backtracking, solve_portfolio
from svg_render import STYLE, render_svg


# --- formats --------------------------------------------------------------

def test_pic_fixture_reprints_exactly():
    for name in ("fig1.pic", "fig2.pic"):
        text = fixture_text(name)
        assert print_pic(parse_pic(text)) == text


def test_pic_empty_pack_and_comments():
    instance = parse_pic(fixture_text("empty_pack.pic"))
    assert instance.packs[0].intervals == (Interval(1, 5),)
    assert len(instance.packs[1]) == 0
    assert print_pic(instance) == "pic 5 2\n1 1 5\n0\n"


def test_generated_documents_reparse():
    rng = random.Random(8)
    for seed in range(1000):
        instance = gen_random_pic(GenConfig(seed=seed, n_bound=1 + seed * 7919, packs=1 + seed % 7, max_pack_size=4))
        assert parse_pic(print_pic(instance)) == instance
        selection = Selection(tuple(rng.randint(1, len(pack)) for pack in instance.packs))
        assert parse_witness(print_witness(selection), instance) == selection
        formula = gen_random_b2sat(GenConfig(seed=seed, variables=3 * (1 + seed % 5)))
        assert parse_dimacs(print_dimacs(formula.formula)) == formula.formula
        _, reduction_map = reduce(formula)
        assert parse_map(print_map(reduction_map)) == reduction_map


@pytest.mark.parametrize("text, line, fragment", [
    ("pic 5 1\n1 0 3\n", 2, "lo < 1"),
    ("pic 5 1\n# comment\n1 4 7\n", 3, "exceeds N=5"),
    ("pic 5 1\n1 4 2\n", 2, "lo > hi"),
    ("pic 5 1\n2 1 2 1 2\n", 2, "duplicate"),
    ("pic 5 1\n2 1 2\n", 2, "announces 2 intervals"),
    ("pic 5 2\n1 1 5\n", 2, "found 1"),
    ("pic 5 1\n1 1 5\n1 1 5\n", 3, "more than 1"),
    ("pic 0 1\n1 1 1\n", 1, "N must lie"),
    ("pac 5 1\n", 1, "expected header 'pic'"),
    ("pic 5 x\n", 1, "expected an integer"),
])
def test_pic_parse_errors(text, line, fragment):
    with pytest.raises(ParseError) as err:
        parse_pic(text)
    assert err.value.line == line
    assert fragment in str(err.value)


def test_witness_parse(fig1):
    assert parse_witness(fixture_text("fig1.sel"), fig1) == Selection((2, 1, 1))
    assert print_witness(Selection((2, 1, 1))) == fixture_text("fig1.sel")


@pytest.mark.parametrize("text", ["sel 1 1\n", "sel 3 1 1\n", "sel 1 1 0\n", "choose 1 1 1\n", "sel 1 1 1\nsel 1 1 1\n", ""])
def test_witness_parse_errors(fig1, text):
    with pytest.raises(ParseError):
        parse_witness(text, fig1)


def test_dimacs_comments_and_terminator():
    formula = parse_dimacs("c generated\np cnf 3 2\n1 -2\n3 0\nc mid\n-1 0\n%\n0\n")
    assert formula.to_ints() == [[1, -2, 3], [-1]]


def test_dimacs_empty_clause():
    formula = parse_dimacs("p cnf 1 2\n1 0\n0\n")
    assert formula.to_ints() == [[1], []]
    assert print_dimacs(formula) == "p cnf 1 2\n1 0\n0\n"


@pytest.mark.parametrize("text, line, fragment", [
    ("p cnf 2 2\n1 2 0\n", 1, "announces 2 clauses"),
    ("p cnf 2 1\n1 3 0\n", 2, "exceeds declared 2"),
    ("p cnf 2 1\n1 2\n", 2, "not terminated"),
    ("1 2 0\n", 1, "before the 'p cnf' header"),
    ("p sat 2 1\n1 0\n", 1, "bad header"),
])
def test_dimacs_parse_errors(text, line, fragment):
    with pytest.raises(ParseError) as err:
        parse_dimacs(text)
    assert err.value.line == line
    assert fragment in str(err.value)


def test_map_parse_errors():
    with pytest.raises(ParseError, match="announces 3 variables"):
        parse_map("map 3 4\nvar 1 1 4 5 6 7 1 2 3 4\n")
    with pytest.raises(ParseError, match="10 values"):
        parse_map("map 3 4\nvar 1 1 4 5 6 7 1 2 3\n")
    broken = fixture_text("fig2.map").replace("var 3 3 12 13 14 15 1 4 2 3", "var 3 3 12 13 14 15 1 4 2 4")
    with pytest.raises(ParseError, match="inconsistent map"):
        parse_map(broken)


def test_assignment_lines():
    assert parse_assignment(fixture_text("fig2_satisfying.assign")) == Valuation((1, 1, 0))
    assert parse_assignment("s SATISFIABLE\nv 1 2\nv -3 0\n", 3) == Valuation((1, 1, 0))
    assert print_assignment(Valuation((1, 1, 0))) == fixture_text("fig2_satisfying.assign")


def test_assignment_errors():
    with pytest.raises(PartialValuationError, match="line 1"):
        parse_assignment("v 1 2 0\n", 3)
    with pytest.raises(ParseError, match="both ways"):
        parse_assignment("v 1 -1 0\n")
    with pytest.raises(ParseError):
        parse_assignment("x 1 0\n")


# --- rendering ------------------------------------------------------------

def _pack_labels(svg):
    return re.findall(r">P(\d+)</text>", svg)


def test_render_fig1(fig1):
    svg = render_svg(fig1)
    assert svg.startswith('<?xml version="1.0"')
    assert svg.rstrip().endswith("</svg>")
    assert _pack_labels(svg) == ["1", "2", "3"]
    assert svg.count("<circle") == 2  # [7,7] and [4,4]
    assert STYLE['chosen_color'] not in svg
    assert render_svg(fig1) == svg


def test_render_highlights_witness(fig1):
    svg = render_svg(fig1, Selection((2, 1, 1)))
    assert svg.count(f'fill="{STYLE["chosen_color"]}"') == 3


def test_render_fig2(fig2_b2):
    instance, _ = reduce(fig2_b2)
    svg = render_svg(instance)
    assert len(_pack_labels(svg)) == 15
    assert svg.count("<circle") == 24


def test_render_huge_bound_uses_segments():
    half = 5 * 10 ** 8
    instance = PicInstance.build(10 ** 9, [[(1, half)], [(half + 1, 10 ** 9), (7, 7)]])
    svg = render_svg(instance)
    assert ">1-6<" in svg
    assert f">{half + 1}-{10 ** 9}<" in svg
    assert ">7<" in svg
    assert svg.count("<text") < 20


# --- bench ----------------------------------------------------------------

SMALL_SUITE = BenchSuite(count=25, seed=3, n_bound=8, packs=4, max_pack_size=3, b2_count=3, b2_n=3)


def test_bench_cases_are_reproducible():
    first = build_cases(SMALL_SUITE)
    second = build_cases(SMALL_SUITE)
    assert [print_pic(c.instance) for c in first] == [print_pic(c.instance) for c in second]
    assert len(first) == 28
    assert [c.expected for c in first[25:]] == [True, True, True]


def test_bench_runs_all_solvers():
    report = asyncio.run(run_bench(SMALL_SUITE))
    assert [row.solver for row in report.rows] == list(SOLVERS)
    for row in report.rows:
        assert row.instances + row.skipped == 28
    verdicts = {(row.positive, row.negative) for row in report.rows}
    assert len(verdicts) == 1
    text = format_report(report)
    assert text.splitlines()[0] == "solver\tinstances\tpositive\tnegative\tskipped\ttotal_seconds\tmean_ms"
    assert text.splitlines()[-1] == "# agreement ok on 28 instances"


def test_bench_parallel_matches_sequential():
    sequential = asyncio.run(run_bench(SMALL_SUITE))
    parallel = asyncio.run(run_bench(SMALL_SUITE, parallel=True))
    assert [r.verdicts for r in sequential.rows] == [r.verdicts for r in parallel.rows]


def test_bench_detects_disagreement():
    liars = {'backtrack': solve_backtracking, 'always-negative': lambda instance: None}
    with pytest.raises(SolverDisagreementError) as err:
        asyncio.run(run_bench(SMALL_SUITE, solvers=liars))
    assert err.value.verdicts['always-negative'] is False


def test_bench_history(tmp_path):
    async def scenario():
        database = BenchDatabase(str(tmp_path / "history" / "bench.db"))
        await database.init_db()
        report = await run_bench(SMALL_SUITE)
        first = await database.record_run(suite_record(SMALL_SUITE), report.cases, True,
                                          [row.as_record() for row in report.rows])
        second = await database.record_run({'count': 1}, 1, True, [])
        return first, second, await database.recent_runs(5)

    first, second, runs = asyncio.run(scenario())
    assert second > first
    assert [run['id'] for run in runs] == [second, first]
    assert runs[1]['suite']['seed'] == 3
    assert runs[1]['agreement'] is True
    assert [row['solver'] for row in runs[1]['results']] == list(SOLVERS)
    assert runs[0]['results'] == []


# --- portfolio ------------------------------------------------------------

def test_portfolio_answers_fig1(fig1):
    name, selection = asyncio.run(solve_portfolio(fig1))
    assert name in SOLVERS
    assert verify_cover(fig1, selection)


def test_portfolio_negative():
    instance = PicInstance.build(3, [[(1, 2)], [(1, 1)]])
    _, selection = asyncio.run(solve_portfolio(instance))
    assert selection is None


def _refuse(instance):
    raise GuardExceededError("too big")


def test_portfolio_skips_refusing_solver(fig1):
    name, selection = asyncio.run(solve_portfolio(fig1, {'refuse': _refuse, 'backtrack': solve_backtracking}))
    assert name == 'backtrack'
    assert selection == Selection((2, 1, 1))


def test_portfolio_all_refuse(fig1):
    with pytest.raises(GuardExceededError):
        asyncio.run(solve_portfolio(fig1, {'refuse': _refuse}))


def _sleep_then_decline(instance):
    time.sleep(30)
    return None


def _explode(instance):
    raise ValueError("solver bug")


def _breach(instance):
    raise InternalInvariantError("broken construction")


def test_portfolio_does_not_wait_for_slow_solver():
    instance = PicInstance.build(1, [[(1, 1)]])
    started = time.perf_counter()
    name, selection = asyncio.run(solve_portfolio(instance, {'fast': solve_backtracking, 'slow': _sleep_then_decline}))
    assert (name, selection) == ('fast', Selection((1,)))
    assert time.perf_counter() - started < 10


def test_portfolio_skips_crashing_solver(fig1):
    name, selection = asyncio.run(solve_portfolio(fig1, {'explode': _explode, 'backtrack': solve_backtracking}))
    assert name == 'backtrack'
    assert verify_cover(fig1, selection)


def test_portfolio_raises_invariant_breach(fig1):
    with pytest.raises(InternalInvariantError, match="broken construction"):
        asyncio.run(solve_portfolio(fig1, {'breach': _breach}))
