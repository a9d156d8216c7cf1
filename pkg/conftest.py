"""Shared pytest fixtures: the sample documents under fixtures/ and a point-by-point oracle."""
import itertools
from pathlib import Path

import pytest

from formats import parse_dimacs, parse_map, parse_pic
from pic_core import PicInstance, Selection
from sat_core import CnfFormula, validate_b2

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding='utf-8')


def points_covered(instance: PicInstance, selection: Selection) -> bool:
    """Reference semantics: enumerate every point of [1,N]."""
    covered = set()
    for interval in selection.chosen(instance):
        covered.update(range(interval.lo, interval.hi + 1))
    return covered == set(range(1, instance.n_bound + 1))


def point_oracle(instance: PicInstance) -> bool:
    """Exhaustive product with point sets; only for tiny N."""
    if instance.has_empty_pack():
        return False
    for choices in itertools.product(*(range(1, len(pack) + 1) for pack in instance.packs)):
        if points_covered(instance, Selection(choices)):
            return True
    return False


@pytest.fixture
def fig1() -> PicInstance:
    return parse_pic(fixture_text("fig1.pic"))


@pytest.fixture
def fig2_formula() -> CnfFormula:
    return parse_dimacs(fixture_text("fig2.cnf"))


@pytest.fixture
def fig2_b2(fig2_formula):
    return validate_b2(fig2_formula)


@pytest.fixture
def fig2_map():
    return parse_map(fixture_text("fig2.map"))


@pytest.fixture
def all_true_formula() -> CnfFormula:
    """(3,B2) formula that the all-true valuation satisfies."""
    return CnfFormula.from_ints(3, [[1, 2, -3], [1, -2, 3], [-1, 2, -3], [-1, -2, 3]])
