"""Core model tests: PIC data model, verifier, compression, CNF engine and generators."""
import logging
import random
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import config
from config import Config
from conftest import points_covered
from exceptions import (
    B2ValidationError,
    GeneratorParameterError,
    GuardExceededError,
    InstanceError,
    InvalidWitnessError,
    PartialValuationError,
)
from formats import print_dimacs, print_pic
from generators import GenConfig, gen_random_b2sat, gen_random_pic
from pic_core import Interval, Pack, PicInstance, Selection, compress, is_wellformed, verify_cover
from sat_core import CnfFormula, Valuation, brute_force_sat, dpll_solve, evaluate, validate_b2


# --- pic core -------------------------------------------------------------

def test_fig1_is_wellformed(fig1):
    report = is_wellformed(fig1)
    assert report.ok
    assert fig1.pack_count == 3
    assert fig1.interval_count == 6


def test_interval_exceeding_bound_is_reported():
    instance = PicInstance(5, (Pack((Interval(4, 7),)),))
    report = is_wellformed(instance)
    assert not report.ok
    assert "interval exceeds N" in report.violations[0]
    assert "pack 1" in report.violations[0]


def test_reversed_interval_is_reported():
    report = is_wellformed(PicInstance(3, (Pack((Interval(3, 2),)),)))
    assert any("lo > hi" in v for v in report.violations)


def test_duplicates_rejected_by_build():
    with pytest.raises(InstanceError, match="duplicate"):
        PicInstance.build(5, [[(1, 2), (1, 2)]])


def test_empty_pack_is_wellformed_but_rejects_every_witness():
    instance = PicInstance.build(3, [[(1, 3)], []])
    assert is_wellformed(instance).ok
    with pytest.raises(InvalidWitnessError):
        verify_cover(instance, Selection((1, 1)))


def test_verify_cover_known_witness(fig1):
    assert verify_cover(fig1, Selection((2, 1, 1)))


def test_verify_cover_leaves_gap(fig1):
    # [1,6], [7,7], [4,4] misses 8 and 9
    assert not verify_cover(fig1, Selection((1, 3, 1)))


def test_verify_cover_single_point():
    assert verify_cover(PicInstance.build(1, [[(1, 1)]]), Selection((1,)))


def test_verify_cover_bad_index_is_an_error(fig1):
    with pytest.raises(InvalidWitnessError):
        verify_cover(fig1, Selection((3, 1, 1)))
    with pytest.raises(InvalidWitnessError):
        verify_cover(fig1, Selection((1, 1)))


def test_verify_cover_huge_bound_is_fast():
    instance = PicInstance.build(10 ** 9, [[(1, 4 * 10 ** 8)], [(4 * 10 ** 8 + 1, 10 ** 9)], [(5, 10)]])
    started = time.perf_counter()
    assert verify_cover(instance, Selection((1, 1, 1)))
    assert time.perf_counter() - started < 0.05


@st.composite
def instance_with_selection(draw):
    n_bound = draw(st.integers(min_value=1, max_value=100))
    bounds = st.integers(min_value=1, max_value=n_bound)
    pairs = draw(st.lists(st.tuples(bounds, bounds), min_size=1, max_size=8))
    packs = tuple(Pack((Interval(min(a, b), max(a, b)),)) for a, b in pairs)
    instance = PicInstance(n_bound, packs)
    return instance, Selection((1,) * len(packs))


@given(instance_with_selection())
@settings(max_examples=300, deadline=None)
def test_verify_cover_matches_point_oracle(case):
    instance, selection = case
    assert verify_cover(instance, selection) == points_covered(instance, selection)


def test_compress_single_spanning_interval():
    compressed = compress(PicInstance.build(10 ** 9, [[(1, 10 ** 9)]]))
    assert compressed.segments == (Interval(1, 10 ** 9),)
    assert compressed.instance.packs[0].intervals == (Interval(1, 1),)


def test_compress_leaves_uncoverable_segment():
    compressed = compress(PicInstance.build(100, [[(1, 50)], [(52, 100)]]))
    assert compressed.segments == (Interval(1, 50), Interval(51, 51), Interval(52, 100))
    assert all(2 not in interval for pack in compressed.instance.packs for interval in pack)
    assert compressed.segment_of(51) == 2
    assert compressed.expand(Interval(3, 3)) == Interval(52, 100)


def test_compress_segment_bound_and_membership():
    rng = random.Random(11)
    for seed in range(200):
        instance = gen_random_pic(GenConfig(seed=seed, n_bound=rng.randint(1, 10 ** 6), packs=4, max_pack_size=3))
        compressed = compress(instance)
        assert compressed.segment_count <= 2 * instance.interval_count + 1
        assert compressed.segments[0].lo == 1 and compressed.segments[-1].hi == instance.n_bound
        for original, remapped in zip(instance.packs, compressed.instance.packs):
            for interval, image in zip(original, remapped):
                assert compressed.expand(image) == interval


# --- sat core -------------------------------------------------------------

def test_evaluate_fig2(fig2_formula):
    assert evaluate(fig2_formula, Valuation((1, 1, 0)))
    assert not evaluate(fig2_formula, Valuation((0, 0, 0)))


def test_evaluate_contradiction_and_empty():
    contradiction = CnfFormula.from_ints(1, [[1], [-1]])
    assert not evaluate(contradiction, Valuation((0,)))
    assert not evaluate(contradiction, Valuation((1,)))
    assert evaluate(CnfFormula(2), Valuation((0, 1)))


def test_evaluate_rejects_partial_valuation(fig2_formula):
    with pytest.raises(PartialValuationError):
        evaluate(fig2_formula, Valuation((1, 1)))
    with pytest.raises(PartialValuationError):
        Valuation.from_mapping(3, {1: 1, 2: 0})


def test_validate_b2_fig2(fig2_formula):
    b2 = validate_b2(fig2_formula)
    assert b2.occurrences_of(1).positive == (1, 2)
    assert b2.occurrences_of(1).negative == (3, 4)
    assert b2.occurrences_of(2).positive == (1, 4)
    assert b2.occurrences_of(2).negative == (2, 3)


def test_validate_b2_counts():
    formula = CnfFormula.from_ints(3, [[1, 2, 3], [1, -2, -3], [1, -2, -3], [-1, 2, 3]])
    with pytest.raises(B2ValidationError) as err:
        validate_b2(formula)
    assert any("variable 1 occurs positively 3 times" in v for v in err.value.violations)


def test_validate_b2_repeated_variable():
    with pytest.raises(B2ValidationError) as err:
        validate_b2(CnfFormula.from_ints(2, [[1, 1, 2]]))
    assert any("repeated variable in clause" in v for v in err.value.violations)


def test_dpll_unit_propagation():
    assert dpll_solve(CnfFormula.from_ints(2, [[1, 2], [-1]])) == Valuation((0, 1))


def test_dpll_contradiction_and_empty_clause():
    assert dpll_solve(CnfFormula.from_ints(1, [[1], [-1]])) is None
    assert dpll_solve(CnfFormula.from_ints(2, [[1, 2], []])) is None


def test_dpll_fig2(fig2_formula):
    valuation = dpll_solve(fig2_formula)
    assert valuation is not None and evaluate(fig2_formula, valuation)
    assert dpll_solve(fig2_formula) == valuation


def test_brute_force_sat_basics(fig2_formula):
    assert brute_force_sat(fig2_formula) is not None
    assert brute_force_sat(CnfFormula.from_ints(1, [[1], [-1]])) is None
    assert brute_force_sat(CnfFormula(0)) == Valuation(())


def test_brute_force_sat_guard():
    with pytest.raises(GuardExceededError):
        brute_force_sat(CnfFormula(Config.BRUTE_FORCE_SAT_LIMIT + 1))


def test_dpll_agrees_with_brute_force():
    rng = random.Random(5)
    for _ in range(400):
        n = rng.randint(1, 12)
        clauses = [
            [rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(1, 3))]
            for _ in range(rng.randint(0, 5 * n))
        ]
        formula = CnfFormula.from_ints(n, clauses)
        model = dpll_solve(formula)
        oracle = brute_force_sat(formula)
        assert (model is None) == (oracle is None)
        if model is not None:
            assert evaluate(formula, model)
            assert dpll_solve(formula) == model


# --- generators -----------------------------------------------------------

def test_gen_pic_is_reproducible():
    config = GenConfig(seed=1, n_bound=9, packs=3, max_pack_size=3)
    assert print_pic(gen_random_pic(config)) == print_pic(gen_random_pic(config))


def test_gen_pic_is_wellformed():
    for seed in range(1000):
        instance = gen_random_pic(GenConfig(seed=seed, n_bound=1 + seed % 20, packs=1 + seed % 6, max_pack_size=4))
        assert is_wellformed(instance).ok
        assert all(1 <= len(pack) <= 4 for pack in instance.packs)


def test_gen_pic_unit_bound():
    instance = gen_random_pic(GenConfig(seed=3, n_bound=1, packs=4, max_pack_size=3))
    assert all(pack.intervals == (Interval(1, 1),) for pack in instance.packs)
    assert verify_cover(instance, Selection((1,) * 4))


def test_gen_pic_rejects_bad_parameters():
    with pytest.raises(GeneratorParameterError):
        gen_random_pic(GenConfig(n_bound=0))


def test_gen_b2_shapes():
    for n in (3, 6, 9):
        formula = gen_random_b2sat(GenConfig(seed=n, variables=n))
        assert formula.num_clauses == 4 * n // 3
        assert sum(len(clause) for clause in formula.formula.clauses) == 4 * n


def test_gen_b2_rejects_non_multiple_of_three():
    with pytest.raises(GeneratorParameterError):
        gen_random_b2sat(GenConfig(variables=4))


def test_gen_b2_always_validates_and_reproduces():
    for seed in range(1000):
        config = GenConfig(seed=seed, variables=3 * (1 + seed % 4))
        formula = gen_random_b2sat(config)
        validate_b2(formula.formula)
        assert 3 * formula.num_clauses == 4 * formula.num_variables
    config = GenConfig(seed=7, variables=6)
    assert print_dimacs(gen_random_b2sat(config).formula) == print_dimacs(gen_random_b2sat(config).formula)


# --- configuration --------------------------------------------------------

def test_config_defaults_validate():
    assert Config.validate()


def test_malformed_env_limit_falls_back_and_fails_validation(monkeypatch):
    monkeypatch.setattr(config, 'INVALID_SETTINGS', {})
    monkeypatch.setenv('PIC_BRUTE_FORCE_LIMIT', 'lots')
    assert config._env_int('PIC_BRUTE_FORCE_LIMIT', 5) == 5
    assert config.INVALID_SETTINGS == {'PIC_BRUTE_FORCE_LIMIT': 'lots'}
    assert not Config.validate()


def test_unknown_log_level(monkeypatch):
    monkeypatch.setattr(Config, 'LOG_LEVEL', 'loud')
    assert Config.log_level() == logging.WARNING
    assert not Config.validate()
    monkeypatch.setattr(Config, 'LOG_LEVEL', 'debug')
    assert Config.log_level() == logging.DEBUG
