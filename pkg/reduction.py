"""Polynomial reduction from (3,B2)-SAT to Packed Interval Covering, with witness translation both ways.

Layout of the reduced instance for n variables and m clauses (N = 4n + m):

    [1, 4n]        truth-value zone: T_i = [4i-3, 4i-2], F_i = [4i-1, 4i]
    [4n+1, 4n+m]   clause tokens: S_x = {4n + x}

Packs come in a fixed order: the variable packs V_1..V_n, then for each
variable its four clause packs P+1, P+2, P-1, P-2. Each clause pack lists
its variable-side singleton first and its clause token second.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from typing import List, Tuple

from exceptions import (
    InternalInvariantError,
    InvalidWitnessError,
    NotCoveringError,
    NotNormalizedError,
    PartialValuationError,
)
from pic_core import Interval, Pack, PicInstance, Selection, coverage_counts, verify_cover
from sat_core import B2Formula, Clause, CnfFormula, Literal, Valuation, evaluate, validate_b2

logger = logging.getLogger(__name__)

# Within-pack positions
TRUE_CHOICE = 1   # T_i in a variable pack
FALSE_CHOICE = 2  # F_i in a variable pack
SINGLETON_CHOICE = 1
TOKEN_CHOICE = 2


@dataclass(frozen=True)
class VariableGadget:
    """Packs and occurrence clauses attached to one variable (all indices 1-based)."""
    variable: int
    variable_pack: int
    positive_packs: Tuple[int, int]
    negative_packs: Tuple[int, int]
    positive_clauses: Tuple[int, int]  # j < k
    negative_clauses: Tuple[int, int]  # l < h

    @property
    def true_interval(self) -> Interval:
        return Interval(4 * self.variable - 3, 4 * self.variable - 2)

    @property
    def false_interval(self) -> Interval:
        return Interval(4 * self.variable - 1, 4 * self.variable)

    def clause_packs(self) -> List[Tuple[int, int, int]]:
        """(pack index, variable-side point, clause index) for P+1, P+2, P-1, P-2."""
        base = 4 * self.variable
        return [
            (self.positive_packs[0], base - 3, self.positive_clauses[0]),
            (self.positive_packs[1], base - 2, self.positive_clauses[1]),
            (self.negative_packs[0], base - 1, self.negative_clauses[0]),
            (self.negative_packs[1], base, self.negative_clauses[1]),
        ]


@dataclass(frozen=True)
class ReductionMap:
    num_variables: int
    num_clauses: int
    gadgets: Tuple[VariableGadget, ...]

    @property
    def n_bound(self) -> int:
        return 4 * self.num_variables + self.num_clauses

    @property
    def pack_count(self) -> int:
        return 5 * self.num_variables

    def token(self, clause: int) -> int:
        return 4 * self.num_variables + clause

    def gadget(self, variable: int) -> VariableGadget:
        return self.gadgets[variable - 1]

    def validate(self) -> List[str]:
        """Structural invariants; returns the list of violations."""
        violations = []
        n, m = self.num_variables, self.num_clauses
        if 3 * m != 4 * n:
            violations.append(f"3m = {3 * m} differs from 4n = {4 * n}")
        if [g.variable for g in self.gadgets] != list(range(1, n + 1)):
            violations.append("variables must be listed as 1..n in order")
        packs = []
        for g in self.gadgets:
            packs.append(g.variable_pack)
            packs.extend(g.positive_packs + g.negative_packs)
        if sorted(packs) != list(range(1, 5 * n + 1)):
            violations.append(f"pack indices are not a permutation of 1..{5 * n}")
        tokens: Counter = Counter()
        for g in self.gadgets:
            for label, (a, b) in (('positive', g.positive_clauses), ('negative', g.negative_clauses)):
                if not a < b:
                    violations.append(f"variable {g.variable}: {label} clauses {a},{b} not increasing")
                for x in (a, b):
                    if not 1 <= x <= m:
                        violations.append(f"variable {g.variable}: clause {x} outside 1..{m}")
                tokens.update((a, b))
        for x in range(1, m + 1):
            if tokens[x] != 3:
                violations.append(f"clause token {x} appears in {tokens[x]} clause packs, expected 3")
        return violations

    def to_instance(self) -> PicInstance:
        packs: List[Pack] = [Pack()] * self.pack_count
        for g in self.gadgets:
            packs[g.variable_pack - 1] = Pack((g.true_interval, g.false_interval))
            for pack_index, point, clause in g.clause_packs():
                token = self.token(clause)
                packs[pack_index - 1] = Pack((Interval(point, point), Interval(token, token)))
        return PicInstance(self.n_bound, tuple(packs))

    def to_formula(self) -> CnfFormula:
        """Source formula, literals inside each clause ordered by variable."""
        literals: List[List[Literal]] = [[] for _ in range(self.num_clauses)]
        for g in self.gadgets:
            for x in g.positive_clauses:
                literals[x - 1].append(Literal(g.variable, True))
            for x in g.negative_clauses:
                literals[x - 1].append(Literal(g.variable, False))
        return CnfFormula(self.num_variables, tuple(Clause(tuple(c)) for c in literals))


def reduce(formula: B2Formula) -> Tuple[PicInstance, ReductionMap]:
    """Build the reduced instance and its map; a plain CnfFormula is validated as (3,B2) first."""
    if not isinstance(formula, B2Formula):
        formula = validate_b2(formula)
    n, m = formula.num_variables, formula.num_clauses
    gadgets = []
    for i in range(1, n + 1):
        occurrences = formula.occurrences_of(i)
        first_clause_pack = n + 4 * (i - 1) + 1
        gadgets.append(VariableGadget(
            variable=i,
            variable_pack=i,
            positive_packs=(first_clause_pack, first_clause_pack + 1),
            negative_packs=(first_clause_pack + 2, first_clause_pack + 3),
            positive_clauses=occurrences.positive,
            negative_clauses=occurrences.negative,
        ))
    reduction_map = ReductionMap(n, m, tuple(gadgets))
    violations = reduction_map.validate()
    if violations:
        raise InternalInvariantError("reduction map broken: " + "; ".join(violations))
    instance = reduction_map.to_instance()
    logger.info(f"🔧 Reduced formula (n={n}, m={m}) to PIC instance N={instance.n_bound}, M={instance.pack_count}")
    return instance, reduction_map


def lift_valuation(reduction_map: ReductionMap, valuation: Valuation) -> Selection:
    """Forward direction: a valuation becomes a selection, covering iff the valuation satisfies."""
    if valuation.num_variables != reduction_map.num_variables:
        raise PartialValuationError(
            f"valuation covers {valuation.num_variables} variables, map has {reduction_map.num_variables}")
    choices = [0] * reduction_map.pack_count
    for g in reduction_map.gadgets:
        truth = valuation[g.variable]
        # The true side hands its packs' tokens over; the other side fills its own points.
        choices[g.variable_pack - 1] = TRUE_CHOICE if truth else FALSE_CHOICE
        for pack_index in g.positive_packs:
            choices[pack_index - 1] = TOKEN_CHOICE if truth else SINGLETON_CHOICE
        for pack_index in g.negative_packs:
            choices[pack_index - 1] = SINGLETON_CHOICE if truth else TOKEN_CHOICE
    return Selection(tuple(choices))


def _variable_zone_counts(reduction_map: ReductionMap, selection: Selection) -> List[int]:
    instance = reduction_map.to_instance()
    return coverage_counts(instance, selection, range(1, 4 * reduction_map.num_variables + 1))


def _require_cover(reduction_map: ReductionMap, selection: Selection) -> None:
    instance = reduction_map.to_instance()
    try:
        covering = verify_cover(instance, selection)
    except InvalidWitnessError as e:
        raise NotCoveringError(f"selection does not fit the reduced instance: {e}") from e
    if not covering:
        raise NotCoveringError("selection does not cover [1,N]")


def normalize_selection(reduction_map: ReductionMap, selection: Selection) -> Selection:
    """Switch clause packs to their token wherever the chosen variable interval already covers their point.

    Afterwards every point of [1,4n] is covered exactly once; variable packs are never touched.
    """
    _require_cover(reduction_map, selection)
    clause_packs = sorted(
        (pack_index, point, g)
        for g in reduction_map.gadgets
        for pack_index, point, _ in g.clause_packs()
    )
    normalized = selection
    for pack_index, point, g in clause_packs:
        chosen = g.true_interval if normalized.choices[g.variable_pack - 1] == TRUE_CHOICE else g.false_interval
        if point in chosen and normalized.choices[pack_index - 1] == SINGLETON_CHOICE:
            logger.debug(f"Normalising pack {pack_index}: point {point} already covered by {chosen}")
            normalized = normalized.replace(pack_index, TOKEN_CHOICE)

    counts = _variable_zone_counts(reduction_map, normalized)
    if any(count != 1 for count in counts):
        raise InternalInvariantError(f"normalisation left coverage counts {counts} on [1,4n]")
    return normalized


def extract_valuation(reduction_map: ReductionMap, selection: Selection) -> Valuation:
    """Backward direction: p_i is true iff T_i is chosen in V_i."""
    _require_cover(reduction_map, selection)
    counts = _variable_zone_counts(reduction_map, selection)
    doubled = [point for point, count in enumerate(counts, 1) if count != 1]
    if doubled:
        raise NotNormalizedError(f"points {doubled} of [1,4n] are not covered exactly once")

    valuation = Valuation(tuple(
        1 if selection.choices[g.variable_pack - 1] == TRUE_CHOICE else 0
        for g in reduction_map.gadgets
    ))
    if not evaluate(reduction_map.to_formula(), valuation):
        raise InternalInvariantError("extracted valuation does not satisfy the source formula")
    return valuation
