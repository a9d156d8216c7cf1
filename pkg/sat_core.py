"""CNF formulas, the (3,B2) restriction, a DPLL engine and a brute-force oracle."""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from config import Config
from exceptions import B2ValidationError, GuardExceededError, PartialValuationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Literal:
    variable: int
    positive: bool = True

    @classmethod
    def from_int(cls, value: int) -> 'Literal':
        if value == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(value), value > 0)

    def to_int(self) -> int:
        return self.variable if self.positive else -self.variable

    def __str__(self) -> str:
        return f"p{self.variable}" if self.positive else f"¬p{self.variable}"


@dataclass(frozen=True)
class Clause:
    literals: Tuple[Literal, ...]

    @classmethod
    def of(cls, *values: int) -> 'Clause':
        return cls(tuple(Literal.from_int(v) for v in values))

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)


@dataclass(frozen=True)
class CnfFormula:
    """Conjunction of clauses over variables 1..num_variables.

    Empty clauses are allowed; they make the formula unsatisfiable.
    """
    num_variables: int
    clauses: Tuple[Clause, ...] = ()

    @classmethod
    def from_ints(cls, num_variables: int, clauses: Iterable[Iterable[int]]) -> 'CnfFormula':
        formula = cls(num_variables, tuple(Clause.of(*clause) for clause in clauses))
        for clause in formula.clauses:
            for literal in clause:
                if not 1 <= literal.variable <= num_variables:
                    raise ValueError(f"variable {literal.variable} outside 1..{num_variables}")
        return formula

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def to_ints(self) -> List[List[int]]:
        return [[literal.to_int() for literal in clause] for clause in self.clauses]


@dataclass(frozen=True)
class Valuation:
    """Total assignment of 0/1 to variables 1..n, stored at position variable-1."""
    values: Tuple[int, ...]

    @classmethod
    def from_mapping(cls, num_variables: int, mapping: Mapping[int, int]) -> 'Valuation':
        missing = [v for v in range(1, num_variables + 1) if v not in mapping]
        if missing:
            raise PartialValuationError(f"valuation undefined on variables {missing}")
        extra = [v for v in mapping if not 1 <= v <= num_variables]
        if extra:
            raise PartialValuationError(f"valuation assigns unknown variables {sorted(extra)}")
        return cls(tuple(1 if mapping[v] else 0 for v in range(1, num_variables + 1)))

    @property
    def num_variables(self) -> int:
        return len(self.values)

    def __getitem__(self, variable: int) -> int:
        return self.values[variable - 1]

    def satisfies(self, literal: Literal) -> bool:
        return bool(self.values[literal.variable - 1]) == literal.positive


@dataclass(frozen=True)
class Occurrences:
    """Clause indices (1-based) of a variable's two positive and two negative occurrences."""
    positive: Tuple[int, int]
    negative: Tuple[int, int]


@dataclass(frozen=True)
class B2Formula:
    formula: CnfFormula
    occurrences: Tuple[Occurrences, ...]

    @property
    def num_variables(self) -> int:
        return self.formula.num_variables

    @property
    def num_clauses(self) -> int:
        return self.formula.num_clauses

    def occurrences_of(self, variable: int) -> Occurrences:
        return self.occurrences[variable - 1]


def evaluate(formula: CnfFormula, valuation: Valuation) -> bool:
    """True iff every clause holds a literal the valuation satisfies."""
    if valuation.num_variables != formula.num_variables:
        raise PartialValuationError(
            f"valuation covers {valuation.num_variables} variables, formula has {formula.num_variables}")
    return all(any(valuation.satisfies(literal) for literal in clause) for clause in formula.clauses)


def validate_b2(formula: CnfFormula) -> B2Formula:
    """Check the (3,B2) restriction and index every variable's occurrences."""
    violations = []
    positive: Dict[int, List[int]] = {v: [] for v in range(1, formula.num_variables + 1)}
    negative: Dict[int, List[int]] = {v: [] for v in range(1, formula.num_variables + 1)}

    for j, clause in enumerate(formula.clauses, 1):
        if len(clause) != 3:
            violations.append(f"clause {j} has {len(clause)} literals, expected 3")
        variables = [literal.variable for literal in clause]
        if len(set(variables)) != len(variables):
            violations.append(f"clause {j}: repeated variable in clause")
        for literal in clause:
            if not 1 <= literal.variable <= formula.num_variables:
                violations.append(f"clause {j}: variable {literal.variable} outside 1..{formula.num_variables}")
                continue
            (positive if literal.positive else negative)[literal.variable].append(j)

    for v in range(1, formula.num_variables + 1):
        if len(positive[v]) != 2:
            violations.append(f"variable {v} occurs positively {len(positive[v])} times, expected 2")
        if len(negative[v]) != 2:
            violations.append(f"variable {v} occurs negatively {len(negative[v])} times, expected 2")

    if violations:
        raise B2ValidationError(violations)

    # Clauses are scanned in order, so each pair is already j < k.
    occurrences = tuple(
        Occurrences((positive[v][0], positive[v][1]), (negative[v][0], negative[v][1]))
        for v in range(1, formula.num_variables + 1)
    )
    return B2Formula(formula, occurrences)


def _force_literal(clauses: List[List[int]], literal: int) -> List[List[int]]:
    return [[lit for lit in clause if lit != -literal] for clause in clauses if literal not in clause]


def _unit_propagate(clauses, assignment):
    while True:
        unit = next((clause[0] for clause in clauses if len(clause) == 1), None)
        if unit is None:
            return clauses, assignment
        assignment[abs(unit)] = unit > 0
        clauses = _force_literal(clauses, unit)
        if any(not clause for clause in clauses):
            return None, assignment


def _eliminate_pure_literals(clauses, assignment):
    literals = {lit for clause in clauses for lit in clause}
    for lit in sorted(literals, key=abs):
        if -lit not in literals:
            assignment[abs(lit)] = lit > 0
            clauses = _force_literal(clauses, lit)
    return clauses


def _dpll(clauses: List[List[int]], assignment: Dict[int, bool]) -> Optional[Dict[int, bool]]:
    if any(not clause for clause in clauses):
        return None
    clauses, assignment = _unit_propagate(clauses, assignment)
    if clauses is None:
        return None
    clauses = _eliminate_pure_literals(clauses, assignment)
    if not clauses:
        return assignment

    variable = min(abs(lit) for clause in clauses for lit in clause)
    for literal in (variable, -variable):
        result = _dpll(_force_literal(clauses, literal), {**assignment, variable: literal > 0})
        if result is not None:
            return result
    return None


def dpll_solve(formula: CnfFormula) -> Optional[Valuation]:
    """DPLL with unit propagation and pure-literal elimination.

    Branches on the lowest unassigned variable, positive first; variables left
    unconstrained are set to 0, so the result is deterministic.
    """
    assignment = _dpll(formula.to_ints(), {})
    if assignment is None:
        logger.debug(f"DPLL: UNSAT ({formula.num_variables} vars, {formula.num_clauses} clauses)")
        return None
    valuation = Valuation(tuple(1 if assignment.get(v) else 0 for v in range(1, formula.num_variables + 1)))
    logger.debug(f"DPLL: SAT ({formula.num_variables} vars, {formula.num_clauses} clauses)")
    return valuation


def brute_force_sat(formula: CnfFormula, limit: Optional[int] = None) -> Optional[Valuation]:
    """First satisfying valuation in lexicographic order (all-zero first), or None."""
    limit = Config.BRUTE_FORCE_SAT_LIMIT if limit is None else limit
    if formula.num_variables > limit:
        raise GuardExceededError(f"brute force refuses {formula.num_variables} variables (limit {limit})")
    for values in itertools.product((0, 1), repeat=formula.num_variables):
        valuation = Valuation(values)
        if evaluate(formula, valuation):
            return valuation
    return None
