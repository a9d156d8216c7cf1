"""Text formats: PIC instances, witnesses, reduction maps, DIMACS CNF and value lines.

All formats are line oriented, UTF-8 and line-feed terminated. `#` starts a
comment line in the workbench's own formats, `c` in DIMACS.

    pic <N> <M>                          sel <i1> ... <iM>
    <c> <lo1> <hi1> ... <loc> <hic>      (one line per pack, c = 0 for an empty pack)

    map <n> <m>
    var <i> <V> <P+1> <P+2> <P-1> <P-2> <j> <k> <l> <h>
"""
import logging
from typing import Iterator, List, Optional, Tuple

from exceptions import InvalidWitnessError, ParseError, PartialValuationError
from pic_core import Interval, Pack, PicInstance, Selection
from reduction import ReductionMap, VariableGadget
from sat_core import Clause, CnfFormula, Literal, Valuation

logger = logging.getLogger(__name__)

MAX_BOUND = 2 ** 63 - 1


def _lines(text: str, comment: str = '#') -> Iterator[Tuple[int, List[str]]]:
    """(line number, tokens) for every non-blank, non-comment line."""
    for number, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith(comment):
            continue
        yield number, stripped.split()


def _int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line, f"{what}: expected an integer, got {token!r}") from None


def _header(lines: Iterator[Tuple[int, List[str]]], keyword: str, arity: int) -> Tuple[int, List[int]]:
    try:
        number, tokens = next(lines)
    except StopIteration:
        raise ParseError(0, f"missing '{keyword}' header") from None
    if tokens[0] != keyword or len(tokens) != arity + 1:
        raise ParseError(number, f"expected header '{keyword}' with {arity} values, got {' '.join(tokens)!r}")
    return number, [_int(token, number, keyword) for token in tokens[1:]]


def parse_pic(text: str) -> PicInstance:
    """Read a `pic` document; every structural fault is a ParseError with its line."""
    lines = _lines(text)
    number, (n_bound, pack_count) = _header(lines, 'pic', 2)
    if not 1 <= n_bound <= MAX_BOUND:
        raise ParseError(number, f"N must lie in 1..2^63-1, got {n_bound}")
    if pack_count < 0:
        raise ParseError(number, f"pack count must be non-negative, got {pack_count}")

    packs = []
    for number, tokens in lines:
        if len(packs) == pack_count:
            raise ParseError(number, f"more than {pack_count} pack lines")
        values = [_int(token, number, 'pack line') for token in tokens]
        count = values[0]
        if count < 0 or len(values) != 1 + 2 * count:
            raise ParseError(number, f"pack announces {count} intervals but carries {len(values) - 1} endpoints")
        intervals = []
        for lo, hi in zip(values[1::2], values[2::2]):
            if lo < 1:
                raise ParseError(number, f"interval [{lo},{hi}]: lo < 1")
            if lo > hi:
                raise ParseError(number, f"interval [{lo},{hi}]: lo > hi")
            if hi > n_bound:
                raise ParseError(number, f"interval [{lo},{hi}]: interval exceeds N={n_bound}")
            interval = Interval(lo, hi)
            if interval in intervals:
                raise ParseError(number, f"duplicate interval {interval} in pack")
            intervals.append(interval)
        packs.append(Pack(tuple(intervals)))

    if len(packs) != pack_count:
        raise ParseError(number, f"header announces {pack_count} packs, found {len(packs)}")
    return PicInstance(n_bound, tuple(packs))


def print_pic(instance: PicInstance) -> str:
    """Canonical `pic` text, one pack per line."""
    lines = [f"pic {instance.n_bound} {instance.pack_count}"]
    for pack in instance.packs:
        lines.append(" ".join([str(len(pack))] + [f"{iv.lo} {iv.hi}" for iv in pack]))
    return "\n".join(lines) + "\n"


def parse_witness(text: str, instance: Optional[PicInstance] = None) -> Selection:
    lines = _lines(text)
    try:
        number, tokens = next(lines)
    except StopIteration:
        raise ParseError(0, "missing 'sel' line") from None
    if tokens[0] != 'sel':
        raise ParseError(number, f"expected 'sel', got {tokens[0]!r}")
    extra = next(lines, None)
    if extra is not None:
        raise ParseError(extra[0], "unexpected content after the 'sel' line")
    selection = Selection(tuple(_int(token, number, 'sel') for token in tokens[1:]))
    if instance is not None:
        try:
            selection.check(instance)
        except InvalidWitnessError as e:
            raise ParseError(number, str(e)) from e
    return selection


def print_witness(selection: Selection) -> str:
    return " ".join(['sel'] + [str(choice) for choice in selection.choices]) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    clauses: List[Clause] = []
    current: List[Literal] = []
    number = 0
    for number, tokens in _lines(text, comment='c'):
        if tokens[0] == '%':
            break
        if tokens[0] == 'p':
            if header is not None:
                raise ParseError(number, "second 'p' line")
            if len(tokens) != 4 or tokens[1] != 'cnf':
                raise ParseError(number, f"bad header {' '.join(tokens)!r}, expected 'p cnf <n> <m>'")
            header = (number, _int(tokens[2], number, 'p cnf'), _int(tokens[3], number, 'p cnf'))
            continue
        if header is None:
            raise ParseError(number, "clause before the 'p cnf' header")
        num_variables = header[1]
        for token in tokens:
            value = _int(token, number, 'clause')
            if value == 0:
                clauses.append(Clause(tuple(current)))
                current = []
            elif abs(value) > num_variables:
                raise ParseError(number, f"variable {abs(value)} exceeds declared {num_variables}")
            else:
                current.append(Literal.from_int(value))

    if header is None:
        raise ParseError(number, "missing 'p cnf' header")
    if current:
        raise ParseError(number, "last clause is not terminated by 0")
    if len(clauses) != header[2]:
        raise ParseError(header[0], f"header announces {header[2]} clauses, found {len(clauses)}")
    return CnfFormula(header[1], tuple(clauses))


def print_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_variables} {formula.num_clauses}"]
    for clause in formula.clauses:
        lines.append(" ".join([str(literal.to_int()) for literal in clause] + ['0']))
    return "\n".join(lines) + "\n"


def parse_map(text: str) -> ReductionMap:
    lines = _lines(text)
    number, (n, m) = _header(lines, 'map', 2)
    gadgets = []
    for number, tokens in lines:
        if tokens[0] != 'var' or len(tokens) != 11:
            raise ParseError(number, f"expected 'var' with 10 values, got {' '.join(tokens)!r}")
        i, v, p1, p2, n1, n2, j, k, l, h = (_int(token, number, 'var') for token in tokens[1:])
        gadgets.append(VariableGadget(i, v, (p1, p2), (n1, n2), (j, k), (l, h)))
    if len(gadgets) != n:
        raise ParseError(number, f"header announces {n} variables, found {len(gadgets)}")
    reduction_map = ReductionMap(n, m, tuple(gadgets))
    violations = reduction_map.validate()
    if violations:
        raise ParseError(number, "inconsistent map: " + "; ".join(violations))
    return reduction_map


def print_map(reduction_map: ReductionMap) -> str:
    lines = [f"map {reduction_map.num_variables} {reduction_map.num_clauses}"]
    for g in reduction_map.gadgets:
        values = (g.variable, g.variable_pack) + g.positive_packs + g.negative_packs \
            + g.positive_clauses + g.negative_clauses
        lines.append(" ".join(['var'] + [str(value) for value in values]))
    return "\n".join(lines) + "\n"


def parse_assignment(text: str, num_variables: Optional[int] = None) -> Valuation:
    """Read SAT-competition value lines (`v 1 -2 3 0`); `c` and `s` lines are skipped."""
    mapping = {}
    number = 0
    for number, tokens in _lines(text, comment='c'):
        if tokens[0] == 's':
            continue
        if tokens[0] != 'v':
            raise ParseError(number, f"expected a 'v' line, got {tokens[0]!r}")
        for token in tokens[1:]:
            value = _int(token, number, 'v')
            if value == 0:
                continue
            if abs(value) in mapping and mapping[abs(value)] != (value > 0):
                raise ParseError(number, f"variable {abs(value)} assigned both ways")
            mapping[abs(value)] = value > 0
    total = max(mapping, default=0) if num_variables is None else num_variables
    try:
        return Valuation.from_mapping(total, mapping)
    except PartialValuationError as e:
        raise PartialValuationError(f"line {number}: {e}") from e


def print_assignment(valuation: Valuation) -> str:
    literals = [str(v if valuation[v] else -v) for v in range(1, valuation.num_variables + 1)]
    return " ".join(['v'] + literals + ['0']) + "\n"
