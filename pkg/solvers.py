"""Exact decision procedures for Packed Interval Covering."""
import asyncio
import logging
import multiprocessing
from dataclasses import dataclass
from multiprocessing.connection import Connection, wait
from typing import Callable, Dict, List, Optional, Set, Tuple

from config import Config
from exceptions import DecodeError, GuardExceededError, InternalInvariantError
from pic_core import CompressedInstance, PicInstance, Selection, compress, verify_cover
from sat_core import Clause, CnfFormula, Literal, Valuation, dpll_solve

logger = logging.getLogger(__name__)

Solver = Callable[[PicInstance], Optional[Selection]]

CONFIGURED_LIMIT = -1


def _checked(instance: PicInstance, selection: Optional[Selection], solver: str) -> Optional[Selection]:
    if selection is not None and not verify_cover(instance, selection):
        raise InternalInvariantError(f"{solver} produced a selection that does not cover [1,{instance.n_bound}]")
    logger.debug(f"{solver}: {'positive' if selection is not None else 'negative'} (N={instance.n_bound}, M={instance.pack_count})")
    return selection


def _segment_mask(lo: int, hi: int) -> int:
    return ((1 << (hi - lo + 1)) - 1) << (lo - 1)


def solve_brute_force(instance: PicInstance, limit: Optional[int] = CONFIGURED_LIMIT) -> Optional[Selection]:
    """Enumerate the Cartesian product of packs in lexicographic witness order.

    Returns exactly the first selection that covers [1,N]. Subtrees are skipped
    only when no completion can cover: a point no remaining pack reaches, or a
    (depth, uncovered set) state already shown dead.

    `limit` bounds the product of pack sizes; CONFIGURED_LIMIT means
    Config.BRUTE_FORCE_PRODUCT_LIMIT and None lifts the guard.
    """
    if instance.has_empty_pack():
        return None
    limit = Config.BRUTE_FORCE_PRODUCT_LIMIT if limit == CONFIGURED_LIMIT else limit
    space = instance.selection_space()
    if limit is not None and space > limit:
        logger.warning(f"⚠️ Brute force refused: {space} selections exceed limit {limit}")
        raise GuardExceededError(f"brute force refuses {space} selections (limit {limit})")

    compressed = compress(instance)
    masks = [[_segment_mask(iv.lo, iv.hi) for iv in pack] for pack in compressed.instance.packs]
    reachable = [0] * (len(masks) + 1)
    for k in range(len(masks) - 1, -1, -1):
        reachable[k] = reachable[k + 1]
        for mask in masks[k]:
            reachable[k] |= mask
    dead: Set[Tuple[int, int]] = set()

    def search(k: int, uncovered: int) -> Optional[List[int]]:
        if k == len(masks):
            return [] if uncovered == 0 else None
        if uncovered & ~reachable[k] or (k, uncovered) in dead:
            return None
        for index, mask in enumerate(masks[k], 1):
            rest = search(k + 1, uncovered & ~mask)
            if rest is not None:
                return [index] + rest
        dead.add((k, uncovered))
        return None

    choices = search(0, (1 << compressed.segment_count) - 1)
    selection = None if choices is None else Selection(tuple(choices))
    return _checked(instance, selection, "brute force")


def solve_backtracking(instance: PicInstance) -> Optional[Selection]:
    """Branch on the leftmost uncovered segment over every (unused pack, covering interval) pair.

    Covered segments always form a prefix, so a state is (used packs, reach);
    states that failed once are not explored again.
    """
    if instance.has_empty_pack():
        return None
    compressed = compress(instance)
    packs = compressed.instance.packs
    total = compressed.segment_count
    dead: Set[Tuple[int, int]] = set()

    def search(used: int, reach: int) -> Optional[Dict[int, int]]:
        if reach >= total:
            return {}
        if (used, reach) in dead:
            return None
        gap = reach + 1
        for k, pack in enumerate(packs):
            if used >> k & 1:
                continue
            for index, interval in enumerate(pack.intervals, 1):
                if gap in interval:
                    rest = search(used | 1 << k, interval.hi)
                    if rest is not None:
                        rest[k] = index
                        return rest
        dead.add((used, reach))
        return None

    picked = search(0, 0)
    if picked is None:
        return _checked(instance, None, "backtracking")
    # Packs not needed for the cover keep their first interval.
    selection = Selection(tuple(picked.get(k, 1) for k in range(len(packs))))
    return _checked(instance, compressed.decompress(selection), "backtracking")


@dataclass(frozen=True)
class CnfEncoding:
    formula: CnfFormula
    selectors: Tuple[Tuple[int, ...], ...]  # selectors[k][i] is the variable of pack k+1, interval i+1
    compressed: CompressedInstance

    def selector(self, pack: int, interval: int) -> int:
        return self.selectors[pack - 1][interval - 1]

    def locate(self, variable: int) -> Tuple[int, int]:
        """(pack, interval) of a selector variable, both 1-based."""
        for k, pack in enumerate(self.selectors, 1):
            for i, selector in enumerate(pack, 1):
                if selector == variable:
                    return k, i
        raise KeyError(variable)


def encode_to_cnf(instance: PicInstance) -> CnfEncoding:
    """Exactly-one selector per pack (at-least-one + pairwise at-most-one) and one coverage clause per segment."""
    compressed = compress(instance)
    selectors = []
    next_variable = 1
    for pack in instance.packs:
        selectors.append(tuple(range(next_variable, next_variable + len(pack))))
        next_variable += len(pack)

    clauses: List[Clause] = []
    for pack in selectors:
        clauses.append(Clause(tuple(Literal(v) for v in pack)))
    for pack in selectors:
        for a in range(len(pack)):
            for b in range(a + 1, len(pack)):
                clauses.append(Clause((Literal(pack[a], False), Literal(pack[b], False))))
    for segment in range(1, compressed.segment_count + 1):
        coverers = [
            Literal(selectors[k][i])
            for k, pack in enumerate(compressed.instance.packs)
            for i, interval in enumerate(pack.intervals)
            if segment in interval
        ]
        clauses.append(Clause(tuple(coverers)))

    formula = CnfFormula(next_variable - 1, tuple(clauses))
    logger.debug(f"Encoded PIC instance: {formula.num_variables} selectors, {formula.num_clauses} clauses")
    return CnfEncoding(formula, tuple(selectors), compressed)


def decode_cnf_model(encoding: CnfEncoding, valuation: Valuation) -> Selection:
    """Turn a model of the encoding back into a selection; DecodeError unless each pack has one true selector."""
    choices = []
    for k, pack in enumerate(encoding.selectors, 1):
        picked = [i for i, selector in enumerate(pack, 1) if valuation[selector]]
        if len(picked) != 1:
            raise DecodeError(f"pack {k} has {len(picked)} true selectors, expected exactly one")
        choices.append(picked[0])
    return Selection(tuple(choices))


def solve_via_sat(instance: PicInstance) -> Optional[Selection]:
    """Encode, run DPLL and decode."""
    encoding = encode_to_cnf(instance)
    model = dpll_solve(encoding.formula)
    selection = None if model is None else decode_cnf_model(encoding, model)
    return _checked(instance, selection, "sat")


SOLVERS: Dict[str, Solver] = {
    'brute': solve_brute_force,
    'backtrack': solve_backtracking,
    'sat': solve_via_sat,
}


def _process_context():
    """Fork where available so solvers need not be importable by name in the child."""
    if 'fork' in multiprocessing.get_all_start_methods():
        return multiprocessing.get_context('fork')
    return multiprocessing.get_context()


def _portfolio_worker(solver: Solver, instance: PicInstance, sender: Connection) -> None:
    """Child process body: run one solver and send back (status, payload)."""
    try:
        result = ('ok', solver(instance))
    except GuardExceededError as e:
        result = ('declined', str(e))
    except InternalInvariantError as e:
        result = ('breach', str(e))
    except Exception as e:
        result = ('failed', f"{type(e).__name__}: {e}")
    sender.send(result)
    sender.close()


async def solve_portfolio(instance: PicInstance, solvers: Optional[Dict[str, Solver]] = None) -> Tuple[str, Optional[Selection]]:
    """Race the solvers in child processes; the first verdict wins and the rest are terminated.

    Returns (solver name, selection). A solver that declines with
    GuardExceededError, raises any other non-invariant exception or dies is
    skipped while another can still answer. An InternalInvariantError from a
    solver is raised at once. If every solver declines, the first
    GuardExceededError is re-raised.
    """
    solvers = solvers or SOLVERS
    context = _process_context()
    workers: Dict[Connection, Tuple[str, multiprocessing.process.BaseProcess]] = {}
    for name, solver in solvers.items():
        receiver, sender = context.Pipe(duplex=False)
        process = context.Process(target=_portfolio_worker, args=(solver, instance, sender),
                                  name=f"portfolio-{name}", daemon=True)
        process.start()
        sender.close()
        workers[receiver] = (name, process)

    pending = dict(workers)
    declined: List[GuardExceededError] = []
    try:
        while pending:
            ready = await asyncio.to_thread(wait, list(pending))
            for receiver in ready:
                name, process = pending.pop(receiver)
                try:
                    status, payload = receiver.recv()
                except EOFError:
                    status, payload = 'failed', "worker exited without a verdict"
                if status == 'ok':
                    logger.info(f"🏁 Portfolio won by {name}")
                    return name, _checked(instance, payload, name)
                if status == 'breach':
                    raise InternalInvariantError(f"{name}: {payload}")
                if status == 'declined':
                    declined.append(GuardExceededError(payload))
                    logger.info(f"Portfolio: {name} declined ({payload})")
                else:
                    logger.warning(f"⚠️ Portfolio: {name} failed ({payload})")
    finally:
        for receiver, (name, process) in workers.items():
            if process.is_alive():
                logger.debug(f"Portfolio: terminating {name}")
                process.terminate()
            process.join()
            receiver.close()
    raise declined[0] if declined else InternalInvariantError("portfolio finished without a verdict")
