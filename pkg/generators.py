"""Seeded random generators for PIC instances and (3,B2)-SAT formulas.

Randomness comes from `random.Random(seed)` (Mersenne Twister) and nothing
else, so a (seed, parameters) pair always yields the same document.
"""
import logging
import random
from dataclasses import dataclass
from typing import List, Optional

from config import Config
from exceptions import GeneratorParameterError
from pic_core import Interval, Pack, PicInstance
from sat_core import B2Formula, CnfFormula, validate_b2

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    n_bound: int = 9
    packs: int = 3
    max_pack_size: int = 3
    variables: int = 3

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise GeneratorParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def rng(self) -> random.Random:
        return random.Random(self.seed)


def gen_random_pic(config: GenConfig, rng: Optional[random.Random] = None) -> PicInstance:
    """Pack sizes uniform in [1, max_pack_size]; endpoints uniform with lo <= hi <= N; no duplicates in a pack."""
    if config.n_bound < 1 or config.packs < 1 or config.max_pack_size < 1:
        raise GeneratorParameterError(
            f"need N >= 1, M >= 1 and max pack size >= 1, got {config.n_bound}, {config.packs}, {config.max_pack_size}")
    rng = rng or config.rng()
    distinct_intervals = config.n_bound * (config.n_bound + 1) // 2

    packs = []
    for _ in range(config.packs):
        size = min(rng.randint(1, config.max_pack_size), distinct_intervals)
        intervals: List[Interval] = []
        while len(intervals) < size:
            a, b = rng.randint(1, config.n_bound), rng.randint(1, config.n_bound)
            interval = Interval(min(a, b), max(a, b))
            if interval not in intervals:
                intervals.append(interval)
        packs.append(Pack(tuple(intervals)))
    return PicInstance(config.n_bound, tuple(packs))


def _bad_triples(slots: List[int]) -> List[int]:
    """Indices of clauses (triples of slots) that repeat a variable."""
    return [t for t in range(len(slots) // 3) if len({abs(lit) for lit in slots[3 * t:3 * t + 3]}) < 3]


def gen_random_b2sat(config: GenConfig, rng: Optional[random.Random] = None) -> B2Formula:
    """Shuffle the 4n literal slots (each variable twice per polarity) into n*4/3 clauses.

    Clauses that repeat a variable are repaired by swapping one of the offending
    slots with a random slot elsewhere; after B2_REPAIR_ATTEMPTS swaps the
    whole multiset is reshuffled.
    """
    n = config.variables
    if n < 3 or n % 3:
        raise GeneratorParameterError(f"(3,B2) needs n to be a positive multiple of 3, got {n}")
    rng = rng or config.rng()
    slots = [lit for v in range(1, n + 1) for lit in (v, v, -v, -v)]

    reshuffles = 0
    while True:
        rng.shuffle(slots)
        for _ in range(Config.B2_REPAIR_ATTEMPTS):
            bad = _bad_triples(slots)
            if not bad:
                break
            t = rng.choice(bad)
            triple = slots[3 * t:3 * t + 3]
            offending = next(3 * t + i for i in range(1, 3) if abs(triple[i]) in {abs(x) for x in triple[:i]})
            other = rng.randrange(len(slots))
            slots[offending], slots[other] = slots[other], slots[offending]
        if not _bad_triples(slots):
            break
        reshuffles += 1

    if reshuffles:
        logger.debug(f"B2 generator needed {reshuffles} reshuffles for n={n}")
    clauses = [slots[3 * t:3 * t + 3] for t in range(len(slots) // 3)]
    return validate_b2(CnfFormula.from_ints(n, clauses))
