"""Packed Interval Covering data model, validation, cover verifier and coordinate compression."""
import logging
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from exceptions import InstanceError, InvalidWitnessError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Interval:
    """Closed integer interval [lo, hi]."""
    lo: int
    hi: int

    def __contains__(self, point: int) -> bool:
        return self.lo <= point <= self.hi

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class Pack:
    intervals: Tuple[Interval, ...] = ()

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __getitem__(self, index: int) -> Interval:
        """1-based access, matching witness indices."""
        if not 1 <= index <= len(self.intervals):
            raise IndexError(index)
        return self.intervals[index - 1]


@dataclass(frozen=True)
class PicInstance:
    n_bound: int
    packs: Tuple[Pack, ...] = ()

    @classmethod
    def build(cls, n_bound: int, packs: Iterable[Iterable[Tuple[int, int]]]) -> 'PicInstance':
        """Build an instance from raw (lo, hi) pairs, rejecting anything ill-formed."""
        instance = cls(n_bound, tuple(Pack(tuple(Interval(lo, hi) for lo, hi in pack)) for pack in packs))
        report = is_wellformed(instance)
        if not report.ok:
            raise InstanceError("; ".join(report.violations))
        return instance

    @property
    def pack_count(self) -> int:
        return len(self.packs)

    @property
    def interval_count(self) -> int:
        return sum(len(pack) for pack in self.packs)

    def has_empty_pack(self) -> bool:
        return any(len(pack) == 0 for pack in self.packs)

    def selection_space(self) -> int:
        """Number of selections, i.e. the product of pack sizes."""
        total = 1
        for pack in self.packs:
            total *= len(pack)
        return total


@dataclass(frozen=True)
class Selection:
    """One 1-based interval index per pack."""
    choices: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.choices)

    def check(self, instance: PicInstance) -> None:
        if len(self.choices) != instance.pack_count:
            raise InvalidWitnessError(
                f"selection has {len(self.choices)} choices, instance has {instance.pack_count} packs")
        for k, (choice, pack) in enumerate(zip(self.choices, instance.packs), 1):
            if not 1 <= choice <= len(pack):
                raise InvalidWitnessError(f"pack {k}: index {choice} out of range 1..{len(pack)}")

    def chosen(self, instance: PicInstance) -> List[Interval]:
        self.check(instance)
        return [pack[choice] for pack, choice in zip(instance.packs, self.choices)]

    def replace(self, pack_index: int, choice: int) -> 'Selection':
        """Copy with pack `pack_index` (1-based) switched to `choice`."""
        choices = list(self.choices)
        choices[pack_index - 1] = choice
        return Selection(tuple(choices))


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def is_wellformed(instance: PicInstance) -> ValidationReport:
    """Every rule the instance breaks, each message naming its pack and interval."""
    violations = []
    if instance.n_bound < 1:
        violations.append(f"N must be at least 1, got {instance.n_bound}")
    for k, pack in enumerate(instance.packs, 1):
        seen = set()
        for idx, interval in enumerate(pack.intervals, 1):
            where = f"pack {k} interval {idx} {interval}"
            if interval.lo < 1:
                violations.append(f"{where}: lo < 1")
            if interval.lo > interval.hi:
                violations.append(f"{where}: lo > hi")
            if interval.hi > instance.n_bound:
                violations.append(f"{where}: interval exceeds N={instance.n_bound}")
            if interval in seen:
                violations.append(f"{where}: duplicate interval in pack")
            seen.add(interval)
    return ValidationReport(tuple(violations))


def covers(intervals: Iterable[Interval], n_bound: int) -> bool:
    """Endpoint sweep: True iff the union of `intervals` is exactly [1, n_bound]."""
    reach = 0
    for interval in sorted(intervals):
        if interval.lo > reach + 1:
            return False
        reach = max(reach, interval.hi)
    return reach == n_bound


def verify_cover(instance: PicInstance, selection: Selection) -> bool:
    """Check a witness in O(M log M), independent of the magnitude of N."""
    return covers(selection.chosen(instance), instance.n_bound)


def coverage_counts(instance: PicInstance, selection: Selection, points: Sequence[int]) -> List[int]:
    """How many chosen intervals contain each of `points`."""
    chosen = selection.chosen(instance)
    return [sum(1 for interval in chosen if point in interval) for point in points]


@dataclass(frozen=True)
class CompressedInstance:
    """Instance over maximal segments of [1,N] on which coverage cannot change.

    `instance` is the remapped PicInstance whose bound is the segment count; pack
    and interval order are preserved, so selections carry over unchanged.
    """
    segments: Tuple[Interval, ...]
    instance: PicInstance
    original: PicInstance

    @property
    def segment_count(self) -> int:
        return len(self.segments)

    def segment_of(self, point: int) -> int:
        """1-based index of the segment holding an original point."""
        if not 1 <= point <= self.original.n_bound:
            raise ValueError(f"point {point} outside [1,{self.original.n_bound}]")
        return bisect_right([segment.lo for segment in self.segments], point)

    def expand(self, interval: Interval) -> Interval:
        """Map a compressed interval back to original coordinates."""
        return Interval(self.segments[interval.lo - 1].lo, self.segments[interval.hi - 1].hi)

    def decompress(self, selection: Optional[Selection]) -> Optional[Selection]:
        if selection is not None:
            selection.check(self.original)
        return selection


def compress(instance: PicInstance) -> CompressedInstance:
    """Cut [1,N] at every interval start and every hi+1, and remap intervals to segment indices."""
    n_bound = instance.n_bound
    starts = {1}
    for pack in instance.packs:
        for interval in pack:
            starts.add(interval.lo)
            if interval.hi < n_bound:
                starts.add(interval.hi + 1)
    starts = sorted(starts)
    ends = [start - 1 for start in starts[1:]] + [n_bound]
    segments = tuple(Interval(lo, hi) for lo, hi in zip(starts, ends))

    packs = tuple(
        Pack(tuple(Interval(bisect_right(starts, iv.lo), bisect_right(starts, iv.hi)) for iv in pack))
        for pack in instance.packs
    )
    logger.debug(f"Compressed N={n_bound} into {len(segments)} segments")
    return CompressedInstance(segments, PicInstance(len(segments), packs), instance)
