"""Seeded benchmark suite: every solver on the same instances, verdicts cross-checked."""
import asyncio
import logging
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

from config import Config
from exceptions import GuardExceededError, InternalInvariantError, SolverDisagreementError
from generators import GenConfig, gen_random_b2sat, gen_random_pic
from pic_core import PicInstance, verify_cover
from reduction import reduce
from sat_core import brute_force_sat
from solvers import SOLVERS, Solver

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchSuite:
    count: int = Config.BENCH_COUNT
    seed: int = Config.BENCH_SEED
    n_bound: int = Config.BENCH_N_BOUND
    packs: int = Config.BENCH_PACKS
    max_pack_size: int = Config.BENCH_MAX_PACK_SIZE
    b2_count: int = Config.BENCH_B2_COUNT
    b2_n: int = Config.BENCH_B2_N


@dataclass
class BenchCase:
    label: str
    instance: PicInstance
    expected: Optional[bool] = None  # known verdict, from brute_force_sat on the source formula


@dataclass
class SolverRow:
    solver: str
    positive: int = 0
    negative: int = 0
    skipped: int = 0
    total_seconds: float = 0.0
    verdicts: List[Optional[bool]] = field(default_factory=list, repr=False)

    @property
    def instances(self) -> int:
        return self.positive + self.negative

    @property
    def mean_ms(self) -> float:
        return 1000 * self.total_seconds / self.instances if self.instances else 0.0

    def as_record(self) -> Dict:
        return {
            'solver': self.solver,
            'positive': self.positive,
            'negative': self.negative,
            'skipped': self.skipped,
            'total_seconds': self.total_seconds,
        }


@dataclass
class BenchReport:
    suite: BenchSuite
    cases: int
    rows: List[SolverRow]


def build_cases(suite: BenchSuite) -> List[BenchCase]:
    rng = random.Random(suite.seed)
    pic_config = GenConfig(seed=suite.seed, n_bound=suite.n_bound, packs=suite.packs,
                           max_pack_size=suite.max_pack_size)
    cases = [BenchCase(f"pic#{i + 1}", gen_random_pic(pic_config, rng)) for i in range(suite.count)]
    b2_config = GenConfig(seed=suite.seed, variables=suite.b2_n)
    for i in range(suite.b2_count):
        formula = gen_random_b2sat(b2_config, rng)
        instance, _ = reduce(formula)
        cases.append(BenchCase(f"b2#{i + 1}", instance, brute_force_sat(formula.formula) is not None))
    return cases


def _run_solver(name: str, solver: Solver, cases: List[BenchCase]) -> SolverRow:
    row = SolverRow(name)
    for case in cases:
        started = time.perf_counter()
        try:
            selection = solver(case.instance)
        except GuardExceededError:
            row.skipped += 1
            row.verdicts.append(None)
            continue
        row.total_seconds += time.perf_counter() - started
        if selection is not None and not verify_cover(case.instance, selection):
            raise InternalInvariantError(f"{name} returned a non-covering witness on {case.label}")
        if selection is None:
            row.negative += 1
        else:
            row.positive += 1
        row.verdicts.append(selection is not None)
    return row


def _check_agreement(cases: List[BenchCase], rows: List[SolverRow]) -> None:
    for index, case in enumerate(cases):
        verdicts = {row.solver: row.verdicts[index] for row in rows if row.verdicts[index] is not None}
        if case.expected is not None:
            verdicts['formula'] = case.expected
        if len(set(verdicts.values())) > 1:
            logger.error(f"❌ Disagreement on {case.label}: {verdicts}")
            raise SolverDisagreementError(case.label, verdicts)


async def run_bench(suite: BenchSuite, solvers: Optional[Dict[str, Solver]] = None,
                    parallel: bool = False) -> BenchReport:
    """Run every solver over the suite; raises SolverDisagreementError on any split verdict."""
    solvers = solvers or SOLVERS
    cases = build_cases(suite)
    logger.info(f"🏃 Bench: {len(cases)} instances, solvers {', '.join(solvers)}")
    if parallel:
        rows = await asyncio.gather(*(
            asyncio.to_thread(_run_solver, name, solver, cases) for name, solver in solvers.items()
        ))
    else:
        rows = [_run_solver(name, solver, cases) for name, solver in solvers.items()]
    _check_agreement(cases, rows)
    return BenchReport(suite, len(cases), list(rows))


def format_report(report: BenchReport) -> str:
    lines = ["solver\tinstances\tpositive\tnegative\tskipped\ttotal_seconds\tmean_ms"]
    for row in report.rows:
        lines.append(f"{row.solver}\t{row.instances}\t{row.positive}\t{row.negative}\t{row.skipped}"
                     f"\t{row.total_seconds:.6f}\t{row.mean_ms:.3f}")
    lines.append(f"# agreement ok on {report.cases} instances")
    return "\n".join(lines) + "\n"


def suite_record(suite: BenchSuite) -> Dict:
    return asdict(suite)
