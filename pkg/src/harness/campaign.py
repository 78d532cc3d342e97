"""
Кампании бисекций по манифесту.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..config.lab_config import CampaignConfig, CampaignEntry
from ..core.constants import derive_constants
from ..core.errors import InconclusiveBand, NumericalError
from ..core.grid import RadialGrid
from ..utils.formatter import OutputFormatter
from ..utils.logger import get_structured_logger
from .bisection import BisectionRecord, ProbeRunner, bisect_threshold, locate_A0, tune_b_zero
from .families import InitialDataFamily

logger = get_structured_logger("harness.campaign")

SUMMARY_COLUMNS = ["family", "A_star_lo", "A_star_hi", "A_0", "branch"]


@dataclass
class CampaignRow:
    """Строка сводки кампании"""
    family: str
    A_star_lo: Optional[float] = None
    A_star_hi: Optional[float] = None
    A_0: Optional[float] = None
    branch: Optional[str] = None
    status: str = "ok"
    record: Optional[BisectionRecord] = field(default=None, repr=False)

    def values(self) -> List[Any]:
        return [self.family, self.A_star_lo, self.A_star_hi, self.A_0, self.branch]


def runner_for(entry: CampaignEntry, jobs: int = 1) -> ProbeRunner:
    """ProbeRunner для записи манифеста"""
    consts = derive_constants(entry.p)
    family = InitialDataFamily.from_config(entry.family, name=entry.name)
    grid = RadialGrid(r_max=entry.grid.r_max, N=entry.grid.N)
    return ProbeRunner(family=family, grid=grid, evolution=entry.evolution, consts=consts,
                       bisection=entry.bisection, jobs=jobs, run_id=entry.name)


def run_entry(entry: CampaignEntry, jobs: int = 1) -> CampaignRow:
    """
    Бисекция одной записи; InconclusiveBand становится интервалом в сводке,
    численные сбои - статусом строки.
    """
    runner = runner_for(entry, jobs)
    lo, hi, depth = entry.bisection.lo, entry.bisection.hi, entry.bisection.depth
    row = CampaignRow(family=entry.name)
    try:
        if entry.bisection.target == "A_star":
            record = bisect_threshold(runner, lo, hi, depth)
            row.A_star_lo, row.A_star_hi = record.final
        elif entry.bisection.target == "A_0":
            result = locate_A0(runner, lo, hi, depth)
            record = result.record
            row.A_0, row.branch = result.A_0, result.branch.value
        else:
            record = tune_b_zero(runner, lo, hi, depth)
            row.A_0 = record.final[1]
        row.record = record
    except InconclusiveBand as e:
        row.A_star_lo, row.A_star_hi = e.lower, e.upper
        row.status = "inconclusive"
        row.record = e.record
    except NumericalError as e:
        logger.error("Campaign entry failed", entry=entry.name, error=e.message)
        row.status = type(e).__name__
    logger.info("Campaign entry finished", entry=entry.name, status=row.status)
    return row


def run_campaign(campaign: CampaignConfig, jobs: int = 1) -> List[CampaignRow]:
    """
    Все записи манифеста. При jobs > 1 записи выполняются в отдельных
    процессах; порядок строк совпадает с порядком манифеста.
    """
    entries = list(campaign.entries)
    logger.info("Campaign started", entries=len(entries), jobs=jobs)
    if jobs <= 1 or len(entries) <= 1:
        return [run_entry(entry) for entry in entries]
    with ProcessPoolExecutor(max_workers=min(jobs, len(entries))) as pool:
        return list(pool.map(run_entry, entries))


def summary_table(rows: List[CampaignRow]) -> str:
    """Таблица `family A_star_lo A_star_hi A_0 branch`"""
    return OutputFormatter.format_rows([row.values() for row in rows], header=SUMMARY_COLUMNS)


def summary_dicts(rows: List[CampaignRow]) -> List[Dict[str, Any]]:
    return [dict(zip(SUMMARY_COLUMNS + ["status"], row.values() + [row.status])) for row in rows]
