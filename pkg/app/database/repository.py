from typing import List, Optional

from sqlalchemy import desc, distinct, func, select
from sqlalchemy.ext.asyncio import AsyncSession

from app.models.experiment_data import TrialRecord, TrialRow
from app.utils.logger import app_logger as logger


class ExperimentRepository:
    """Repository for stored experiment trials"""

    def __init__(self, session: AsyncSession):
        self.session = session

    async def insert_trials_batch(self, run_label: str, rows: List[TrialRow]) -> None:
        """Insert all rows of one run in a single transaction"""
        if not rows:
            return

        records = [
            TrialRecord(
                run_label=run_label,
                family=row.family,
                n=row.n,
                p=row.p,
                trial=row.trial,
                seed=row.seed,
                upper_bound=row.upper_bound,
                normalizer=row.normalizer,
                ratio=row.ratio,
                seconds=row.seconds,
                error=row.error,
            )
            for row in rows
        ]

        self.session.add_all(records)
        await self.session.commit()

        logger.debug(f"[Store] inserted {len(records)} trials for run '{run_label}'")

    async def list_trials(self, run_label: Optional[str] = None, limit: int = 200) -> List[TrialRecord]:
        """Most recent trials of one run (or of all runs), newest first"""
        query = select(TrialRecord)
        if run_label:
            query = query.where(TrialRecord.run_label == run_label)
        query = query.order_by(desc(TrialRecord.id)).limit(limit)

        result = await self.session.execute(query)
        return list(result.scalars().all())

    async def list_runs(self) -> List[str]:
        query = select(distinct(TrialRecord.run_label)).order_by(TrialRecord.run_label)
        result = await self.session.execute(query)
        return [row for row in result.scalars().all()]

    async def count_trials(self, run_label: str) -> int:
        query = select(func.count(TrialRecord.id)).where(TrialRecord.run_label == run_label)
        result = await self.session.execute(query)
        return int(result.scalar_one())
