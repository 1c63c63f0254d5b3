from datetime import datetime
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator
from sqlalchemy import Column, DateTime, Float, Index, Integer, String, Text
from sqlalchemy.orm import declarative_base

Base = declarative_base()


class TrialRecord(Base):
    """SQLAlchemy model for stored experiment trials"""

    __tablename__ = "experiment_trials"

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_label = Column(String(100), nullable=False, index=True)
    family = Column(String(20), nullable=False)  # 'gnp', 'paley', 'complete', 'file'
    n = Column(Integer, nullable=False)
    p = Column(String(40), nullable=False)  # rational as p/q
    trial = Column(Integer, nullable=False)
    seed = Column(Integer, nullable=False)
    upper_bound = Column(Integer, nullable=True)
    normalizer = Column(String(80), nullable=True)
    ratio = Column(String(80), nullable=True)
    seconds = Column(Float, nullable=True)
    error = Column(Text, nullable=True)
    created_at = Column(DateTime, nullable=False, default=datetime.utcnow)

    __table_args__ = (
        Index('idx_run_family_n', 'run_label', 'family', 'n'),
    )

    def __repr__(self):
        return f"<TrialRecord(run='{self.run_label}', family='{self.family}', n={self.n}, trial={self.trial})>"


# Pydantic schemas for experiment specs and report rows

class ExperimentSpec(BaseModel):
    """One experiment: a graph family, sizes and repetitions"""

    family: str = Field(..., description="gnp, paley, complete or file")
    sizes: List[int] = Field(..., description="n values (q values for paley)")
    p: str = Field("1/2", description="gnp density as p/q")
    trials: int = Field(1, ge=1)
    seed: int = 0
    graph_text: Optional[str] = Field(None, description="graph text for the file family")

    @field_validator("family")
    @classmethod
    def known_family(cls, value: str) -> str:
        if value not in ("gnp", "paley", "complete", "file"):
            raise ValueError(f"unknown family {value!r}")
        return value


class TrialRow(BaseModel):
    """One CSV/JSON report row"""

    family: str
    n: int
    p: str
    trial: int
    seed: int
    upper_bound: Optional[int] = None
    normalizer: Optional[str] = None
    ratio: Optional[str] = None
    seconds: Optional[float] = None
    convex_quadruples: Optional[int] = None
    crossing_lemma_bound: Optional[str] = None
    error: Optional[str] = None

    class Config:
        from_attributes = True
