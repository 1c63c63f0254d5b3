from typing import List, Optional

from pydantic import BaseModel, Field


# Pydantic schemas for JSON reports; exact rationals are carried as "p/q" text


class RegularityCertificate(BaseModel):
    """Best-effort evidence that a partition is weakly regular"""

    epsilon: str = Field(..., description="Target epsilon as p/q")
    K: int = Field(..., description="Number of parts")
    best_deviation: str = Field(..., description="Largest |e_G(S,T) - e_GP(S,T)| found for the final partition")
    threshold: str = Field(..., description="epsilon * n^2")
    witness_S: List[int] = Field(default_factory=list)
    witness_T: List[int] = Field(default_factory=list)
    verified_exact: bool = Field(False, description="Deviation came from exhaustive search")
    rounds: int = 0
    cap_exceeded: bool = False
    index_stalled: bool = Field(False, description="Stopped because every refinement lowered the partition index")
    index_history: List[str] = Field(default_factory=list, description="Partition index after each round")
    refined_from_K: Optional[int] = Field(
        None, description="Parts before the equitable split up to the minimum part count; the deviation refers to that partition"
    )

    class Config:
        json_schema_extra = {
            "example": {
                "epsilon": "1/8",
                "K": 2,
                "best_deviation": "0",
                "threshold": "18",
                "witness_S": [],
                "witness_T": [],
                "verified_exact": True,
                "rounds": 1,
                "cap_exceeded": False,
                "index_stalled": False,
                "index_history": ["1/4", "1/2"],
                "refined_from_K": None,
            }
        }


class PipelineDiagnostics(BaseModel):
    certificate: RegularityCertificate
    envelope_bound: str
    envelope_ok: bool
    bad_quadruple_bound: int
    placement_radius_sq: str
    placement_retries: int
    crossing_lemma_bound: str
    refined_to_min_parts: bool = False
    colors: int = 1
    monochromatic_crossings: Optional[int] = None
    timings: Optional[dict] = None


class PipelineReport(BaseModel):
    """Result JSON of one pipeline run"""

    n: int
    K: int
    epsilon: str
    crossing_count: int
    small_value: str
    partition: List[int]
    points: List[List[int]] = Field(..., description="[x_num, x_den, y_num, y_den] per vertex")
    edges: List[List[int]]
    small_points: List[List[int]] = Field(default_factory=list)
    edge_colors: Optional[List[int]] = None
    diagnostics: PipelineDiagnostics


class DrawingDocument(BaseModel):
    """Drawing JSON: vertex points and edges, optional weights and colors"""

    n: int
    points: List[List[int]]
    edges: List[List[int]]
    weights: Optional[List[str]] = None
    edge_colors: Optional[List[int]] = None


class ExactReport(BaseModel):
    n: int
    m: int
    value: str
    order_types_scanned: int
    colors: int = 1
    drawing: DrawingDocument


class EstimateReport(BaseModel):
    n: int
    t: int
    trials: int
    seed: int
    estimate: str
    values: List[str]
    failures: List[str] = Field(default_factory=list)
