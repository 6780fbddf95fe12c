from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class InvariantResultModel(BaseModel):
    name: str = Field(..., description="Dotted invariant name, e.g. transforms.dilation_round_trip")
    passed: bool
    measured: Optional[float] = Field(None, description="Measured deviation (or count) compared against the tolerance")
    tolerance: float
    detail: str = ""


class VerifyResponse(BaseModel):
    passed: bool
    results: List[InvariantResultModel]

    @property
    def failed(self) -> List[str]:
        return [r.name for r in self.results if not r.passed]


class TransformTableResponse(BaseModel):
    columns: List[str]
    rows: List[Dict[str, Optional[float]]]


class ScenarioRunResponse(BaseModel):
    kind: str
    seed: int
    metric: str = Field(..., description="Name of the headline metric")
    value: Any = Field(None, description="Value of the headline metric")
    payload: Dict[str, Any] = Field(default_factory=dict)
