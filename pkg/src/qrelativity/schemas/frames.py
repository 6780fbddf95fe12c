"""
JSON shape of a frame graph:

    {"frames": [{"name": "E", "mass": 1.0}, ...],
     "q_edges": [["E", "A"], ...],
     "phys_edges": [["E", "E"], ...]}
"""

from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from ..features.relations import FrameGraph, FrameId


class FrameModel(BaseModel):
    name: str = Field(..., min_length=1, description="Frame identifier, unique within a graph")
    mass: Optional[float] = Field(None, gt=0, description="Frame mass in kilograms")


class FrameGraphModel(BaseModel):
    frames: List[FrameModel] = Field(default_factory=list)
    q_edges: List[Tuple[str, str]] = Field(default_factory=list, description="xQy: y is in superposition relative to x")
    phys_edges: List[Tuple[str, str]] = Field(default_factory=list, description="y is physical relative to x")

    @field_validator("frames")
    @classmethod
    def validate_unique_names(cls, v: List[FrameModel]) -> List[FrameModel]:
        names = [f.name for f in v]
        if len(set(names)) != len(names):
            raise ValueError(f"frame names must be unique, got {names}")
        return v

    @model_validator(mode="after")
    def validate_endpoints(self) -> "FrameGraphModel":
        known = {f.name for f in self.frames}
        for label in ("q_edges", "phys_edges"):
            for a, b in getattr(self, label):
                if a not in known or b not in known:
                    raise ValueError(f"{label} entry [{a}, {b}] names a frame that is not listed")
        return self

    def to_graph(self) -> FrameGraph:
        return FrameGraph(
            tuple(FrameId(f.name, f.mass) for f in self.frames),
            frozenset(self.q_edges),
            frozenset(self.phys_edges),
        )

    @classmethod
    def from_graph(cls, g: FrameGraph) -> "FrameGraphModel":
        return cls(
            frames=[FrameModel(name=f.name, mass=f.mass) for f in g.frames],
            q_edges=sorted(g.q_edges),
            phys_edges=sorted(g.phys_edges),
        )
