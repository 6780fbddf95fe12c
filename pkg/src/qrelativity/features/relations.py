"""
Relational algebra over quantum frames.

A `FrameGraph` carries two separate relations on the same frame set:
    - q_edges:    (x, y) means "y is in a superposition relative to x" (xQy)
    - phys_edges: (x, y) means "y is physical relative to x"

Physicality is expected to be an equivalence relation (reflexive, symmetric,
transitive); `check_equivalence` lists every way a graph falls short of that.
The Q relation is expected to fail reflexivity on mutually related pairs
(EQA and AQE without EQE); `detect_intransitivity` finds those pairs.

Each frame keeps its own clock. Local times of different frames cannot be
ordered against each other; they have to be carried across with a dilation
factor first (see `transforms.transfer_time`).
"""

import logging
import math
from dataclasses import dataclass, field
from functools import total_ordering
from typing import FrozenSet, Iterable, List, NamedTuple, Optional, Tuple, Union

import numpy as np

from ..constants import NORM_TOL
from ..exceptions import FrameComparisonError, PreconditionError
from .hilbert import StateVector

logger = logging.getLogger(__name__)

Edge = Tuple[str, str]


@dataclass(frozen=True)
class FrameId:
    name: str
    mass: Optional[float] = None

    def __post_init__(self):
        if not self.name:
            raise PreconditionError("frame name must be non-empty")
        if self.mass is not None and not (math.isfinite(self.mass) and self.mass > 0):
            raise PreconditionError(f"frame {self.name!r} mass must be positive, got {self.mass!r}")


@dataclass(frozen=True)
class FrameGraph:
    frames: Tuple[FrameId, ...] = ()
    q_edges: FrozenSet[Edge] = frozenset()
    phys_edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self):
        frames = tuple(self.frames)
        names = [f.name for f in frames]
        if len(set(names)) != len(names):
            raise PreconditionError(f"frame names must be unique, got {names}")
        q_edges = frozenset((str(a), str(b)) for a, b in self.q_edges)
        phys_edges = frozenset((str(a), str(b)) for a, b in self.phys_edges)
        known = set(names)
        for label, edges in (("q_edges", q_edges), ("phys_edges", phys_edges)):
            for a, b in edges:
                if a not in known or b not in known:
                    raise PreconditionError(f"{label} entry ({a}, {b}) names a frame not in the graph")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "q_edges", q_edges)
        object.__setattr__(self, "phys_edges", phys_edges)

    @classmethod
    def from_names(
        cls,
        names: Iterable[str],
        q_edges: Iterable[Edge] = (),
        phys_edges: Iterable[Edge] = (),
    ) -> "FrameGraph":
        return cls(tuple(FrameId(n) for n in names), frozenset(q_edges), frozenset(phys_edges))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(f.name for f in self.frames)

    def frame(self, name: str) -> FrameId:
        for f in self.frames:
            if f.name == name:
                return f
        raise PreconditionError(f"unknown frame {name!r}")


class Violation(NamedTuple):
    kind: str  # reflexivity | symmetry | transitivity
    witness: Tuple[str, ...]


@dataclass(frozen=True)
class EquivalenceReport:
    violations: Tuple[Violation, ...]

    @property
    def is_equivalence(self) -> bool:
        return not self.violations

    def of_kind(self, kind: str) -> List[Violation]:
        return [v for v in self.violations if v.kind == kind]


def check_equivalence(g: FrameGraph) -> EquivalenceReport:
    """
    Every failure of reflexivity, symmetry and transitivity on phys_edges.

    Witnesses:
        reflexivity  (x,)       x is not physical relative to itself
        symmetry     (x, y)     (x, y) present, (y, x) missing
        transitivity (x, y, z)  (x, y) and (y, z) present, (x, z) missing
    """
    edges = g.phys_edges
    violations = []
    for x in sorted(g.names):
        if (x, x) not in edges:
            violations.append(Violation("reflexivity", (x,)))
    for x, y in sorted(edges):
        if (y, x) not in edges:
            violations.append(Violation("symmetry", (x, y)))
    successors = {}
    for x, y in edges:
        successors.setdefault(x, set()).add(y)
    for x, y in sorted(edges):
        for z in sorted(successors.get(y, ())):
            if (x, z) not in edges:
                violations.append(Violation("transitivity", (x, y, z)))
    if violations:
        logger.debug(f"phys relation has {len(violations)} equivalence violations")
    return EquivalenceReport(tuple(violations))


def equivalence_closure(g: FrameGraph) -> FrameGraph:
    """The graph with phys_edges replaced by their reflexive-symmetric-transitive closure."""
    names = sorted(g.names)
    if not names:
        return g
    index = {n: i for i, n in enumerate(names)}
    adj = np.eye(len(names), dtype=bool)
    for a, b in g.phys_edges:
        adj[index[a], index[b]] = True
    adj |= adj.T
    while True:
        step = adj | ((adj.astype(np.int64) @ adj.astype(np.int64)) > 0)
        if np.array_equal(step, adj):
            break
        adj = step
    closed = frozenset((names[i], names[j]) for i, j in zip(*np.nonzero(adj)))
    return FrameGraph(g.frames, g.q_edges, closed)


def detect_intransitivity(g: FrameGraph) -> List[Edge]:
    """Every (x, y) with xQy and yQx but no xQx, in sorted order."""
    q = g.q_edges
    return sorted((x, y) for x, y in q if (y, x) in q and (x, x) not in q)


@dataclass(frozen=True, eq=False)
class ReciprocalPair:
    forward: StateVector
    backward: StateVector

    def __post_init__(self):
        if self.forward.dims != self.backward.dims:
            raise PreconditionError("forward and backward descriptions must share dimensions")
        gap = np.max(np.abs(self.forward.probabilities - self.backward.probabilities))
        if gap > NORM_TOL:
            raise PreconditionError(f"reciprocal moduli differ by {gap!r}")


def reciprocal_superposition(forward: StateVector, observer: Optional[str] = None) -> ReciprocalPair:
    """
    The description of `observer` by the described system, given the
    description of that system by `observer`.

    Moduli are shared (|c1|^2 = |c3|^2, |c2|^2 = |c4|^2) and phases are copied.
    Basis labels move to the observer: s_up becomes A_s_up, with `observer`
    defaulting to "A". Labels that already carry the described subsystem's
    prefix are stripped instead, so a second application restores the original
    labels. The stripped labels do not say which frame they came from, so that
    return trip needs `observer` naming it.
    """
    if len(forward.dims) != 1:
        raise PreconditionError(f"reciprocal map takes a single-subsystem state, got dims {forward.dims}")
    forward.require_normalized()
    described = forward.labels[0]
    basis = forward.basis_labels[0] if forward.basis_labels else tuple(str(i) for i in range(forward.dim))
    own_prefix = f"{described}_"
    if all(b.startswith(own_prefix) for b in basis):
        if observer is None:
            raise PreconditionError(
                f"labels {basis} already belong to {described!r}; pass observer= for the return trip"
            )
        swapped = tuple(b.removeprefix(own_prefix) for b in basis)
    else:
        observer = "A" if observer is None else observer
        swapped = tuple(f"{observer}_{b}" for b in basis)
    if observer == described:
        raise PreconditionError(f"frame {described!r} cannot be its own observer")
    backward = StateVector(forward.amplitudes, forward.dims, (observer,), (swapped,))
    return ReciprocalPair(forward, backward)


@total_ordering
@dataclass(frozen=True)
class LocalTime:
    """A reading of one frame's clock. Only readings of the same frame are comparable."""

    frame: str
    seconds: float

    def _same_frame(self, other: "LocalTime") -> None:
        if other.frame != self.frame:
            raise FrameComparisonError(
                f"cannot compare local time of {self.frame!r} with {other.frame!r}; transfer it with a dilation first"
            )

    def __lt__(self, other):
        if not isinstance(other, LocalTime):
            return NotImplemented
        self._same_frame(other)
        return self.seconds < other.seconds

    def __eq__(self, other):
        if not isinstance(other, LocalTime):
            return NotImplemented
        self._same_frame(other)
        return self.seconds == other.seconds

    def __hash__(self):
        return hash((self.frame, self.seconds))

    def __sub__(self, other: "LocalTime") -> float:
        self._same_frame(other)
        return self.seconds - other.seconds


@dataclass
class LocalClock:
    """Single-writer, monotonically nondecreasing time accumulator for one frame."""

    frame: FrameId
    _seconds: float = field(default=0.0, repr=False)

    def advance(self, dt: float) -> LocalTime:
        if not math.isfinite(dt) or dt < 0:
            raise PreconditionError(f"clock of {self.frame.name!r} can only advance by a finite dt >= 0, got {dt!r}")
        self._seconds += dt
        return self.read()

    def read(self) -> LocalTime:
        return LocalTime(self.frame.name, self._seconds)


def frame_times(g: FrameGraph, frame: Union[FrameId, str]) -> LocalClock:
    """A fresh clock for a frame of `g`, reading 0."""
    name = frame.name if isinstance(frame, FrameId) else frame
    return LocalClock(g.frame(name))


