"""
The S-A-E measurement chain.

A two-state system S is measured by an apparatus A whose pointer register has
at least three states (ready, saw up, saw down). An external observer E that
has not interacted with SA keeps describing it by the entangled state
c1|s_up>|A_s_up> + c2|s_down>|A_s_down>, while SA itself holds a definite
outcome. This module builds that chain, compares the two descriptions,
re-expresses the entangled state in the rotated basis, collapses it in the
correlated pointer basis and estimates how long decoherence takes.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Tuple, Union

import numpy as np

from ..constants import (
    APPARATUS_READY,
    CORRELATION_TOL,
    NORM_TOL,
    PLANCK_TIME,
    ROTATED_BASIS,
    SYSTEM_BASIS,
)
from ..exceptions import DimensionMismatchError, PreconditionError
from .hilbert import (
    DensityMatrix,
    Operator,
    StateVector,
    apply_unitary,
    basis_rotation,
    change_basis,
    eigenspaces,
    index_observable,
    measure,
    reduced_state,
    tensor_product,
)
from .relations import FrameGraph, FrameId, LocalClock

logger = logging.getLogger(__name__)

UNRESOLVED = "unresolved"
OutcomeIndex = Union[int, str]
Description = Union[StateVector, DensityMatrix]


def pointer_weights(description: Description) -> np.ndarray:
    """Born weights of a description over its joint pointer basis."""
    if isinstance(description, StateVector):
        return description.probabilities
    return description.diagonal


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    observer: str
    observed: str
    time: float
    outcome_index: OutcomeIndex
    state_description: Description

    def __post_init__(self):
        significant = int(np.count_nonzero(pointer_weights(self.state_description) > NORM_TOL))
        if self.outcome_index == UNRESOLVED and significant < 2:
            raise PreconditionError("an unresolved record needs a superposition over the pointer basis")
        if self.outcome_index != UNRESOLVED:
            if not isinstance(self.outcome_index, (int, np.integer)):
                raise PreconditionError(f"outcome_index must be an integer or {UNRESOLVED!r}")
            if significant >= 2:
                raise PreconditionError(
                    f"record claims outcome {self.outcome_index} but the description spans {significant} pointer states"
                )

    @property
    def resolved(self) -> bool:
        return self.outcome_index != UNRESOLVED


@dataclass(frozen=True)
class DecoherenceParams:
    relaxation_time: float
    thermal_length: float
    separation: float

    def __post_init__(self):
        for name in ("relaxation_time", "thermal_length", "separation"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise PreconditionError(f"{name} must be strictly positive, got {value!r}")


def system_state(c1: complex, c2: complex) -> StateVector:
    """c1|s_up> + c2|s_down>, which must already be normalized."""
    psi = StateVector(np.array([c1, c2]), (2,), ("S",), (SYSTEM_BASIS,))
    return psi.require_normalized()


def _pointer_basis(prefix: str, dim: int) -> Tuple[str, ...]:
    names = [f"{prefix}_0", f"{prefix}_s_up", f"{prefix}_s_down"]
    return tuple(names + [f"{prefix}_{i}" for i in range(3, dim)])


def correlating_unitary(dims: Tuple[int, ...], control: int, target: int) -> Operator:
    """
    Permutation that moves the target register from its ready state 0 to
    state i + 1 when the control register is in state i (and back).
    """
    if dims[target] < dims[control] + 1:
        raise PreconditionError(
            f"register {target} needs at least {dims[control] + 1} states to record {dims[control]} outcomes"
        )
    n = math.prod(dims)
    perm = np.arange(n)
    for flat, idx in enumerate(np.ndindex(*dims)):
        i, t = idx[control], idx[target]
        if t == APPARATUS_READY:
            moved = i + 1
        elif t == i + 1:
            moved = APPARATUS_READY
        else:
            continue
        new_idx = list(idx)
        new_idx[target] = moved
        perm[flat] = np.ravel_multi_index(tuple(new_idx), dims)
    U = np.zeros((n, n), dtype=np.complex128)
    U[perm, np.arange(n)] = 1.0
    return Operator(U)


def _as_system(s0: StateVector) -> StateVector:
    s0.require_normalized()
    if s0.dims != (2,):
        raise DimensionMismatchError(f"system state must be a single 2-state register, got dims {s0.dims}")
    return StateVector(s0.amplitudes, (2,), ("S",), (SYSTEM_BASIS,))


def premeasure(s0: StateVector, pointer_dim: int = 3) -> StateVector:
    """Adjoin A in its ready state and entangle it: c1|s_up>|A_s_up> + c2|s_down>|A_s_down>."""
    if pointer_dim < 3:
        raise PreconditionError(f"apparatus needs states A_0, A_s_up, A_s_down; pointer_dim {pointer_dim} < 3")
    system = _as_system(s0)
    apparatus = StateVector.basis_state(APPARATUS_READY, pointer_dim, "A", _pointer_basis("A", pointer_dim))
    joint = tensor_product(system, apparatus)
    return apply_unitary(correlating_unitary(joint.dims, 0, 1), joint)


def entangle_environment(psi_t: StateVector, env_dim: int = 3) -> StateVector:
    """Extend SA with an environment register that records S the same way A did."""
    if len(psi_t.dims) != 2:
        raise DimensionMismatchError(f"expected an S-A state, got dims {psi_t.dims}")
    environment = StateVector.basis_state(APPARATUS_READY, env_dim, "E", _pointer_basis("E", env_dim))
    joint = tensor_product(psi_t, environment)
    return apply_unitary(correlating_unitary(joint.dims, 0, 2), joint)


def _row_norms(psi: StateVector) -> np.ndarray:
    m = psi.amplitudes.reshape(psi.dims[0], -1)
    return np.linalg.norm(m, axis=1)


def _apparatus_states(psi: StateVector) -> List[np.ndarray]:
    m = psi.amplitudes.reshape(psi.dims[0], -1)
    norms = np.linalg.norm(m, axis=1)
    return [row / n if n > NORM_TOL else np.zeros_like(row) for row, n in zip(m, norms)]


@dataclass(frozen=True, eq=False)
class BasisParadoxReport:
    original: StateVector
    rewritten: StateVector
    original_coefficients: Tuple[float, ...]
    rewritten_coefficients: Tuple[float, ...]
    rewritten_apparatus: Tuple[np.ndarray, ...]
    round_trip_overlap: float
    apparatus_prediction_gap: float


def rewrite_basis_paradox(psi_t: StateVector) -> BasisParadoxReport:
    """
    Write an entangled S-A state in the s_right/s_left basis.

    The result has the same physical content but pairs each rotated system
    state with a superposition of pointer states, which no apparatus reading
    corresponds to. The report lists both expansions' coefficient moduli and
    checks that nothing observable changed.
    """
    if len(psi_t.dims) != 2 or psi_t.dims[0] != 2:
        raise DimensionMismatchError(f"expected an S-A state with a 2-state system, got dims {psi_t.dims}")
    psi_t.require_normalized()
    B = basis_rotation()
    rewritten = change_basis(psi_t, 0, B, labels=ROTATED_BASIS)
    mapped_back = change_basis(rewritten, 0, B.adjoint(), labels=SYSTEM_BASIS)
    overlap = abs(psi_t.overlap(mapped_back))
    gap = float(np.max(np.abs(reduced_state(psi_t, [1]).entries - reduced_state(rewritten, [1]).entries)))
    report = BasisParadoxReport(
        original=psi_t,
        rewritten=rewritten,
        original_coefficients=tuple(float(c) for c in _row_norms(psi_t)),
        rewritten_coefficients=tuple(float(c) for c in _row_norms(rewritten)),
        rewritten_apparatus=tuple(_apparatus_states(rewritten)),
        round_trip_overlap=float(overlap),
        apparatus_prediction_gap=gap,
    )
    logger.debug(
        f"basis rewrite: original {report.original_coefficients}, rotated {report.rewritten_coefficients}"
    )
    return report


class ProjectionResult(NamedTuple):
    final: StateVector
    branch: int


def project_chain(psi_t: StateVector, seed: int) -> ProjectionResult:
    """
    Collapse an entangled S-A state in the correlated pointer basis.

    The final state is |s_up>|A_s_up> or else |s_down>|A_s_down>, never a mix.
    States written in the rotated system basis are mapped back first.
    """
    if len(psi_t.dims) != 2:
        raise DimensionMismatchError(f"expected an S-A state, got dims {psi_t.dims}")
    psi = psi_t
    if psi.basis_labels is not None and psi.basis_labels[0] == ROTATED_BASIS:
        psi = change_basis(psi, 0, basis_rotation().adjoint(), labels=SYSTEM_BASIS)
    m = np.abs(psi.tensor()) > CORRELATION_TOL
    if np.any(m.sum(axis=1) > 1) or np.any(m.sum(axis=0) > 1):
        raise PreconditionError(
            "state has no pointer-basis correlation structure: a system or pointer state pairs with several partners"
        )
    outcome, collapsed, probability = measure(psi, 0, index_observable(psi.dims[0]), seed)
    branch = int(round(outcome))
    logger.debug(f"projection chain collapsed to branch {branch} (Born weight {probability:.6g})")
    return ProjectionResult(collapsed, branch)


@dataclass(frozen=True)
class DescriptionComparison:
    first: str
    second: str
    same: bool
    fidelity: float


@dataclass(frozen=True, eq=False)
class WignerChainReport:
    self_record: MeasurementRecord
    external_record: MeasurementRecord
    comparison: DescriptionComparison
    branch: int

    @property
    def records(self) -> Tuple[MeasurementRecord, MeasurementRecord]:
        return self.self_record, self.external_record


def _description_fidelity(a: Description, b: Description) -> float:
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return abs(a.overlap(b)) ** 2
    rho_a = a if isinstance(a, DensityMatrix) else DensityMatrix.from_state(a)
    rho_b = b if isinstance(b, DensityMatrix) else DensityMatrix.from_state(b)
    return float(np.trace(rho_a.entries @ rho_b.entries).real)


def _definite_index(psi: StateVector) -> OutcomeIndex:
    significant = np.flatnonzero(psi.probabilities > NORM_TOL)
    if len(significant) >= 2:
        return UNRESOLVED
    return int(np.unravel_index(significant[0], psi.dims)[0])


def wigner_chain(s0: StateVector, seed: int, pointer_dim: int = 3, step: float = 1.0) -> WignerChainReport:
    """
    A measures S; E, outside, does not.

    SA's self-description is the collapsed state with a definite outcome; E's
    description of SA at the same external step is still the entangled state.
    The comparison reports whether the two coincide, which fails for every
    input with two nonzero Born weights.
    """
    psi_t = premeasure(s0, pointer_dim)
    final, branch = project_chain(psi_t, seed)
    a_clock = LocalClock(FrameId("A"))
    e_clock = LocalClock(FrameId("E"))
    self_record = MeasurementRecord("A", "S", a_clock.advance(step).seconds, branch, final)
    external_record = MeasurementRecord("E", "SA", e_clock.advance(step).seconds, _definite_index(psi_t), psi_t)
    fidelity = _description_fidelity(final, psi_t)
    comparison = DescriptionComparison("A", "E", same=abs(fidelity - 1.0) <= NORM_TOL, fidelity=fidelity)
    logger.info(f"wigner chain: branch {branch}, descriptions {'coincide' if comparison.same else 'differ'}")
    return WignerChainReport(self_record, external_record, comparison, branch)


def induced_relation_graph(report: WignerChainReport) -> FrameGraph:
    """
    Q relation implied by a Wigner chain: when E still sees SA in superposition
    while A holds an outcome, EQA holds and, by reciprocity, so does AQE.
    """
    q_edges = frozenset() if report.comparison.same else frozenset({("E", "A"), ("A", "E")})
    return FrameGraph((FrameId("A"), FrameId("E")), q_edges, frozenset({("A", "A"), ("E", "E")}))


def decoherence_time(p: DecoherenceParams) -> float:
    """tau_D = relaxation_time * (thermal_length / separation)^2."""
    return p.relaxation_time * (p.thermal_length / p.separation) ** 2


def planck_ratio(p: DecoherenceParams) -> float:
    return decoherence_time(p) / PLANCK_TIME


def dephase(rho: DensityMatrix, basis: Operator, strength: float) -> DensityMatrix:
    """
    Scale coherences between different eigenspaces of `basis` by (1 - strength).

        rho' = (1 - s) rho + s * sum_a P_a rho P_a

    Blocks inside one eigenspace (populations and intra-space coherences) are
    untouched, so a degenerate pointer observable keeps coherence within each
    eigenvalue and the identity observable leaves rho as it is.
    """
    if not (math.isfinite(strength) and 0.0 <= strength <= 1.0):
        raise PreconditionError(f"dephasing strength must lie in [0, 1], got {strength!r}")
    if basis.dim != rho.dim:
        raise DimensionMismatchError(f"pointer observable dim {basis.dim} does not match density matrix dim {rho.dim}")
    if not basis.is_hermitian():
        raise PreconditionError("pointer observable is not Hermitian within 1e-12")
    blocks = sum(p @ rho.entries @ p for _, p in eigenspaces(basis))
    out = (1.0 - strength) * rho.entries + strength * blocks
    return DensityMatrix((out + out.conj().T) / 2.0)


def branch_frequencies(psi_t: StateVector, seeds: range) -> np.ndarray:
    """Empirical branch frequencies of `project_chain` over a seed range."""
    counts = np.zeros(psi_t.dims[0])
    for seed in seeds:
        counts[project_chain(psi_t, seed).branch] += 1
    return counts / len(seeds)
