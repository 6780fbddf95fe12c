"""
Dense finite-dimensional quantum state and operator algebra.

States are complex amplitude vectors over a labeled tensor-product basis,
operators are dense square matrices. Everything is a value: operations return
new objects and never mutate their inputs, so the module is safe to call from
several threads at once.

Conventions:
    - subsystem indices follow the order of `StateVector.dims`
    - `change_basis` treats the columns of B as the new basis vectors, so the
      re-expressed amplitudes are B^dagger applied to the subsystem
    - degenerate eigenvalues are projected onto their whole eigenspace (Lüders)
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..constants import EIGEN_GROUP_TOL, HERMITIAN_TOL, NORM_TOL, UNITARY_TOL
from ..exceptions import DimensionMismatchError, PreconditionError

logger = logging.getLogger(__name__)

BasisLabels = Tuple[Tuple[str, ...], ...]


def _frozen_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if ndim == 1:
        arr = arr.reshape(-1)
    if arr.ndim != ndim:
        raise PreconditionError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError("amplitudes must be finite (no NaN/Inf)")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Amplitude vector over the tensor product of `len(dims)` subsystems.

    `labels` names the subsystems (e.g. ("S", "A")); `basis_labels`, when
    given, names the basis states of every subsystem (e.g. ("s_up", "s_down")).
    """

    amplitudes: np.ndarray
    dims: Tuple[int, ...]
    labels: Tuple[str, ...]
    basis_labels: Optional[BasisLabels] = None

    def __post_init__(self):
        amps = _frozen_array(self.amplitudes, 1)
        dims = tuple(int(d) for d in self.dims)
        labels = tuple(str(label) for label in self.labels)
        if not dims or any(d < 1 for d in dims):
            raise PreconditionError(f"subsystem dimensions must be positive, got {dims}")
        if len(labels) != len(dims):
            raise PreconditionError(f"need one label per subsystem: {len(labels)} labels for {len(dims)} subsystems")
        if amps.size != math.prod(dims):
            raise DimensionMismatchError(f"{amps.size} amplitudes do not fit dims {dims}")
        basis = None
        if self.basis_labels is not None:
            basis = tuple(tuple(str(b) for b in names) for names in self.basis_labels)
            if len(basis) != len(dims) or any(len(b) != d for b, d in zip(basis, dims)):
                raise PreconditionError(f"basis labels {basis} do not match dims {dims}")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "basis_labels", basis)

    @classmethod
    def from_amplitudes(
        cls,
        values: Sequence[complex],
        dims: Optional[Sequence[int]] = None,
        labels: Optional[Sequence[str]] = None,
        basis_labels: Optional[BasisLabels] = None,
        normalize: bool = False,
    ) -> "StateVector":
        amps = np.array(values, dtype=np.complex128).reshape(-1)
        dims = tuple(dims) if dims is not None else (amps.size,)
        labels = tuple(labels) if labels is not None else tuple(f"q{i}" for i in range(len(dims)))
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise PreconditionError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(amps, dims, labels, basis_labels)

    @classmethod
    def basis_state(
        cls, index: int, dim: int, label: str = "q0", basis: Optional[Sequence[str]] = None
    ) -> "StateVector":
        if not 0 <= index < dim:
            raise PreconditionError(f"basis index {index} outside 0..{dim - 1}")
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps, (dim,), (label,), (tuple(basis),) if basis is not None else None)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared - 1.0) <= tol

    def require_normalized(self, tol: float = NORM_TOL) -> "StateVector":
        if not self.is_normalized(tol):
            raise PreconditionError(f"state is not normalized: sum |amplitude|^2 = {self.norm_squared!r}")
        return self

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per subsystem."""
        return self.amplitudes.reshape(self.dims)

    def overlap(self, other: "StateVector") -> complex:
        """<self|other>."""
        if self.dims != other.dims:
            raise DimensionMismatchError(f"dims {self.dims} and {other.dims} differ")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def with_amplitudes(self, amplitudes: np.ndarray, basis_labels: Optional[BasisLabels] = None) -> "StateVector":
        basis = basis_labels if basis_labels is not None else self.basis_labels
        return StateVector(amplitudes, self.dims, self.labels, basis)


@dataclass(frozen=True, eq=False)
class Operator:
    entries: np.ndarray

    def __post_init__(self):
        m = _frozen_array(self.entries, 2)
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"operator must be square, got shape {m.shape}")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def adjoint(self) -> "Operator":
        return Operator(self.entries.conj().T)

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        gram = self.entries.conj().T @ self.entries
        return bool(np.max(np.abs(gram - np.eye(self.dim))) <= tol)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= tol)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix (checked on construction)."""

    entries: np.ndarray

    def __post_init__(self):
        m = _frozen_array(self.entries, 2)
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise PreconditionError("density matrix is not Hermitian")
        trace = np.trace(m).real
        if abs(trace - 1.0) > NORM_TOL:
            raise PreconditionError(f"density matrix trace is {trace!r}, expected 1")
        if np.min(np.linalg.eigvalsh(m)) < -NORM_TOL:
            raise PreconditionError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", m)

    @classmethod
    def from_state(cls, psi: StateVector) -> "DensityMatrix":
        psi.require_normalized()
        return cls(np.outer(psi.amplitudes, psi.amplitudes.conj()))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.entries).real.copy()

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    @property
    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)


class MeasurementResult(NamedTuple):
    outcome: float
    collapsed: StateVector
    probability: float


# --- operator library ---

def identity(dim: int) -> Operator:
    return Operator(np.eye(dim, dtype=np.complex128))


def spin_observable() -> Operator:
    """The observable S: +1 on s_up, -1 on s_down."""
    return Operator(np.diag([1.0, -1.0]).astype(np.complex128))


def basis_rotation() -> Operator:
    """Columns are s_right = (up + down)/sqrt2 and s_left = (up - down)/sqrt2."""
    return Operator(np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0))


def index_observable(dim: int) -> Operator:
    """Diagonal observable whose eigenvalue is the basis index."""
    return Operator(np.diag(np.arange(dim, dtype=float)).astype(np.complex128))


def random_unitary(dim: int, rng: np.random.Generator) -> Operator:
    """Haar-distributed unitary from the QR decomposition of a complex Gaussian matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return Operator(q * phases)


def random_state(dims: Sequence[int], rng: np.random.Generator, labels: Optional[Sequence[str]] = None) -> StateVector:
    n = math.prod(dims)
    amps = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return StateVector.from_amplitudes(amps, dims=dims, labels=labels, normalize=True)


def lift(op: Operator, dims: Sequence[int], subsystem: int) -> Operator:
    """Embed a single-subsystem operator into the full tensor space."""
    _check_subsystem(dims, subsystem)
    if op.dim != dims[subsystem]:
        raise DimensionMismatchError(
            f"operator dim {op.dim} does not match subsystem {subsystem} dim {dims[subsystem]}"
        )
    full = np.eye(1, dtype=np.complex128)
    for i, d in enumerate(dims):
        full = np.kron(full, op.entries if i == subsystem else np.eye(d))
    return Operator(full)


def _check_subsystem(dims: Sequence[int], subsystem: int) -> None:
    if not 0 <= subsystem < len(dims):
        raise PreconditionError(f"subsystem {subsystem} outside 0..{len(dims) - 1}")


def _apply_local(matrix: np.ndarray, psi: StateVector, subsystem: int) -> np.ndarray:
    t = np.tensordot(matrix, psi.tensor(), axes=([1], [subsystem]))
    return np.moveaxis(t, 0, subsystem).reshape(-1)


# --- state operations ---

def tensor_product(a: StateVector, b: StateVector) -> StateVector:
    a.require_normalized()
    b.require_normalized()
    basis = None
    if a.basis_labels is not None and b.basis_labels is not None:
        basis = a.basis_labels + b.basis_labels
    return StateVector(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims, a.labels + b.labels, basis)


def apply_unitary(U: Operator, psi: StateVector) -> StateVector:
    if U.dim != psi.dim:
        raise DimensionMismatchError(f"operator dim {U.dim} does not match state dim {psi.dim}")
    if not U.is_unitary():
        raise PreconditionError("operator is not unitary within 1e-12")
    return psi.with_amplitudes(U.entries @ psi.amplitudes)


def change_basis(
    psi: StateVector,
    subsystem: int,
    B: Operator,
    labels: Optional[Sequence[str]] = None,
) -> StateVector:
    """
    Re-express `psi` with the named subsystem written in the basis whose
    vectors are the columns of B. The physical state is unchanged.
    """
    _check_subsystem(psi.dims, subsystem)
    if B.dim != psi.dims[subsystem]:
        raise DimensionMismatchError(
            f"basis dim {B.dim} does not match subsystem {subsystem} dim {psi.dims[subsystem]}"
        )
    if not B.is_unitary():
        raise PreconditionError("basis change is not unitary within 1e-12")
    amps = _apply_local(B.entries.conj().T, psi, subsystem)
    basis = psi.basis_labels
    if labels is not None:
        if len(labels) != B.dim:
            raise PreconditionError(f"need {B.dim} basis labels, got {len(labels)}")
        current = basis if basis is not None else tuple(
            tuple(str(i) for i in range(d)) for d in psi.dims
        )
        basis = current[:subsystem] + (tuple(labels),) + current[subsystem + 1:]
    return StateVector(amps, psi.dims, psi.labels, basis)


def eigenspaces(observable: Operator) -> List[Tuple[float, np.ndarray]]:
    """(eigenvalue, projector) pairs in ascending eigenvalue order, degenerate values grouped."""
    if not observable.is_hermitian():
        raise PreconditionError("observable is not Hermitian within 1e-12")
    values, vectors = np.linalg.eigh(observable.entries)
    spaces = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[start] > EIGEN_GROUP_TOL:
            block = vectors[:, start:i]
            spaces.append((float(np.mean(values[start:i])), block @ block.conj().T))
            start = i
    return spaces


def born_weights(psi: StateVector, subsystem: int, observable: Operator) -> List[Tuple[float, float, np.ndarray]]:
    """(eigenvalue, probability, projected amplitudes) for every eigenspace of the observable."""
    _check_subsystem(psi.dims, subsystem)
    if observable.dim != psi.dims[subsystem]:
        raise DimensionMismatchError(
            f"observable dim {observable.dim} does not match subsystem {subsystem} dim {psi.dims[subsystem]}"
        )
    weights = []
    for value, projector in eigenspaces(observable):
        projected = _apply_local(projector, psi, subsystem)
        weights.append((value, float(np.vdot(projected, projected).real), projected))
    return weights


def measure(psi: StateVector, subsystem: int, observable: Operator, seed: int) -> MeasurementResult:
    """
    Projective measurement of `observable` on one subsystem.

    The outcome is drawn from the Born distribution with
    `numpy.random.default_rng(seed)`, so a fixed seed always gives the same
    outcome for the same state.
    """
    psi.require_normalized()
    weights = born_weights(psi, subsystem, observable)
    probs = np.array([w[1] for w in weights])
    rng = np.random.default_rng(seed)
    k = int(rng.choice(len(weights), p=probs / probs.sum()))
    value, probability, projected = weights[k]
    logger.debug(f"measured subsystem {subsystem}: outcome {value} with probability {probability:.6g}")
    return MeasurementResult(value, psi.with_amplitudes(projected / math.sqrt(probability)), probability)


def project_onto(psi: StateVector, subsystem: int, observable: Operator, outcome: float) -> MeasurementResult:
    """Collapse onto a named outcome; a zero-probability request is an error."""
    psi.require_normalized()
    for value, probability, projected in born_weights(psi, subsystem, observable):
        if abs(value - outcome) <= EIGEN_GROUP_TOL:
            if probability <= NORM_TOL:
                raise PreconditionError(f"outcome {outcome} has zero probability; the projection is degenerate")
            return MeasurementResult(value, psi.with_amplitudes(projected / math.sqrt(probability)), probability)
    raise PreconditionError(f"{outcome} is not an eigenvalue of the observable")


def reduced_state(psi: StateVector, keep: Iterable[int]) -> DensityMatrix:
    """Partial trace over every subsystem not in `keep` (kept subsystems stay in ascending order)."""
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise PreconditionError("keep-set must name at least one subsystem")
    for k in keep:
        _check_subsystem(psi.dims, k)
    psi.require_normalized()
    discard = [i for i in range(len(psi.dims)) if i not in keep]
    kept_dim = math.prod(psi.dims[k] for k in keep)
    m = np.transpose(psi.tensor(), keep + discard).reshape(kept_dim, -1)
    rho = m @ m.conj().T
    return DensityMatrix((rho + rho.conj().T) / 2.0)


def schmidt_coefficients(psi: StateVector, split: int = 1) -> np.ndarray:
    """
    Schmidt coefficients across the cut after the first `split` subsystems,
    reported as probabilities (squared singular values) in descending order.
    """
    if not 0 < split < len(psi.dims):
        raise PreconditionError(f"split {split} must fall strictly inside {len(psi.dims)} subsystems")
    m = psi.amplitudes.reshape(math.prod(psi.dims[:split]), -1)
    return np.linalg.svd(m, compute_uv=False) ** 2


def equal_up_to_phase(a: StateVector, b: StateVector, tol: float = NORM_TOL) -> bool:
    return abs(abs(a.overlap(b)) - 1.0) <= tol
