"""
Quantum-relativity kinematics.

    dilate_length          dx -> dx * sqrt(m_S / m_A)
    debroglie_product      m * v * lambda, invariant across frames
    frame_swap_debroglie   reduced wavelengths seen from either end of a pair
    quantum_interval       sqrt(dt^2 + (J1 - J2)^2)
    gamma_factor           1 / sqrt(1 - (v/c)^2)
    delta_factor           1 / sqrt(1 - (E_q t / h)^2)
    flat_5_interval        Euclidean norm of a five-parameter displacement

All functions are pure and work in SI unless told otherwise. `NaturalUnits`
rescales SI quantities so that hbar = 1 for a chosen mass and length.

The delta factor is written with h but every caller in this package passes
hbar; `TransformParams.h` defaults to hbar.
"""

import logging
import math
from dataclasses import astuple, dataclass
from typing import NamedTuple, Sequence

from ..constants import HBAR, SPEED_OF_LIGHT
from ..exceptions import PreconditionError, SingularityError
from .relations import LocalTime

logger = logging.getLogger(__name__)


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not (math.isfinite(value) and value > 0):
            raise PreconditionError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class TransformParams:
    m_S: float
    m_A: float
    E_q: float = 0.0
    t: float = 1.0
    h: float = HBAR

    def __post_init__(self):
        _require_positive(m_S=self.m_S, m_A=self.m_A, h=self.h)
        if not (math.isfinite(self.E_q) and math.isfinite(self.t)):
            raise PreconditionError("E_q and t must be finite")

    @property
    def phase_ratio(self) -> float:
        """E_q * t / h, the argument of the delta factor."""
        return self.E_q * self.t / self.h


@dataclass(frozen=True)
class QuantumInterval:
    dt: float
    J1: float
    J2: float

    def __post_init__(self):
        _require_positive(J1=self.J1, J2=self.J2)
        if not math.isfinite(self.dt):
            raise PreconditionError(f"dt must be finite, got {self.dt!r}")

    @property
    def wavelengths(self) -> tuple:
        """(lambda_1, lambda_2) with lambda_i = 1 / J_i."""
        return 1.0 / self.J1, 1.0 / self.J2


@dataclass(frozen=True)
class FiveDisplacement:
    dA: float = 0.0
    dB: float = 0.0
    dC: float = 0.0
    dD: float = 0.0
    dE: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(c) for c in astuple(self)):
            raise PreconditionError("displacement components must be finite")

    @classmethod
    def from_sequence(cls, components: Sequence[float]) -> "FiveDisplacement":
        if len(components) != 5:
            raise PreconditionError(f"need five components, got {len(components)}")
        return cls(*(float(c) for c in components))

    def __add__(self, other: "FiveDisplacement") -> "FiveDisplacement":
        return FiveDisplacement(*(a + b for a, b in zip(astuple(self), astuple(other))))


def dilate_length(dx: float, m_S: float, m_A: float) -> float:
    """A length of S's frame as measured in A's coordinates; the proportionality constant is 1."""
    _require_positive(m_S=m_S, m_A=m_A)
    return dx * math.sqrt(m_S / m_A)


def compose_dilations(dx: float, masses: Sequence[float]) -> float:
    """Apply dilate_length along a chain of frames m_0 -> m_1 -> ... -> m_n."""
    if len(masses) < 2:
        raise PreconditionError("a dilation chain needs at least two masses")
    for m_from, m_to in zip(masses, masses[1:]):
        dx = dilate_length(dx, m_from, m_to)
    return dx


def debroglie_product(m: float, v: float, lam: float) -> float:
    _require_positive(m=m, v=v, lam=lam)
    return m * v * lam


class DeBroglieSwap(NamedTuple):
    lambda_forward: float
    lambda_backward: float
    product_forward: float
    product_backward: float
    magnified: float


def frame_swap_debroglie(m_S: float, m_A: float, v: float, hbar: float = HBAR) -> DeBroglieSwap:
    """
    Reduced wavelengths of a pair seen from both ends.

    Forward is S as described by A (mass m_S); backward is A as described by S
    (mass m_A) at the shared relative speed. `magnified` is the backward
    wavelength read in A's dilated coordinates, lambda_backward * sqrt(m_A / m_S).
    """
    _require_positive(m_S=m_S, m_A=m_A, v=v, hbar=hbar)
    lam_f = hbar / (m_S * v)
    lam_b = hbar / (m_A * v)
    return DeBroglieSwap(
        lambda_forward=lam_f,
        lambda_backward=lam_b,
        product_forward=debroglie_product(m_S, v, lam_f),
        product_backward=debroglie_product(m_A, v, lam_b),
        magnified=lam_b / dilate_length(1.0, m_S, m_A),
    )


def quantum_interval(q: QuantumInterval) -> float:
    """sqrt(dt^2 + (J1 - J2)^2); (J1 - J2) equals delta_lambda / (lambda_1 * lambda_2)."""
    return math.hypot(q.dt, q.J1 - q.J2)


def _inverse_root(x: float, what: str) -> float:
    if not math.isfinite(x) or abs(x) >= 1.0:
        raise SingularityError(f"{what} = {x!r}; the factor is singular for |x| >= 1")
    return 1.0 / math.sqrt(1.0 - x * x)


def gamma_factor(v: float, c: float = SPEED_OF_LIGHT) -> float:
    _require_positive(c=c)
    return _inverse_root(v / c, "v/c")


def delta_factor(p: TransformParams) -> float:
    return _inverse_root(p.phase_ratio, "E_q*t/h")


def flat_5_interval(d: FiveDisplacement) -> float:
    return math.hypot(*astuple(d))


def transfer_time(time: LocalTime, target: str, factor: float) -> LocalTime:
    """Carry a local time reading into another frame's clock by a dilation factor (gamma or delta)."""
    _require_positive(factor=factor)
    logger.debug(f"transfer {time.seconds!r} s of {time.frame!r} to {target!r} with factor {factor!r}")
    return LocalTime(target, time.seconds * factor)


@dataclass(frozen=True)
class NaturalUnits:
    """
    Units in which hbar = 1 for a reference mass and length.

    The time unit follows as mass * length^2 / hbar.
    """

    mass: float
    length: float
    hbar: float = HBAR

    def __post_init__(self):
        _require_positive(mass=self.mass, length=self.length, hbar=self.hbar)

    @property
    def time(self) -> float:
        return self.mass * self.length**2 / self.hbar

    @property
    def energy(self) -> float:
        return self.hbar / self.time

    @property
    def speed(self) -> float:
        return self.length / self.time

    def to_natural(self, value: float, dimension: str) -> float:
        return value / self._unit(dimension)

    def to_si(self, value: float, dimension: str) -> float:
        return value * self._unit(dimension)

    def _unit(self, dimension: str) -> float:
        units = {
            "mass": self.mass,
            "length": self.length,
            "time": self.time,
            "energy": self.energy,
            "speed": self.speed,
            "action": self.hbar,
        }
        if dimension not in units:
            raise PreconditionError(f"unknown dimension {dimension!r}; expected one of {sorted(units)}")
        return units[dimension]
