"""
Chains of quantum frames Q1 ... Qn.

Pair j of a chain holds the amplitude of frame Q_{j+2} relative to Q_{j+1}
as a WavePacket with its own pair mass. Pairs evolve independently under
their own free Schrödinger equation. The relative amplitude Z between the ends
of the chain is the convolution of the pair amplitudes, which is how relative
descriptions compose (the propagator composition law); its effective mass is
1 / sum(1 / m_j).

Everything here is meant to be run in natural units (hbar = 1).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import PreconditionError
from .relations import FrameId
from .wavepacket import Grid1D, WavePacket, evolve_free, init_gaussian

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FrameChain:
    """
    Frames Q1..Qn and the n - 1 pair amplitudes between neighbours.

    With `strict` (the default) every pair packet must be normalized; tests of
    degenerate inputs switch it off.
    """

    frames: Tuple[FrameId, ...]
    pair_packets: Tuple[WavePacket, ...]
    strict: bool = field(default=True)

    def __post_init__(self):
        frames = tuple(self.frames)
        packets = tuple(self.pair_packets)
        if len(frames) < 2:
            raise PreconditionError(f"a frame chain needs at least two frames, got {len(frames)}")
        if len(packets) != len(frames) - 1:
            raise PreconditionError(f"{len(frames)} frames need {len(frames) - 1} pair packets, got {len(packets)}")
        if self.strict:
            for j, packet in enumerate(packets):
                if not packet.is_normalized():
                    raise PreconditionError(f"pair {j + 1} is not normalized: sum |psi|^2 dx = {packet.norm!r}")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "pair_packets", packets)

    @property
    def n(self) -> int:
        return len(self.frames)

    @property
    def masses(self) -> Tuple[float, ...]:
        return tuple(p.mass for p in self.pair_packets)


@dataclass(frozen=True, eq=False)
class RelativeAmplitude:
    packet: WavePacket

    @property
    def effective_mass(self) -> float:
        return self.packet.mass


class DiffusionFit(NamedTuple):
    k: complex
    residual: float


def build_chain(
    grid: Grid1D,
    masses: Sequence[float],
    pair_init: Sequence[dict],
    hbar: float = 1.0,
    names: Optional[Sequence[str]] = None,
) -> FrameChain:
    """A chain of Gaussian pair packets; `pair_init` entries carry x0, sigma0 and k0."""
    if len(masses) != len(pair_init):
        raise PreconditionError(f"{len(masses)} masses for {len(pair_init)} pair packets")
    if not masses:
        raise PreconditionError("a frame chain needs at least one pair")
    names = list(names) if names is not None else [f"Q{i + 1}" for i in range(len(masses) + 1)]
    packets = tuple(
        init_gaussian(grid, p["x0"], p["sigma0"], p["k0"], mass=m, hbar=hbar) for m, p in zip(masses, pair_init)
    )
    return FrameChain(tuple(FrameId(n) for n in names), packets)


def nested_norm(chain: FrameChain) -> float:
    """
    The normalization integral read as "the pair is everywhere": the first
    pair is modulus-square integrated, every inner pair is integrated over its
    own coordinate first and only then squared.

    Equals 1 for a single normalized pair; generally not 1 for longer chains.
    """
    outer, *inner = chain.pair_packets
    value = float(np.sum(outer.density) * outer.grid.dx)
    for packet in inner:
        value *= abs(np.sum(packet.amplitudes) * packet.grid.dx) ** 2
    return value


def evolve_chain(chain: FrameChain, dt: float, steps: int, max_workers: Optional[int] = None) -> FrameChain:
    """Each pair evolves under its own mass; pairs run on a thread pool."""
    if steps == 0:
        return chain

    def _evolve(packet: WavePacket) -> WavePacket:
        return evolve_free(packet, dt, steps)

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        evolved = tuple(executor.map(_evolve, chain.pair_packets))
    return replace(chain, pair_packets=evolved)


def _second_derivative(amplitudes: np.ndarray, grid: Grid1D, axis: int = -1) -> np.ndarray:
    k = grid.k
    return np.fft.ifft(-(k**2) * np.fft.fft(amplitudes, axis=axis), axis=axis)


def _common_grid(packets: Sequence[WavePacket]) -> Grid1D:
    grid = packets[0].grid
    for j, packet in enumerate(packets[1:], start=2):
        if packet.grid != grid:
            raise PreconditionError(f"pair {j} lives on {packet.grid}, expected {grid}")
    return grid


def compose_relative_amplitude(chain: FrameChain) -> RelativeAmplitude:
    """Z between the chain ends: the spectral convolution of all pair amplitudes."""
    packets = chain.pair_packets
    grid = _common_grid(packets)
    if len({p.hbar for p in packets}) != 1:
        raise PreconditionError("pair packets disagree on hbar")
    effective_mass = 1.0 / sum(1.0 / p.mass for p in packets)
    if len(packets) == 1:
        return RelativeAmplitude(packets[0])
    offset = grid.x_min / grid.dx
    if abs(offset - round(offset)) > 1e-9:
        raise PreconditionError(f"x_min / dx = {offset!r} must be an integer for the composition to stay on the grid")
    spectrum = np.ones(grid.n_points, dtype=np.complex128)
    for packet in packets:
        spectrum = spectrum * np.fft.fft(packet.amplitudes)
    n_conv = len(packets) - 1
    z = np.fft.ifft(spectrum) * grid.dx**n_conv
    z = np.roll(z, n_conv * int(round(offset)))
    return RelativeAmplitude(WavePacket(grid, z, effective_mass, packets[0].hbar))


def expected_diffusion(chain: FrameChain) -> complex:
    """i hbar / (2 m_eff), the diffusion constant a convolution of free pairs must show."""
    hbar = chain.pair_packets[0].hbar
    effective_mass = 1.0 / sum(1.0 / m for m in chain.masses)
    return 1j * hbar / (2.0 * effective_mass)


def constraint_residual(chain: FrameChain, dt: float) -> float:
    """
    Grid maximum of |sum_p (i hbar)^p dPsi_p/dt - sum_p (-hbar^2 / 2 m_p)^p d^2Psi_p/dx^2|
    over pairs p = 1 .. n - 1.

    Time derivatives are centered differences of exact evolution by +-dt; space
    derivatives are spectral. A single pair gives its own Schrödinger residual.
    """
    if not (math.isfinite(dt) and dt > 0):
        raise PreconditionError(f"dt must be positive, got {dt!r}")
    grid = _common_grid(chain.pair_packets)
    residual = np.zeros(grid.n_points, dtype=np.complex128)
    for p, packet in enumerate(chain.pair_packets, start=1):
        forward = evolve_free(packet, dt, 1).amplitudes
        backward = evolve_free(packet, -dt, 1).amplitudes
        dpsi_dt = (forward - backward) / (2.0 * dt)
        d2psi_dx2 = _second_derivative(packet.amplitudes, grid)
        hbar, m = packet.hbar, packet.mass
        residual += (1j * hbar) ** p * dpsi_dt - (-(hbar**2) / (2.0 * m)) ** p * d2psi_dx2
    value = float(np.max(np.abs(residual)))
    logger.debug(f"constraint residual for n={chain.n}: {value:.3e}")
    return value


def relative_amplitude_history(
    chain: FrameChain,
    dt: float,
    steps: int,
    every: int = 1,
    max_workers: Optional[int] = None,
) -> Tuple[List[RelativeAmplitude], np.ndarray]:
    """Snapshots of Z at t = 0, every*dt, ... up to steps*dt, each evolved from the initial chain."""
    if every < 1:
        raise PreconditionError(f"snapshot stride must be at least 1, got {every}")
    indices = list(range(0, steps + 1, every))
    snapshots = [compose_relative_amplitude(evolve_chain(chain, dt, i, max_workers)) for i in indices]
    return snapshots, np.array(indices, dtype=float) * dt


def fit_diffusion_constant(history: Sequence[RelativeAmplitude], times: Sequence[float]) -> DiffusionFit:
    """
    Least-squares complex k with dZ/dt = k d^2Z/dx^2 over the interior snapshots.

    Time derivatives are centered differences in the snapshot index, space
    derivatives spectral. The residual is ||dZ/dt - k d^2Z/dx^2|| / ||dZ/dt||.
    """
    if len(history) < 3:
        raise PreconditionError(f"need at least 3 snapshots to fit a diffusion constant, got {len(history)}")
    times = np.asarray(times, dtype=float)
    if times.shape != (len(history),):
        raise PreconditionError(f"{len(times)} times for {len(history)} snapshots")
    if np.any(np.diff(times) <= 0):
        raise PreconditionError("snapshot times must be strictly increasing")
    grid = _common_grid([h.packet for h in history])
    z = np.stack([h.packet.amplitudes for h in history])
    dz_dt = np.gradient(z, times, axis=0)[1:-1]
    d2z_dx2 = _second_derivative(z, grid, axis=1)[1:-1]
    scale = np.linalg.norm(dz_dt)
    if scale <= 1e-14 * np.linalg.norm(z[1:-1]):
        raise PreconditionError("history is static: the time derivative of Z vanishes")
    k = complex(np.vdot(d2z_dx2, dz_dt) / np.vdot(d2z_dx2, d2z_dx2))
    residual = float(np.linalg.norm(dz_dt - k * d2z_dx2) / scale)
    logger.debug(f"fitted diffusion constant {k!r}, residual {residual:.3e}")
    return DiffusionFit(k, residual)
