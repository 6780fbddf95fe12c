"""
1-D free-particle Schrödinger propagation.

Free evolution is spectral and exact: every Fourier mode k picks up the phase
exp(-i hbar k^2 t / 2m). The grid is periodic, so packets must keep clear of
the boundaries (`init_gaussian` checks this).

The double slit is modeled as an initial condition: a transverse plane wave
masked by two Gaussian-smoothed apertures. The slit plane is the simulation
grid; the screen at distance L is reached after a time of flight T = L/v with
the exact free propagator on the unbounded line (chirp, FFT, chirp), so the
screen coordinate is x = hbar k T / m.

Wavelength conventions:
    wavelength          2 pi hbar / (m v), the one the fringe law uses
    reduced_wavelength  hbar / (m v), the one the de Broglie product uses
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np
from scipy.signal import find_peaks
from scipy.special import erf, erfc

from ..constants import ELECTRON_MASS, HBAR, PACKET_NORM_TOL
from ..exceptions import DimensionMismatchError, PreconditionError
from .transforms import DeBroglieSwap, dilate_length, frame_swap_debroglie

logger = logging.getLogger(__name__)

MIN_SAMPLES_PER_SIGMA = 4
BOUNDARY_SIGMAS = 6.0
MAX_CLIPPED_MASS = 1e-10
MIN_SAMPLES_PER_FRINGE = 8
MIN_SAMPLES_PER_SLIT = 4
FAR_FIELD_FACTOR = 10.0
APERTURE_SOFTNESS = 1.0 / 8.0
FRINGE_LAW_TOL = 0.02
MAX_SWAPPED_FRESNEL = 2.0


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)) or self.x_max <= self.x_min:
            raise PreconditionError(f"grid needs finite x_max > x_min, got [{self.x_min!r}, {self.x_max!r}]")
        n = int(self.n_points)
        if n < 2 or n & (n - 1):
            raise PreconditionError(f"n_points must be a power of two >= 2, got {self.n_points}")
        object.__setattr__(self, "n_points", n)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        """Angular wavenumbers in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    def scaled(self, factor: float) -> "Grid1D":
        return Grid1D(self.x_min * factor, self.x_max * factor, self.n_points)


@dataclass(frozen=True, eq=False)
class WavePacket:
    """
    Amplitudes on a grid. Normalization (sum |psi|^2 dx = 1) is checked by the
    factories and the frame chain, not here, so degenerate test inputs such as
    the zero packet can still be represented.
    """

    grid: Grid1D
    amplitudes: np.ndarray
    mass: float
    hbar: float = HBAR

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.grid.n_points:
            raise DimensionMismatchError(f"{amps.size} amplitudes for a grid of {self.grid.n_points} points")
        if not np.all(np.isfinite(amps)):
            raise PreconditionError("packet amplitudes must be finite")
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise PreconditionError(f"mass must be positive, got {self.mass!r}")
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise PreconditionError(f"hbar must be positive, got {self.hbar!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norm(self) -> float:
        return float(np.sum(self.density) * self.grid.dx)

    def is_normalized(self, tol: float = PACKET_NORM_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol

    def require_normalized(self, tol: float = PACKET_NORM_TOL) -> "WavePacket":
        if not self.is_normalized(tol):
            raise PreconditionError(f"packet is not normalized: sum |psi|^2 dx = {self.norm!r}")
        return self

    def normalized(self) -> "WavePacket":
        norm = self.norm
        if norm == 0:
            raise PreconditionError("cannot normalize the zero packet")
        return self.with_amplitudes(self.amplitudes / math.sqrt(norm))

    def with_amplitudes(self, amplitudes: np.ndarray) -> "WavePacket":
        return replace(self, amplitudes=amplitudes)


class PacketMoments(NamedTuple):
    mean_x: float
    width: float
    mean_p: float
    mean_k2: float


def moments(packet: WavePacket) -> PacketMoments:
    """Position moments from |psi|^2, momentum moments from the discrete spectrum."""
    rho = packet.density
    total = rho.sum()
    if total == 0:
        raise PreconditionError("moments of the zero packet are undefined")
    x = packet.grid.x
    mean_x = float(np.sum(x * rho) / total)
    width = float(math.sqrt(np.sum((x - mean_x) ** 2 * rho) / total))
    spectrum = np.abs(np.fft.fft(packet.amplitudes)) ** 2
    spectrum /= spectrum.sum()
    k = packet.grid.k
    return PacketMoments(
        mean_x=mean_x,
        width=width,
        mean_p=float(packet.hbar * np.sum(k * spectrum)),
        mean_k2=float(np.sum(k**2 * spectrum)),
    )


def clipped_mass(grid: Grid1D, x0: float, sigma0: float) -> float:
    """Probability of a Gaussian |psi|^2 (std sigma0) that falls outside the grid."""
    scale = math.sqrt(2.0) * sigma0
    return 0.5 * float(erfc((x0 - grid.x_min) / scale) + erfc((grid.x_max - x0) / scale))


def init_gaussian(
    grid: Grid1D,
    x0: float,
    sigma0: float,
    k0: float,
    mass: float = ELECTRON_MASS,
    hbar: float = HBAR,
) -> WavePacket:
    """Normalized exp(-(x - x0)^2 / 4 sigma0^2) exp(i k0 x); sigma0 is the position spread."""
    if not (math.isfinite(sigma0) and sigma0 > 0):
        raise PreconditionError(f"sigma0 must be positive, got {sigma0!r}")
    if sigma0 < MIN_SAMPLES_PER_SIGMA * grid.dx:
        raise PreconditionError(
            f"sigma0 = {sigma0!r} is under-resolved: needs at least {MIN_SAMPLES_PER_SIGMA} * dx = "
            f"{MIN_SAMPLES_PER_SIGMA * grid.dx!r}"
        )
    if x0 - BOUNDARY_SIGMAS * sigma0 < grid.x_min or x0 + BOUNDARY_SIGMAS * sigma0 > grid.x_max:
        raise PreconditionError(f"packet at x0 = {x0!r} is within {BOUNDARY_SIGMAS} sigma of a grid boundary")
    lost = clipped_mass(grid, x0, sigma0)
    if lost > MAX_CLIPPED_MASS:
        raise PreconditionError(f"boundary clipping removes {lost:.3g} of the probability mass (limit 1e-10)")
    k_nyquist = math.pi / grid.dx
    if abs(k0) + BOUNDARY_SIGMAS / (2.0 * sigma0) > k_nyquist:
        raise PreconditionError(
            f"carrier wavenumber k0 = {k0!r} is not resolvable below the Nyquist limit {k_nyquist!r}"
        )
    x = grid.x
    psi = np.exp(-((x - x0) ** 2) / (4.0 * sigma0**2) + 1j * k0 * x)
    return WavePacket(grid, psi, mass, hbar).normalized()


def gaussian_width(sigma0: float, t: float, mass: float, hbar: float) -> float:
    """Closed-form free spreading sigma(t) = sigma0 * sqrt(1 + (hbar t / 2 m sigma0^2)^2)."""
    return sigma0 * math.sqrt(1.0 + (hbar * t / (2.0 * mass * sigma0**2)) ** 2)


class FreePropagator:
    """
    Spectral propagator for the free Hamiltonian -hbar^2/2m d^2/dx^2.

    The kinetic phase is exact, so any number of steps collapses into a
    single phase multiplication.
    """

    def __init__(self, grid: Grid1D, mass: float, hbar: float, timestep: float):
        if not math.isfinite(timestep):
            raise PreconditionError(f"timestep must be finite, got {timestep!r}")
        self.grid = grid
        self.mass = mass
        self.hbar = hbar
        self._dt = timestep
        self._check_aliasing()

    def max_phase_per_step(self) -> float:
        k_max = math.pi / self.grid.dx
        return self.hbar * k_max**2 * abs(self._dt) / (2.0 * self.mass)

    def _check_aliasing(self) -> None:
        phase = self.max_phase_per_step()
        if phase >= math.pi:
            raise PreconditionError(
                f"dt = {self._dt!r} advances the fastest mode by {phase:.4g} rad per step; must stay below pi"
            )

    def __call__(self, psi: np.ndarray, steps: int = 1) -> np.ndarray:
        t = self._dt * steps
        phase = np.exp(-0.5j * self.hbar * self.grid.k**2 * t / self.mass)
        return np.fft.ifft(np.fft.fft(psi) * phase)


def evolve_free(p: WavePacket, dt: float, steps: int) -> WavePacket:
    if steps < 0:
        raise PreconditionError(f"steps must be non-negative, got {steps}")
    propagator = FreePropagator(p.grid, p.mass, p.hbar, dt)
    if steps == 0:
        return p
    return p.with_amplitudes(propagator(p.amplitudes, steps))


class ScreenAmplitude(NamedTuple):
    x: np.ndarray
    amplitude: np.ndarray

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2


def propagate_to_screen(packet: WavePacket, T: float) -> ScreenAmplitude:
    """
    Free evolution for time T on the unbounded line, evaluated with one FFT.

    psi(X, T) = sqrt(m / 2 pi i hbar T) exp(i m X^2 / 2 hbar T)
                * integral exp(-i m X x / hbar T) exp(i m x^2 / 2 hbar T) psi(x) dx

    Screen points are X = hbar T k / m for the grid wavenumbers k, in
    ascending order. The map is unitary: sum |psi(X)|^2 dX = sum |psi(x)|^2 dx.
    """
    if not (math.isfinite(T) and T > 0):
        raise PreconditionError(f"propagation time must be positive, got {T!r}")
    grid, m, hbar = packet.grid, packet.mass, packet.hbar
    x = grid.x
    k = grid.k
    screen_x = hbar * T * k / m
    chirped = packet.amplitudes * np.exp(0.5j * m * x**2 / (hbar * T))
    transform = grid.dx * np.exp(-1j * k * grid.x_min) * np.fft.fft(chirped)
    prefactor = np.sqrt(m / (2j * np.pi * hbar * T))
    amplitude = prefactor * np.exp(0.5j * m * screen_x**2 / (hbar * T)) * transform
    return ScreenAmplitude(np.fft.fftshift(screen_x), np.fft.fftshift(amplitude))


@dataclass(frozen=True)
class SlitConfig:
    slit_separation: float
    slit_width: float
    screen_distance: float
    packet_speed: float

    def __post_init__(self):
        d, w = self.slit_separation, self.slit_width
        if not (math.isfinite(d) and math.isfinite(w) and d > w > 0):
            raise PreconditionError(f"slits need d > w > 0, got d = {d!r}, w = {w!r}")
        if not (math.isfinite(self.screen_distance) and self.screen_distance > 0):
            raise PreconditionError(f"screen distance must be positive, got {self.screen_distance!r}")
        if not (math.isfinite(self.packet_speed) and self.packet_speed > 0):
            raise PreconditionError(f"packet speed must be positive, got {self.packet_speed!r}")

    def scaled(self, factor: float) -> "SlitConfig":
        """All lengths multiplied by `factor`; the speed is shared."""
        return SlitConfig(
            self.slit_separation * factor,
            self.slit_width * factor,
            self.screen_distance * factor,
            self.packet_speed,
        )


def slit_mask(grid: Grid1D, config: SlitConfig) -> np.ndarray:
    """Two apertures of width w at +-d/2, each a rectangle smoothed by a Gaussian of width w/8."""
    x = grid.x
    w = config.slit_width
    s = APERTURE_SOFTNESS * w * math.sqrt(2.0)
    mask = np.zeros_like(x)
    for center in (-0.5 * config.slit_separation, 0.5 * config.slit_separation):
        mask += 0.5 * (erf((x - center + 0.5 * w) / s) - erf((x - center - 0.5 * w) / s))
    return mask


def fringe_spacing(x: np.ndarray, intensity: np.ndarray, rel_height: float = 0.5) -> float:
    """
    Peak-to-peak spacing of the central fringes.

    Peaks above `rel_height` of the maximum are located to sub-sample accuracy
    by parabolic interpolation; the spacing is the slope of a linear fit of
    peak position against fringe order.
    """
    peaks, _ = find_peaks(intensity, height=rel_height * float(np.max(intensity)))
    peaks = peaks[(peaks > 0) & (peaks < len(intensity) - 1)]
    if len(peaks) < 3:
        raise PreconditionError(f"found {len(peaks)} central fringes; need at least 3 to measure a spacing")
    step = x[1] - x[0]
    positions = []
    for i in peaks:
        a, b, c = intensity[i - 1], intensity[i], intensity[i + 1]
        curvature = a - 2.0 * b + c
        shift = 0.5 * (a - c) / curvature if curvature != 0 else 0.0
        positions.append(x[i] + shift * step)
    slope, _ = np.polyfit(np.arange(len(positions)), np.array(positions), 1)
    return float(slope)


@dataclass(frozen=True, eq=False)
class DoubleSlitResult:
    config: SlitConfig
    mass: float
    grid: Grid1D
    screen_x: np.ndarray
    intensity: np.ndarray
    wavelength: float
    reduced_wavelength: float
    time_of_flight: float
    fringe_spacing: float

    @property
    def expected_spacing(self) -> float:
        """lambda L / d."""
        return self.wavelength * self.config.screen_distance / self.config.slit_separation

    @property
    def relative_error(self) -> float:
        return abs(self.fringe_spacing - self.expected_spacing) / self.expected_spacing


def _check_slit_resolution(config: SlitConfig, grid: Grid1D) -> None:
    if config.slit_width < MIN_SAMPLES_PER_SLIT * grid.dx:
        raise PreconditionError(
            f"slit width {config.slit_width!r} spans fewer than {MIN_SAMPLES_PER_SLIT} grid samples (dx = {grid.dx!r})"
        )
    reach = 0.5 * config.slit_separation + 0.5 * config.slit_width + 4.0 * APERTURE_SOFTNESS * config.slit_width
    if -reach < grid.x_min or reach > grid.x_max:
        raise PreconditionError(f"apertures reach +-{reach!r} but the grid spans [{grid.x_min!r}, {grid.x_max!r}]")
    # fringe period lambda L / d over screen spacing lambda L / (n dx)
    samples = grid.length / config.slit_separation
    if samples < MIN_SAMPLES_PER_FRINGE:
        raise PreconditionError(
            f"fringe period spans {samples:.3g} screen samples; the grid must span at least "
            f"{MIN_SAMPLES_PER_FRINGE} slit separations"
        )


def _check_far_field(config: SlitConfig, wavelength: float) -> None:
    needed = FAR_FIELD_FACTOR * config.slit_separation**2 / wavelength
    if config.screen_distance < needed:
        raise PreconditionError(
            f"far-field condition violated: L = {config.screen_distance!r} < "
            f"{FAR_FIELD_FACTOR:g} d^2 / lambda = {needed!r}"
        )


def _simulate_slits(config: SlitConfig, mass: float, grid: Grid1D, hbar: float, far_field: bool) -> DoubleSlitResult:
    if not (math.isfinite(mass) and mass > 0):
        raise PreconditionError(f"mass must be positive, got {mass!r}")
    reduced = hbar / (mass * config.packet_speed)
    wavelength = 2.0 * math.pi * reduced
    _check_slit_resolution(config, grid)
    if far_field:
        _check_far_field(config, wavelength)
    T = config.screen_distance / config.packet_speed
    slit_plane = WavePacket(grid, slit_mask(grid, config), mass, hbar).normalized()
    screen = propagate_to_screen(slit_plane, T)
    intensity = screen.intensity
    spacing = fringe_spacing(screen.x, intensity)
    logger.debug(
        f"double slit: d={config.slit_separation!r} L={config.screen_distance!r} lambda={wavelength!r} "
        f"spacing={spacing!r}"
    )
    return DoubleSlitResult(
        config=config,
        mass=mass,
        grid=grid,
        screen_x=screen.x,
        intensity=intensity,
        wavelength=wavelength,
        reduced_wavelength=reduced,
        time_of_flight=T,
        fringe_spacing=spacing,
    )


def double_slit(config: SlitConfig, m: float, grid: Grid1D, hbar: float = HBAR) -> DoubleSlitResult:
    """Screen intensity |psi|^2 of a two-slit run; the measured fringe spacing follows lambda L / d."""
    return _simulate_slits(config, m, grid, hbar, far_field=True)


@dataclass(frozen=True, eq=False)
class FrameSwapReport:
    lab: DoubleSlitResult
    swapped: DoubleSlitResult
    dilation: float
    debroglie: DeBroglieSwap
    product_lab: float
    product_swapped: float
    magnified_spacing: float
    expected_spacing: float
    hbar: float

    @property
    def spacing_error(self) -> float:
        return abs(self.magnified_spacing - self.expected_spacing) / self.expected_spacing

    @property
    def product_error(self) -> float:
        return max(abs(self.product_lab - self.hbar), abs(self.product_swapped - self.hbar)) / self.hbar

    @property
    def consistent(self) -> bool:
        return self.product_error <= 1e-9 and self.spacing_error <= FRINGE_LAW_TOL


def frame_swapped_run(
    config: SlitConfig,
    m_S: float,
    m_A: float,
    grid: Grid1D,
    hbar: float = HBAR,
    swapped_grid: Optional[Grid1D] = None,
) -> FrameSwapReport:
    """
    The lab run, then the same experiment described from the particle's frame.

    In the particle's frame every length is dilated by sqrt(m_S / m_A) and the
    moving mass is m_A. The raw fringe spacing there is lab * (m_S / m_A);
    read in A's dilated coordinates it is lab * sqrt(m_S / m_A).

    The swapped Fresnel number d'^2 / (lambda' L') is the lab one divided by
    sqrt(m_S / m_A); above MAX_SWAPPED_FRESNEL the swapped screen is no longer
    in the far field and the run is refused.
    """
    factor = dilate_length(1.0, m_S, m_A)
    swapped_config = config.scaled(factor)
    swapped_wavelength = 2.0 * math.pi * hbar / (m_A * config.packet_speed)
    fresnel = swapped_config.slit_separation**2 / (swapped_wavelength * swapped_config.screen_distance)
    if fresnel > MAX_SWAPPED_FRESNEL:
        raise PreconditionError(
            f"swapped Fresnel number {fresnel:.4g} exceeds {MAX_SWAPPED_FRESNEL:g} at m_A / m_S = {m_A / m_S:.3g}; "
            "the particle-frame screen is not in the far field"
        )
    lab = double_slit(config, m_S, grid, hbar)
    target_grid = swapped_grid if swapped_grid is not None else grid.scaled(factor)
    swapped = _simulate_slits(swapped_config, m_A, target_grid, hbar, far_field=False)
    magnified = swapped.fringe_spacing / factor
    v = config.packet_speed
    report = FrameSwapReport(
        lab=lab,
        swapped=swapped,
        dilation=factor,
        debroglie=frame_swap_debroglie(m_S, m_A, v, hbar),
        product_lab=m_S * v * lab.reduced_wavelength,
        product_swapped=m_A * v * swapped.reduced_wavelength,
        magnified_spacing=magnified,
        expected_spacing=lab.fringe_spacing * factor,
        hbar=hbar,
    )
    logger.info(
        f"frame swap m_A/m_S={m_A / m_S:.3g}: lab spacing {lab.fringe_spacing:.6g}, "
        f"magnified {magnified:.6g}, expected {report.expected_spacing:.6g}"
    )
    return report
