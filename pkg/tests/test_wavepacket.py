import math

import numpy as np
import pytest

from qrelativity.constants import ELECTRON_MASS
from qrelativity.exceptions import DimensionMismatchError, PreconditionError
from qrelativity.features import (
    FreePropagator,
    Grid1D,
    SlitConfig,
    WavePacket,
    double_slit,
    evolve_free,
    fringe_spacing,
    frame_swapped_run,
    gaussian_width,
    init_gaussian,
    moments,
    propagate_to_screen,
)


def natural_packet(grid, x0=0.0, sigma0=2.0, k0=1.0):
    return init_gaussian(grid, x0, sigma0, k0, mass=1.0, hbar=1.0)


def test_grid_requires_power_of_two():
    with pytest.raises(PreconditionError):
        Grid1D(-1.0, 1.0, 100)
    with pytest.raises(PreconditionError):
        Grid1D(1.0, -1.0, 64)


def test_init_gaussian_is_normalized(natural_grid):
    assert natural_packet(natural_grid).is_normalized()


@pytest.mark.parametrize(
    "x0, sigma0, k0, match",
    [
        (0.0, 0.5, 0.0, "under-resolved"),
        (60.0, 2.0, 0.0, "boundary"),
        (0.0, 2.0, 12.0, "Nyquist"),
        (0.0, -1.0, 0.0, "positive"),
    ],
)
def test_init_gaussian_rejects_bad_packets(natural_grid, x0, sigma0, k0, match):
    with pytest.raises(PreconditionError, match=match):
        natural_packet(natural_grid, x0, sigma0, k0)


def test_packet_size_must_match_grid(natural_grid):
    with pytest.raises(DimensionMismatchError):
        WavePacket(natural_grid, np.zeros(10), 1.0, 1.0)


def test_aliasing_timestep_is_rejected(natural_grid):
    with pytest.raises(PreconditionError, match="below pi"):
        FreePropagator(natural_grid, 1.0, 1.0, 0.05)


def test_free_evolution_conserves_norm_and_energy(natural_grid):
    p = natural_packet(natural_grid)
    later = evolve_free(p, 0.01, 300)
    assert abs(later.norm - 1.0) <= 1e-10
    assert moments(later).mean_k2 == pytest.approx(moments(p).mean_k2, rel=1e-10)
    assert moments(later).mean_p == pytest.approx(moments(p).mean_p, abs=1e-10)


def test_free_evolution_is_time_reversible(natural_grid):
    p = natural_packet(natural_grid)
    back = evolve_free(evolve_free(p, 0.01, 200), -0.01, 200)
    assert np.max(np.abs(back.amplitudes - p.amplitudes)) < 1e-10


def test_zero_steps_returns_the_packet(natural_grid):
    p = natural_packet(natural_grid)
    assert evolve_free(p, 0.01, 0) is p
    with pytest.raises(PreconditionError):
        evolve_free(p, 0.01, -1)


def test_gaussian_spreading_matches_closed_form(natural_grid):
    p = natural_packet(natural_grid, k0=0.0)
    width = moments(evolve_free(p, 0.01, 800)).width
    expected = gaussian_width(2.0, 8.0, 1.0, 1.0)
    assert expected == pytest.approx(2.0 * math.sqrt(2.0))
    assert abs(width - expected) / expected < 0.005


def test_packet_moments(natural_grid):
    m = moments(natural_packet(natural_grid, x0=3.0, sigma0=2.0, k0=1.0))
    assert m.mean_x == pytest.approx(3.0, abs=1e-9)
    assert m.width == pytest.approx(2.0, rel=1e-6)
    assert m.mean_p == pytest.approx(1.0, abs=1e-6)
    assert m.mean_k2 == pytest.approx(1.0 + 1.0 / 16.0, abs=1e-6)


def test_moments_of_zero_packet_are_undefined(natural_grid):
    with pytest.raises(PreconditionError):
        moments(WavePacket(natural_grid, np.zeros(natural_grid.n_points), 1.0, 1.0))


def test_screen_propagation_is_unitary(natural_grid):
    screen = propagate_to_screen(natural_packet(natural_grid), 50.0)
    step = screen.x[1] - screen.x[0]
    assert np.all(np.diff(screen.x) > 0)
    assert float(np.sum(screen.intensity) * step) == pytest.approx(1.0, abs=1e-10)


def test_fringe_spacing_needs_three_fringes(natural_grid):
    p = natural_packet(natural_grid, k0=0.0)
    with pytest.raises(PreconditionError, match="fringes"):
        fringe_spacing(natural_grid.x, p.density)


def test_slit_config_requires_wide_separation():
    with pytest.raises(PreconditionError):
        SlitConfig(1e-5, 1e-4, 1.0, 727.0)


def test_electron_double_slit_follows_fringe_law(electron_slits):
    config, grid = electron_slits
    result = double_slit(config, ELECTRON_MASS, grid)
    assert result.wavelength == pytest.approx(1.0e-6, rel=1e-2)
    assert result.expected_spacing == pytest.approx(result.wavelength * 1e4)
    assert result.relative_error < 0.02
    assert result.time_of_flight == pytest.approx(1.0 / 727.0)


def test_double_slit_rejects_near_field(electron_slits):
    config, grid = electron_slits
    near = SlitConfig(config.slit_separation, config.slit_width, 0.05, config.packet_speed)
    with pytest.raises(PreconditionError, match="far-field"):
        double_slit(near, ELECTRON_MASS, grid)


def test_double_slit_rejects_unresolved_slits(electron_slits):
    config, _ = electron_slits
    coarse = Grid1D(-3.2e-3, 3.2e-3, 256)
    with pytest.raises(PreconditionError, match="grid samples"):
        double_slit(config, ELECTRON_MASS, coarse)


def test_frame_swapped_run_is_consistent(electron_slits):
    config, grid = electron_slits
    report = frame_swapped_run(config, ELECTRON_MASS, 100.0 * ELECTRON_MASS, grid)
    assert report.dilation == pytest.approx(0.1)
    assert report.product_error <= 1e-9
    assert report.magnified_spacing == pytest.approx(report.lab.fringe_spacing * 0.1, rel=0.02)
    assert report.debroglie.lambda_backward == pytest.approx(report.debroglie.lambda_forward / 100.0)
    assert report.consistent


def test_plane_wave_picks_up_the_dispersion_phase(natural_grid):
    k0 = 2.0 * math.pi * 4.0 / natural_grid.length
    amplitudes = np.exp(1j * k0 * natural_grid.x) / math.sqrt(natural_grid.length)
    mass, hbar, t = 2.0, 1.0, 1.5
    later = evolve_free(WavePacket(natural_grid, amplitudes, mass, hbar), 0.01, 150)
    expected = np.exp(-1j * hbar * k0**2 * t / (2.0 * mass)) * amplitudes
    assert np.max(np.abs(later.amplitudes - expected)) < 1e-12


def test_equal_masses_give_identical_lab_and_swapped_patterns(electron_slits):
    config, grid = electron_slits
    report = frame_swapped_run(config, ELECTRON_MASS, ELECTRON_MASS, grid)
    assert report.dilation == 1.0
    assert np.max(np.abs(report.swapped.intensity - report.lab.intensity)) <= 1e-10 * np.max(report.lab.intensity)
    assert report.magnified_spacing == pytest.approx(report.lab.fringe_spacing, rel=1e-12)


def test_frame_swapped_run_accepts_an_explicit_swapped_grid(electron_slits):
    config, grid = electron_slits
    default = frame_swapped_run(config, ELECTRON_MASS, 100.0 * ELECTRON_MASS, grid)
    explicit = frame_swapped_run(config, ELECTRON_MASS, 100.0 * ELECTRON_MASS, grid, swapped_grid=grid.scaled(0.1))
    assert explicit.swapped.grid == grid.scaled(0.1)
    assert explicit.magnified_spacing == pytest.approx(default.magnified_spacing, rel=1e-12)
    coarse = Grid1D(-3.2e-4, 3.2e-4, 256)
    with pytest.raises(PreconditionError, match="grid samples"):
        frame_swapped_run(config, ELECTRON_MASS, 100.0 * ELECTRON_MASS, grid, swapped_grid=coarse)


def test_frame_swapped_run_rejects_near_field_particle_frame(electron_slits):
    config, grid = electron_slits
    assert frame_swapped_run(config, ELECTRON_MASS, 1e4 * ELECTRON_MASS, grid).consistent
    with pytest.raises(PreconditionError, match="Fresnel"):
        frame_swapped_run(config, ELECTRON_MASS, 1e6 * ELECTRON_MASS, grid)
