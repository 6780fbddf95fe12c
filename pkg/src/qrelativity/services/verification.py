"""
Cross-module invariant suite behind `qrel verify` and `GET /verify`.

Every invariant is a zero-argument check registered under a dotted name. A
check returns the measured deviation (or a violation count) and a short
detail string; it passes when the measurement does not exceed the tolerance
named in `constants.INVARIANT_TOLERANCES`. All randomness uses fixed
`default_rng` seeds, so the suite is deterministic.
"""

import itertools
import logging
import math
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..constants import (
    ELECTRON_MASS,
    INVARIANT_TOLERANCES,
    RECORDED_POINTER,
    SYSTEM_BASIS,
)
from ..exceptions import ConfigError
from ..features import (
    DensityMatrix,
    FiveDisplacement,
    FrameGraph,
    FreePropagator,
    Grid1D,
    QuantumInterval,
    SlitConfig,
    StateVector,
    TransformParams,
    apply_unitary,
    born_weights,
    build_chain,
    change_basis,
    check_equivalence,
    compose_dilations,
    compose_relative_amplitude,
    delta_factor,
    dephase,
    detect_intransitivity,
    dilate_length,
    double_slit,
    equivalence_closure,
    evolve_chain,
    evolve_free,
    expected_diffusion,
    fit_diffusion_constant,
    flat_5_interval,
    frame_swap_debroglie,
    frame_swapped_run,
    gamma_factor,
    index_observable,
    init_gaussian,
    measure,
    moments,
    nested_norm,
    premeasure,
    project_chain,
    quantum_interval,
    random_state,
    random_unitary,
    reciprocal_superposition,
    reduced_state,
    relative_amplitude_history,
    rewrite_basis_paradox,
    spin_observable,
    system_state,
    tensor_product,
)

logger = logging.getLogger(__name__)

Check = Callable[[], Tuple[float, str]]
_REGISTRY: Dict[str, Check] = {}


def invariant(name: str) -> Callable[[Check], Check]:
    if name not in INVARIANT_TOLERANCES:
        raise KeyError(f"no tolerance registered for invariant {name!r}")

    def register(fn: Check) -> Check:
        _REGISTRY[name] = fn
        return fn

    return register


@dataclass(frozen=True)
class InvariantResult:
    name: str
    passed: bool
    measured: Optional[float]
    tolerance: float
    detail: str = ""


def invariant_names() -> List[str]:
    return sorted(_REGISTRY)


# --- hilbert ---

@invariant("hilbert.norm_preservation")
def _norm_preservation():
    rng = np.random.default_rng(0)
    psi = random_state((2, 3), rng)
    unitaries = [random_unitary(6, rng) for _ in range(25)]
    drift = 0.0
    for i in range(1000):
        psi = apply_unitary(unitaries[i % len(unitaries)], psi)
        drift = max(drift, abs(psi.norm_squared - 1.0))
    return drift, "1000 chained random unitaries on a 2x3 state"


@invariant("hilbert.no_signaling")
def _no_signaling():
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(100):
        psi = random_state((2, 3), rng)
        before = [w for _, w, _ in born_weights(psi, 0, spin_observable())]
        rotated = change_basis(psi, 1, random_unitary(3, rng))
        after = [w for _, w, _ in born_weights(rotated, 0, spin_observable())]
        worst = max(worst, float(np.max(np.abs(np.subtract(before, after)))))
    return worst, "spin statistics on S under 100 random basis changes of the partner"


@invariant("hilbert.repeat_measurement")
def _repeat_measurement():
    rng = np.random.default_rng(2)
    worst = 0.0
    for seed in range(100):
        psi = random_state((2, 3), rng)
        outcome, collapsed, _ = measure(psi, 1, index_observable(3), seed)
        again, _, probability = measure(collapsed, 1, index_observable(3), seed + 1)
        worst = max(worst, 1.0 if again != outcome else abs(1.0 - probability))
    return worst, "second measurement of the same observable"


@invariant("hilbert.reduced_product")
def _reduced_product():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(100):
        a = random_state((2,), rng)
        b = random_state((3,), rng)
        rho = reduced_state(tensor_product(a, b), [0])
        worst = max(worst, float(np.max(np.abs(rho.entries - DensityMatrix.from_state(a).entries))))
    return worst, "partial trace of a product state"


# --- measurement ---

def _random_system(rng: np.random.Generator) -> StateVector:
    c = random_state((2,), rng).amplitudes
    return system_state(c[0], c[1])


@invariant("measurement.branch_correlation")
def _branch_correlation():
    rng = np.random.default_rng(4)
    worst = 0.0
    for seed in range(200):
        psi_t = premeasure(_random_system(rng))
        final, branch = project_chain(psi_t, seed)
        p = np.abs(final.tensor()) ** 2
        worst = max(worst, abs(1.0 - p[branch, RECORDED_POINTER[branch]]))
    return worst, "probability outside the recorded branch after collapse"


@invariant("measurement.rewrite_overlap")
def _rewrite_overlap():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(200):
        report = rewrite_basis_paradox(premeasure(_random_system(rng)))
        worst = max(worst, abs(1.0 - report.round_trip_overlap), report.apparatus_prediction_gap)
    return worst, "|1 - overlap| after mapping the rotated description back"


@invariant("measurement.born_frequencies")
def _born_frequencies():
    n = 10_000
    weights = np.array([0.3, 0.7])
    psi_t = premeasure(system_state(math.sqrt(weights[0]), math.sqrt(weights[1])))
    counts = np.zeros(2)
    for seed in range(n):
        counts[project_chain(psi_t, seed).branch] += 1
    deviation = float(np.max(np.abs(counts / n - weights)) * math.sqrt(n))
    return deviation, f"sqrt(N) * max |f_i - |c_i|^2| over N = {n} seeds"


@invariant("measurement.dephase_positive")
def _dephase_positive():
    rng = np.random.default_rng(6)
    worst = 0.0
    pointer = index_observable(3)
    for _ in range(20):
        rho = reduced_state(random_state((3, 3), rng), [0])
        for strength in np.linspace(0.0, 1.0, 11):
            out = dephase(rho, pointer, float(strength))
            worst = max(worst, -float(np.min(out.eigenvalues)), abs(float(np.trace(out.entries).real) - 1.0))
    return max(worst, 0.0), "negative eigenvalue or trace drift of dephased states"


# --- relations ---

def _random_graph(rng: np.random.Generator, n: int, p: float) -> Tuple[List[str], List[Tuple[str, str]]]:
    names = [f"F{i}" for i in range(n)]
    edges = [(a, b) for a, b in itertools.product(names, repeat=2) if rng.random() < p]
    return names, edges


@invariant("relations.closure_clean")
def _closure_clean():
    rng = np.random.default_rng(7)
    total = 0
    for _ in range(100):
        names, edges = _random_graph(rng, int(rng.integers(1, 9)), 0.2)
        closed = equivalence_closure(FrameGraph.from_names(names, phys_edges=edges))
        total += len(check_equivalence(closed).violations)
    return float(total), "equivalence violations left after closure"


@invariant("relations.intransitivity_bruteforce")
def _intransitivity_bruteforce():
    rng = np.random.default_rng(8)
    mismatches = 0
    for _ in range(300):
        names, edges = _random_graph(rng, int(rng.integers(1, 13)), 0.15)
        q = set(edges)
        members = {x for x, y in q if (y, x) in q}
        reflexive = all((x, x) in q for x in members)
        found = detect_intransitivity(FrameGraph.from_names(names, q_edges=edges))
        mismatches += int((not found) != reflexive)
    return float(mismatches), "graphs where the witness list disagrees with brute force"


@invariant("relations.reciprocal_involution")
def _reciprocal_involution():
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(1000):
        c = random_state((2,), rng).amplitudes
        psi = StateVector(c, (2,), ("S",), (SYSTEM_BASIS,))
        back = reciprocal_superposition(reciprocal_superposition(psi, "A").backward, "S").backward
        if back.labels != psi.labels or back.basis_labels != psi.basis_labels:
            return 1.0, f"labels {back.labels} {back.basis_labels} did not return to {psi.labels} {psi.basis_labels}"
        worst = max(worst, float(np.max(np.abs(np.abs(back.amplitudes) - np.abs(c)))))
    return worst, "moduli after applying the reciprocal map twice"


@invariant("relations.branch_agreement")
def _branch_agreement():
    rng = np.random.default_rng(10)
    disagreements = 0
    for seed in range(200):
        psi_t = premeasure(_random_system(rng))
        final, branch = project_chain(psi_t, seed)
        pointer = int(np.argmax(reduced_state(final, [1]).diagonal))
        system = StateVector.from_amplitudes(
            final.tensor()[:, pointer], labels=("S",), basis_labels=(SYSTEM_BASIS,), normalize=True
        )
        backward = reciprocal_superposition(system, "A").backward
        seen = backward.basis_labels[0][int(np.argmax(backward.probabilities))]
        if pointer != RECORDED_POINTER[branch] or seen != f"A_{SYSTEM_BASIS[branch]}":
            disagreements += 1
    return float(disagreements), "seeds where A's pointer and S's backward description disagree"


# --- transforms ---

def _log_uniform(rng: np.random.Generator, size, low: float = -31.0, high: float = 3.0) -> np.ndarray:
    return 10.0 ** rng.uniform(low, high, size)


@invariant("transforms.dilation_round_trip")
def _dilation_round_trip():
    rng = np.random.default_rng(11)
    worst = 0.0
    for m_s, m_a in _log_uniform(rng, (1000, 2)):
        dx = float(rng.uniform(1e-3, 1e3))
        worst = max(worst, abs(dilate_length(dilate_length(dx, m_s, m_a), m_a, m_s) - dx) / dx)
    return worst, "relative error of a there-and-back dilation"


@invariant("transforms.dilation_composition")
def _dilation_composition():
    rng = np.random.default_rng(12)
    worst = 0.0
    for masses in _log_uniform(rng, (1000, 3)):
        dx = float(rng.uniform(1e-3, 1e3))
        direct = dilate_length(dx, masses[0], masses[2])
        worst = max(worst, abs(compose_dilations(dx, list(masses)) - direct) / direct)
    return worst, "chained versus direct dilation over mass triples"


@invariant("transforms.debroglie_invariance")
def _debroglie_invariance():
    rng = np.random.default_rng(13)
    worst = 0.0
    for m_s, m_a in _log_uniform(rng, (1000, 2)):
        hbar = float(_log_uniform(rng, None, -35.0, 1.0))
        swap = frame_swap_debroglie(m_s, m_a, float(rng.uniform(1e-3, 1e8)), hbar)
        worst = max(worst, abs(swap.product_forward - hbar) / hbar, abs(swap.product_backward - hbar) / hbar)
    return worst, "relative deviation of m v lambda from hbar in either direction"


@invariant("transforms.interval_symmetry")
def _interval_symmetry():
    rng = np.random.default_rng(14)
    worst = 0.0
    for dt, j1, j2 in zip(rng.normal(size=500), rng.uniform(0.1, 10, 500), rng.uniform(0.1, 10, 500)):
        nu = quantum_interval(QuantumInterval(dt, j1, j2))
        worst = max(
            worst,
            abs(nu - quantum_interval(QuantumInterval(dt, j2, j1))),
            abs(nu - quantum_interval(QuantumInterval(-dt, j1, j2))),
        )
    return worst, "change under J1 <-> J2 and dt -> -dt"


@invariant("transforms.delta_gamma_agreement")
def _delta_gamma_agreement():
    worst = 0.0
    for x in np.linspace(0.0, 0.99, 199):
        delta = delta_factor(TransformParams(1.0, 1.0, E_q=float(x), t=1.0, h=1.0))
        worst = max(worst, abs(delta - gamma_factor(float(x), 1.0)))
    return worst, "delta at E_q t / h = x against gamma at v / c = x on [0, 0.99]"


@invariant("transforms.triangle_inequality")
def _triangle_inequality():
    rng = np.random.default_rng(15)
    worst = 0.0
    for a, b in rng.normal(size=(1000, 2, 5)):
        da, db = FiveDisplacement(*a), FiveDisplacement(*b)
        excess = flat_5_interval(da + db) - flat_5_interval(da) - flat_5_interval(db)
        worst = max(worst, excess)
    return worst, "largest excess of |a + b| over |a| + |b|"


# --- wavepacket ---

def _natural_grid() -> Grid1D:
    return Grid1D(-64.0, 64.0, 512)


def _electron_slits(d: float, v: float) -> Tuple[SlitConfig, Grid1D]:
    return SlitConfig(d, d / 10.0, 1.0, v), Grid1D(-32.0 * d, 32.0 * d, 4096)


@invariant("wavepacket.norm_conservation")
def _packet_norm_conservation():
    packet = init_gaussian(_natural_grid(), 0.0, 2.0, 1.0, mass=1.0, hbar=1.0)
    step = FreePropagator(packet.grid, 1.0, 1.0, 0.01)
    psi = packet.amplitudes
    drift = 0.0
    for _ in range(10_000):
        psi = step(psi)
        drift = max(drift, abs(float(np.sum(np.abs(psi) ** 2) * packet.grid.dx) - 1.0))
    return drift, "10^4 steps of free evolution"


@invariant("wavepacket.energy_conservation")
def _energy_conservation():
    packet = init_gaussian(_natural_grid(), -8.0, 2.0, 1.5, mass=1.0, hbar=1.0)
    before = moments(packet).mean_k2
    after = moments(evolve_free(packet, 0.01, 1000)).mean_k2
    return abs(after - before) / before, "relative change of <k^2>"


@invariant("wavepacket.time_reversal")
def _time_reversal():
    packet = init_gaussian(_natural_grid(), 4.0, 2.0, -1.0, mass=1.0, hbar=1.0)
    there = evolve_free(packet, 0.01, 500)
    back = evolve_free(there, -0.01, 500)
    return float(np.max(np.abs(back.amplitudes - packet.amplitudes))), "evolve(dt) then evolve(-dt)"


@invariant("wavepacket.fringe_law")
def _fringe_law():
    worst = 0.0
    for d, v in itertools.product((50e-6, 100e-6, 200e-6), (364.0, 727.0, 1454.0)):
        config, grid = _electron_slits(d, v)
        worst = max(worst, double_slit(config, ELECTRON_MASS, grid).relative_error)
    return worst, "relative error against lambda L / d over a 3x3 sweep of (d, v)"


@invariant("wavepacket.frame_swap")
def _frame_swap():
    worst = 0.0
    config, grid = _electron_slits(100e-6, 727.0)
    for ratio in (1.0, 1e2, 1e4):
        report = frame_swapped_run(config, ELECTRON_MASS, ratio * ELECTRON_MASS, grid)
        worst = max(worst, report.spacing_error, report.product_error)
    return worst, "magnified spacing and de Broglie products for m_A / m_S in {1, 1e2, 1e4}"


# --- nested ---

def _pair(x0: float, sigma0: float, k0: float) -> dict:
    return {"x0": x0, "sigma0": sigma0, "k0": k0}


@invariant("nested.pair_norms")
def _pair_norms():
    chain = build_chain(_natural_grid(), [1.0, 2.0], [_pair(-4.0, 2.0, 1.0), _pair(4.0, 2.5, -0.5)])
    evolved = evolve_chain(chain, 0.01, 1000)
    drift = max(abs(p.norm - 1.0) for p in evolved.pair_packets)
    return drift, "per-pair norm after 10^3 steps"


@invariant("nested.axiom_case")
def _axiom_case():
    chain = build_chain(_natural_grid(), [1.0], [_pair(0.0, 2.0, 1.0)])
    return abs(nested_norm(chain) - 1.0), "nested norm of a two-frame chain"


@invariant("nested.gaussian_composition")
def _gaussian_composition():
    sigmas = (2.0, 3.0)
    chain = build_chain(_natural_grid(), [1.0, 1.0], [_pair(0.0, s, 0.0) for s in sigmas])
    width = moments(compose_relative_amplitude(chain).packet).width
    expected = math.sqrt(sum(s**2 for s in sigmas))
    return abs(width / expected - 1.0), f"width of Z against sqrt(sum sigma^2) = {expected:.6g}"


@invariant("nested.diffusion_reduction")
def _diffusion_reduction():
    chain = build_chain(_natural_grid(), [1.0], [_pair(0.0, 2.0, 0.5)])
    history, times = relative_amplitude_history(chain, 0.01, 20)
    fit = fit_diffusion_constant(history, times)
    expected = expected_diffusion(chain)
    return abs(fit.k - expected) / abs(expected), f"fitted k = {fit.k:.6g}, expected {expected:.6g}"


def run_invariants(
    tolerances: Optional[Mapping[str, float]] = None,
    only: Optional[str] = None,
) -> List[InvariantResult]:
    """
    Run every registered invariant, or those whose name starts with `only`.

    `tolerances` overrides the defaults by name; unknown names are a ConfigError.
    """
    limits = dict(INVARIANT_TOLERANCES)
    for name, value in (tolerances or {}).items():
        if name not in limits:
            raise ConfigError(f"unknown invariant {name!r}", location="tolerance")
        limits[name] = float(value)
    names = [n for n in invariant_names() if only is None or n.startswith(only)]
    if not names:
        raise ConfigError(f"no invariant matches {only!r}", location="only")

    results = []
    for name in tqdm(names, desc="invariants", unit="check", disable=None, file=sys.stderr):
        tolerance = limits[name]
        try:
            measured, detail = _REGISTRY[name]()
            passed = math.isfinite(measured) and measured <= tolerance
        except Exception as e:
            logger.error(f"invariant {name} raised {type(e).__name__}: {e}")
            measured, detail, passed = None, f"{type(e).__name__}: {e}", False
        if not passed:
            logger.error(f"invariant {name} failed: measured {measured!r} > tolerance {tolerance!r}")
        results.append(InvariantResult(name, bool(passed), measured, tolerance, detail))
    return results
