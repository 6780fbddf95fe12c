import math

import numpy as np
import pytest

from qrelativity.constants import PLANCK_TIME, ROTATED_BASIS, SYSTEM_BASIS
from qrelativity.exceptions import PreconditionError
from qrelativity.features import (
    UNRESOLVED,
    DecoherenceParams,
    DensityMatrix,
    MeasurementRecord,
    Operator,
    StateVector,
    branch_frequencies,
    decoherence_time,
    dephase,
    detect_intransitivity,
    entangle_environment,
    identity,
    induced_relation_graph,
    planck_ratio,
    premeasure,
    project_chain,
    random_state,
    reduced_state,
    rewrite_basis_paradox,
    schmidt_coefficients,
    spin_observable,
    system_state,
    wigner_chain,
)

H = 1.0 / math.sqrt(2.0)


def test_premeasure_of_definite_state_is_a_product():
    psi_t = premeasure(system_state(1.0, 0.0))
    assert psi_t.dims == (2, 3)
    assert psi_t.tensor()[0, 1] == 1.0
    assert schmidt_coefficients(psi_t) == pytest.approx(np.array([1.0, 0.0]), abs=1e-15)


def test_premeasure_of_equal_superposition_is_maximally_entangled():
    psi_t = premeasure(system_state(H, H))
    assert reduced_state(psi_t, [0]).purity == pytest.approx(0.5, abs=1e-12)


def test_premeasure_schmidt_coefficients():
    psi_t = premeasure(system_state(0.6, 0.8))
    assert schmidt_coefficients(psi_t) == pytest.approx(np.array([0.64, 0.36]), abs=1e-12)
    assert psi_t.basis_labels[1][1:3] == ("A_s_up", "A_s_down")


def test_premeasure_needs_three_pointer_states():
    with pytest.raises(PreconditionError, match="pointer_dim"):
        premeasure(system_state(1.0, 0.0), pointer_dim=2)


def test_system_state_must_be_normalized():
    with pytest.raises(PreconditionError):
        system_state(1.0, 1.0)


def test_entangle_environment_records_the_same_outcome():
    psi = entangle_environment(premeasure(system_state(0.6, 0.8)))
    amps = psi.tensor()
    assert psi.dims == (2, 3, 3)
    assert amps[0, 1, 1] == pytest.approx(0.6)
    assert amps[1, 2, 2] == pytest.approx(0.8)
    assert np.sum(np.abs(amps) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_rewrite_of_definite_state_splits_evenly():
    report = rewrite_basis_paradox(premeasure(system_state(1.0, 0.0)))
    assert report.original_coefficients == pytest.approx((1.0, 0.0), abs=1e-15)
    assert report.rewritten_coefficients == pytest.approx((H, H), abs=1e-15)
    assert report.rewritten.basis_labels[0] == ROTATED_BASIS


def test_rewrite_preserves_the_state_and_apparatus_predictions(rng):
    for _ in range(50):
        c = random_state((2,), rng).amplitudes
        report = rewrite_basis_paradox(premeasure(system_state(c[0], c[1])))
        assert abs(report.round_trip_overlap - 1.0) < 1e-12
        assert report.apparatus_prediction_gap < 1e-12


def test_rewrite_pairs_rotated_states_with_pointer_superpositions():
    report = rewrite_basis_paradox(premeasure(system_state(H, H)))
    assert report.rewritten_coefficients == pytest.approx((H, H), abs=1e-15)
    right_apparatus = report.rewritten_apparatus[0]
    assert np.count_nonzero(np.abs(right_apparatus) > 1e-12) == 2


def test_project_chain_definite_input_always_branch_zero():
    psi_t = premeasure(system_state(1.0, 0.0))
    assert {project_chain(psi_t, seed).branch for seed in range(20)} == {0}


def test_project_chain_collapse_is_correlated():
    psi_t = premeasure(system_state(H, H))
    for seed in range(50):
        final, branch = project_chain(psi_t, seed)
        p = np.abs(final.tensor()) ** 2
        assert p[branch, branch + 1] == pytest.approx(1.0, abs=1e-12)
        assert p.sum() - p[branch, branch + 1] < 1e-12


def test_project_chain_maps_rotated_input_back():
    report = rewrite_basis_paradox(premeasure(system_state(0.6, 0.8)))
    final, branch = project_chain(report.rewritten, seed=5)
    assert final.basis_labels[0] == SYSTEM_BASIS
    assert abs(final.tensor()[branch, branch + 1]) == pytest.approx(1.0, abs=1e-12)


def test_project_chain_rejects_uncorrelated_state(rng):
    with pytest.raises(PreconditionError, match="correlation"):
        project_chain(random_state((2, 3), rng), seed=0)


def test_branch_frequencies_follow_born_weights():
    psi_t = premeasure(system_state(0.6, 0.8))
    freqs = branch_frequencies(psi_t, range(10_000))
    assert freqs[0] == pytest.approx(0.36, abs=0.015)
    assert freqs.sum() == pytest.approx(1.0)


def test_wigner_chain_definite_input_descriptions_coincide():
    report = wigner_chain(system_state(1.0, 0.0), seed=0)
    assert report.comparison.same
    assert report.external_record.outcome_index == 0
    assert not detect_intransitivity(induced_relation_graph(report))


def test_wigner_chain_superposition_descriptions_differ():
    report = wigner_chain(system_state(H, H), seed=11)
    assert not report.comparison.same
    assert report.comparison.fidelity == pytest.approx(0.5, abs=1e-12)
    assert report.self_record.resolved
    assert report.external_record.outcome_index == UNRESOLVED
    assert report.self_record.time == report.external_record.time == 1.0
    assert report.self_record.outcome_index == report.branch


def test_wigner_chain_outcome_frequencies():
    branches = [wigner_chain(system_state(H, H), seed).branch for seed in range(200)]
    sigma = math.sqrt(0.25 / 200)
    assert abs(np.mean(branches) - 0.5) < 5 * sigma


@pytest.mark.parametrize("theta", np.linspace(0.0, math.pi / 2, 22)[1:-1])
def test_every_superposition_yields_intransitive_q_relation(theta):
    report = wigner_chain(system_state(math.cos(theta), math.sin(theta)), seed=0)
    assert not report.comparison.same
    assert detect_intransitivity(induced_relation_graph(report)) == [("A", "E"), ("E", "A")]


def test_measurement_record_consistency():
    definite = premeasure(system_state(1.0, 0.0))
    mixed = premeasure(system_state(H, H))
    with pytest.raises(PreconditionError):
        MeasurementRecord("E", "SA", 0.0, UNRESOLVED, definite)
    with pytest.raises(PreconditionError):
        MeasurementRecord("E", "SA", 0.0, 1, mixed)
    assert not MeasurementRecord("E", "SA", 0.0, UNRESOLVED, mixed).resolved


def test_decoherence_time_examples():
    assert decoherence_time(DecoherenceParams(2.5, 1e-9, 1e-9)) == pytest.approx(2.5)
    assert decoherence_time(DecoherenceParams(1.0, 1e-3, 1.0)) == pytest.approx(1e-6)


def test_decoherence_time_is_huge_against_planck_time():
    p = DecoherenceParams(relaxation_time=1e-12, thermal_length=1e-10, separation=1.0)
    assert planck_ratio(p) > 1.0
    assert planck_ratio(p) == pytest.approx(1e-32 / PLANCK_TIME)


def test_decoherence_params_reject_zero_separation():
    with pytest.raises(PreconditionError, match="separation"):
        DecoherenceParams(1.0, 1.0, 0.0)


def test_dephase_strength_examples():
    rho = DensityMatrix.from_state(system_state(H, H))
    assert np.allclose(dephase(rho, spin_observable(), 0.0).entries, rho.entries, atol=1e-15)
    assert abs(dephase(rho, spin_observable(), 1.0).entries[0, 1]) < 1e-15
    half = dephase(rho, spin_observable(), 0.5)
    assert half.entries[0, 1] == pytest.approx(0.25, abs=1e-15)
    assert half.diagonal == pytest.approx(rho.diagonal, abs=1e-15)


def test_dephase_keeps_coherence_inside_a_degenerate_eigenspace():
    psi = StateVector(np.array([H, H, 0.0]), (3,), ("S",))
    rho = DensityMatrix.from_state(psi)
    pointer = Operator(np.diag([0.0, 0.0, 1.0]))
    out = dephase(rho, pointer, 1.0)
    assert np.allclose(out.entries, rho.entries, atol=1e-12)

    spread = DensityMatrix.from_state(StateVector(np.array([0.6, 0.0, 0.8]), (3,), ("S",)))
    cut = dephase(spread, pointer, 1.0)
    assert abs(cut.entries[0, 2]) < 1e-12
    assert cut.diagonal == pytest.approx(spread.diagonal, abs=1e-12)


def test_dephase_with_identity_observable_changes_nothing(rng):
    rho = reduced_state(random_state((3, 2), rng), [0])
    out = dephase(rho, identity(3), 1.0)
    assert np.allclose(out.entries, rho.entries, atol=1e-12)


def test_dephase_rejects_out_of_range_strength():
    rho = DensityMatrix.from_state(system_state(H, H))
    with pytest.raises(PreconditionError):
        dephase(rho, spin_observable(), 1.5)


def test_dephase_stays_positive(rng):
    for _ in range(10):
        rho = reduced_state(random_state((2, 4), rng), [0])
        for strength in np.linspace(0.0, 1.0, 5):
            out = dephase(rho, spin_observable(), float(strength))
            assert out.eigenvalues.min() >= -1e-12
            assert np.trace(out.entries).real == pytest.approx(1.0, abs=1e-12)
