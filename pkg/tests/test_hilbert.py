import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qrelativity.exceptions import DimensionMismatchError, PreconditionError
from qrelativity.features import (
    DensityMatrix,
    Operator,
    StateVector,
    apply_unitary,
    basis_rotation,
    born_weights,
    change_basis,
    equal_up_to_phase,
    identity,
    index_observable,
    lift,
    measure,
    project_onto,
    random_state,
    random_unitary,
    reduced_state,
    schmidt_coefficients,
    spin_observable,
    tensor_product,
)

UP = StateVector.basis_state(0, 2, "S")
READY = StateVector.basis_state(0, 3, "A")
H = 1.0 / math.sqrt(2.0)


def test_tensor_product_of_basis_states():
    joint = tensor_product(UP, READY)
    assert joint.dims == (2, 3)
    assert joint.labels == ("S", "A")
    assert joint.tensor()[0, 0] == 1.0
    assert joint.norm_squared == 1.0


def test_tensor_product_matches_index_arithmetic(rng):
    a = random_state((3,), rng)
    b = random_state((2,), rng)
    joint = tensor_product(a, b).tensor()
    for i in range(3):
        for j in range(2):
            assert joint[i, j] == pytest.approx(a.amplitudes[i] * b.amplitudes[j], abs=1e-15)


def test_tensor_product_requires_normalized_inputs():
    loose = StateVector(np.array([1.0, 1.0]), (2,), ("S",))
    with pytest.raises(PreconditionError):
        tensor_product(loose, READY)


def test_apply_identity_leaves_state():
    psi = StateVector.from_amplitudes([H, H], labels=["S"])
    assert np.array_equal(apply_unitary(identity(2), psi).amplitudes, psi.amplitudes)


def test_apply_unitary_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        apply_unitary(identity(3), UP)


def test_apply_unitary_rejects_non_unitary():
    with pytest.raises(PreconditionError):
        apply_unitary(Operator(np.diag([2.0, 1.0])), UP)


def test_random_unitaries_preserve_norm(rng):
    psi = random_state((2, 2), rng)
    for _ in range(100):
        U = random_unitary(4, rng)
        assert U.is_unitary()
        out = apply_unitary(U, psi)
        assert abs(out.norm_squared - 1.0) < 1e-12


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_long_unitary_chains_preserve_norm(seed):
    rng = np.random.default_rng(seed)
    psi = random_state((2, 3), rng)
    unitaries = [random_unitary(6, rng) for _ in range(10)]
    for i in range(1000):
        psi = apply_unitary(unitaries[i % 10], psi)
    assert abs(psi.norm_squared - 1.0) < 1e-10


def test_change_basis_rotation_of_up():
    rotated = change_basis(UP, 0, basis_rotation(), labels=("s_right", "s_left"))
    assert np.allclose(rotated.amplitudes, [H, H], atol=1e-15)
    assert rotated.basis_labels == (("s_right", "s_left"),)


def test_change_basis_identity_and_involution(rng):
    psi = random_state((2, 3), rng)
    assert np.allclose(change_basis(psi, 0, identity(2)).amplitudes, psi.amplitudes, atol=0)
    B = basis_rotation()
    twice = change_basis(change_basis(psi, 0, B), 0, B)
    assert np.max(np.abs(twice.amplitudes - psi.amplitudes)) < 1e-12


def test_global_phase_is_not_a_physical_difference(rng):
    psi = random_state((2, 3), rng)
    phased = apply_unitary(Operator(np.exp(0.7j) * np.eye(6)), psi)
    assert not np.allclose(phased.amplitudes, psi.amplitudes)
    assert equal_up_to_phase(phased, psi)
    assert not equal_up_to_phase(UP, change_basis(UP, 0, basis_rotation()))


def test_change_basis_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        change_basis(tensor_product(UP, READY), 1, basis_rotation())


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_basis_change_on_partner_does_not_signal(seed):
    rng = np.random.default_rng(seed)
    psi = random_state((2, 3), rng)
    before = [w for _, w, _ in born_weights(psi, 0, spin_observable())]
    after = [w for _, w, _ in born_weights(change_basis(psi, 1, random_unitary(3, rng)), 0, spin_observable())]
    assert np.max(np.abs(np.subtract(before, after))) < 1e-12


def test_measure_eigenstate_is_certain():
    outcome, collapsed, probability = measure(UP, 0, spin_observable(), seed=0)
    assert outcome == 1.0
    assert probability == pytest.approx(1.0, abs=1e-15)
    assert np.allclose(collapsed.amplitudes, UP.amplitudes)


def test_measure_equal_superposition_weights():
    psi = StateVector.from_amplitudes([H, H], labels=["S"])
    weights = [w for _, w, _ in born_weights(psi, 0, spin_observable())]
    assert weights == pytest.approx([0.5, 0.5], abs=1e-15)
    _, _, probability = measure(psi, 0, spin_observable(), seed=3)
    assert probability == pytest.approx(0.5, abs=1e-15)


def test_measure_is_deterministic_per_seed(rng):
    psi = random_state((2, 3), rng)
    first = measure(psi, 1, index_observable(3), seed=42)
    for _ in range(5):
        again = measure(psi, 1, index_observable(3), seed=42)
        assert again.outcome == first.outcome
        assert np.array_equal(again.collapsed.amplitudes, first.collapsed.amplitudes)


def test_repeated_measurement_repeats_outcome(rng):
    psi = random_state((3, 2), rng)
    for seed in range(50):
        outcome, collapsed, _ = measure(psi, 0, index_observable(3), seed)
        again, _, probability = measure(collapsed, 0, index_observable(3), seed + 1)
        assert again == outcome
        assert probability == pytest.approx(1.0, abs=1e-12)


def test_measure_rejects_non_hermitian_observable():
    with pytest.raises(PreconditionError):
        measure(UP, 0, Operator(np.array([[0.0, 1.0], [0.0, 0.0]])), seed=0)


def test_project_onto_zero_weight_outcome_is_an_error():
    with pytest.raises(PreconditionError, match="zero probability"):
        project_onto(UP, 0, spin_observable(), -1.0)


def test_reduced_state_of_product_is_pure(rng):
    a = random_state((2,), rng)
    rho = reduced_state(tensor_product(a, random_state((3,), rng)), [0])
    assert rho.purity == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(rho.entries - DensityMatrix.from_state(a).entries)) < 1e-12


@pytest.mark.parametrize("c1, diagonal", [(H, (0.5, 0.5)), (0.6, (0.36, 0.64))])
def test_reduced_state_of_correlated_pair(c1, diagonal):
    c2 = math.sqrt(1.0 - c1**2)
    amps = np.zeros((2, 3))
    amps[0, 1], amps[1, 2] = c1, c2
    psi = StateVector.from_amplitudes(amps, dims=(2, 3), labels=("S", "A"))
    rho = reduced_state(psi, [0])
    assert rho.diagonal == pytest.approx(np.array(diagonal), abs=1e-12)
    assert abs(rho.entries[0, 1]) < 1e-15


def test_reduced_state_needs_a_subsystem(rng):
    with pytest.raises(PreconditionError):
        reduced_state(random_state((2, 2), rng), [])


def test_schmidt_coefficients_sum_to_one(rng):
    weights = schmidt_coefficients(random_state((2, 3), rng))
    assert weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(weights) <= 0)


def test_lift_acts_on_one_subsystem(rng):
    psi = random_state((2, 3), rng)
    lifted = lift(spin_observable(), psi.dims, 0)
    assert lifted.dim == 6
    expected = np.kron(np.diag([1.0, -1.0]), np.eye(3))
    assert np.array_equal(lifted.entries, expected)


def test_density_matrix_validation():
    with pytest.raises(PreconditionError):
        DensityMatrix(np.diag([0.5, 0.6]))
    with pytest.raises(PreconditionError):
        DensityMatrix(np.diag([1.5, -0.5]))
