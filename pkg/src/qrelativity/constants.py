"""
Physical constants and numerical tolerances shared across qrelativity.

CODATA values come from scipy.constants; everything is SI unless a function
says it works in natural units.
"""

import math

from scipy import constants as const

HBAR = const.hbar
SPEED_OF_LIGHT = const.c
ELECTRON_MASS = const.m_e
PLANCK_TIME = math.sqrt(const.hbar * const.G / const.c**5)

# Pointer-basis bookkeeping for the S-A-E chain
SYSTEM_BASIS = ("s_up", "s_down")
ROTATED_BASIS = ("s_right", "s_left")
APPARATUS_READY = 0
APPARATUS_SAW_UP = 1
APPARATUS_SAW_DOWN = 2
RECORDED_POINTER = (APPARATUS_SAW_UP, APPARATUS_SAW_DOWN)

NORM_TOL = 1e-12
UNITARY_TOL = 1e-12
HERMITIAN_TOL = 1e-12
EIGEN_GROUP_TOL = 1e-9
CORRELATION_TOL = 1e-9
PACKET_NORM_TOL = 1e-10

# Named tolerances for the invariant suite (qrel verify)
INVARIANT_TOLERANCES = {
    "hilbert.norm_preservation": 1e-10,
    "hilbert.no_signaling": 1e-12,
    "hilbert.repeat_measurement": 1e-12,
    "hilbert.reduced_product": 1e-12,
    "measurement.branch_correlation": 1e-12,
    "measurement.rewrite_overlap": 1e-12,
    "measurement.born_frequencies": 5.0,
    "measurement.dephase_positive": 1e-12,
    "relations.closure_clean": 0.0,
    "relations.intransitivity_bruteforce": 0.0,
    "relations.reciprocal_involution": 1e-12,
    "relations.branch_agreement": 0.0,
    "transforms.dilation_round_trip": 1e-12,
    "transforms.dilation_composition": 1e-12,
    "transforms.debroglie_invariance": 1e-9,
    "transforms.interval_symmetry": 1e-12,
    "transforms.delta_gamma_agreement": 1e-12,
    "transforms.triangle_inequality": 1e-12,
    "wavepacket.norm_conservation": 1e-10,
    "wavepacket.energy_conservation": 1e-10,
    "wavepacket.time_reversal": 1e-10,
    "wavepacket.fringe_law": 0.02,
    "wavepacket.frame_swap": 0.02,
    "nested.pair_norms": 1e-10,
    "nested.axiom_case": 1e-10,
    "nested.gaussian_composition": 0.005,
    "nested.diffusion_reduction": 1e-4,
}

SCENARIO_KINDS = (
    "wigner_chain",
    "basis_paradox",
    "double_slit",
    "frame_swap",
    "chain_fit",
    "relation_check",
    "transform_table",
)
