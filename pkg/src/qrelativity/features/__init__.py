from .hilbert import (
    StateVector,
    Operator,
    DensityMatrix,
    MeasurementResult,
    tensor_product,
    apply_unitary,
    change_basis,
    eigenspaces,
    born_weights,
    measure,
    project_onto,
    reduced_state,
    schmidt_coefficients,
    identity,
    spin_observable,
    basis_rotation,
    index_observable,
    random_unitary,
    random_state,
    lift,
    equal_up_to_phase,
)
from .relations import (
    FrameId,
    FrameGraph,
    Violation,
    EquivalenceReport,
    ReciprocalPair,
    LocalTime,
    LocalClock,
    check_equivalence,
    equivalence_closure,
    detect_intransitivity,
    reciprocal_superposition,
    frame_times,
)
from .measurement import (
    UNRESOLVED,
    MeasurementRecord,
    DecoherenceParams,
    BasisParadoxReport,
    DescriptionComparison,
    WignerChainReport,
    ProjectionResult,
    system_state,
    premeasure,
    entangle_environment,
    rewrite_basis_paradox,
    wigner_chain,
    induced_relation_graph,
    project_chain,
    branch_frequencies,
    decoherence_time,
    planck_ratio,
    dephase,
)
from .transforms import (
    TransformParams,
    QuantumInterval,
    FiveDisplacement,
    DeBroglieSwap,
    NaturalUnits,
    dilate_length,
    compose_dilations,
    debroglie_product,
    frame_swap_debroglie,
    quantum_interval,
    gamma_factor,
    delta_factor,
    flat_5_interval,
    transfer_time,
)
from .wavepacket import (
    Grid1D,
    WavePacket,
    SlitConfig,
    PacketMoments,
    FreePropagator,
    DoubleSlitResult,
    FrameSwapReport,
    init_gaussian,
    evolve_free,
    moments,
    gaussian_width,
    propagate_to_screen,
    fringe_spacing,
    double_slit,
    frame_swapped_run,
)
from .nested import (
    FrameChain,
    RelativeAmplitude,
    DiffusionFit,
    build_chain,
    nested_norm,
    evolve_chain,
    compose_relative_amplitude,
    constraint_residual,
    relative_amplitude_history,
    fit_diffusion_constant,
    expected_diffusion,
)

__all__ = [
    # hilbert
    "StateVector",
    "Operator",
    "DensityMatrix",
    "MeasurementResult",
    "tensor_product",
    "apply_unitary",
    "change_basis",
    "eigenspaces",
    "born_weights",
    "measure",
    "project_onto",
    "reduced_state",
    "schmidt_coefficients",
    "identity",
    "spin_observable",
    "basis_rotation",
    "index_observable",
    "random_unitary",
    "random_state",
    "lift",
    "equal_up_to_phase",
    # relations
    "FrameId",
    "FrameGraph",
    "Violation",
    "EquivalenceReport",
    "ReciprocalPair",
    "LocalTime",
    "LocalClock",
    "check_equivalence",
    "equivalence_closure",
    "detect_intransitivity",
    "reciprocal_superposition",
    "frame_times",
    # measurement
    "UNRESOLVED",
    "MeasurementRecord",
    "DecoherenceParams",
    "BasisParadoxReport",
    "DescriptionComparison",
    "WignerChainReport",
    "ProjectionResult",
    "system_state",
    "premeasure",
    "entangle_environment",
    "rewrite_basis_paradox",
    "wigner_chain",
    "induced_relation_graph",
    "project_chain",
    "branch_frequencies",
    "decoherence_time",
    "planck_ratio",
    "dephase",
    # transforms
    "TransformParams",
    "QuantumInterval",
    "FiveDisplacement",
    "DeBroglieSwap",
    "NaturalUnits",
    "dilate_length",
    "compose_dilations",
    "debroglie_product",
    "frame_swap_debroglie",
    "quantum_interval",
    "gamma_factor",
    "delta_factor",
    "flat_5_interval",
    "transfer_time",
    # wavepacket
    "Grid1D",
    "WavePacket",
    "SlitConfig",
    "PacketMoments",
    "FreePropagator",
    "DoubleSlitResult",
    "FrameSwapReport",
    "init_gaussian",
    "evolve_free",
    "moments",
    "gaussian_width",
    "propagate_to_screen",
    "fringe_spacing",
    "double_slit",
    "frame_swapped_run",
    # nested
    "FrameChain",
    "RelativeAmplitude",
    "DiffusionFit",
    "build_chain",
    "nested_norm",
    "evolve_chain",
    "compose_relative_amplitude",
    "constraint_residual",
    "relative_amplitude_history",
    "fit_diffusion_constant",
    "expected_diffusion",
]
