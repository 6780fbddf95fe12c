"""
Scenario service: load a JSON config, run it, write its outputs.

A scenario names one kind and its params. Loading validates the document and
the kind's params model and turns every failure into a `ConfigError` that
points at a line (JSON syntax) or a dotted field path (schema). Running
dispatches to the feature modules and returns a `ScenarioOutcome` holding the
JSON payload, the headline metric and any tables to emit as CSV.

Outputs carry no timestamps or host details, so the same (config, seed)
always writes byte-identical files.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from importlib.resources import files
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError

from ..constants import HBAR
from ..exceptions import ConfigError, PreconditionError, SingularityError
from ..features import (
    Grid1D,
    SlitConfig,
    TransformParams,
    branch_frequencies,
    build_chain,
    check_equivalence,
    compose_relative_amplitude,
    constraint_residual,
    delta_factor,
    detect_intransitivity,
    dilate_length,
    double_slit,
    equivalence_closure,
    expected_diffusion,
    fit_diffusion_constant,
    frame_swap_debroglie,
    frame_swapped_run,
    gamma_factor,
    induced_relation_graph,
    nested_norm,
    premeasure,
    reduced_state,
    relative_amplitude_history,
    rewrite_basis_paradox,
    schmidt_coefficients,
    system_state,
    wigner_chain,
)
from ..schemas.frames import FrameGraphModel
from ..schemas.scenario import (
    PARAMS_MODELS,
    BasisParadoxParams,
    ChainFitParams,
    DoubleSlitParams,
    FrameSwapParams,
    GridModel,
    RelationCheckParams,
    Scenario,
    SlitGeometry,
    TransformTableParams,
    WignerChainParams,
)
from ..utils.serialization import intensity_frame, sanitize_to_native, write_csv, write_json

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"
BUILTIN_PACKAGE = "qrelativity.data.scenarios"

TRANSFORM_COLUMNS = [
    "m_S",
    "m_A",
    "E_q",
    "dilation",
    "lambda_forward",
    "lambda_backward",
    "product_forward",
    "product_backward",
    "magnified",
    "phase_ratio",
    "delta",
    "gamma",
]


@dataclass
class ScenarioOutcome:
    kind: str
    seed: int
    metric: str
    value: Any
    payload: Dict[str, Any]
    # CSV tables keyed by the suffix appended to the output stem ("" for the main table)
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)

    def summary(self, output: Optional[Path] = None) -> str:
        value = self.value
        if isinstance(value, complex):
            value = f"{value.real:.6g}{value.imag:+.6g}j"
        elif isinstance(value, float):
            value = f"{value:.6g}"
        line = f"{self.kind}: {self.metric}={value}"
        return f"{line} -> {output}" if output is not None else line

    def report(self) -> Dict[str, Any]:
        return sanitize_to_native(
            {"kind": self.kind, "seed": self.seed, "metric": self.metric, "value": self.value, "payload": self.payload}
        )


# --- loading ---

def _location(loc: Sequence[Any], prefix: str = "") -> str:
    path = ".".join(str(part) for part in loc)
    return f"{prefix}{path}" if path else prefix.rstrip(".") or "<root>"


def _config_error(exc: ValidationError, prefix: str = "") -> ConfigError:
    first = exc.errors()[0]
    return ConfigError(first["msg"], location=_location(first["loc"], prefix))


def validate_params(scenario: Scenario) -> BaseModel:
    """The typed params of a scenario; schema failures point at `params.<field>`."""
    model = PARAMS_MODELS[scenario.kind]
    try:
        return model.model_validate(scenario.params)
    except ValidationError as e:
        raise _config_error(e, prefix="params.") from e


def parse_json_document(text: str, source: str = "<string>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(e.msg, location=f"{source}: line {e.lineno}, column {e.colno}") from e


def _scenario_from_data(data: Any, source: str) -> Scenario:
    if not isinstance(data, dict):
        raise ConfigError("a scenario must be a JSON object", location=source)
    try:
        scenario = Scenario.model_validate(data)
    except ValidationError as e:
        raise _config_error(e) from e
    validate_params(scenario)
    return scenario


def parse_scenario_text(text: str, source: str = "<string>") -> Scenario:
    return _scenario_from_data(parse_json_document(text, source), source)


def builtin_names() -> List[str]:
    return sorted(
        entry.name.removesuffix(".json") for entry in files(BUILTIN_PACKAGE).iterdir() if entry.name.endswith(".json")
    )


def read_config_text(source: str) -> str:
    """Text of a config file, or of a packaged scenario for `builtin:<name>`."""
    if source.startswith(BUILTIN_PREFIX):
        name = source[len(BUILTIN_PREFIX):]
        if name not in builtin_names():
            raise ConfigError(f"unknown built-in scenario {name!r}; available: {', '.join(builtin_names())}")
        return files(BUILTIN_PACKAGE).joinpath(f"{name}.json").read_text(encoding="utf-8")
    try:
        return Path(source).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config: {e.strerror or e}", location=source) from e
    except UnicodeDecodeError as e:
        raise ConfigError(f"config is not UTF-8 text: {e.reason} at byte {e.start}", location=source) from e


def load_scenario(source: str) -> Scenario:
    scenario = parse_scenario_text(read_config_text(source), source)
    logger.info(f"loaded {scenario.kind} scenario from {source}")
    return scenario


def load_transform_params(source: str) -> TransformTableParams:
    """Transform-table params from a bare params document or a full transform_table scenario."""
    data = parse_json_document(read_config_text(source), source)
    if isinstance(data, dict) and "kind" in data:
        scenario = _scenario_from_data(data, source)
        if scenario.kind != "transform_table":
            raise ConfigError(f"expected a transform_table scenario, got {scenario.kind!r}", location="kind")
        return validate_params(scenario)
    try:
        return TransformTableParams.model_validate(data)
    except ValidationError as e:
        raise _config_error(e) from e


# --- transform table ---

def _singular_or(fn: Callable[[], float]) -> float:
    try:
        return fn()
    except SingularityError:
        return math.nan


def transform_table(
    mass_pairs: Sequence[Tuple[float, float]],
    energies: Sequence[float] = (0.0,),
    t: float = 1.0,
    h: float = HBAR,
    speed: float = 1.0,
) -> pd.DataFrame:
    """
    One row per (mass pair, E_q): dilation factor, de Broglie wavelengths and
    products, delta and gamma (gamma at v/c = E_q t / h). Singular factors are NaN.
    """
    if not mass_pairs:
        raise PreconditionError("transform table needs at least one mass pair")
    if not energies:
        raise PreconditionError("transform table needs at least one energy")
    for m_s, m_a in mass_pairs:
        if not (m_s > 0 and m_a > 0):
            raise PreconditionError(f"masses must be positive, got ({m_s!r}, {m_a!r})")
    if any(not (math.isfinite(e) and e >= 0) for e in energies):
        raise PreconditionError(f"energies must be finite and non-negative, got {list(energies)}")

    pairs = pd.DataFrame(list(mass_pairs), columns=["m_S", "m_A"], dtype=float)
    grid = pairs.merge(pd.DataFrame({"E_q": np.asarray(energies, dtype=float)}), how="cross")

    rows = []
    for m_s, m_a, e_q in grid.itertuples(index=False, name=None):
        params = TransformParams(m_s, m_a, E_q=e_q, t=t, h=h)
        swap = frame_swap_debroglie(m_s, m_a, speed, h)
        rows.append(
            {
                "m_S": m_s,
                "m_A": m_a,
                "E_q": e_q,
                "dilation": dilate_length(1.0, m_s, m_a),
                **swap._asdict(),
                "phase_ratio": params.phase_ratio,
                "delta": _singular_or(lambda: delta_factor(params)),
                "gamma": _singular_or(lambda: gamma_factor(params.phase_ratio, 1.0)),
            }
        )
    table = pd.DataFrame(rows, columns=TRANSFORM_COLUMNS)
    singular = int(table["delta"].isna().sum())
    if singular:
        logger.warning(f"{singular} transform-table rows sit at or beyond |E_q t / h| = 1; delta and gamma left empty")
    return table


def transform_table_report(table: pd.DataFrame) -> Dict[str, Any]:
    return {"columns": list(table.columns), "rows": sanitize_to_native(table.to_dict(orient="records"))}


# --- runners ---

def _grid(model: GridModel) -> Grid1D:
    return Grid1D(model.x_min, model.x_max, model.n_points)


def _slit_config(p: SlitGeometry) -> SlitConfig:
    return SlitConfig(p.slit_separation, p.slit_width, p.screen_distance, p.packet_speed)


def _record(r) -> Dict[str, Any]:
    return {"observer": r.observer, "observed": r.observed, "time": r.time, "outcome_index": r.outcome_index}


def _run_wigner_chain(p: WignerChainParams, seed: int, max_workers: Optional[int]) -> ScenarioOutcome:
    s0 = system_state(p.c1.value, p.c2.value)
    report = wigner_chain(s0, seed, p.pointer_dim)
    graph = induced_relation_graph(report)
    payload = {
        "born_weights": s0.probabilities,
        "branch": report.branch,
        "descriptions_same": report.comparison.same,
        "fidelity": report.comparison.fidelity,
        "self_record": _record(report.self_record),
        "external_record": _record(report.external_record),
        "q_edges": sorted(graph.q_edges),
        "intransitive_pairs": detect_intransitivity(graph),
    }
    if p.trials:
        psi_t = premeasure(s0, p.pointer_dim)
        payload["branch_frequencies"] = branch_frequencies(psi_t, range(seed, seed + p.trials))
        payload["trials"] = p.trials
    return ScenarioOutcome("wigner_chain", seed, "branch", report.branch, payload)


def _run_basis_paradox(p: BasisParadoxParams, seed: int, max_workers: Optional[int]) -> ScenarioOutcome:
    psi_t = premeasure(system_state(p.c1.value, p.c2.value), p.pointer_dim)
    report = rewrite_basis_paradox(psi_t)
    payload = {
        "original_basis": list(report.original.basis_labels[0]),
        "rewritten_basis": list(report.rewritten.basis_labels[0]),
        "original_coefficients": report.original_coefficients,
        "rewritten_coefficients": report.rewritten_coefficients,
        "rewritten_apparatus": report.rewritten_apparatus,
        "round_trip_overlap": report.round_trip_overlap,
        "apparatus_prediction_gap": report.apparatus_prediction_gap,
        "schmidt_coefficients": schmidt_coefficients(psi_t),
        "system_purity": reduced_state(psi_t, [0]).purity,
    }
    return ScenarioOutcome("basis_paradox", seed, "round_trip_overlap", report.round_trip_overlap, payload)


def _run_double_slit(p: DoubleSlitParams, seed: int, max_workers: Optional[int]) -> ScenarioOutcome:
    result = double_slit(_slit_config(p), p.mass, _grid(p.grid), p.hbar)
    payload = {
        "mass": result.mass,
        "wavelength": result.wavelength,
        "reduced_wavelength": result.reduced_wavelength,
        "time_of_flight": result.time_of_flight,
        "fringe_spacing": result.fringe_spacing,
        "expected_spacing": result.expected_spacing,
        "relative_error": result.relative_error,
    }
    tables = {"": intensity_frame(result.screen_x, result.intensity)}
    return ScenarioOutcome("double_slit", seed, "fringe_spacing", result.fringe_spacing, payload, tables)


def _run_frame_swap(p: FrameSwapParams, seed: int, max_workers: Optional[int]) -> ScenarioOutcome:
    report = frame_swapped_run(_slit_config(p), p.m_S, p.m_A, _grid(p.grid), p.hbar)
    payload = {
        "dilation": report.dilation,
        "lab_spacing": report.lab.fringe_spacing,
        "swapped_spacing": report.swapped.fringe_spacing,
        "magnified_spacing": report.magnified_spacing,
        "expected_spacing": report.expected_spacing,
        "spacing_error": report.spacing_error,
        "product_lab": report.product_lab,
        "product_swapped": report.product_swapped,
        "product_error": report.product_error,
        "debroglie": report.debroglie._asdict(),
        "consistent": report.consistent,
    }
    tables = {
        "_lab": intensity_frame(report.lab.screen_x, report.lab.intensity),
        "_swapped": intensity_frame(report.swapped.screen_x, report.swapped.intensity),
    }
    return ScenarioOutcome("frame_swap", seed, "magnified_spacing", report.magnified_spacing, payload, tables)


def _run_chain_fit(p: ChainFitParams, seed: int, max_workers: Optional[int]) -> ScenarioOutcome:
    grid = _grid(p.grid)
    chain = build_chain(grid, p.masses, [init.model_dump() for init in p.pair_init], hbar=p.hbar)
    history, times = relative_amplitude_history(chain, p.dt, p.steps, p.every, max_workers)
    fit = fit_diffusion_constant(history, times)
    expected = expected_diffusion(chain)
    z = compose_relative_amplitude(chain).packet
    payload = {
        "n": chain.n,
        "masses": list(chain.masses),
        "effective_mass": z.mass,
        "nested_norm": nested_norm(chain),
        "k_re": fit.k.real,
        "k_im": fit.k.imag,
        "residual": fit.residual,
        "expected_k": expected,
        "k_relative_error": abs(fit.k - expected) / abs(expected),
        "constraint_residual": constraint_residual(chain, p.dt),
        "snapshots": len(history),
    }
    final = history[-1].packet.amplitudes
    tables = {"": pd.DataFrame({"x": grid.x, "z_re": final.real, "z_im": final.imag})}
    return ScenarioOutcome("chain_fit", seed, "k", fit.k, payload, tables)


def _run_relation_check(p: RelationCheckParams, seed: int, max_workers: Optional[int]) -> ScenarioOutcome:
    graph = p.to_graph()
    report = check_equivalence(graph)
    payload = {
        "frames": list(graph.names),
        "is_equivalence": report.is_equivalence,
        "violations": [{"kind": v.kind, "witness": list(v.witness)} for v in report.violations],
        "intransitive_pairs": detect_intransitivity(graph),
    }
    if p.closure:
        payload["closure_phys_edges"] = FrameGraphModel.from_graph(equivalence_closure(graph)).phys_edges
    return ScenarioOutcome("relation_check", seed, "violations", len(report.violations), payload)


def _run_transform_table(p: TransformTableParams, seed: int, max_workers: Optional[int]) -> ScenarioOutcome:
    table = transform_table(p.mass_pairs, p.energies, p.t, p.h, p.speed)
    return ScenarioOutcome("transform_table", seed, "rows", len(table), transform_table_report(table), {"": table})


RUNNERS: Dict[str, Callable[[Any, int, Optional[int]], ScenarioOutcome]] = {
    "wigner_chain": _run_wigner_chain,
    "basis_paradox": _run_basis_paradox,
    "double_slit": _run_double_slit,
    "frame_swap": _run_frame_swap,
    "chain_fit": _run_chain_fit,
    "relation_check": _run_relation_check,
    "transform_table": _run_transform_table,
}

def run_scenario(
    scenario: Scenario,
    seed: Optional[int] = None,
    max_workers: Optional[int] = None,
) -> ScenarioOutcome:
    """Run one scenario; `seed` overrides the config's seed."""
    params = validate_params(scenario)
    effective_seed = scenario.seed if seed is None else seed
    if effective_seed < 0:
        raise PreconditionError(f"seed must be non-negative, got {effective_seed}")
    logger.info(f"running {scenario.kind} with seed {effective_seed}")
    outcome = RUNNERS[scenario.kind](params, effective_seed, max_workers)
    logger.info(f"{scenario.kind} finished: {outcome.metric}={outcome.value!r}")
    return outcome


def write_outcome(outcome: ScenarioOutcome, out_dir: Path, stem: str) -> List[Path]:
    """Write `<stem>.json` plus one `<stem><suffix>.csv` per table; returns the paths, JSON first."""
    out_dir = Path(out_dir)
    written = [write_json(out_dir / f"{stem}.json", outcome.report())]
    for suffix, table in sorted(outcome.tables.items()):
        written.append(write_csv(out_dir / f"{stem}{suffix}.csv", table))
    return written
