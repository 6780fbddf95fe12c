from .scenarios import (
    ScenarioOutcome,
    builtin_names,
    load_scenario,
    load_transform_params,
    parse_scenario_text,
    run_scenario,
    transform_table,
    transform_table_report,
    validate_params,
    write_outcome,
)
from .verification import InvariantResult, invariant_names, run_invariants

__all__ = [
    "ScenarioOutcome",
    "builtin_names",
    "load_scenario",
    "load_transform_params",
    "parse_scenario_text",
    "run_scenario",
    "transform_table",
    "transform_table_report",
    "validate_params",
    "write_outcome",
    "InvariantResult",
    "invariant_names",
    "run_invariants",
]
