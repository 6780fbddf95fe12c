"""
Scenario Router - run a scenario config and return its JSON payload.
No files are written; CSV tables stay with the CLI.
"""

import logging

from fastapi import APIRouter, Depends, HTTPException

from ..dependencies import verify_token
from ..exceptions import ConfigError, PreconditionError
from ..schemas.response_models import ScenarioRunResponse
from ..schemas.scenario import Scenario
from ..services.scenarios import builtin_names, load_scenario, run_scenario
from ..settings import get_settings

logger = logging.getLogger(__name__)

router = APIRouter(dependencies=[Depends(verify_token)])


def _respond(scenario: Scenario) -> ScenarioRunResponse:
    try:
        outcome = run_scenario(scenario, max_workers=get_settings().max_workers)
    except ConfigError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except PreconditionError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"scenario {scenario.kind} failed: {e}")
        raise HTTPException(status_code=500, detail=str(e))
    report = outcome.report()
    return ScenarioRunResponse(
        kind=report["kind"],
        seed=report["seed"],
        metric=report["metric"],
        value=report["value"],
        payload=report["payload"],
    )


@router.post("/run", response_model=ScenarioRunResponse)
def run(scenario: Scenario):
    """
    Run one scenario.

    The body is a scenario config ({"kind", "params", "seed", "output_path"});
    `output_path` is ignored here.
    """
    return _respond(scenario)


@router.get("/builtin")
def list_builtin():
    """Names of the packaged scenario configs."""
    return {"scenarios": builtin_names()}


@router.post("/builtin/{name}", response_model=ScenarioRunResponse)
def run_builtin(name: str):
    try:
        scenario = load_scenario(f"builtin:{name}")
    except ConfigError as e:
        raise HTTPException(status_code=404, detail=str(e))
    return _respond(scenario)
