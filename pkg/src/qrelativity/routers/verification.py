"""
Verification Router - run the invariant suite.
"""

import logging
from dataclasses import asdict
from typing import Optional

from fastapi import APIRouter, Depends, HTTPException, Query

from ..dependencies import verify_token
from ..exceptions import ConfigError
from ..schemas.response_models import InvariantResultModel, VerifyResponse
from ..services.verification import run_invariants

router = APIRouter(dependencies=[Depends(verify_token)])

logger = logging.getLogger(__name__)


@router.get("", response_model=VerifyResponse)
def verify(only: Optional[str] = Query(None, description="Run only invariants whose name starts with this prefix")):
    try:
        results = run_invariants(only=only)
    except ConfigError as e:
        raise HTTPException(status_code=422, detail=str(e))
    response = VerifyResponse(
        passed=all(r.passed for r in results),
        results=[InvariantResultModel(**asdict(r)) for r in results],
    )
    if response.failed:
        logger.warning(f"invariants failed: {', '.join(response.failed)}")
    return response
