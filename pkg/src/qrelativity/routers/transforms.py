"""
Transforms Router - the dilation / de Broglie / delta / gamma table.
"""

from fastapi import APIRouter, Depends, HTTPException

from ..dependencies import verify_token
from ..exceptions import PreconditionError
from ..schemas.response_models import TransformTableResponse
from ..schemas.scenario import TransformTableParams
from ..services.scenarios import transform_table, transform_table_report

router = APIRouter(dependencies=[Depends(verify_token)])


@router.post("/table", response_model=TransformTableResponse)
def table(params: TransformTableParams):
    """
    One row per (mass pair, E_q) with columns m_S, m_A, E_q, dilation,
    lambda_forward, lambda_backward, product_forward, product_backward,
    magnified, phase_ratio, delta and gamma. Singular delta/gamma are null.
    """
    try:
        frame = transform_table(params.mass_pairs, params.energies, params.t, params.h, params.speed)
    except PreconditionError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return transform_table_report(frame)
