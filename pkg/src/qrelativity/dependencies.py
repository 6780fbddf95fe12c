"""
Dependencies for the qrelativity API.

Token checking is off unless QREL_API_TOKEN is set.
"""

from typing import Optional

from fastapi import Header, HTTPException

from .settings import get_settings


async def verify_token(x_api_token: Optional[str] = Header(None)):
    """Reject requests whose X-API-Token header does not match QREL_API_TOKEN."""
    expected = get_settings().api_token
    if expected and x_api_token != expected:
        raise HTTPException(status_code=401, detail="Invalid or missing API token")
    return True
