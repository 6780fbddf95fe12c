"""
qrelativity HTTP API
====================

Endpoints:
- /scenarios/* - run scenario configs (JSON payload only, no files)
- /transforms/* - transform table
- /verify - invariant suite
"""

from datetime import datetime, timezone

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from .constants import SCENARIO_KINDS
from .routers import scenarios, transforms, verification
from .schemas.general import HealthResponse
from .utils.health_utils import check_fft_health, check_linalg_health, check_scipy_health
from .utils.version import get_version

__version__ = get_version()

app = FastAPI(
    title="qrelativity",
    description="Quantum-relativity scenarios: measurement chains, frame relations, wave packets",
    version=__version__,
    docs_url="/docs",
    redoc_url="/redoc",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(scenarios.router, prefix="/scenarios", tags=["Scenarios"])
app.include_router(transforms.router, prefix="/transforms", tags=["Transforms"])
app.include_router(verification.router, prefix="/verify", tags=["Verification"])


@app.get("/")
async def root():
    """API information."""
    return {
        "name": "qrelativity",
        "version": __version__,
        "scenario_kinds": list(SCENARIO_KINDS),
        "docs": "/docs",
    }


@app.get("/health", response_model=HealthResponse)
async def health():
    dependencies = {
        "numpy_fft": check_fft_health(),
        "numpy_linalg": check_linalg_health(),
        "scipy": check_scipy_health(),
    }
    return HealthResponse(
        status="operational" if all(v == "ready" for v in dependencies.values()) else "degraded",
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
        dependencies=dependencies,
    )
