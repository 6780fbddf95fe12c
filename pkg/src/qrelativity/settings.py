"""
Runtime settings for qrelativity.

Values are read from the environment (optionally seeded from a `.env` file in
the working directory). Nothing here is needed for library use; the CLI and the
API read settings once at startup.
"""

import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator


class Settings(BaseModel):
    output_dir: str = Field(".", description="Base directory for scenario outputs")
    log_level: str = Field("WARNING", description="Root logging level for the CLI")
    api_token: Optional[str] = Field(None, description="Token required by the HTTP API, if set")
    max_workers: Optional[int] = Field(None, description="Thread pool size for pair evolution")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        allowed = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in allowed:
            raise ValueError(f"log_level must be one of {allowed}")
        return v.upper()

    @field_validator("max_workers")
    @classmethod
    def validate_max_workers(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 1:
            raise ValueError("max_workers must be at least 1")
        return v


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    load_dotenv()
    workers = os.getenv("QREL_MAX_WORKERS")
    return Settings(
        output_dir=os.getenv("QREL_OUTPUT_DIR", "."),
        log_level=os.getenv("QREL_LOG_LEVEL", "WARNING"),
        api_token=os.getenv("QREL_API_TOKEN") or None,
        max_workers=int(workers) if workers else None,
    )
