"""
JSON and CSV output with bit-exact floats.

JSON keys are sorted and floats use Python's shortest round-trip repr, so a
reparse recovers the same doubles and reruns diff cleanly. CSV goes through
pandas with 17 significant digits and LF line endings.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Union

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"


def sanitize_to_native(obj: Any) -> Any:
    """
    Recursively convert numpy types to native Python types.
    Complex numbers become {"re": .., "im": ..}; non-finite floats become None.
    """
    if isinstance(obj, dict):
        return {str(k): sanitize_to_native(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [sanitize_to_native(i) for i in obj]
    elif isinstance(obj, np.ndarray):
        return sanitize_to_native(obj.tolist())
    elif isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    elif isinstance(obj, (np.integer, int)):
        return int(obj)
    elif isinstance(obj, (np.complexfloating, complex)):
        return {"re": sanitize_to_native(obj.real), "im": sanitize_to_native(obj.imag)}
    elif isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if math.isfinite(value) else None
    else:
        return obj


def dumps_sorted(payload: Any) -> str:
    return json.dumps(sanitize_to_native(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path: Union[str, Path], payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_sorted(payload))
    logger.debug(f"wrote {path}")
    return path


def intensity_frame(x: np.ndarray, intensity: np.ndarray) -> pd.DataFrame:
    return pd.DataFrame({"x_meters": np.asarray(x, dtype=float), "intensity": np.asarray(intensity, dtype=float)})


def write_csv(path: Union[str, Path], frame: pd.DataFrame) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    logger.debug(f"wrote {len(frame)} rows to {path}")
    return path
