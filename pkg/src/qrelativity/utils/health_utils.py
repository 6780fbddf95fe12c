import logging

import numpy as np
from scipy.signal import find_peaks

logger = logging.getLogger(__name__)


def check_fft_health() -> str:
    """
    Round-trips a small vector through numpy's FFT.
    Returns "ready" if successful, "error" otherwise.
    """
    try:
        x = np.exp(1j * np.linspace(0.0, 1.0, 64))
        if not np.allclose(np.fft.ifft(np.fft.fft(x)), x, atol=1e-12):
            raise RuntimeError("FFT round trip drifted")
        return "ready"
    except Exception as e:
        logger.error(f"FFT health check failed: {e}")
        return "error"


def check_linalg_health() -> str:
    """Diagonalizes the Pauli-Z matrix; eigenvalues must come back as (-1, 1)."""
    try:
        values = np.linalg.eigvalsh(np.diag([1.0, -1.0]))
        if not np.allclose(values, [-1.0, 1.0]):
            raise RuntimeError(f"unexpected eigenvalues {values}")
        return "ready"
    except Exception as e:
        logger.error(f"Linear algebra health check failed: {e}")
        return "error"


def check_scipy_health() -> str:
    try:
        peaks, _ = find_peaks(np.array([0.0, 1.0, 0.0, 2.0, 0.0]))
        if list(peaks) != [1, 3]:
            raise RuntimeError(f"unexpected peaks {peaks}")
        return "ready"
    except Exception as e:
        logger.error(f"SciPy health check failed: {e}")
        return "error"
