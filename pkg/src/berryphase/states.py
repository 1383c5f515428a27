"""Complex state-vector arithmetic: inner products, norms, normalization checks.

State vectors are 1-d complex double arrays (hbar = 1, dimensionless
amplitudes). Vectors built through :func:`state_vector` are frozen after
construction and safe to share between threads.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, EvaluationError

NORMALIZATION_TOL = 1e-12


def state_vector(amplitudes) -> np.ndarray:
    """Build an immutable complex state vector, rejecting NaN/Inf amplitudes."""
    vec = np.array(amplitudes, dtype=np.complex128)
    if vec.ndim != 1 or vec.size == 0:
        raise DimensionError(f"state vector must be 1-d and non-empty, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise EvaluationError("state vector contains non-finite amplitudes")
    vec.setflags(write=False)
    return vec


def inner_product(a, b) -> complex:
    """Hermitian inner product <a|b>, conjugate-linear in the first slot."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionError(f"inner product of vectors with shapes {a.shape} and {b.shape}")
    return complex(np.vdot(a, b))


def norm(a) -> float:
    """Euclidean norm sqrt(<a|a>)."""
    return float(np.linalg.norm(np.asarray(a, dtype=np.complex128)))


def is_normalized(a, tol: float = NORMALIZATION_TOL) -> bool:
    """True iff |norm(a) - 1| <= tol."""
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    return abs(norm(a) - 1.0) <= tol
