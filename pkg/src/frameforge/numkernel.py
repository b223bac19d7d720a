"""Dense numeric kernel.

Every rank decision in the package goes through :func:`numeric_rank` with a
:class:`TolerancePolicy`, so this is the only module that knows about
floating-point thresholds.

Matrices are plain 2-D numpy arrays. A ``float64`` array is the "real" field
tag and a ``complex128`` array the "complex" one.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidInput

__all__ = [
    "TolerancePolicy",
    "DEFAULT_TOLERANCE",
    "SvdResult",
    "as_matrix",
    "field_of",
    "svd",
    "numeric_rank",
    "pseudo_inverse",
    "orthonormal_complement_basis",
    "defect_rank",
]


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds for numeric rank and finite-section stabilization.

    ``rank_rtol`` is relative to the largest singular value, ``abs_floor`` is
    an absolute lower bound on the rank threshold, and ``stabilization_rtol``
    bounds the relative change of the reduced minimum modulus across scan
    steps.
    """

    rank_rtol: float = 1e-10
    abs_floor: float = 1e-12
    stabilization_rtol: float = 1e-3

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if not (isinstance(value, (int, float)) and 0.0 < value < 1.0):
                raise InvalidInput(f"{f.name} must lie in (0, 1), got {value!r}")

    def threshold(self, sigma_max: float) -> float:
        return max(self.rank_rtol * sigma_max, self.abs_floor)

    def with_overrides(self, text: str) -> "TolerancePolicy":
        """Parse ``"rank_rtol=1e-8,abs_floor=1e-13"`` into a new policy."""
        changes = {}
        names = {f.name for f in dataclasses.fields(self)}
        for item in filter(None, (part.strip() for part in text.split(","))):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in names:
                raise InvalidInput(f"bad tolerance override {item!r}; expected one of {sorted(names)}")
            try:
                changes[key] = float(value)
            except ValueError:
                raise InvalidInput(f"bad tolerance value {value!r} for {key}") from None
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT_TOLERANCE = TolerancePolicy()


class SvdResult(NamedTuple):
    singular_values: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray


def as_matrix(a) -> np.ndarray:
    """Validate ``a`` and return it as a float64 or complex128 2-D array."""
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise InvalidInput(f"expected a 2-D matrix, got shape {arr.shape}")
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128)
    else:
        try:
            arr = arr.astype(np.float64)
        except (TypeError, ValueError):
            raise InvalidInput("matrix entries must be numbers") from None
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("matrix has non-finite entries")
    return arr


def field_of(a: np.ndarray) -> str:
    return "complex" if np.iscomplexobj(a) else "real"


def _fix_phase(vectors: np.ndarray) -> np.ndarray:
    """Phases making the largest-magnitude entry of each column real positive."""
    if vectors.size == 0:
        return np.ones(vectors.shape[1], dtype=vectors.dtype)
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    mags = np.abs(pivots)
    mags[mags == 0] = 1.0
    return pivots / mags


def svd(a) -> SvdResult:
    """Full SVD ``a = U diag(s) V*`` with deterministic singular-vector phases.

    The largest-magnitude entry of every right singular vector is made real
    positive and the paired left vector is rotated by the same phase. Left
    vectors without a partner (beyond ``min(rows, cols)``) get the same
    normalization applied to themselves.
    """
    a = as_matrix(a)
    m, n = a.shape
    if m == 0 or n == 0:
        return SvdResult(np.zeros(0), np.eye(m, dtype=a.dtype), np.eye(n, dtype=a.dtype))
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    v = vh.conj().T
    k = s.size
    phase = _fix_phase(v)
    v = v / phase
    u = u.copy()
    u[:, :k] = u[:, :k] / phase[:k]
    if m > k:
        u[:, k:] = u[:, k:] / _fix_phase(u[:, k:])
    return SvdResult(s, u, v)


def numeric_rank(sv, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> int:
    """Number of singular values above ``max(rank_rtol * s_max, abs_floor)``."""
    sv = np.asarray(sv, dtype=float)
    if sv.size == 0:
        return 0
    return int(np.count_nonzero(sv > tol.threshold(float(sv.max()))))


def pseudo_inverse(a, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Moore-Penrose inverse with the numeric rank truncation of ``tol``."""
    a = as_matrix(a)
    s, u, v = svd(a)
    r = numeric_rank(s, tol)
    return (v[:, :r] / s[:r]) @ u[:, :r].conj().T


def orthonormal_complement_basis(a, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Orthonormal basis (as columns) of the orthogonal complement of the column space."""
    a = as_matrix(a)
    s, u, _ = svd(a)
    r = numeric_rank(s, tol)
    q = u[:, r:]
    # these columns pair with zero singular values, so normalize them on their own
    return q / _fix_phase(q)


def defect_rank(product, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> int:
    """Numeric rank of ``product - I``.

    The rank threshold is taken relative to ``max(1, s_max(product))`` rather
    than to the defect itself: the defect of an exact reconstruction is pure
    rounding noise, and measuring it against its own size would count that
    noise as rank.
    """
    p = as_matrix(product)
    if p.shape[0] != p.shape[1]:
        raise InvalidInput(f"defect_rank needs a square matrix, got {p.shape}")
    if p.size == 0:
        return 0
    scale = max(1.0, float(np.linalg.norm(p, 2)))
    s = svd(p - np.eye(p.shape[0])).singular_values
    return int(np.count_nonzero(s > tol.threshold(scale)))
