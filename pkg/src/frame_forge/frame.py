"""Dense frame substrate.

A frame is an ``m x n`` matrix whose columns are the frame elements.  Inner
products conjugate the first argument, so the Gram matrix is ``F^* F`` and
the analysis operator applied to ``y`` is ``F^* y``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import ConvergenceError, DomainError, ZeroColumnError

UNIT_NORM_TOL = 1e-10
ZERO_COLUMN_TOL = 1e-14

# Fall back to a dense eigensolver for FF^* when m is at most this.
EIGH_FALLBACK_MAX_M = 64


@dataclass(frozen=True, eq=False)
class Frame:
    """Immutable unit-norm frame with construction metadata.

    ``entries`` is stored as ``float64`` for real frames and ``complex128``
    otherwise; it is made read-only on admission.  ``meta`` is a free-form
    descriptor, normally ``{"family": ..., "params": {...}}``.
    """

    entries: np.ndarray
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        a = np.array(self.entries, copy=True)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise DomainError(f"frame entries must be a nonempty 2-D array, got shape {a.shape}")
        a = a.astype(np.complex128 if np.iscomplexobj(a) else np.float64)
        if not np.all(np.isfinite(a)):
            raise DomainError("frame entries must be finite")
        norms = np.linalg.norm(a, axis=0)
        bad = np.flatnonzero(np.abs(norms - 1.0) > UNIT_NORM_TOL)
        if bad.size:
            j = int(bad[0])
            raise DomainError(
                f"column {j} has norm {norms[j]!r}; frames must have unit-norm columns "
                "(use normalize_columns for raw data)"
            )
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def real_flag(self) -> bool:
        return not np.iscomplexobj(self.entries)

    @property
    def family(self) -> str | None:
        return self.meta.get("family")

    def column(self, j: int) -> np.ndarray:
        return self.entries[:, j]

    def with_meta(self, **updates) -> "Frame":
        meta = dict(self.meta)
        meta.update(updates)
        return Frame(self.entries, meta)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __repr__(self):
        kind = "real" if self.real_flag else "complex"
        return f"Frame({self.m}x{self.n}, {kind}, family={self.family!r})"


def as_matrix(frame) -> np.ndarray:
    """Return the entry array of a Frame, or coerce an array-like."""
    if isinstance(frame, Frame):
        return frame.entries
    a = np.asarray(frame)
    if a.ndim != 2:
        raise DomainError(f"expected a 2-D matrix, got shape {a.shape}")
    return a


def gram(frame) -> np.ndarray:
    """Gram matrix ``G[i, j] = <f_i, f_j> = f_i^* f_j``.

    Only the upper triangle is computed by the product; the lower triangle is
    mirrored so the result is exactly Hermitian.
    """
    F = as_matrix(frame)
    G = F.conj().T @ F
    upper = np.triu(G, 1)
    return np.diag(np.diag(G).real).astype(G.dtype) + upper + upper.conj().T


def _power_iterate(A, v, tol, max_iter):
    lam = 0.0
    for it in range(1, max_iter + 1):
        w = A @ v
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            return 0.0, v, it, True
        v = w / nrm
        new = float(np.real(np.vdot(v, A @ v)))
        if abs(new - lam) <= tol * abs(new):
            return new, v, it, True
        lam = new
    return lam, v, max_iter, False


def spectral_norm(frame, tol: float = 1e-12, max_iter: int = 10000) -> float:
    """Largest singular value, by power iteration on the ``m x m`` operator ``FF^*``.

    The start vector is the normalized all-ones vector.  If the iteration
    settles within 50 steps the start may have been (numerically) orthogonal to
    the top eigenvector, so a second run from a start with its first coordinate
    perturbed by 1e-3 is made and the larger estimate is kept.

    Raises
    ------
    ConvergenceError
        If the cap is reached and ``m`` exceeds the dense fallback size.
    """
    F = as_matrix(frame)
    m = F.shape[0]
    A = F @ F.conj().T
    v0 = np.ones(m, dtype=A.dtype) / np.sqrt(m)
    lam, v, its, ok = _power_iterate(A, v0, tol, max_iter)
    if ok and its <= 50:
        v1 = v0.copy()
        v1[0] += 1e-3
        v1 /= np.linalg.norm(v1)
        lam1, v1, _, ok1 = _power_iterate(A, v1, tol, max_iter)
        if ok1 and lam1 > lam:
            lam, v = lam1, v1
        ok = ok and ok1
    if not ok:
        if m <= EIGH_FALLBACK_MAX_M:
            lam = float(np.linalg.eigvalsh(A)[-1])
        else:
            raise ConvergenceError(
                f"power iteration did not reach relative change {tol} in {max_iter} steps",
                last_iterate=v,
                last_value=np.sqrt(max(lam, 0.0)),
            )
    return float(np.sqrt(max(lam, 0.0)))


def tightness_defect(frame) -> float:
    """``||F||_2^2 - n/m``; zero (to rounding) exactly for tight unit-norm frames."""
    F = as_matrix(frame)
    m, n = F.shape
    return spectral_norm(F) ** 2 - n / m


def normalize_columns(raw, meta: Mapping[str, Any] | None = None) -> Frame:
    a = np.asarray(raw)
    if a.ndim != 2:
        raise DomainError(f"expected a 2-D matrix, got shape {a.shape}")
    a = a.astype(np.complex128 if np.iscomplexobj(a) else np.float64)
    norms = np.linalg.norm(a, axis=0)
    small = np.flatnonzero(norms <= ZERO_COLUMN_TOL)
    if small.size:
        raise ZeroColumnError(int(small[0]), float(norms[small[0]]))
    return Frame(a / norms, meta or {})


def column_sum(frame) -> np.ndarray:
    return as_matrix(frame).sum(axis=1)
