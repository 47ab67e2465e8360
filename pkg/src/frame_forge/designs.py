"""(2, k, v)-Steiner systems held as block-by-point incidence matrices."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DomainError


@dataclass(frozen=True, eq=False)
class SteinerSystem:
    """Rows are blocks, columns are points; ``incidence[i, j] = 1`` iff block i contains point j."""

    v: int
    k: int
    incidence: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        a = np.array(self.incidence, dtype=np.uint8, copy=True)
        if a.ndim != 2 or a.shape[1] != self.v:
            raise DomainError(f"incidence must have {self.v} columns, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "incidence", a)

    @property
    def b(self) -> int:
        return self.incidence.shape[0]

    @property
    def r(self) -> int:
        """Replication number (v - 1)/(k - 1): blocks through each point."""
        return (self.v - 1) // (self.k - 1)

    def blocks(self) -> list[tuple[int, ...]]:
        return [tuple(int(j) for j in np.flatnonzero(row)) for row in self.incidence]


def pair_system(v: int) -> SteinerSystem:
    """All 2-subsets of ``v`` points, in lexicographic order."""
    if v < 2:
        raise DomainError(f"pair system needs v >= 2, got {v}")
    pairs = list(combinations(range(v), 2))
    A = np.zeros((len(pairs), v), dtype=np.uint8)
    for i, (a, b) in enumerate(pairs):
        A[i, a] = A[i, b] = 1
    return SteinerSystem(v=v, k=2, incidence=A, kind="pair")


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q**0.5) + 1))


def affine_plane_system(q: int) -> SteinerSystem:
    """Lines of the affine plane AG(2, q) over Z_q, q prime.

    Point (a, b) has index ``a*q + b``.  Blocks are the lines y = c x + d for
    c = 0..q-1, d = 0..q-1 (slope-major), followed by the verticals x = d.
    """
    if not _is_prime(q):
        raise DomainError(f"affine plane order must be prime, got {q}")
    if q > 31:
        raise DomainError(f"affine plane order capped at 31, got {q}")
    v = q * q
    A = np.zeros((q * q + q, v), dtype=np.uint8)
    xs = np.arange(q)
    row = 0
    for c in range(q):
        for d in range(q):
            A[row, xs * q + (c * xs + d) % q] = 1
            row += 1
    for d in range(q):
        A[row, d * q + xs] = 1
        row += 1
    return SteinerSystem(v=v, k=q, incidence=A, kind="affine")


def validate(s: SteinerSystem) -> bool:
    """True iff rows sum to k, columns sum to r, and each point pair shares exactly one block."""
    A = s.incidence.astype(np.int64)
    v, k = s.v, s.k
    if k < 2 or (v - 1) % (k - 1) or A.shape[1] != v:
        return False
    if np.any((A != 0) & (A != 1)):
        return False
    r = (v - 1) // (k - 1)
    if np.any(A.sum(axis=1) != k) or np.any(A.sum(axis=0) != r):
        return False
    common = A.T @ A
    off = common[~np.eye(v, dtype=bool)]
    return bool(np.all(off == 1))
