"""Worst-case and average coherence, coherence properties, and lower bounds.

All logarithms are natural.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .frame import as_matrix, column_sum, spectral_norm

SCP_CONSTANT = 164.0

# Keep the Gram slab (block x n entries) under this many elements.
_GRAM_BLOCK_ENTRIES = 1 << 23


def _require_pairs(n):
    if n < 2:
        raise DomainError(f"coherence needs at least 2 frame elements, got {n}")


def worst_case_coherence(frame) -> float:
    """``max_{i != j} |<f_i, f_j>|``.

    The upper triangle of the Gram matrix is scanned in row slabs so frames
    with tens of thousands of columns fit in memory.  The result does not
    depend on the slab size since only a max is taken.
    """
    F = as_matrix(frame)
    n = F.shape[1]
    _require_pairs(n)
    Fh = F.conj().T
    block = max(1, min(n, _GRAM_BLOCK_ENTRIES // n))
    best = 0.0
    for start in range(0, n - 1, block):
        stop = min(n, start + block)
        slab = np.abs(Fh[start:stop] @ F[:, start:])
        # Drop the diagonal and everything left of it within the slab.
        rows = np.arange(stop - start)
        slab[np.arange(slab.shape[1])[None, :] <= rows[:, None]] = 0.0
        best = max(best, float(slab.max()))
    return best


def average_coherence(frame) -> float:
    """``max_i |sum_{j != i} <f_i, f_j>| / (n - 1)``.

    Uses ``sum_{j != i} <f_i, f_j> = <f_i, s> - 1`` with ``s`` the column sum,
    valid for unit-norm columns.
    """
    F = as_matrix(frame)
    n = F.shape[1]
    _require_pairs(n)
    z = F.conj().T @ column_sum(F)
    return float(np.max(np.abs(z - 1.0)) / (n - 1))


def welch_bound(m: int, n: int) -> float:
    if m < 1 or n < 2:
        raise DomainError(f"welch bound needs m >= 1 and n >= 2, got m={m}, n={n}")
    if n < m:
        raise DomainError(f"welch bound needs n >= m, got m={m}, n={n}")
    return math.sqrt((n - m) / (m * (n - 1)))


def lb_complex(m: int, n: int) -> float:
    """``1 - 2 n^{-1/(m-1)}``; valid for complex frames, may be negative."""
    if m < 2:
        raise DomainError(f"complex bound needs m >= 2, got {m}")
    return 1.0 - 2.0 * math.exp(-math.log(n) / (m - 1))


def lb_real(m: int, n: int) -> float:
    """Spherical-cap lower bound on the worst-case coherence of real frames.

    ``cos(pi * ((m-1)/(n sqrt(pi)) * Gamma((m-1)/2)/Gamma(m/2))^{1/(m-1)})``,
    evaluated in log space since Gamma(m/2) overflows near m = 350.
    """
    if m < 2:
        raise DomainError(f"real bound needs m >= 2, got {m}")
    log_inner = (
        math.log(m - 1)
        - math.log(n)
        - 0.5 * math.log(math.pi)
        + math.lgamma((m - 1) / 2)
        - math.lgamma(m / 2)
    )
    angle = math.pi * math.exp(log_inner / (m - 1))
    return math.cos(min(max(angle, 0.0), math.pi))


def lb_real_m3(n: int) -> float:
    """``1 - 4/n + 2/n^2``, the antipodal-cap bound for real 3 x n frames."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    return 1.0 - 4.0 / n + 2.0 / n**2


class CoherenceFlags(NamedTuple):
    scp1: bool
    coherence_property: bool
    scp2: bool


def _flags(mu, nu, m, n, constant):
    logn = math.log(n)
    return CoherenceFlags(
        scp1=mu <= 1.0 / (constant * logn),
        coherence_property=mu <= 1.0 / (15.0 * math.sqrt(logn)),
        scp2=nu <= mu / math.sqrt(m) + 1e-12,
    )


def scp_check(frame, constant: float = SCP_CONSTANT) -> CoherenceFlags:
    """Strong Coherence Property predicates.

    ``scp1``: mu <= 1/(constant * log n); ``coherence_property``:
    mu <= 1/(15 sqrt(log n)); ``scp2``: nu <= mu/sqrt(m).
    """
    F = as_matrix(frame)
    m, n = F.shape
    _require_pairs(n)
    return _flags(worst_case_coherence(F), average_coherence(F), m, n, constant)


def sufficient_conditions(frame, *, mu=None, nu=None) -> tuple[bool, bool, bool]:
    """Three column-sum conditions, each of which forces nu <= mu/sqrt(m).

    (i)   <f_k, s> = n/m for every k;
    (ii)  n >= 2m and s = 0;
    (iii) n >= m^2 + 3m + 3 and ||s||^2 <= n,
    where ``s`` is the sum of the frame elements.  Precomputed ``mu``/``nu``
    may be passed to skip recomputation for the implication check.
    """
    F = as_matrix(frame)
    m, n = F.shape
    s = column_sum(F)
    s_norm = float(np.linalg.norm(s))
    c1 = bool(np.all(np.abs(F.conj().T @ s - n / m) <= 1e-8))
    c2 = n >= 2 * m and s_norm <= 1e-8
    c3 = n >= m * m + 3 * m + 3 and s_norm**2 <= n + 1e-8
    if (c1 or c2 or c3) and n >= 2:
        mu = worst_case_coherence(F) if mu is None else mu
        nu = average_coherence(F) if nu is None else nu
        if nu > mu / math.sqrt(m) + 1e-10:
            raise ArithmeticError(
                f"column-sum condition holds but nu={nu!r} exceeds mu/sqrt(m)={mu / math.sqrt(m)!r}"
            )
    return c1, c2, c3


@dataclass(frozen=True)
class CoherenceReport:
    m: int
    n: int
    mu: float
    nu: float
    spectral_norm: float
    tightness_defect: float
    welch: float
    scp1: bool
    scp1_constant: float
    coherence_property: bool
    scp2: bool
    sufficient_conditions: tuple[bool, bool, bool]

    def as_dict(self):
        d = asdict(self)
        d["sufficient_conditions"] = list(self.sufficient_conditions)
        return d


def coherence_report(frame, constant: float = SCP_CONSTANT) -> CoherenceReport:
    F = as_matrix(frame)
    m, n = F.shape
    mu, nu = worst_case_coherence(F), average_coherence(F)
    norm = spectral_norm(F)
    flags = _flags(mu, nu, m, n, constant)
    return CoherenceReport(
        m=m,
        n=n,
        mu=mu,
        nu=nu,
        spectral_norm=norm,
        tightness_defect=norm**2 - n / m,
        welch=welch_bound(m, n) if n >= m else 0.0,
        scp1=flags.scp1,
        scp1_constant=float(constant),
        coherence_property=flags.coherence_property,
        scp2=flags.scp2,
        sufficient_conditions=sufficient_conditions(F, mu=mu, nu=nu),
    )


class BoundRow(NamedTuple):
    n: int
    welch: float
    lb_complex: float
    lb_real: float
    lb_real_m3: float | None


@dataclass(frozen=True)
class BoundTable:
    m: int
    rows: list[BoundRow]


def bound_table(m: int, n_min: int, n_max: int) -> BoundTable:
    if m < 2:
        raise DomainError(f"bound table needs m >= 2, got {m}")
    if n_min < max(m, 2):
        raise DomainError(f"n_min must be at least max(m, 2) = {max(m, 2)}, got {n_min}")
    if n_max < n_min:
        raise DomainError(f"empty range {n_min}..{n_max}")
    rows = [
        BoundRow(
            n=n,
            welch=welch_bound(m, n),
            lb_complex=lb_complex(m, n),
            lb_real=lb_real(m, n),
            lb_real_m3=lb_real_m3(n) if m == 3 else None,
        )
        for n in range(n_min, n_max + 1)
    ]
    return BoundTable(m=m, rows=rows)
