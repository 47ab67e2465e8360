"""Wiggling and flipping equivalence, and sign-flip searches for low average coherence.

Right-multiplying a frame by a diagonal of unimodular phases (a wiggle) or of
signs (a flip) leaves column norms, worst-case coherence and spectral norm
unchanged, but moves the column sum and with it the average coherence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ._parallel import ordered_map, worker_count
from .coherence import worst_case_coherence
from .errors import DomainError
from .frame import Frame, as_matrix, gram, spectral_norm

UNIMODULAR_TOL = 1e-12
EXHAUSTIVE_MAX_N = 20


@dataclass(frozen=True, eq=False)
class FlipPattern:
    signs: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.signs)
        if s.ndim != 1 or not np.all(np.isin(s, (-1, 1))):
            raise DomainError("flip pattern must be a 1-D vector of +1/-1 entries")
        s = s.astype(np.int8)
        s.setflags(write=False)
        object.__setattr__(self, "signs", s)

    def __len__(self):
        return self.signs.size

    def __eq__(self, other):
        return isinstance(other, FlipPattern) and np.array_equal(self.signs, other.signs)

    def __str__(self):
        return "".join("+" if v > 0 else "-" for v in self.signs)

    @classmethod
    def from_string(cls, text: str) -> "FlipPattern":
        if not text or set(text) - {"+", "-"}:
            raise DomainError(f"flip pattern string must consist of '+' and '-', got {text!r}")
        return cls(np.array([1 if c == "+" else -1 for c in text]))


@dataclass(frozen=True, eq=False)
class WigglePattern:
    phases: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.phases, dtype=np.complex128)
        if p.ndim != 1:
            raise DomainError("wiggle pattern must be a 1-D vector")
        bad = np.flatnonzero(np.abs(np.abs(p) - 1.0) > UNIMODULAR_TOL)
        if bad.size:
            raise DomainError(f"wiggle phase {int(bad[0])} has modulus {abs(p[bad[0]])!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "phases", p)

    def __len__(self):
        return self.phases.size


def _check_length(frame, d):
    if len(d) != frame.n:
        raise DomainError(f"pattern length {len(d)} does not match frame size n={frame.n}")


def apply_wiggle(frame: Frame, d) -> Frame:
    """``F D`` for a diagonal ``D`` of unimodular phases; meta records the phases."""
    if not isinstance(d, WigglePattern):
        d = WigglePattern(d)
    _check_length(frame, d)
    meta = dict(frame.meta)
    meta["wiggle"] = [[float(z.real), float(z.imag)] for z in d.phases]
    return Frame(frame.entries * d.phases[None, :], meta)


def apply_flip(frame: Frame, d) -> Frame:
    """``F D`` for a diagonal ``D`` of signs.  Real frames stay real.

    Flips compose: the signs already recorded in ``meta["flip"]`` are
    multiplied by ``d`` so that the descriptor always holds the net pattern.
    """
    if not isinstance(d, FlipPattern):
        d = FlipPattern(d)
    _check_length(frame, d)
    meta = dict(frame.meta)
    net = d.signs.astype(np.int64)
    if "flip" in meta:
        net = net * np.asarray(meta["flip"], dtype=np.int64)
    if np.all(net == 1):
        meta.pop("flip", None)
    else:
        meta["flip"] = [int(v) for v in net]
    return Frame(frame.entries * d.signs[None, :], meta)


def prefix_sum_norms(frame) -> np.ndarray:
    """``||sum_{i <= k} f_i||^2`` for k = 1..n."""
    F = as_matrix(frame)
    return np.sum(np.abs(np.cumsum(F, axis=1)) ** 2, axis=0)


def linear_flip(frame: Frame) -> tuple[Frame, FlipPattern]:
    """Greedy one-pass flipping.

    The first element is kept; each following element is kept when adding it
    leaves the running sum no longer than subtracting it would (ties keep),
    otherwise it is negated.  The running sum then satisfies
    ``||sum_{i<=k} g_i||^2 <= k`` for every prefix.
    """
    F = frame.entries
    n = F.shape[1]
    signs = np.ones(n, dtype=np.int8)
    acc = F[:, 0].copy()
    for j in range(1, n):
        f = F[:, j]
        if np.linalg.norm(acc + f) <= np.linalg.norm(acc - f):
            acc += f
        else:
            acc -= f
            signs[j] = -1
    pattern = FlipPattern(signs)
    return apply_flip(frame, pattern), pattern


def _nu_for_signs(F, Fh, signs):
    n = F.shape[1]
    z = signs * (Fh @ (F @ signs))
    return float(np.max(np.abs(z - 1.0)) / (n - 1))


def _trial_signs(seed, trial, n):
    if trial == 0:
        return np.ones(n)
    rng = np.random.default_rng([seed, trial])
    return (2 * rng.integers(0, 2, size=n) - 1).astype(np.float64)


def random_flip_search(
    frame: Frame, max_trials: int, seed: int
) -> Optional[tuple[Frame, FlipPattern]]:
    """Draw Rademacher flip patterns until ``nu <= mu / sqrt(m)``.

    Trial 0 is the identity pattern; trial ``i >= 1`` draws its signs from
    ``default_rng([seed, i])``, so each trial is reproducible on its own and
    the winner (the smallest successful trial index) does not depend on how
    trials are scheduled across threads.  ``seed`` must be nonnegative.

    Returns ``None`` when no trial among ``max_trials`` succeeds.
    """
    n = frame.n
    if n < 2:
        raise DomainError(f"flip search needs n >= 2, got {n}")
    if max_trials < 1:
        raise DomainError(f"max_trials must be positive, got {max_trials}")
    if seed < 0:
        raise DomainError(f"seed must be nonnegative, got {seed}")
    F = frame.entries
    Fh = F.conj().T
    target = worst_case_coherence(F) / math.sqrt(frame.m) + 1e-12

    def run(trial):
        signs = _trial_signs(seed, trial, n)
        return _nu_for_signs(F, Fh, signs) <= target

    batch = max(1, 4 * worker_count())
    for start in range(0, max_trials, batch):
        trials = range(start, min(max_trials, start + batch))
        for trial, ok in zip(trials, ordered_map(run, trials)):
            if ok:
                pattern = FlipPattern(_trial_signs(seed, trial, n).astype(np.int8))
                out = apply_flip(frame, pattern)
                meta = dict(out.meta)
                meta["flip_search"] = {"seed": int(seed), "trial": int(trial)}
                return Frame(out.entries, meta), pattern
    return None


def exhaustive_flip_search(frame, fix_first: bool = False) -> list[FlipPattern]:
    """Every sign pattern whose flipped frame has ``nu <= mu / sqrt(m)``.

    Intended as a test oracle; limited to n <= 20.  With ``fix_first`` only
    patterns whose first sign is +1 are scanned (``D`` and ``-D`` always
    give the same average coherence).
    """
    F = as_matrix(frame)
    m, n = F.shape
    if not 2 <= n <= EXHAUSTIVE_MAX_N:
        raise DomainError(f"exhaustive flip search supports 2 <= n <= {EXHAUSTIVE_MAX_N}, got {n}")
    target = worst_case_coherence(F) / math.sqrt(m) + 1e-12
    G = gram(F)
    free = n - 1 if fix_first else n
    found = []
    chunk = 1 << 14
    for start in range(0, 1 << free, chunk):
        codes = np.arange(start, min(1 << free, start + chunk), dtype=np.int64)
        bits = (codes[:, None] >> np.arange(free - 1, -1, -1)) & 1
        S = 1.0 - 2.0 * bits
        if fix_first:
            S = np.hstack([np.ones((S.shape[0], 1)), S])
        z = S * (S @ G.T)  # z[p, i] = s_i <f_i, sum_j s_j f_j>
        nu = np.max(np.abs(z - 1.0), axis=1) / (n - 1)
        for row in np.flatnonzero(nu <= target):
            found.append(FlipPattern(S[row].astype(np.int8)))
    return found


class EquivalenceReport(NamedTuple):
    column_norm_delta: float
    mu_delta: float
    spectral_norm_delta: float

    def holds(self, tol: float = 1e-9) -> bool:
        return max(self) < tol


def verify_equivalence_invariants(f, g) -> EquivalenceReport:
    """Deltas of the three quantities preserved by wiggling equivalence."""
    A, B = as_matrix(f), as_matrix(g)
    if A.shape != B.shape:
        raise DomainError(f"shape mismatch: {A.shape} vs {B.shape}")
    norm_delta = float(np.max(np.abs(np.linalg.norm(A, axis=0) - np.linalg.norm(B, axis=0))))
    mu_delta = abs(worst_case_coherence(A) - worst_case_coherence(B)) if A.shape[1] >= 2 else 0.0
    return EquivalenceReport(norm_delta, mu_delta, abs(spectral_norm(A) - spectral_norm(B)))


def gram_modulus_multiset(frame) -> np.ndarray:
    """Sorted moduli of the strictly upper-triangular Gram entries."""
    G = np.abs(gram(frame))
    return np.sort(G[np.triu_indices(G.shape[0], 1)])


def permutation_equivalent_grams(f, g, tol: float = 1e-9) -> bool:
    """Compare sorted Gram-modulus multisets; necessary for equivalence up to
    wiggling, unitary rotation and reordering of frame elements."""
    a, b = gram_modulus_multiset(f), gram_modulus_multiset(g)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= tol))

