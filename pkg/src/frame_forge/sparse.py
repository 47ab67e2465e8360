"""Sparse-signal experiments: noisy measurements, one-step thresholding (OST)
recovery, noise and self-interference floors, flat test signals, and an
empirical Weak-RIP tester.

Logarithms are natural throughout.  Randomized routines take a seed that is
passed to ``numpy.random.default_rng``; per-trial streams are derived as
``default_rng([seed, trial, ...])`` so results do not depend on threading.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ._parallel import ordered_map
from .coherence import worst_case_coherence
from .errors import DomainError, IllConditionedSelection
from .frame import as_matrix

NOISE_MODELS = ("complex_gaussian", "real_gaussian", "none")
LSTSQ_RTOL = 1e-10

C2 = 2.0 / (1.0 - math.exp(-0.5))
C3 = 1.0 + math.exp(-0.5) / (1.0 - math.exp(-0.5))


@dataclass(frozen=True, eq=False)
class SparseSignal:
    n: int
    support: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        sup = tuple(int(i) for i in self.support)
        vals = np.asarray(self.values).ravel()
        if len(sup) != vals.size:
            raise DomainError(f"{len(sup)} support indices but {vals.size} values")
        if len(set(sup)) != len(sup):
            raise DomainError("support indices must be distinct")
        if sup and (min(sup) < 0 or max(sup) >= self.n):
            raise DomainError(f"support indices must lie in [0, {self.n - 1}]")
        if np.any(vals == 0):
            raise DomainError("values on the support must be nonzero")
        vals = vals.astype(np.complex128 if np.iscomplexobj(vals) else np.float64)
        vals.setflags(write=False)
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "values", vals)

    @property
    def k(self) -> int:
        return len(self.support)

    def dense(self) -> np.ndarray:
        x = np.zeros(self.n, dtype=self.values.dtype)
        x[list(self.support)] = self.values
        return x

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True, eq=False)
class MeasurementSet:
    y: np.ndarray
    sigma: float
    snr: float
    noise_model: str


class OSTResult(NamedTuple):
    estimated_support: tuple[int, ...]
    estimate: np.ndarray
    lam: float
    l2_error: Optional[float] = None
    floor_sets: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None


class WeakRIPReport(NamedTuple):
    k: int
    delta: float
    trials: int
    violation_fraction: float
    ratio_min: float
    ratio_max: float
    ratio_mean: float

    def as_dict(self):
        return self._asdict()


def _check_t(t):
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in the open interval (0, 1), got {t}")


def measure(frame, x: SparseSignal, sigma: float, model: str = "complex_gaussian", seed=None) -> MeasurementSet:
    """``y = F x + e``.

    ``complex_gaussian`` draws real and imaginary parts with variance
    ``sigma^2 / 2`` each (so ``E|e_i|^2 = sigma^2``); ``real_gaussian`` uses
    variance ``sigma^2``; ``none`` (or ``sigma = 0``) gives ``e = 0``.  The
    recorded SNR is ``||x||^2 / (m sigma^2)``, infinite when noiseless.
    """
    F = as_matrix(frame)
    m, n = F.shape
    if x.n != n:
        raise DomainError(f"signal length {x.n} does not match frame size n={n}")
    if sigma < 0:
        raise DomainError(f"sigma must be nonnegative, got {sigma}")
    if model not in NOISE_MODELS:
        raise DomainError(f"unknown noise model {model!r}; choose from {NOISE_MODELS}")
    y = F[:, list(x.support)] @ x.values
    if sigma > 0 and model != "none":
        rng = np.random.default_rng(seed)
        if model == "complex_gaussian":
            e = (sigma / math.sqrt(2.0)) * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
        else:
            e = sigma * rng.standard_normal(m)
        y = y + e
    else:
        model = "none"
    snr = x.norm() ** 2 / (m * sigma**2) if sigma > 0 else math.inf
    return MeasurementSet(y=np.asarray(y), sigma=float(sigma), snr=snr, noise_model=model)


def estimate_snr(y, sigma: float) -> float:
    """``||y||^2 / (m sigma^2) - 1``; a data-driven stand-in, never used implicitly."""
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    y = np.asarray(y)
    return float(np.linalg.norm(y) ** 2 / (y.size * sigma**2) - 1.0)


def ost_threshold(sigma: float, n: int, mu: float, m: int, snr: float, t: float) -> float:
    """``sqrt(2 sigma^2 log n) * max{(10/t) mu sqrt(m snr), sqrt(2)/(1-t)}``."""
    _check_t(t)
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    return math.sqrt(2.0 * sigma**2 * math.log(n)) * max(
        (10.0 / t) * mu * math.sqrt(m * snr), math.sqrt(2.0) / (1.0 - t)
    )


def ost_threshold_from_norm(sigma: float, n: int, mu: float, x_norm: float, t: float) -> float:
    """The same threshold written with ``||x||`` in place of the SNR.

    Since ``sigma^2 m snr = ||x||^2`` this equals :func:`ost_threshold` for
    ``sigma > 0`` and stays finite at ``sigma = 0``:
    ``max{(10/t) mu ||x|| sqrt(2 log n), sqrt(2 sigma^2 log n) sqrt(2)/(1-t)}``.
    """
    _check_t(t)
    if sigma < 0:
        raise DomainError(f"sigma must be nonnegative, got {sigma}")
    root = math.sqrt(2.0 * math.log(n))
    return max((10.0 / t) * mu * x_norm * root, sigma * root * math.sqrt(2.0) / (1.0 - t))


def floor_sets(x: SparseSignal, sigma: float, t: float, mu: float, n: int):
    """``(T_sigma, T_mu)``: support entries above the noise floor and the
    self-interference floor respectively."""
    _check_t(t)
    root = math.sqrt(2.0 * math.log(n))
    noise_floor = (2.0 * math.sqrt(2.0) / (1.0 - t)) * sigma * root
    interference_floor = (20.0 / t) * mu * x.norm() * root
    mags = np.abs(x.values)
    t_sigma = tuple(sorted(i for i, a in zip(x.support, mags) if a > noise_floor))
    t_mu = tuple(sorted(i for i, a in zip(x.support, mags) if a > interference_floor))
    return t_sigma, t_mu


def ost(frame, y, lam: float, *, truth: SparseSignal | None = None, sigma=None, t=None, mu=None) -> OSTResult:
    """One-step thresholding: keep ``{j : |<f_j, y>| > lam}``, then least squares.

    The least-squares fit on the selected columns uses a QR factorization.
    When ``truth`` is given the l2 error is reported, and with ``sigma`` and
    ``t`` also the floor sets.

    Raises
    ------
    IllConditionedSelection
        If the selected columns have smallest singular value below
        ``1e-10`` times the largest.
    """
    if lam < 0 or math.isnan(lam):
        raise DomainError(f"lambda must be nonnegative, got {lam}")
    F = as_matrix(frame)
    m, n = F.shape
    y = np.asarray(y)
    if y.shape != (m,):
        raise DomainError(f"measurement length {y.shape} does not match m={m}")
    z = F.conj().T @ y
    sel = np.flatnonzero(np.abs(z) > lam)
    dtype = np.result_type(F.dtype, y.dtype)
    x_hat = np.zeros(n, dtype=dtype)
    if sel.size:
        A = F[:, sel]
        sv = np.linalg.svd(A, compute_uv=False)
        if sel.size > m or sv[-1] < LSTSQ_RTOL * sv[0]:
            raise IllConditionedSelection(
                f"selected {sel.size} columns are numerically rank deficient", support=sel.tolist()
            )
        Q, R = np.linalg.qr(A)
        x_hat[sel] = np.linalg.solve(R, Q.conj().T @ y)
    support = tuple(int(i) for i in sel)
    l2 = floors = None
    if truth is not None:
        l2 = float(np.linalg.norm(truth.dense() - x_hat))
        if sigma is not None and t is not None:
            mu = worst_case_coherence(F) if mu is None else mu
            floors = floor_sets(truth, sigma, t, mu, n)
    return OSTResult(support, x_hat, float(lam), l2, floors)


def flat_signal(n: int, k: int, beta: float, alpha: float, small_scale: float, seed=None, real: bool = False) -> SparseSignal:
    """K-sparse signal on a uniformly random support.

    ``ceil(beta k)`` entries have modulus exactly ``alpha`` (uniform random
    phase, or random sign when ``real``); the rest have modulus uniform on
    ``(0, small_scale * alpha]``.
    """
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    if alpha <= 0 or not 0.0 < small_scale <= 1.0:
        raise DomainError(f"need alpha > 0 and small_scale in (0, 1], got {alpha}, {small_scale}")
    rng = np.random.default_rng(seed)
    support = np.sort(rng.choice(n, size=k, replace=False))
    n_big = math.ceil(beta * k - 1e-12)
    mags = np.empty(k)
    order = rng.permutation(k)
    mags[order[:n_big]] = alpha
    mags[order[n_big:]] = (1.0 - rng.random(k - n_big)) * small_scale * alpha
    if real:
        vals = mags * rng.choice((-1.0, 1.0), size=k)
    else:
        vals = mags * np.exp(2j * np.pi * rng.random(k))
    return SparseSignal(n, tuple(int(i) for i in support), vals)


def _report(k, delta, ratios):
    bad = (ratios < 1.0 - delta) | (ratios > 1.0 + delta)
    return WeakRIPReport(
        k=k,
        delta=float(delta),
        trials=int(ratios.size),
        violation_fraction=float(np.mean(bad)),
        ratio_min=float(ratios.min()),
        ratio_max=float(ratios.max()),
        ratio_mean=float(ratios.mean()),
    )


def _placement_ratios(F, v, placements):
    # placements: (trials, k) column indices; v[i] goes to placements[:, i]
    Fx = np.einsum("mtk,k->mt", F[:, placements], v)
    return np.sum(np.abs(Fx) ** 2, axis=0) / np.sum(np.abs(v) ** 2)


_WRIP_CHUNK = 1024


def weak_rip_test(frame, values, delta: float, trials: int, seed) -> WeakRIPReport:
    """Monte-Carlo energy-preservation test for a fixed pattern of K values.

    Each trial places the values at a uniformly random ordered K-subset of
    coordinates, which has the same law as a random permutation of the
    zero-padded vector, and records ``||F x||^2 / ||x||^2``.
    """
    F = as_matrix(frame)
    n = F.shape[1]
    v = np.asarray(values).ravel()
    k = v.size
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= K <= n, got K={k}, n={n}")
    if np.any(v == 0):
        raise DomainError("Weak-RIP values must be nonzero")
    if trials < 1 or delta < 0:
        raise DomainError(f"need trials >= 1 and delta >= 0, got {trials}, {delta}")

    def chunk(c):
        size = min(_WRIP_CHUNK, trials - c * _WRIP_CHUNK)
        rng = np.random.default_rng([seed, c])
        placements = np.stack([rng.choice(n, size=k, replace=False) for _ in range(size)])
        return _placement_ratios(F, v, placements)

    n_chunks = -(-trials // _WRIP_CHUNK)
    ratios = np.concatenate(ordered_map(chunk, range(n_chunks)))
    return _report(k, delta, ratios)


def weak_rip_exhaustive(frame, values, delta: float, max_placements: int = 10**7) -> WeakRIPReport:
    """Exact counterpart of :func:`weak_rip_test` over all ordered K-placements."""
    F = as_matrix(frame)
    n = F.shape[1]
    v = np.asarray(values).ravel()
    k = v.size
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= K <= n, got K={k}, n={n}")
    count = math.perm(n, k)
    if count > max_placements:
        raise DomainError(f"{count} placements exceed the enumeration cap {max_placements}")
    placements = np.array(list(itertools.permutations(range(n), k)), dtype=np.int64)
    return _report(k, delta, _placement_ratios(F, v, placements))


class WeakRIPHypothesis(NamedTuple):
    holds: bool
    n_large_enough: bool
    lhs: float
    rhs: float
    p: float


def weak_rip_hypothesis(mu: float, m: int, n: int, delta: float, k: int) -> WeakRIPHypothesis:
    """Sufficient condition for (K, delta, 4K/N^2)-Weak RIP of a frame with the
    Strong Coherence Property: ``N >= 128`` and ``2K log N <= min{delta^2/(100 mu^2), M}``.
    """
    if mu < 0 or m < 1 or n < 2 or k < 1 or delta < 0:
        raise DomainError("need mu >= 0, m >= 1, n >= 2, k >= 1, delta >= 0")
    lhs = 2.0 * k * math.log(n)
    rhs = min(delta**2 / (100.0 * mu**2) if mu > 0 else math.inf, float(m))
    big = n >= 128
    return WeakRIPHypothesis(big and lhs <= rhs, big, lhs, rhs, 4.0 * k / n**2)


@dataclass(frozen=True)
class RecoverySummary:
    trials: int
    k: int
    sigma: float
    t: float
    alpha: float
    lam_mean: float
    support_recovery_rate: float
    mean_l2_error: float
    median_l2_error: float
    error_bound: float
    error_bound_fraction: float
    full_bound_fraction: float

    def as_dict(self):
        return dict(self.__dict__)


def recovery_experiment(
    frame,
    k: int,
    beta: float,
    alpha_multiple: float,
    sigma: float,
    t: float,
    trials: int,
    seed: int,
    small_scale: float = 0.5,
    lam: float | None = None,
) -> RecoverySummary:
    """flat_signal -> measure -> ost, repeated ``trials`` times.

    The large entries have modulus ``alpha = alpha_multiple * sigma * sqrt(2 log N)``
    (``sigma`` replaced by 1 when noiseless).  Unless ``lam`` is given, each
    trial thresholds at the recovery lambda computed from the true SNR.
    ``error_bound_fraction`` counts trials with
    ``||x - x_hat|| <= c2 sqrt(sigma^2 K log N)``; ``full_bound_fraction``
    adds the ``c3 ||x - x_T||`` term for ``T`` the intersection of the floor sets.
    """
    _check_t(t)
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    if sigma < 0:
        raise DomainError(f"sigma must be nonnegative, got {sigma}")
    F = as_matrix(frame)
    m, n = F.shape
    real = not np.iscomplexobj(F)
    mu = worst_case_coherence(F)
    logn = math.log(n)
    alpha = alpha_multiple * (sigma if sigma > 0 else 1.0) * math.sqrt(2.0 * logn)
    bound = C2 * math.sqrt(sigma**2 * k * logn)

    def run(trial):
        x = flat_signal(n, k, beta, alpha, small_scale, seed=[seed, trial, 0], real=real)
        ms = measure(F, x, sigma, "real_gaussian" if real else "complex_gaussian", seed=[seed, trial, 1])
        thr = lam if lam is not None else ost_threshold_from_norm(sigma, n, mu, x.norm(), t)
        res = ost(F, ms.y, thr, truth=x, sigma=sigma, t=t, mu=mu)
        t_sigma, t_mu = res.floor_sets
        keep = set(t_sigma) & set(t_mu)
        tail = math.sqrt(sum(abs(v) ** 2 for i, v in zip(x.support, x.values) if i not in keep))
        return (
            thr,
            res.estimated_support == x.support,
            res.l2_error,
            res.l2_error <= bound + 1e-12,
            res.l2_error <= bound + C3 * tail + 1e-12,
        )

    rows = ordered_map(run, range(trials))
    errs = np.array([r[2] for r in rows])
    return RecoverySummary(
        trials=trials,
        k=k,
        sigma=float(sigma),
        t=float(t),
        alpha=alpha,
        lam_mean=float(np.mean([r[0] for r in rows])),
        support_recovery_rate=float(np.mean([r[1] for r in rows])),
        mean_l2_error=float(errs.mean()),
        median_l2_error=float(np.median(errs)),
        error_bound=bound,
        error_bound_fraction=float(np.mean([r[3] for r in rows])),
        full_bound_fraction=float(np.mean([r[4] for r in rows])),
    )
