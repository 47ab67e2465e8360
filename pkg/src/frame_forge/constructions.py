"""The frame families: normalized Gaussian, random and fixed harmonic, Gabor
(Alltop and Steinhaus seeds), chirp, spherical 2-designs, Steiner ETFs and
code-based frames.

Every constructor returns a :class:`~frame_forge.frame.Frame` whose ``meta``
is ``{"family": ..., "params": {...}}``; :func:`rebuild` turns that
descriptor back into the same frame.  Randomized families draw from
``numpy.random.default_rng(seed)`` (PCG64; Gaussian variates by numpy's
ziggurat), so fixed seeds reproduce within one numpy build.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .designs import SteinerSystem, affine_plane_system, pair_system, validate
from .errors import DomainError
from .frame import Frame, normalize_columns
from .gf2m import FieldContext

CODE_FRAME_MAX_LOG2_N = 24
# Dense float64 storage budget (entries) for a single frame: 1 GiB.
MAX_DENSE_ENTRIES = 1 << 27


def _descriptor(family, **params):
    return {"family": family, "params": params}


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class HarmonicSelection:
    """A set of DFT row indices ``indices`` out of ``0..n-1``."""

    n: int
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if not idx:
            raise DomainError("harmonic selection is empty")
        if len(set(idx)) != len(idx):
            raise DomainError(f"harmonic selection has repeated indices: {idx}")
        if idx[0] < 0 or idx[-1] >= self.n:
            raise DomainError(f"indices must lie in [0, {self.n - 1}], got {idx}")
        object.__setattr__(self, "indices", idx)

    def __len__(self):
        return len(self.indices)


def gaussian_normalized(m: int, n: int, seed: int) -> Frame:
    """Real frame of i.i.d. N(0, 1) columns scaled to unit norm."""
    if m < 1 or n < 1:
        raise DomainError(f"need m, n >= 1, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((m, n))
    return normalize_columns(G, _descriptor("gaussian", m=m, n=n, seed=seed))


def _harmonic_entries(n, indices):
    rows = np.asarray(indices, dtype=np.int64)
    phase = np.outer(rows, np.arange(n, dtype=np.int64)) % n
    return np.exp(2j * np.pi * phase / n) / np.sqrt(len(rows))


def harmonic_from_indices(sel: HarmonicSelection) -> Frame:
    """Rows ``sel.indices`` of the n x n DFT ``U[k, l] = exp(2 pi i k l / n)``, columns normalized."""
    return Frame(
        _harmonic_entries(sel.n, sel.indices),
        _descriptor("harmonic-fixed", n=sel.n, indices=list(sel.indices)),
    )


def random_harmonic(m_target: int, n: int, seed: int) -> tuple[Frame, HarmonicSelection]:
    """Keep each DFT row independently with probability ``m_target / n``.

    Raises
    ------
    DomainError
        If no row survives; retry with another seed.
    """
    if not 1 <= m_target <= n:
        raise DomainError(f"need 1 <= m_target <= n, got m_target={m_target}, n={n}")
    rng = np.random.default_rng(seed)
    keep = np.flatnonzero(rng.random(n) < m_target / n)
    if keep.size == 0:
        raise DomainError(f"seed {seed} selected no DFT rows; resample with a different seed")
    sel = HarmonicSelection(n, tuple(int(i) for i in keep))
    frame = Frame(
        _harmonic_entries(n, sel.indices),
        _descriptor("harmonic", m_target=m_target, n=n, seed=seed),
    )
    return frame, sel


def alltop_seed(m: int) -> np.ndarray:
    """``exp(2 pi i t^3 / m) / sqrt(m)``, cubes reduced mod m first."""
    if m < 1:
        raise DomainError(f"need m >= 1, got {m}")
    t = np.arange(m, dtype=np.int64)
    return np.exp(2j * np.pi * (t**3 % m) / m) / np.sqrt(m)


def steinhaus_seed(m: int, seed: int) -> np.ndarray:
    if m < 1:
        raise DomainError(f"need m >= 1, got {m}")
    theta = np.random.default_rng(seed).random(m)
    return np.exp(2j * np.pi * theta) / np.sqrt(m)


def gabor(seed_vector, meta: Mapping[str, Any] | None = None) -> Frame:
    """All cyclic time-frequency shifts of a seed: an m x m^2 frame.

    Column ``x*m + y`` is ``T_x M_y f``, i.e. ``f(t-x) exp(2 pi i y (t-x)/m)``
    with indices mod m.  The seed is normalized on entry.
    """
    f = np.asarray(seed_vector, dtype=np.complex128).ravel()
    nrm = np.linalg.norm(f)
    if f.size == 0 or nrm <= 1e-14:
        raise DomainError("Gabor seed must be a nonzero vector")
    f = f / nrm
    m = f.size
    t = np.arange(m, dtype=np.int64)
    modulated = f[:, None] * np.exp(2j * np.pi * (np.outer(t, t) % m) / m)  # [t, y]
    F = np.empty((m, m * m), dtype=np.complex128)
    for x in range(m):
        F[:, x * m:(x + 1) * m] = np.roll(modulated, x, axis=0)
    if meta is None:
        meta = _descriptor("gabor", seed_vector=[[float(z.real), float(z.imag)] for z in f])
    return normalize_columns(F, meta)


def alltop_gabor(m: int) -> Frame:
    return gabor(alltop_seed(m), _descriptor("gabor-alltop", m=m))


def steinhaus_gabor(m: int, seed: int) -> Frame:
    return gabor(steinhaus_seed(m, seed), _descriptor("gabor-steinhaus", m=m, seed=seed))


def chirp(m: int) -> Frame:
    """m x m^2 chirp frame ``h_M(t)^a exp(2 pi i b t/m)/sqrt(m)``, column ``a*m + b``.

    With ``h_M(t) = exp(pi i t (t - m)/m)`` the phase is ``pi E / m`` for the
    integer ``E = a t (t - m) + 2 b t`` reduced mod 2m.
    """
    if not _is_prime(m):
        raise DomainError(f"chirp frames need a prime dimension, got {m}")
    t = np.arange(m, dtype=np.int64)
    a = np.repeat(np.arange(m, dtype=np.int64), m)
    b = np.tile(np.arange(m, dtype=np.int64), m)
    E = (np.outer(t * (t - m), a) + 2 * np.outer(t, b)) % (2 * m)
    return Frame(np.exp(1j * np.pi * E / m) / np.sqrt(m), _descriptor("chirp", m=m))


def spherical_2design(sel: HarmonicSelection) -> Frame:
    """Real M x N tight frame summing to zero, M = 2|sel|, from nonzero DFT rows.

    Rows come in (cos, sin) pairs, the j-th pair using the j-th largest index.
    """
    if 0 in sel.indices:
        raise DomainError("spherical 2-design needs nonzero row indices; 0 is selected")
    M, N = 2 * len(sel), sel.n
    if N < 2 * M:
        raise DomainError(f"spherical 2-design needs N >= 2M, got N={N}, M={M}")
    idx = np.array(sorted(sel.indices, reverse=True), dtype=np.int64)
    angle = 2 * np.pi * (np.outer(idx, np.arange(N, dtype=np.int64)) % N) / N
    F = np.empty((M, N))
    F[0::2] = np.cos(angle)
    F[1::2] = np.sin(angle)
    F *= np.sqrt(2.0 / M)
    return Frame(F, _descriptor("sph2design", n=N, indices=list(sel.indices)))


def steiner_etf(s: SteinerSystem) -> Frame:
    """Equiangular tight frame from a (2, k, v)-Steiner system.

    Each point's column of the incidence matrix is expanded into r + 1
    columns: the r blocks through the point (in increasing order) receive
    rows 1..r of the (r+1)-point DFT (row 0, the all-ones row, is skipped),
    so the frame elements sum to zero.
    """
    if not validate(s):
        raise DomainError(f"incidence matrix is not a (2, {s.k}, {s.v})-Steiner system")
    A = s.incidence
    b, v = A.shape
    r = s.r
    w = np.exp(2j * np.pi * (np.outer(np.arange(r + 1), np.arange(r + 1)) % (r + 1)) / (r + 1))
    F = np.zeros((b, v * (r + 1)), dtype=np.complex128)
    for j in range(v):
        blocks = np.flatnonzero(A[:, j])
        if blocks.size != r:
            raise DomainError(f"point {j} lies on {blocks.size} blocks, expected {r}")
        F[blocks, j * (r + 1):(j + 1) * (r + 1)] = w[1:r + 1]
    F /= np.sqrt(r)
    params = {"v": s.v, "k": s.k, "row_rule": "dft-rows-1..r-by-block-order"}
    if s.kind == "pair":
        family = "steiner-pair"
    elif s.kind == "affine":
        family = "steiner-affine"
        params["q"] = s.k
    else:
        family = "steiner"
        params["blocks"] = [list(blk) for blk in s.blocks()]
    return Frame(F, {"family": family, "params": params})


def code_frame(ctx: FieldContext, t: int) -> Frame:
    """Real 2^m x 2^((t+1)m) frame ``(-1)^Tr[a0 x + sum_i a_i x^(2^i+1)] / sqrt(2^m)``.

    Rows are indexed by field elements in bitmask order; columns by
    (a_0, ..., a_t) in big-endian mixed radix, a_0 most significant.
    """
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if (t + 1) * ctx.m > CODE_FRAME_MAX_LOG2_N:
        raise DomainError(
            f"code frame would have 2^{(t + 1) * ctx.m} columns; cap is 2^{CODE_FRAME_MAX_LOG2_N}"
        )
    q, m = ctx.order, ctx.m
    if q ** (t + 2) > MAX_DENSE_ENTRIES:
        raise DomainError(
            f"code frame {q} x {q ** (t + 1)} exceeds the dense storage budget of {MAX_DENSE_ENTRIES} entries"
        )
    x = np.arange(q, dtype=np.int64)
    basis = np.int64(1) << np.arange(m, dtype=np.int64)
    alpha = np.arange(q, dtype=np.int64)
    bits = np.zeros((q,) + (q,) * (t + 1), dtype=np.uint8)
    for i in range(t + 1):
        if i == 0:
            c = x
        else:
            c = x
            for _ in range(i):
                c = ctx.mul_array(c, c)  # x^(2^i)
            c = ctx.mul_array(c, x)
        # Tr(a * c) = parity(a & mask(c)), mask bit j = Tr(x^j * c)
        mask = (ctx.trace_array(ctx.mul_array(c[:, None], basis[None, :])) << np.arange(m)).sum(axis=1)
        anded = alpha[None, :] & mask[:, None]
        parity = np.zeros_like(anded)
        for j in range(m):
            parity ^= (anded >> j) & 1
        shape = [q] + [1] * (t + 1)
        shape[i + 1] = q
        bits ^= parity.astype(np.uint8).reshape(shape)
    F = (1.0 - 2.0 * bits.reshape(q, q ** (t + 1))) / np.sqrt(q)
    return Frame(F, _descriptor("code", m=m, t=t, irreducible=ctx.irreducible))


def rebuild(meta: Mapping[str, Any]) -> Frame:
    """Reconstruct a frame from its construction descriptor.

    Net flip (``meta["flip"]``) and wiggle (``meta["wiggle"]``) patterns
    recorded by the equivalence transforms are reapplied.
    """
    frame = _rebuild_family(meta)
    F = frame.entries
    if "flip" in meta:
        F = F * np.asarray(meta["flip"], dtype=np.float64)[None, :]
    if "wiggle" in meta:
        F = F * np.array([complex(re, im) for re, im in meta["wiggle"]])[None, :]
    return Frame(F, meta) if F is not frame.entries else frame.with_meta(**meta)


def _rebuild_family(meta):
    family = meta.get("family")
    p = dict(meta.get("params", {}))
    if family == "gaussian":
        return gaussian_normalized(p["m"], p["n"], p["seed"])
    if family == "harmonic":
        return random_harmonic(p["m_target"], p["n"], p["seed"])[0]
    if family == "harmonic-fixed":
        return harmonic_from_indices(HarmonicSelection(p["n"], tuple(p["indices"])))
    if family == "gabor-alltop":
        return alltop_gabor(p["m"])
    if family == "gabor-steinhaus":
        return steinhaus_gabor(p["m"], p["seed"])
    if family == "gabor":
        return gabor([complex(re, im) for re, im in p["seed_vector"]])
    if family == "chirp":
        return chirp(p["m"])
    if family == "sph2design":
        return spherical_2design(HarmonicSelection(p["n"], tuple(p["indices"])))
    if family == "steiner-pair":
        return steiner_etf(pair_system(p["v"]))
    if family == "steiner-affine":
        return steiner_etf(affine_plane_system(p["q"]))
    if family == "steiner":
        A = np.zeros((len(p["blocks"]), p["v"]), dtype=np.uint8)
        for i, blk in enumerate(p["blocks"]):
            A[i, blk] = 1
        return steiner_etf(SteinerSystem(p["v"], p["k"], A))
    if family == "code":
        return code_frame(FieldContext(p["m"], p["irreducible"]), p["t"])
    raise DomainError(f"no construction registered for family {family!r}")
