"""Analysis reports: coherence metrics, reference bounds and the per-family
expectations for worst-case coherence, average coherence and spectral norm.

Each expectation stores its bound and the measured value next to the
pass/fail flag, so the flag can be recomputed from the report alone.
"""
from __future__ import annotations

import math
from typing import NamedTuple

from .coherence import (
    SCP_CONSTANT,
    coherence_report,
    lb_complex,
    lb_real,
    worst_case_coherence,
)
from .frame import Frame

EXPECT_TOL = 1e-9


class Expectation(NamedTuple):
    quantity: str  # "mu", "nu" or "spectral_norm"
    relation: str  # "=" or "<="
    bound: float
    value: float
    applicable: bool  # the construction's size restrictions hold
    holds: bool


def _expect(quantity, relation, bound, value, applicable=True):
    if relation == "=":
        ok = abs(value - bound) <= EXPECT_TOL
    else:
        ok = value <= bound + EXPECT_TOL
    return Expectation(quantity, relation, float(bound), float(value), bool(applicable), bool(ok))


def gaussian_bounds(m: int, n: int) -> tuple[float, float, float]:
    """High-probability bounds (mu, nu, spectral norm) for normalized Gaussian frames.

    Denominators that are not positive make the bound vacuous (``inf``).
    """
    L = math.log(n)
    d_mu = math.sqrt(m) - math.sqrt(12 * L)
    d_nu = m - math.sqrt(12 * m * L)
    d_norm = m - math.sqrt(8 * m * L)
    mu = math.sqrt(15 * L) / d_mu if d_mu > 0 else math.inf
    nu = math.sqrt(15 * L) / d_nu if d_nu > 0 else math.inf
    norm = (math.sqrt(m) + math.sqrt(n) + math.sqrt(2 * L)) / math.sqrt(d_norm) if d_norm > 0 else math.inf
    return mu, nu, norm


def family_expectations(frame: Frame, mu: float, nu: float, norm: float) -> list[Expectation]:
    """Expected bounds for the frame's family; empty for unknown families."""
    fam = frame.family or ""
    p = frame.meta.get("params", {})
    m, n = frame.m, frame.n
    L = math.log(n)
    tight = math.sqrt(n / m)
    out = []
    if "flip" in frame.meta or "wiggle" in frame.meta:
        # Equivalence transforms keep mu and the norm but not nu.
        nu = None
    if fam == "gaussian":
        b_mu, b_nu, b_norm = gaussian_bounds(m, n)
        ok = 60 * L <= m <= (n - 1) / (4 * L)
        out += [_expect("mu", "<=", b_mu, mu, ok), _expect("spectral_norm", "<=", b_norm, norm, ok)]
        if nu is not None:
            out.append(_expect("nu", "<=", b_nu, nu, ok))
    elif fam == "harmonic":
        M = p.get("m_target", m)
        ok = 16 * L <= M <= n / 3
        out += [
            _expect("mu", "<=", math.sqrt(118 * (n - M) * L / (M * n)), mu, ok),
            _expect("spectral_norm", "=", tight, norm),
        ]
        if nu is not None:
            out.append(_expect("nu", "<=", mu / math.sqrt(m), nu))
    elif fam == "harmonic-fixed":
        out.append(_expect("spectral_norm", "=", tight, norm))
        if nu is not None and 0 not in p.get("indices", [0]):
            out.append(_expect("nu", "<=", mu / math.sqrt(m), nu))
    elif fam in ("gabor-alltop", "gabor-steinhaus", "gabor"):
        if fam == "gabor-alltop":
            prime = m >= 5 and all(m % d for d in range(2, int(m**0.5) + 1))
            out.append(_expect("mu", "=", 1 / math.sqrt(m), mu, prime))
        elif fam == "gabor-steinhaus":
            out.append(_expect("mu", "<=", math.sqrt(13 * math.log(m) / m), mu, m >= 13))
        out.append(_expect("spectral_norm", "=", tight, norm))
        if nu is not None:
            out.append(_expect("nu", "<=", 1 / (m + 1), nu))
    elif fam == "chirp":
        out += [_expect("mu", "=", 1 / math.sqrt(m), mu), _expect("spectral_norm", "=", tight, norm)]
        if nu is not None:
            out.append(_expect("nu", "<=", mu / math.sqrt(m), nu))
    elif fam == "sph2design":
        from .constructions import HarmonicSelection, harmonic_from_indices

        mu_g = worst_case_coherence(harmonic_from_indices(HarmonicSelection(p["n"], tuple(p["indices"]))))
        out += [_expect("mu", "<=", mu_g, mu), _expect("spectral_norm", "=", tight, norm)]
        if nu is not None:
            out.append(_expect("nu", "<=", mu / math.sqrt(m), nu))
    elif fam in ("steiner-pair", "steiner-affine", "steiner"):
        welch = math.sqrt((n - m) / (m * (n - 1)))
        out += [_expect("mu", "=", welch, mu), _expect("spectral_norm", "=", tight, norm)]
        if nu is not None:
            out.append(_expect("nu", "<=", mu / math.sqrt(m), nu))
    elif fam == "code":
        t = p.get("t", 0)
        out += [
            _expect("mu", "<=", 1 / math.sqrt(2.0 ** (p.get("m", 0) - 2 * t - 1)), mu),
            _expect("spectral_norm", "=", tight, norm),
        ]
        if nu is not None:
            out.append(_expect("nu", "<=", mu / math.sqrt(m), nu))
    return out


def analysis_report(frame: Frame, constant: float = SCP_CONSTANT) -> dict:
    """Coherence report, reference lower bounds and family expectations as a plain dict."""
    rep = coherence_report(frame, constant)
    d = rep.as_dict()
    d["family"] = frame.family
    d["real_flag"] = frame.real_flag
    d["bounds"] = {
        "welch": rep.welch,
        "lb_complex": lb_complex(frame.m, frame.n) if frame.m >= 2 else None,
        "lb_real": lb_real(frame.m, frame.n) if frame.m >= 2 else None,
    }
    d["expectations"] = [e._asdict() for e in family_expectations(frame, rep.mu, rep.nu, rep.spectral_norm)]
    return d
