import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frame_forge import (
    DomainError,
    FieldContext,
    HarmonicSelection,
    alltop_gabor,
    alltop_seed,
    chirp,
    code_frame,
    gabor,
    gaussian_normalized,
    harmonic_from_indices,
    pair_system,
    random_harmonic,
    rebuild,
    spherical_2design,
    steiner_etf,
    steinhaus_gabor,
    steinhaus_seed,
)
from frame_forge.coherence import average_coherence, scp_check, sufficient_conditions, welch_bound, worst_case_coherence
from frame_forge.designs import SteinerSystem, affine_plane_system
from frame_forge.equivalence import permutation_equivalent_grams
from frame_forge.frame import column_sum, gram, spectral_norm, tightness_defect
from frame_forge.gf2m import trace
from oracles import mu_bruteforce

REF_INDICES = (1, 7, 9, 10, 12, 16, 26, 33, 34)


# normalized Gaussian

def test_gaussian_unit_columns_and_determinism():
    f = gaussian_normalized(6, 40, 11)
    assert f.real_flag
    assert np.max(np.abs(np.linalg.norm(f.entries, axis=0) - 1)) < 1e-12
    assert np.array_equal(f.entries, gaussian_normalized(6, 40, 11).entries)
    assert not np.array_equal(f.entries, gaussian_normalized(6, 40, 12).entries)


def test_gaussian_domain():
    with pytest.raises(DomainError):
        gaussian_normalized(0, 3, 1)


# harmonic

def test_harmonic_selection_validation():
    assert HarmonicSelection(10, (5, 1, 3)).indices == (1, 3, 5)
    for bad in [(), (1, 1), (-1,), (10,)]:
        with pytest.raises(DomainError):
            HarmonicSelection(10, bad)


def test_harmonic_fixed_examples():
    f = harmonic_from_indices(HarmonicSelection(2, (0,)))
    assert np.allclose(f.entries, [[1, 1]])
    g = harmonic_from_indices(HarmonicSelection(4, (1,)))
    assert np.allclose(g.entries, [[1, 1j, -1, -1j]])
    assert worst_case_coherence(g) == pytest.approx(1.0, abs=1e-12)


def test_harmonic_reference_selection_is_welch_tight():
    f = harmonic_from_indices(HarmonicSelection(37, REF_INDICES))
    assert worst_case_coherence(f) == pytest.approx(welch_bound(9, 37), abs=1e-9)
    assert welch_bound(9, 37) == pytest.approx(0.2940, abs=1e-4)


@given(st.integers(2, 60), st.integers(0, 2**32 - 1), st.floats(0.05, 1.0))
def test_random_harmonic_properties(n, seed, frac):
    m_target = max(1, int(frac * n))
    try:
        f, sel = random_harmonic(m_target, n, seed)
    except DomainError:
        return
    assert f.shape == (len(sel), n)
    assert np.allclose(np.abs(f.entries), 1 / math.sqrt(len(sel)), atol=1e-15)
    assert abs(tightness_defect(f)) < 1e-9
    if 0 not in sel.indices and n >= 2:
        assert average_coherence(f) == pytest.approx(1 / (n - 1), abs=1e-12)


def test_random_harmonic_empty_selection_errors():
    # m_target/n tiny: some seed will select nothing
    for seed in range(200):
        try:
            random_harmonic(1, 1000, seed)
        except DomainError as exc:
            assert "seed" in str(exc)
            return
    pytest.fail("no empty selection found")


def test_random_harmonic_domain():
    with pytest.raises(DomainError):
        random_harmonic(0, 10, 1)
    with pytest.raises(DomainError):
        random_harmonic(11, 10, 1)


# Gabor

def test_alltop_seed_values():
    s = alltop_seed(5)
    assert s[0] == pytest.approx(1 / math.sqrt(5))
    assert s[2] == pytest.approx(np.exp(2j * np.pi * 3 / 5) / math.sqrt(5), abs=1e-15)
    assert np.allclose(np.abs(alltop_seed(13)), 1 / math.sqrt(13), atol=1e-15)


def test_steinhaus_seed_modulus():
    s = steinhaus_seed(40, 3)
    assert np.max(np.abs(np.abs(s) - 1 / math.sqrt(40))) < 1e-15
    assert np.array_equal(s, steinhaus_seed(40, 3))


def test_gabor_column_convention():
    rng = np.random.default_rng(4)
    f = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    F = gabor(f).entries
    f = f / np.linalg.norm(f)
    M = 6
    t = np.arange(M)
    for x in range(M):
        for y in range(M):
            expect = f[(t - x) % M] * np.exp(2j * np.pi * y * ((t - x) % M) / M)
            assert np.allclose(F[:, x * M + y], expect, atol=1e-14)


def test_gabor_zero_seed():
    with pytest.raises(DomainError):
        gabor(np.zeros(4))


@given(st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_gabor_always_tight(m, seed):
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    if np.linalg.norm(f) < 1e-6:
        return
    assert abs(tightness_defect(gabor(f))) < 1e-9


def test_alltop_gabor_m5():
    f = alltop_gabor(5)
    assert worst_case_coherence(f) == pytest.approx(1 / math.sqrt(5), abs=1e-12)
    nu = average_coherence(f)
    assert nu == pytest.approx(0.1348, abs=1e-3) and nu <= 1 / 6


@pytest.mark.parametrize("m", [5, 7, 11, 13])
def test_gabor_average_coherence_bound(m):
    assert average_coherence(alltop_gabor(m)) <= 1 / (m + 1) + 1e-12
    for seed in range(3):
        assert average_coherence(steinhaus_gabor(m, seed)) <= 1 / (m + 1) + 1e-12


@pytest.mark.slow
def test_steinhaus_gabor_m70_coherence_bound():
    bound = math.sqrt(13 * math.log(70) / 70)
    hits = sum(worst_case_coherence(steinhaus_gabor(70, s)) <= bound for s in range(30))
    assert hits >= 27


def test_steinhaus_gabor_m60_typical_band():
    assert 0.25 <= worst_case_coherence(steinhaus_gabor(60, 0)) <= 0.50


# chirp

def test_chirp_m5():
    f = chirp(5)
    assert f.shape == (5, 25)
    assert worst_case_coherence(f) == pytest.approx(1 / math.sqrt(5), abs=1e-12)
    assert average_coherence(f) == pytest.approx(1 / 6, abs=1e-12)
    assert spectral_norm(f) == pytest.approx(math.sqrt(5), abs=1e-12)
    assert sufficient_conditions(f)[0]


def test_chirp_m7_bruteforce():
    assert mu_bruteforce(chirp(7).entries) == pytest.approx(1 / math.sqrt(7), abs=1e-12)
    assert worst_case_coherence(chirp(7)) == pytest.approx(1 / math.sqrt(7), abs=1e-12)


def test_chirp_entries_follow_definition():
    M = 7
    F = chirp(M).entries
    t = np.arange(M)
    h = np.exp(1j * np.pi * t * (t - M) / M)
    for a in range(M):
        for b in range(M):
            expect = h**a * np.exp(2j * np.pi * b * t / M) / math.sqrt(M)
            assert np.allclose(F[:, a * M + b], expect, atol=1e-12)


@pytest.mark.parametrize("m", [1, 4, 6, 9, 15])
def test_chirp_needs_prime(m):
    with pytest.raises(DomainError):
        chirp(m)


@pytest.mark.parametrize("m", [5, 7, 11, 13])
def test_chirp_and_alltop_share_mu_norm_and_gram_moduli(m):
    c, a = chirp(m), alltop_gabor(m)
    assert worst_case_coherence(c) == pytest.approx(worst_case_coherence(a), abs=1e-12)
    assert spectral_norm(c) == pytest.approx(spectral_norm(a), abs=1e-12)
    assert permutation_equivalent_grams(c, a, tol=1e-9)


@pytest.mark.parametrize("m", [5, 7, 11, 13])
def test_chirp_gabor_index_map_is_permutation(m):
    image = {((-6 * x) % m, (y - 3 * x * x) % m) for x in range(m) for y in range(m)}
    assert len(image) == m * m


# spherical 2-design

def test_spherical_2design_reference_selection():
    f = spherical_2design(HarmonicSelection(37, REF_INDICES))
    assert f.shape == (18, 37) and f.real_flag
    assert worst_case_coherence(f) == pytest.approx(0.1967, abs=1e-3)
    assert average_coherence(f) == pytest.approx(0.0278, abs=1e-3)
    assert np.max(np.abs(column_sum(f))) < 1e-9
    assert abs(tightness_defect(f)) < 1e-9
    assert sufficient_conditions(f)[1]


def test_spherical_2design_row_order_descending():
    f = spherical_2design(HarmonicSelection(20, (1, 3)))
    ell = np.arange(20)
    scale = math.sqrt(2 / 4)
    assert np.allclose(f.entries[0], scale * np.cos(2 * np.pi * 3 * ell / 20))
    assert np.allclose(f.entries[1], scale * np.sin(2 * np.pi * 3 * ell / 20))
    assert np.allclose(f.entries[2], scale * np.cos(2 * np.pi * 1 * ell / 20))


def test_spherical_2design_domain():
    with pytest.raises(DomainError):
        spherical_2design(HarmonicSelection(20, (0, 3)))
    with pytest.raises(DomainError):
        spherical_2design(HarmonicSelection(7, (1, 2)))


@given(st.integers(4, 60), st.data())
def test_spherical_2design_properties(n, data):
    k_max = n // 4
    if k_max < 1:
        return
    k = data.draw(st.integers(1, k_max))
    idx = data.draw(st.lists(st.integers(1, n // 2 - (n % 2 == 0)), min_size=k, max_size=k, unique=True))
    if len(idx) < k or not all(1 <= i < (n + 1) / 2 for i in idx):
        return
    f = spherical_2design(HarmonicSelection(n, tuple(idx)))
    assert np.max(np.abs(column_sum(f))) < 1e-9
    assert abs(tightness_defect(f)) < 1e-9
    assert scp_check(f).scp2


# Steiner

def test_steiner_pair3_matches_display():
    w = np.exp(2j * np.pi / 3)
    expect = np.array(
        [
            [1, w, w**2, 1, w, w**2, 0, 0, 0],
            [1, w**2, w, 0, 0, 0, 1, w, w**2],
            [0, 0, 0, 1, w**2, w, 1, w**2, w],
        ]
    ) / math.sqrt(2)
    F = steiner_etf(pair_system(3)).entries
    assert np.allclose(F, expect, atol=1e-15)


def test_steiner_pair3_equiangular():
    f = steiner_etf(pair_system(3))
    G = np.abs(gram(f))
    off = G[~np.eye(9, dtype=bool)]
    assert np.all(np.abs(off - 0.5) <= 1e-10)
    assert welch_bound(3, 9) == pytest.approx(0.5)
    assert average_coherence(f) == pytest.approx(1 / 8, abs=1e-12)


@pytest.mark.parametrize(
    "system",
    [pair_system(v) for v in (3, 4, 5, 7)] + [affine_plane_system(q) for q in (2, 3, 5)],
    ids=lambda s: f"{s.kind}-v{s.v}",
)
def test_steiner_etf_geometry(system):
    f = steiner_etf(system)
    v, k = system.v, system.k
    assert f.shape == (v * (v - 1) // (k * (k - 1)), v * (1 + (v - 1) // (k - 1)))
    assert worst_case_coherence(f) == pytest.approx(welch_bound(*f.shape), abs=1e-9)
    assert abs(tightness_defect(f)) < 1e-9
    assert scp_check(f).scp2
    assert np.max(np.abs(column_sum(f))) < 1e-9


def test_steiner_affine3_shape():
    assert steiner_etf(affine_plane_system(3)).shape == (12, 45)


def test_steiner_rejects_invalid_system():
    A = pair_system(4).incidence
    with pytest.raises(DomainError):
        steiner_etf(SteinerSystem(4, 2, np.vstack([A, A[:1]])))


# code frames

def _code_oracle(ctx, t):
    q = ctx.order
    cols = []
    for code in range(q ** (t + 1)):
        alpha = [(code // q ** (t - i)) % q for i in range(t + 1)]
        col = []
        for x in range(q):
            X = ctx(x)
            acc = ctx(alpha[0]) * X
            for i in range(1, t + 1):
                acc = acc + ctx(alpha[i]) * X ** (2**i + 1)
            col.append((-1) ** trace(acc))
        cols.append(col)
    return np.array(cols).T / math.sqrt(q)


@pytest.mark.parametrize("m,t", [(1, 0), (2, 1), (3, 1), (2, 2), (3, 0)])
def test_code_frame_matches_scalar_definition(m, t):
    ctx = FieldContext(m)
    assert np.array_equal(code_frame(ctx, t).entries, _code_oracle(ctx, t))


def test_code_frame_m4_t1():
    f = code_frame(FieldContext(4), 1)
    assert f.shape == (16, 256) and f.real_flag
    assert spectral_norm(f) ** 2 == pytest.approx(16, abs=1e-9)
    assert worst_case_coherence(f) == pytest.approx(0.5, abs=1e-12)
    assert average_coherence(f) == pytest.approx(1 / 17, abs=1e-12)


def test_code_frame_m3_t1():
    f = code_frame(FieldContext(3), 1)
    assert f.shape == (8, 64) and abs(tightness_defect(f)) < 1e-9
    assert worst_case_coherence(f) == pytest.approx(mu_bruteforce(f.entries), abs=1e-12)
    assert worst_case_coherence(f) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("m,t", [(2, 1), (3, 1), (4, 1), (3, 2), (5, 1)])
def test_code_frame_condition_one(m, t):
    f = code_frame(FieldContext(m), t)
    inner = f.entries.T @ column_sum(f)
    assert np.allclose(inner, f.n / f.m, atol=1e-9)
    assert sufficient_conditions(f)[0]


def test_code_frame_alternate_polynomial_recorded():
    f = code_frame(FieldContext(3, 0b1101), 1)
    assert f.meta["params"]["irreducible"] == 0b1101
    assert worst_case_coherence(f) <= 1 / math.sqrt(2 ** (3 - 3)) + 1e-12


def test_code_frame_caps():
    with pytest.raises(DomainError):
        code_frame(FieldContext(3), -1)
    with pytest.raises(DomainError):
        code_frame(FieldContext(13), 1)
    with pytest.raises(DomainError, match="budget"):
        code_frame(FieldContext(8), 2)


# descriptors and Table-1 properties

def _all_families():
    return [
        gaussian_normalized(5, 30, 3),
        random_harmonic(10, 40, 2)[0],
        harmonic_from_indices(HarmonicSelection(37, REF_INDICES)),
        alltop_gabor(7),
        steinhaus_gabor(6, 1),
        gabor(np.arange(1, 5) + 0.5j),
        chirp(7),
        spherical_2design(HarmonicSelection(37, REF_INDICES)),
        steiner_etf(pair_system(5)),
        steiner_etf(affine_plane_system(3)),
        steiner_etf(SteinerSystem(3, 2, pair_system(3).incidence)),
        code_frame(FieldContext(3), 1),
    ]


def test_rebuild_reproduces_every_family():
    for f in _all_families():
        g = rebuild(f.meta)
        assert g.shape == f.shape
        assert np.max(np.abs(g.entries - f.entries)) <= 1e-15, f.family
        assert g.meta == f.meta


def test_rebuild_unknown_family():
    with pytest.raises(DomainError):
        rebuild({"family": "nope", "params": {}})


def test_tight_families_and_welch():
    for f in _all_families():
        if f.family == "gaussian":
            continue
        assert abs(tightness_defect(f)) < 1e-9, f.family
        if f.n > f.m:
            assert worst_case_coherence(f) >= welch_bound(f.m, f.n) - 1e-9


def test_scp2_families():
    for f in _all_families():
        if f.family in ("gaussian", "harmonic", "gabor", "gabor-steinhaus", "gabor-alltop"):
            continue
        assert scp_check(f).scp2, f.family
