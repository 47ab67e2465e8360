import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from frame_forge import ConvergenceError, DomainError, Frame, ZeroColumnError
from frame_forge.frame import column_sum, gram, normalize_columns, spectral_norm, tightness_defect
from oracles import spectral_norm_svd


def test_frame_admission_copies_and_freezes():
    a = np.eye(3)
    f = Frame(a)
    a[0, 0] = 5.0
    assert f.entries[0, 0] == 1.0
    with pytest.raises(ValueError):
        f.entries[0, 0] = 2.0
    assert f.real_flag and f.shape == (3, 3)


def test_frame_rejects_non_unit_columns():
    with pytest.raises(DomainError, match="column 1"):
        Frame(np.array([[1.0, 2.0], [0.0, 0.0]]))


def test_frame_rejects_nonfinite_and_bad_shape():
    with pytest.raises(DomainError):
        Frame(np.array([[np.nan]]))
    with pytest.raises(DomainError):
        Frame(np.ones(3))


def test_complex_dtype_is_complex128():
    f = Frame(np.array([[1j, 1.0]], dtype=np.complex64))
    assert f.entries.dtype == np.complex128 and not f.real_flag


def test_normalize_columns_zero_column():
    with pytest.raises(ZeroColumnError) as info:
        normalize_columns(np.array([[1.0, 0.0], [1.0, 1e-15]]))
    assert info.value.index == 1


def test_gram_is_exactly_hermitian():
    rng = np.random.default_rng(0)
    f = normalize_columns(rng.standard_normal((4, 9)) + 1j * rng.standard_normal((4, 9)))
    G = gram(f)
    assert np.array_equal(G, G.conj().T)
    assert np.allclose(np.diag(G), 1.0)


def test_spectral_norm_orthonormal_basis():
    assert spectral_norm(Frame(np.eye(6))) == pytest.approx(1.0, abs=1e-12)


def test_spectral_norm_start_orthogonal_to_top_eigenvector():
    # The top eigenvector of FF^* is (1, -1, 0, 0), orthogonal to the all-ones start.
    v = np.array([1.0, -1.0, 0.0, 0.0]) / np.sqrt(2)
    F = np.hstack([np.tile(v[:, None], (1, 3)), np.eye(4)])
    F = normalize_columns(F)
    assert spectral_norm(F) == pytest.approx(spectral_norm_svd(F.entries), rel=1e-9)


def test_spectral_norm_nonconvergence_raises_for_large_m():
    rng = np.random.default_rng(1)
    F = normalize_columns(rng.standard_normal((80, 200)))
    with pytest.raises(ConvergenceError) as info:
        spectral_norm(F, tol=1e-16, max_iter=2)
    assert info.value.last_value > 0


def test_spectral_norm_small_m_falls_back_to_eigh():
    rng = np.random.default_rng(2)
    F = normalize_columns(rng.standard_normal((10, 30)))
    assert spectral_norm(F, tol=1e-16, max_iter=2) == pytest.approx(spectral_norm_svd(F.entries), rel=1e-12)


@given(
    arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 12)), elements=st.floats(-10, 10)),
)
def test_spectral_norm_matches_svd(raw):
    norms = np.linalg.norm(raw, axis=0)
    if np.any(norms < 1e-3):
        return
    f = normalize_columns(raw)
    assert spectral_norm(f) == pytest.approx(spectral_norm_svd(f.entries), rel=1e-6)
    # Unit-norm frames satisfy ||F||^2 >= n/m.
    assert tightness_defect(f) >= -1e-9


def test_column_sum():
    assert np.allclose(column_sum(Frame(np.eye(3))), np.ones(3))


def test_gram_examples():
    assert np.array_equal(gram(Frame(np.eye(3))), np.eye(3))
    f = np.array([0.6, 0.8])
    assert np.allclose(gram(Frame(np.column_stack([f, f]))), np.ones((2, 2)))


def test_tightness_defect_rank_one():
    e1 = np.array([1.0, 0.0])
    assert tightness_defect(Frame(np.column_stack([e1, e1]))) == pytest.approx(1.0, abs=1e-12)


def test_normalize_examples():
    assert np.allclose(normalize_columns(np.array([[3.0], [4.0]])).entries[:, 0], [0.6, 0.8])
    assert np.allclose(normalize_columns(np.ones((4, 1))).entries, 0.5)
    rng = np.random.default_rng(0)
    unit = normalize_columns(rng.standard_normal((5, 7)))
    assert np.max(np.abs(normalize_columns(unit.entries).entries - unit.entries)) < 1e-15


def test_column_sum_examples():
    from frame_forge import FieldContext, code_frame

    s = column_sum(code_frame(FieldContext(2), 1))
    assert np.allclose(s, [8.0, 0.0, 0.0, 0.0])
    assert np.allclose(column_sum(Frame(np.eye(2))), [1.0, 1.0])


def test_spectral_norm_of_tight_examples():
    from frame_forge import chirp, pair_system, steiner_etf

    assert spectral_norm(chirp(5)) == pytest.approx(np.sqrt(5), abs=1e-9)
    assert spectral_norm(steiner_etf(pair_system(3))) == pytest.approx(np.sqrt(3), abs=1e-9)


def test_spectral_norm_random_8x20_matches_svd():
    for seed in range(20):
        f = normalize_columns(np.random.default_rng(seed).standard_normal((8, 20)))
        assert abs(spectral_norm(f) - spectral_norm_svd(f.entries)) < 1e-9
