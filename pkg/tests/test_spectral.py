import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seriesroot.errors import PreconditionError
from seriesroot.jets import PolyMap, jet_compose
from seriesroot.spectral import (
    Regime,
    Spectrum,
    build_char_jet_poly,
    charpoly_coeffs,
    classify_regime,
    decompose_expanding,
    eigenvalues,
    linear_part,
    merge_roots,
)


def test_linear_part_read_off():
    F = PolyMap.from_terms(2, [{(1, 0): 2, (0, 2): 1}, {(0, 1): 3}])
    assert np.array_equal(linear_part(F), [[2, 0], [0, 3]])
    G = PolyMap.from_terms(2, [{(0, 1): 1}, {(1, 0): 1, (0, 2): 1}])
    assert np.array_equal(linear_part(G), [[0, 1], [1, 0]])


@pytest.mark.parametrize(
    "L, want",
    [([[2, 0], [0, 3]], [3, 2]), ([[0, 1], [0, 0]], [0, 0]), ([[0, 1], [-2, 3]], [2, 1])],
)
def test_eigenvalue_examples(L, want):
    got = eigenvalues(np.array(L, dtype=complex)).eigenvalues
    assert np.allclose(got, want, atol=1e-7)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_eigenvalues_match_lapack(seed, n):
    rng = np.random.default_rng(seed)
    L = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    ours = np.array(eigenvalues(L).eigenvalues)
    ref = np.linalg.eigvals(L)
    assert np.abs(ours[:, None] - ref[None, :]).min(axis=1).max() < 1e-7 * max(1, np.abs(ref).max())


def test_charpoly_by_hand():
    assert np.allclose(charpoly_coeffs(np.array([[0, 1], [-2, 3]])).coeffs, [2, -3, 1])


def test_dimension_limit():
    with pytest.raises(PreconditionError):
        eigenvalues(np.eye(9))


def test_char_jet_polynomial_examples():
    chi = build_char_jet_poly(Spectrum((2 + 0j,)), 2)
    assert sorted(r.real for r in chi.roots()) == [1, 2, 4]
    assert np.allclose(chi.expand().coeffs, [-8, 14, -7, 1])
    assert sorted(r.real for r in build_char_jet_poly(Spectrum((2, 3)), 1).roots()) == [1, 2, 3]
    merged = build_char_jet_poly(Spectrum((2 + 0j, 2 + 0j)), 1)
    assert sorted((r.real, m) for r, m in merged.factors) == [(1, 1), (2, 2)]


def test_merge_keeps_larger_modulus():
    (rep, m), = merge_roots([1.0, 1.0 + 1e-10])
    assert m == 2 and rep == 1.0 + 1e-10


@pytest.mark.parametrize(
    "lams, tag",
    [
        ((2, 3), Regime.IS_ROOT_EXPANDING),
        ((0.5,), Regime.GENERICALLY_NOT_CONTRACTING),
        ((cmath.exp(1j * cmath.pi / 4), 2), Regime.GENERICALLY_NOT_MIXED),
        ((0,), Regime.NOT_ROOT_ZERO_LINEAR_PART),
        ((1j, -1), Regime.IS_ROOT_UNIT_MODULUS),
        ((0.5, 2), Regime.GENERICALLY_NOT_CONTRACTING),
    ],
)
def test_regime_table(lams, tag):
    assert classify_regime(Spectrum(tuple(complex(l) for l in lams)), True, False).tag is tag


def test_regime_edge_cases():
    assert classify_regime(Spectrum((0.5,)), False, False).tag is Regime.IS_ROOT_LINEAR
    assert classify_regime(Spectrum((0j,)), False, True).tag is Regime.INDETERMINATE
    assert classify_regime(Spectrum((1 + 1e-10,)), True, False).tag is Regime.IS_ROOT_UNIT_MODULUS


def test_decompose_swap_map():
    F = PolyMap.from_terms(2, [{(0, 1): 1}, {(1, 0): 1, (0, 2): 1}])
    A, G = decompose_expanding(F, 2.0)
    assert np.allclose(linear_part(G), 2 * np.eye(2))
    assert G.origin_preserving
    back = jet_compose(A.inverse().as_polymap(), G, 2) - F
    assert back.is_zero() or back.max_abs() < 1e-12


def test_decompose_identity_and_singular():
    A, G = decompose_expanding(PolyMap.identity(2), 2.0)
    assert np.allclose(A.matrix, 2 * np.eye(2)) and np.allclose(linear_part(G), 2 * np.eye(2))
    with pytest.raises(PreconditionError, match="singular"):
        decompose_expanding(PolyMap.from_terms(2, [{(2, 0): 1}, {(0, 1): 1}]))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 3), min_size=1, max_size=4), st.booleans())
def test_regime_table_is_exhaustive(mods, nonlinear):
    spec = Spectrum(tuple(complex(m) for m in mods))
    v = classify_regime(spec, nonlinear, False)
    assert v.tag in set(Regime)
    if v.tag is Regime.IS_ROOT_EXPANDING:
        assert min(mods) > 1
    if v.tag is Regime.GENERICALLY_NOT_CONTRACTING:
        assert min(mods) < 1
