"""Acceptance criteria, each at its stated tolerance; a summary line per criterion is printed at the end."""

import cmath
import math
import random
import time

import mpmath
import numpy as np
import pytest

from helpers import map_corpus, power_table, random_poly, triangular_automorphism
from seriesroot.annihilator import minpoly_up_to_degree, poly_divides, verify_annihilates
from seriesroot.extscalar import ExtScalar, ext_add, ext_div, ext_mul
from seriesroot.jets import PolyMap, coeff_sequence, jet_compose
from seriesroot.orthogonal import orthogonal_solve, solve_about_c
from seriesroot.polynomials import DensePoly
from seriesroot.spectral import (
    Regime,
    Spectrum,
    build_char_jet_poly,
    classify_regime,
    decompose_expanding,
    eigenvalues,
    linear_part,
)
from seriesroot.univar import (
    conjugate_to_origin,
    fixed_points,
    residue_terms,
    select_nonattracting,
    shifted_iterate_table,
)


@pytest.fixture(scope="module")
def corpus():
    return map_corpus()


@pytest.fixture(scope="module")
def minpolys(corpus):
    out = []
    for F in corpus:
        spec = eigenvalues(linear_part(F))
        out.append(
            {d: (minpoly_up_to_degree(F, d).minimal, build_char_jet_poly(spec, d).expand()) for d in range(1, 5)}
        )
    return out


@pytest.fixture(scope="module")
def poly_corpus():
    rng = np.random.default_rng(7)
    polys = []
    while len(polys) < 200:
        f = random_poly(rng, int(rng.integers(2, 7)))
        fps = fixed_points(f)
        if all(fp.multiplicity == 1 and abs(fp.multiplier - 1) > 1e-9 for fp in fps):
            polys.append(f)
    return polys


@pytest.mark.criterion("1")
def test_characteristic_jet_polynomial_annihilates_corpus(corpus):
    start = time.perf_counter()
    worst = 0.0
    for F in corpus:
        spec = eigenvalues(linear_part(F))
        for d in range(1, 5):
            worst = max(worst, verify_annihilates(build_char_jet_poly(spec, d).expand(), F, d))
    elapsed = time.perf_counter() - start
    assert worst < 1e-8
    assert elapsed < 30


@pytest.mark.criterion("2")
def test_fixture_exactness():
    f = PolyMap.from_terms(1, [{(1,): 2, (2,): 1}])
    m2 = minpoly_up_to_degree(f, 2).minimal
    assert m2.degree == 2
    assert max(abs(a - b) for a, b in zip(m2.coeffs, [8, -6, 1])) < 1e-10

    F = PolyMap.from_terms(2, [{(1, 0): 2, (0, 2): 1}, {(0, 1): 3}])
    seq = coeff_sequence(F, 2, 10, 0, (0, 2))
    for i, c in enumerate(seq):
        want = (2**i - 9**i) / (2 - 9)
        assert abs(c - want) <= 1e-10 * max(1.0, abs(want))

    D = PolyMap.from_terms(2, [{(1, 0): 4, (0, 2): 1}, {(0, 1): 2}])
    seq = coeff_sequence(D, 2, 10, 0, (0, 2))
    for i, c in enumerate(seq):
        want = i * 4.0 ** (i - 1)
        assert abs(c - want) <= 1e-10 * max(1.0, abs(want))


@pytest.mark.criterion("3")
def test_divisibility_chains(minpolys):
    for chain in minpolys:
        for d in range(1, 4):
            m, chi = chain[d]
            ok_next, r1 = poly_divides(m, chain[d + 1][0], 1e-7)
            ok_chi, r2 = poly_divides(m, chi, 1e-7)
            assert ok_next, (d, r1)
            assert ok_chi, (d, r2)


@pytest.mark.criterion("4")
def test_classification_table():
    cases = [
        ((0.5,), Regime.GENERICALLY_NOT_CONTRACTING),
        ((cmath.exp(1j * math.pi / 4), 2.0), Regime.GENERICALLY_NOT_MIXED),
        ((2.0, 3.0), Regime.IS_ROOT_EXPANDING),
        ((cmath.exp(1j), cmath.exp(1j * math.sqrt(2))), Regime.IS_ROOT_UNIT_MODULUS),
    ]
    for lams, tag in cases:
        assert classify_regime(Spectrum(tuple(complex(l) for l in lams)), True, False).tag is tag
    F = PolyMap.from_terms(1, [{(2,): 1}])
    assert classify_regime(eigenvalues(linear_part(F)), True, False).tag is Regime.NOT_ROOT_ZERO_LINEAR_PART


@pytest.mark.criterion("5")
def test_residue_identity_corpus(poly_corpus):
    start = time.perf_counter()
    for f in poly_corpus:
        total, scale = residue_terms(f)
        assert abs(total) < 1e-8 * scale
        assert max(abs(fp.multiplier) for fp in fixed_points(f)) >= 1 - 1e-9
    assert time.perf_counter() - start < 10


@pytest.mark.criterion("6")
def test_translation_to_nonattracting_point(poly_corpus):
    for f in poly_corpus:
        fp = select_nonattracting(f)
        g = conjugate_to_origin(f, fp.location)
        assert abs(g.coeffs[0]) < 1e-10
        assert abs(g.coeffs[1]) >= 1 - 1e-9


@pytest.mark.criterion("7")
def test_orthogonal_solver_on_power_table():
    sol = orthogonal_solve(power_table(3, 12), 3, 1e-10)
    assert sol.complete
    assert sol.stages_completed == 3
    assert all(sol.row_residuals[j] < 1e-9 for j in (1, 2, 3))
    for k, idx in enumerate(sol.stage_indices, start=1):
        assert len(idx) <= k + 1
    assert sol.is_nonzero()


@pytest.fixture(scope="module")
def pipeline():
    start = time.perf_counter()
    rep = solve_about_c(DensePoly([0, 1, 1]), 3, 24, 1e3)
    return rep, time.perf_counter() - start


@pytest.mark.criterion("8a")
def test_pipeline_ratio_diagnostic(pipeline):
    rep, _ = pipeline
    for i in range(8, 17):
        assert abs(rep.diagnostics.ratio[i] - 2) <= 0.05 * 2


@pytest.mark.criterion("8b")
def test_pipeline_row_dominance_from_eight(pipeline):
    rep, _ = pipeline
    failures = [
        (j, i, rep.diagnostics.dominance_log2[j][i])
        for j in (1, 2, 3)
        for i in range(8, 25)
        if not (rep.diagnostics.dominance_log2[j][i] or -1) > 0
    ]
    assert not failures, f"|b_j^i| <= |b_(j-1)^i| at (j, i, log2 ratio) = {failures[:4]}"


@pytest.mark.criterion("8c")
def test_pipeline_row_residuals(pipeline):
    rep, elapsed = pipeline
    assert rep.solution.complete
    assert all(rep.row_residuals[j] < 1e-6 for j in range(4))
    assert elapsed < 60


@pytest.mark.criterion("9")
def test_expanding_decomposition():
    rng = np.random.default_rng(99)
    for _ in range(20):
        n = int(rng.integers(2, 4))
        F = triangular_automorphism(rng, n)
        A, G = decompose_expanding(F, s=2.0)
        assert max(abs(complex(G.coefficient(k, (0,) * n))) for k in range(n)) < 1e-10
        assert np.abs(linear_part(G) - 2 * np.eye(n)).max() < 1e-10
        diff = jet_compose(A.inverse().as_polymap(), G, F.cap) - F
        assert diff.is_zero() or diff.max_abs() < 1e-10
        assert classify_regime(eigenvalues(linear_part(G)), G.is_nonlinear(), G.is_zero()).tag is Regime.IS_ROOT_EXPANDING


def _ulps(x: ExtScalar, ref) -> float:
    mv = mpmath.mpc(x.mantissa.real, x.mantissa.imag) * mpmath.ldexp(1, x.exponent)
    mag = abs(ref)
    if mag == 0:
        return 0.0 if x.is_zero() else math.inf
    ulp = mpmath.ldexp(1, int(mpmath.floor(mpmath.log(mag, 2))) - 52)
    return float(abs(mv - ref) / ulp)


@pytest.mark.criterion("10")
def test_extended_range_table_and_arithmetic():
    T = shifted_iterate_table(DensePoly([0, 1, 1]), 10, 1, 24)
    b0 = [T.b(0, i) for i in range(25)]
    assert all(not x.is_zero() for x in b0[1:])
    # exact integer oracle b_0^(i+1) = b_0^i + (b_0^i)^2 - 10 while it stays cheap
    exact = 0
    for i in range(1, 17):
        exact = exact + exact * exact - 10
        bits = exact.bit_length()
        top = abs(exact) >> max(bits - 60, 0)
        log2_exact = math.log2(top) + max(bits - 60, 0)
        assert abs(b0[i].log2abs() - log2_exact) < 1e-12 * log2_exact
    # beyond that the magnitude keeps doubling in log2 without saturating
    for i in range(17, 25):
        assert abs(b0[i].log2abs() / b0[i - 1].log2abs() - 2) < 1e-9
    rnd = random.Random(5)
    worst = 0.0
    with mpmath.workprec(200):
        for _ in range(10_000):
            a = ExtScalar(complex(rnd.uniform(-2, 2), rnd.uniform(-2, 2)), rnd.randint(-10**6, 10**6))
            gap = rnd.choice([0, 1, 3, 20, 60, 200])
            b = ExtScalar(complex(rnd.uniform(-2, 2), rnd.uniform(-2, 2)), a.exponent - gap)
            ra = mpmath.mpc(a.mantissa.real, a.mantissa.imag) * mpmath.ldexp(1, a.exponent)
            rb = mpmath.mpc(b.mantissa.real, b.mantissa.imag) * mpmath.ldexp(1, b.exponent)
            worst = max(
                worst,
                _ulps(ext_add(a, b), ra + rb),
                _ulps(ext_mul(a, b), ra * rb),
                _ulps(ext_div(a, b), ra / rb),
            )
    assert worst <= 4, worst
