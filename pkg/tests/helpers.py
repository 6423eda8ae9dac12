"""Random fixtures shared by the test modules."""

import numpy as np

from seriesroot.extscalar import ExtScalar
from seriesroot.jets import PolyMap, exponents_up_to, unit_vector
from seriesroot.polynomials import DensePoly
from seriesroot.univar import CoeffTable


def random_map(rng, n, degree=3, mod_lo=0.3, mod_hi=3.0, coeff=0.5):
    """F(0) = 0, diagonalizable linear part with eigenvalue moduli in [mod_lo, mod_hi]."""
    lam = rng.uniform(mod_lo, mod_hi, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    P = np.eye(n) + 0.3 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    L = P @ np.diag(lam) @ np.linalg.inv(P)
    comps = []
    for k in range(n):
        terms = {unit_vector(n, j): L[k, j] for j in range(n)}
        for v in exponents_up_to(n, degree, min_degree=2):
            terms[v] = coeff * (rng.normal() + 1j * rng.normal())
        comps.append(terms)
    return PolyMap.from_terms(n, comps), lam


def map_corpus(seed=20240601, count=50):
    rng = np.random.default_rng(seed)
    return [random_map(rng, int(rng.integers(1, 4)), degree=int(rng.integers(2, 4)))[0] for _ in range(count)]


def unit_disc(rng, size):
    r = np.sqrt(rng.uniform(size=size))
    return r * np.exp(2j * np.pi * rng.uniform(size=size))


def random_poly(rng, degree):
    """Coefficients uniform in the unit disc, leading coefficient bounded away from 0."""
    cs = unit_disc(rng, degree + 1)
    if abs(cs[-1]) < 0.1:
        cs[-1] = 0.1 * cs[-1] / abs(cs[-1]) if cs[-1] else 0.1
    return DensePoly(cs)


def triangular_automorphism(rng, n, degree=3):
    """A o T with T triangular (x_k + poly(x_(k+1), ...)) and A an invertible affine map."""
    comps = []
    for k in range(n):
        terms = {unit_vector(n, k): 1.0}
        for v in exponents_up_to(n, degree, min_degree=2):
            if all(v[j] == 0 for j in range(k + 1)):
                terms[v] = 0.5 * (rng.normal() + 1j * rng.normal())
        comps.append(terms)
    T = PolyMap.from_terms(n, comps)
    while True:
        M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        if np.linalg.cond(M) < 50:
            break
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    from seriesroot.jets import jet_compose

    A = PolyMap.from_affine(M.tolist(), b.tolist())
    return jet_compose(A, T, T.degree())


def power_table(J, I):
    """b_j^i = (j + 1)^i."""
    entries = tuple(tuple(ExtScalar.coerce(float((j + 1) ** i)) for i in range(I + 1)) for j in range(J + 1))
    return CoeffTable(entries, 0j, DensePoly([0, 1]), J, I)
