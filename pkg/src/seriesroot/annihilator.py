"""Minimal vanishing polynomials of jets, annihilation checks, divisibility.

For a map with F(0) = 0 the substitution ``G -> [G o F]_d`` is a linear
operator on polynomials of degree <= d without constant term, and the
coefficient sequences ``i -> F^i_(k,v)`` are its Krylov sequences started at
the coordinate functions.  ``m_d`` is therefore the minimal polynomial of
that operator restricted to the Krylov space.  :func:`minpoly_up_to_degree`
computes it from an orthonormal Krylov basis, snapping roots to the
``lambda^v`` candidates of the characteristic jet polynomial; the stacked
Hankel route on raw sequences is kept as ``method="hankel"``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import NumericalBreakdownError, PreconditionError
from .jets import PolyMap, exponents_up_to, iterate_jets, jet_mul, unit_vector
from .polynomials import DensePoly, poly_divmod, poly_roots
from .spectral import (
    CLUSTER_TOL,
    FactoredPoly,
    build_char_jet_poly,
    eigenvalues,
    linear_part,
)

RANK_TOL = 1e-9
DIV_TOL = 1e-7
LEADING_TOL = 1e-6
NULL_TOL = 1e-6
RESIDUAL_LIMIT = 1e-6


@dataclass(frozen=True)
class AnnihilatorReport:
    minimal: DensePoly
    minimal_factors: FactoredPoly
    characteristic: FactoredPoly
    residual: float
    rank_tol: float
    sequences_used: int
    scaling: float
    method: str
    iterations: int

    def as_dict(self) -> dict:
        return {
            "minimal": [[c.real, c.imag] for c in self.minimal.coeffs],
            "minimal_factors": [
                {"root": [r.real, r.imag], "multiplicity": m} for r, m in self.minimal_factors.factors
            ],
            "characteristic_factors": [
                {"root": [r.real, r.imag], "multiplicity": m} for r, m in self.characteristic.factors
            ],
            "characteristic": [[c.real, c.imag] for c in self.characteristic.expand().coeffs],
            "residual": self.residual,
            "rank_tol": self.rank_tol,
            "sequences_used": self.sequences_used,
            "scaling": self.scaling,
            "method": self.method,
            "iterations": self.iterations,
        }


def sequence_matrix(iterates: list[PolyMap], d: int) -> np.ndarray:
    """Rows indexed by iterate i, columns by (k, v) with |v| <= d."""
    n = iterates[0].n_vars
    basis = exponents_up_to(n, d)
    out = np.zeros((len(iterates), n * len(basis)), dtype=complex)
    for i, it in enumerate(iterates):
        col = 0
        for k in range(n):
            terms = it.components[k].terms
            for v in basis:
                c = terms.get(v)
                if c is not None:
                    out[i, col] = complex(c)
                col += 1
    return out


def composition_operator(F: PolyMap, d: int) -> tuple[list, np.ndarray]:
    """Matrix of ``G -> [G o F]_d`` on the monomials X^w with 1 <= |w| <= d."""
    n = F.n_vars
    basis = exponents_up_to(n, d, min_degree=1)
    index = {w: i for i, w in enumerate(basis)}
    Ft = [c.truncate(d) for c in F.components]
    memo: dict = {}

    def power(w):
        if w in memo:
            return memo[w]
        k = max(i for i, e in enumerate(w) if e)
        prev = list(w)
        prev[k] -= 1
        prev = tuple(prev)
        result = Ft[k] if not any(prev) else jet_mul(power(prev), Ft[k], d)
        memo[w] = result
        return result

    C = np.zeros((len(basis), len(basis)), dtype=complex)
    for w in basis:
        for u, c in power(w).terms.items():
            if u in index:
                C[index[u], index[w]] = complex(c)
    return basis, C


def _orthonormal_krylov(C: np.ndarray, starts: list[np.ndarray], rank_tol: float) -> np.ndarray:
    scale = max(1.0, float(np.linalg.norm(C, 2)))
    basis: list[np.ndarray] = []
    queue = deque((s, rank_tol) for s in starts)
    while queue:
        w, tol = queue.popleft()
        w = w.astype(complex)
        for _ in range(2):
            for q in basis:
                w = w - q * np.vdot(q, w)
        nrm = np.linalg.norm(w)
        if nrm > tol:
            q = w / nrm
            basis.append(q)
            queue.append((C @ q, rank_tol * scale))
    if not basis:
        return np.zeros((C.shape[0], 0), dtype=complex)
    return np.column_stack(basis)


def _nullity(M: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s <= tol))


def _krylov_factors(F: PolyMap, d: int, chi: FactoredPoly, rank_tol: float) -> tuple[FactoredPoly, int]:
    n = F.n_vars
    basis, C = composition_operator(F, d)
    index = {w: i for i, w in enumerate(basis)}
    starts = []
    for k in range(n):
        e = np.zeros(len(basis), dtype=complex)
        e[index[unit_vector(n, k)]] = 1.0
        starts.append(e)
    Q = _orthonormal_krylov(C, starts, rank_tol)
    r = Q.shape[1]
    H = Q.conj().T @ C @ Q
    cands = list(chi.factors)
    assigned = [0] * len(cands)
    for z in np.linalg.eigvals(H):
        dist = [abs(z - mu) for mu, _ in cands]
        t = int(np.argmin(dist))
        if dist[t] > 1e-4 * max(1.0, abs(cands[t][0])):
            raise NumericalBreakdownError(
                f"restricted operator eigenvalue {z} matches no lambda^v candidate"
            )
        assigned[t] += 1
    hnorm = max(1.0, float(np.linalg.norm(H, 2)))
    factors = []
    for (mu, mult), a in zip(cands, assigned):
        if a == 0:
            continue
        e = 1
        if a > 1:
            shifted = H - mu * np.eye(r)
            P = shifted.copy()
            e = a
            for power in range(1, a + 1):
                if _nullity(P, NULL_TOL * (hnorm + abs(mu)) ** power) >= a:
                    e = power
                    break
                P = P @ shifted
        factors.append((mu, min(e, mult)))
    return FactoredPoly(tuple(factors)), r


def _hankel_poly(seqs: np.ndarray, max_degree: int, rho: float, rank_tol: float) -> DensePoly:
    N1 = seqs.shape[1]
    scaled = seqs / rho ** np.arange(N1)
    for r in range(1, max_degree + 1):
        rows = N1 - r
        if rows * seqs.shape[0] < r + 1 or rows < 1:
            break
        H = np.concatenate(
            [np.lib.stride_tricks.sliding_window_view(s, r + 1) for s in scaled], axis=0
        )
        if H.shape[0] < r + 1:
            break
        _, sv, Vh = np.linalg.svd(H, full_matrices=False)
        if sv[0] == 0 or sv[-1] > rank_tol * sv[0]:
            continue
        v = Vh[-1].conj()
        if abs(v[r]) < LEADING_TOL * np.linalg.norm(v):
            continue
        monic = v / v[r]
        return DensePoly(monic[t] * rho ** (r - t) for t in range(r + 1))
    raise NumericalBreakdownError(
        f"no annihilator of degree <= {max_degree} found at rank_tol={rank_tol:g}"
    )


def recurrence_defect(p: DensePoly, seqs: np.ndarray) -> float:
    """max over sequences and shifts of |sum p_t s_(i+t)| / max_t |p_t s_(i+t)|."""
    coeffs = np.array(p.coeffs)
    r = len(coeffs) - 1
    worst = 0.0
    for s in seqs:
        if len(s) <= r:
            continue
        windows = np.lib.stride_tricks.sliding_window_view(s, r + 1)
        terms = windows * coeffs
        num = np.abs(terms.sum(axis=1))
        den = np.abs(terms).max(axis=1)
        ok = den > 0
        if ok.any():
            worst = max(worst, float((num[ok] / den[ok]).max()))
    return worst


def nonzero_sequences(F: PolyMap, d: int, N: int) -> np.ndarray:
    S = sequence_matrix(iterate_jets(F, d, N), d).T
    keep = np.abs(S).max(axis=1) > 0
    return S[keep]


def minpoly_up_to_degree(
    F: PolyMap,
    d: int,
    N: int | None = None,
    rank_tol: float = RANK_TOL,
    cluster_tol: float = CLUSTER_TOL,
    method: str = "krylov",
) -> AnnihilatorReport:
    """Monic minimal vanishing polynomial m_d of F up to degree d.

    ``N`` iterates are used for the recurrence residual (and for the Hankel
    route); it defaults to ``2 * deg(X_d) + 2``.
    """
    if not F.origin_preserving:
        raise PreconditionError("minimal polynomial requires F(0) = 0")
    if d < 0:
        raise PreconditionError("degree must be non-negative")
    spec = eigenvalues(linear_part(F), cluster_tol=cluster_tol)
    chi = build_char_jet_poly(spec, d)
    if N is None:
        N = 2 * chi.degree + 2
    seqs = nonzero_sequences(F, d, N)
    rho = max([1.0] + [abs(r) for r, _ in chi.factors])
    if method == "krylov":
        factors, _ = _krylov_factors(F, d, chi, rank_tol)
        minimal = factors.expand()
    elif method == "hankel":
        minimal = _hankel_poly(seqs, chi.degree, rho, rank_tol)
        factors = FactoredPoly(tuple(poly_roots(minimal))) if minimal.degree > 0 else FactoredPoly(())
    else:
        raise PreconditionError(f"unknown method {method!r}")
    residual = recurrence_defect(minimal, seqs)
    if residual > RESIDUAL_LIMIT:
        raise NumericalBreakdownError(
            f"{method} annihilator of degree {minimal.degree} leaves residual {residual:.3e}"
        )
    return AnnihilatorReport(
        minimal=minimal,
        minimal_factors=factors,
        characteristic=chi,
        residual=residual,
        rank_tol=rank_tol,
        sequences_used=len(seqs),
        scaling=rho,
        method=method,
        iterations=N,
    )


def verify_annihilates(P: DensePoly, F: PolyMap, d: int) -> float:
    """Normalized size of ``sum p_i [F^i]_d``; ~0 iff P vanishes on F up to degree d.

    The normalization is the largest coefficient met among the individual
    terms and the running partial sums.
    """
    iterates = iterate_jets(F, d, max(P.degree, 0))
    S = sequence_matrix(iterates, d)
    total = np.zeros(S.shape[1], dtype=complex)
    scale = 0.0
    for p, row in zip(P.coeffs, S):
        term = p * row
        total = total + term
        scale = max(scale, float(np.abs(term).max(initial=0.0)), float(np.abs(total).max(initial=0.0)))
    if scale == 0:
        return 0.0
    return float(np.abs(total).max()) / scale


def _root_bound(p: DensePoly) -> float:
    """Fujiwara bound on the moduli of the roots of p."""
    cs = p.normalized().coeffs
    r = len(cs) - 1
    bound = 0.0
    for k in range(r):
        a = abs(cs[k]) / (2 if k == 0 else 1)
        if a:
            bound = max(bound, 2 * a ** (1.0 / (r - k)))
    return bound


def poly_divides(p: DensePoly, q: DensePoly, div_tol: float = DIV_TOL) -> tuple[bool, float]:
    """Whether p | q, judged by ||r||_inf / ||q||_inf < div_tol for q = p s + r.

    Both polynomials are first rescaled T -> rho T with rho a root bound of p,
    which keeps the descending synthetic division stable when p has roots of
    very different moduli; the norms are taken after rescaling.
    """
    if p.is_zero():
        raise PreconditionError("zero divisor")
    if q.is_zero():
        return True, 0.0
    rho = max(1.0, _root_bound(p)) if p.degree > 0 else 1.0
    ps = DensePoly(c * rho**i for i, c in enumerate(p.coeffs))
    qs = DensePoly(c * rho**i for i, c in enumerate(q.coeffs))
    _, rem = poly_divmod(qs, ps)
    norm = rem.norm_inf() / qs.norm_inf()
    return norm < div_tol, norm
