"""Linear parts, eigenvalues, characteristic jet polynomials and regime verdicts."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NumericalBreakdownError, PreconditionError
from .jets import PolyMap, exponents_up_to, jet_compose, unit_vector
from .polynomials import DensePoly, aberth_roots, cluster_roots

MAX_DIM = 8
CLUSTER_TOL = 1e-8
REGIME_TOL = 1e-9


def linear_part(F: PolyMap) -> np.ndarray:
    """Matrix whose entry (k, j) is the coefficient of X_j in component k."""
    n = F.n_vars
    L = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for j in range(n):
            L[k, j] = complex(F.coefficient(k, unit_vector(n, j)))
    return L


def charpoly_coeffs(L: np.ndarray) -> DensePoly:
    """det(T I - L) by the Faddeev-LeVerrier recursion."""
    L = np.asarray(L, dtype=complex)
    n = L.shape[0]
    coeffs = [0j] * (n + 1)
    coeffs[n] = 1.0 + 0j
    M = np.zeros_like(L)
    I = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        M = L @ M + coeffs[n - k + 1] * I
        coeffs[n - k] = -np.trace(L @ M) / k
    return DensePoly(coeffs)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple[complex, ...]
    cluster_tol: float = CLUSTER_TOL

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def power(self, v: Sequence[int]) -> complex:
        """lambda^v, multiplied left to right."""
        out = 1 + 0j
        for lam, e in zip(self.eigenvalues, v):
            for _ in range(e):
                out *= lam
        return out

    def moduli(self) -> list[float]:
        return [abs(l) for l in self.eigenvalues]


def eigenvalues(L: np.ndarray, max_iter: int = 200, cluster_tol: float = CLUSTER_TOL) -> Spectrum:
    """Eigenvalues via the characteristic polynomial and Aberth iteration (n <= 8)."""
    L = np.asarray(L, dtype=complex)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise PreconditionError("linear part must be square")
    n = L.shape[0]
    if n > MAX_DIM:
        raise PreconditionError(f"eigenvalues supported for n <= {MAX_DIM}, got {n}")
    if n == 0:
        return Spectrum((), cluster_tol)
    cp = charpoly_coeffs(L)
    raw = aberth_roots(cp, max_iter=max_iter)
    lams = []
    for r, m in cluster_roots(raw, 1e-6):
        lams.extend([r] * m)
    scale = max(1.0, cp.norm_inf())
    for lam in lams:
        if abs(cp(lam)) >= 1e-10 * scale * (1 + abs(lam)) ** n:
            raise NumericalBreakdownError(f"eigenvalue {lam} fails the residual check")
    lams.sort(key=lambda z: (-abs(z), z.real, z.imag))
    return Spectrum(tuple(lams), cluster_tol)


@dataclass(frozen=True)
class FactoredPoly:
    """``scale * prod (T - root)**mult``."""

    factors: tuple[tuple[complex, int], ...]
    scale: complex = 1.0

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.factors)

    def roots(self) -> list[complex]:
        return [r for r, m in self.factors for _ in range(m)]

    def expand(self) -> DensePoly:
        return DensePoly.from_roots(self.roots(), self.scale)

    def multiplicity(self, mu: complex, rel_tol: float = CLUSTER_TOL) -> int:
        return sum(m for r, m in self.factors if abs(r - mu) <= rel_tol * max(abs(r), abs(mu), 1e-300))


def merge_roots(values: Sequence[complex], rel_tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
    """Cluster values at relative distance <= rel_tol; representatives are the
    larger-modulus member (order of first appearance among equal moduli)."""
    order = sorted(range(len(values)), key=lambda i: (-abs(values[i]), i))
    reps: list[list] = []
    for i in order:
        z = values[i]
        for rep in reps:
            if abs(z - rep[0]) <= rel_tol * max(abs(z), abs(rep[0])):
                rep[1] += 1
                break
        else:
            reps.append([z, 1])
    return [(complex(r), m) for r, m in reps]


def build_char_jet_poly(spec: Spectrum, d: int) -> FactoredPoly:
    """prod over |v| <= d of (T - lambda^v), the v = 0 factor included."""
    if d < 0:
        raise PreconditionError("degree must be non-negative")
    values = [spec.power(v) for v in exponents_up_to(spec.n, d)]
    return FactoredPoly(tuple(merge_roots(values, spec.cluster_tol)))


class Regime(str, enum.Enum):
    IS_ROOT_EXPANDING = "IsRoot-Expanding"
    IS_ROOT_UNIT_MODULUS = "IsRoot-UnitModulus"
    IS_ROOT_LINEAR = "IsRoot-Linear"
    NOT_ROOT_ZERO_LINEAR_PART = "NotRoot-ZeroLinearPart"
    GENERICALLY_NOT_CONTRACTING = "GenericallyNot-Contracting"
    GENERICALLY_NOT_MIXED = "GenericallyNot-Mixed"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class Verdict:
    tag: Regime
    detail: str
    tolerance: float
    moduli: tuple[float, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "tag": self.tag.value,
            "detail": self.detail,
            "tolerance": self.tolerance,
            "moduli": list(self.moduli),
        }


def classify_regime(
    spec: Spectrum, F_is_nonlinear: bool, F_is_zero: bool, tol: float = REGIME_TOL
) -> Verdict:
    """Decision table over eigenvalue moduli.

    The ``GenericallyNot-*`` tags are statements about generic maps in the
    regime only; a particular map in that regime may still be a root.
    """
    mods = tuple(spec.moduli())

    def verdict(tag: Regime, detail: str) -> Verdict:
        return Verdict(tag, detail, tol, mods)

    if F_is_zero:
        return verdict(Regime.INDETERMINATE, "zero map: the series question is degenerate")
    if not mods or not all(math.isfinite(m) for m in mods):
        return verdict(Regime.INDETERMINATE, "spectrum empty or non-finite")
    if not F_is_nonlinear:
        return verdict(Regime.IS_ROOT_LINEAR, "linear maps are locally finite")
    if all(m <= tol for m in mods):
        return verdict(
            Regime.NOT_ROOT_ZERO_LINEAR_PART,
            "nonzero map with vanishing linear part admits no nontrivial series",
        )
    if all(m > 1 + tol for m in mods):
        return verdict(Regime.IS_ROOT_EXPANDING, "all eigenvalues strictly outside the unit circle")
    if all(abs(m - 1) <= tol for m in mods):
        return verdict(Regime.IS_ROOT_UNIT_MODULUS, "all eigenvalues on the unit circle")
    if any(m < 1 - tol for m in mods):
        return verdict(
            Regime.GENERICALLY_NOT_CONTRACTING,
            "an eigenvalue inside the unit disc makes 0 an accumulation point of required roots",
        )
    unit = [abs(m - 1) <= tol for m in mods]
    expanding = [m > 1 + tol for m in mods]
    if any(unit) and any(expanding) and all(u or e for u, e in zip(unit, expanding)):
        return verdict(
            Regime.GENERICALLY_NOT_MIXED,
            "unit-modulus and expanding eigenvalues together force infinitely many roots on the circle",
        )
    return verdict(Regime.INDETERMINATE, "moduli sit on a case boundary within tolerance")


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix @ x + offset."""

    matrix: np.ndarray
    offset: np.ndarray

    def as_polymap(self) -> PolyMap:
        return PolyMap.from_affine(self.matrix.tolist(), self.offset.tolist())

    def inverse(self) -> "AffineMap":
        Minv = np.linalg.inv(self.matrix)
        return AffineMap(Minv, -Minv @ self.offset)

    def __call__(self, x):
        return self.matrix @ np.asarray(x, dtype=complex) + self.offset


def decompose_expanding(F: PolyMap, s: float = 2.0, cond_limit: float = 1e12) -> tuple[AffineMap, PolyMap]:
    """Affine A and G = A o F with G(0) = 0 and linear part s*I, so F = A^-1 o G.

    A(x) = s J^-1 (x - F(0)) with J the linear part of F at the origin.
    """
    if not s > 1:
        raise PreconditionError("scale s must exceed 1")
    J = linear_part(F)
    if not np.all(np.isfinite(J)) or np.linalg.cond(J) > cond_limit:
        raise PreconditionError("no expanding decomposition at origin: linear part is singular")
    n = F.n_vars
    F0 = np.array([complex(F.coefficient(k, (0,) * n)) for k in range(n)])
    Jinv = np.linalg.inv(J)
    A = AffineMap(s * Jinv, -s * (Jinv @ F0))
    return A, jet_compose(A.as_polymap(), F, max(F.cap, 1))
