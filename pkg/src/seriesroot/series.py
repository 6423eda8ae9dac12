"""Truncated annihilating power series and their action on maps."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .annihilator import sequence_matrix
from .errors import PreconditionError
from .jets import PolyMap, iterate_jets
from .polynomials import DensePoly
from .spectral import FactoredPoly

GOOD_TOL = 1e-8
UNIT_TOL = 1e-9


@dataclass(frozen=True)
class SeriesTrunc:
    """Power series known through ``T**order``; products are truncated there."""

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Sequence):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in coeffs))
        if not self.coeffs:
            raise PreconditionError("a series needs at least one coefficient")

    @classmethod
    def one(cls, order: int) -> "SeriesTrunc":
        return cls([1.0] + [0.0] * order)

    @classmethod
    def from_poly(cls, p: DensePoly, order: int | None = None) -> "SeriesTrunc":
        cs = list(p.coeffs)
        order = len(cs) - 1 if order is None else order
        cs = (cs + [0j] * (order + 1))[: order + 1]
        return cls(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other):
        if not isinstance(other, SeriesTrunc):
            return SeriesTrunc(c * other for c in self.coeffs)
        M = min(self.order, other.order)
        out = [0j] * (M + 1)
        for i, a in enumerate(self.coeffs[: M + 1]):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs[: M + 1 - i]):
                out[i + j] += a * b
        return SeriesTrunc(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SeriesTrunc":
        result = SeriesTrunc.one(self.order)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative_at(self, z: complex, j: int) -> tuple[complex, float]:
        """``P^(j)(z)`` and its magnitude scale ``sum |p_i| i!/(i-j)! |z|^(i-j)``."""
        val = 0j
        scale = 0.0
        az = abs(z)
        for i in range(j, len(self.coeffs)):
            fall = math.perm(i, j)
            val += self.coeffs[i] * fall * z ** (i - j)
            scale += abs(self.coeffs[i]) * fall * az ** (i - j)
        return val, scale

    def norm_inf(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


def weierstrass_truncated(roots: FactoredPoly, M: int) -> SeriesTrunc:
    """prod (1 - T/mu)**mult through order M."""
    out = SeriesTrunc.one(M)
    for mu, mult in roots.factors:
        if mu == 0:
            raise PreconditionError("Weierstrass factors need nonzero roots")
        factor = SeriesTrunc([1.0, -1.0 / mu] + [0.0] * (M - 1)) if M >= 1 else SeriesTrunc([1.0])
        out = out * factor**mult
    return out


def sqrt_one_minus(mu: complex, M: int) -> SeriesTrunc:
    """Principal-branch binomial series of (1 - T/mu)**(1/2) through order M."""
    coeffs = [1 + 0j]
    b = 1.0
    for k in range(1, M + 1):
        b *= (0.5 - (k - 1)) / k
        coeffs.append(b * (-1.0 / mu) ** k)
    return SeriesTrunc(coeffs)


def circle_product_truncated(roots: Sequence[complex], n_j: Sequence[int], M: int) -> SeriesTrunc:
    """prod (1 - (1 - T/mu_j)**(1/2))**n_j as a formal series through order M.

    Each factor starts ``T/(2 mu) + ...``: it vanishes at T = 0 as a formal
    series rather than at ``mu``.
    """
    if len(roots) != len(n_j):
        raise PreconditionError("roots and exponents must have the same length")
    out = SeriesTrunc.one(M)
    for mu, nj in zip(roots, n_j):
        if abs(abs(mu) - 1) > UNIT_TOL:
            raise PreconditionError(f"root {mu} is not on the unit circle")
        s = sqrt_one_minus(mu, M)
        factor = SeriesTrunc([1 - s.coeffs[0]] + [-c for c in s.coeffs[1:]])
        out = out * factor**nj
    return out


def goodness_check(P: SeriesTrunc, m: FactoredPoly, good_tol: float = GOOD_TOL) -> tuple[bool, float]:
    """Whether every root of m is a root of P with at least the same multiplicity.

    Each ``P^(j)(mu)`` is compared with its own magnitude scale (see
    :meth:`SeriesTrunc.derivative_at`).
    """
    if P.is_zero():
        raise PreconditionError("goodness is undefined for the zero series")
    worst = 0.0
    for mu, e in m.factors:
        for j in range(e):
            val, scale = P.derivative_at(mu, j)
            defect = abs(val) / scale if scale > 0 else 0.0
            worst = max(worst, defect)
    return worst < good_tol, worst


def apply_series(P: SeriesTrunc, F: PolyMap, d: int, N: int) -> list[float]:
    """Normalized partial sums ``||sum_{i<=j} p_i [F^i]_d|| / max term so far`` for j <= N."""
    if N > P.order:
        raise PreconditionError(f"N={N} exceeds the series order {P.order}")
    S = sequence_matrix(iterate_jets(F, d, N), d)
    total = np.zeros(S.shape[1], dtype=complex)
    biggest = 0.0
    curve = []
    for p, row in zip(P.coeffs, S):
        term = p * row
        total = total + term
        biggest = max(biggest, float(np.abs(term).max(initial=0.0)))
        curve.append(float(np.abs(total).max(initial=0.0)) / biggest if biggest > 0 else 0.0)
    return curve
