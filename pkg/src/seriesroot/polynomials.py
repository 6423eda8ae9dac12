"""Dense univariate polynomials and simultaneous root iteration.

Coefficients are stored in ascending order, ``coeffs[i]`` multiplying ``T**i``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NumericalBreakdownError, PreconditionError

DROP_TOL = 1e-300
MONIC_TOL = 1e-12


@dataclass(frozen=True)
class DensePoly:
    """Polynomial with complex coefficients, ascending order, trimmed leading zeros."""

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Iterable):
        cs = [complex(c) for c in coeffs]
        while len(cs) > 1 and abs(cs[-1]) < DROP_TOL:
            cs.pop()
        if not cs:
            cs = [0j]
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_roots(cls, roots: Iterable[complex], scale: complex = 1.0) -> "DensePoly":
        """``scale * prod (T - r)``, multiplying factors in the given order."""
        acc = [complex(scale)]
        for r in roots:
            nxt = [0j] * (len(acc) + 1)
            for i, c in enumerate(acc):
                nxt[i + 1] += c
                nxt[i] -= r * c
            acc = nxt
        return cls(acc)

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    @property
    def monic(self) -> bool:
        return abs(self.leading - 1) < MONIC_TOL

    def is_zero(self) -> bool:
        return self.degree < 0

    def __call__(self, z):
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def abs_eval(self, r: float) -> float:
        """``sum |p_i| r^i``, the natural magnitude scale of p near |z| = r."""
        return sum(abs(c) * r**i for i, c in enumerate(self.coeffs))

    def derivative(self, order: int = 1) -> "DensePoly":
        cs = list(self.coeffs)
        for _ in range(order):
            cs = [i * c for i, c in enumerate(cs)][1:] or [0j]
        return DensePoly(cs)

    def normalized(self) -> "DensePoly":
        if self.is_zero():
            raise PreconditionError("cannot normalize the zero polynomial")
        lead = self.leading
        return DensePoly(c / lead for c in self.coeffs)

    def norm_inf(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def __add__(self, other: "DensePoly") -> "DensePoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0j] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0j] * (n - len(other.coeffs))
        return DensePoly(x + y for x, y in zip(a, b))

    def __sub__(self, other: "DensePoly") -> "DensePoly":
        return self + other.scaled(-1)

    def scaled(self, s: complex) -> "DensePoly":
        return DensePoly(c * s for c in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, DensePoly):
            return self.scaled(other)
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return DensePoly(out)

    __rmul__ = scaled

    def compose_affine(self, a: complex, b: complex) -> "DensePoly":
        """``p(a*z + b)`` by Horner on the linear inner polynomial."""
        inner = DensePoly([b, a])
        acc = DensePoly([0j])
        for c in reversed(self.coeffs):
            acc = acc * inner + DensePoly([c])
        return acc


def poly_divmod(q: DensePoly, p: DensePoly) -> tuple[DensePoly, DensePoly]:
    """Synthetic division ``q = p * s + r`` with ``deg r < deg p``."""
    if p.is_zero():
        raise PreconditionError("division by the zero polynomial")
    rem = list(q.coeffs)
    dp = p.degree
    lead = p.leading
    if len(rem) - 1 < dp:
        return DensePoly([0j]), DensePoly(rem)
    quot = [0j] * (len(rem) - dp)
    for k in range(len(rem) - 1 - dp, -1, -1):
        t = rem[k + dp] / lead
        quot[k] = t
        for i in range(dp + 1):
            rem[k + i] -= t * p.coeffs[i]
        rem[k + dp] = 0j
    return DensePoly(quot), DensePoly(rem[:dp] or [0j])


def _initial_guesses(monic: np.ndarray) -> np.ndarray:
    deg = len(monic) - 1
    # Fujiwara bound on the root moduli
    bound = 0.0
    for k in range(deg):
        a = abs(monic[k])
        if a == 0:
            continue
        e = 1.0 / (deg - k)
        val = (a / 2 if k == 0 else a) ** e
        bound = max(bound, val)
    radius = max(bound, 1e-3)
    center = -monic[deg - 1] / deg
    angles = 2 * math.pi * np.arange(deg) / deg + 0.4
    return center + 0.5 * radius * np.exp(1j * angles)


def aberth_roots(p: DensePoly, max_iter: int = 200) -> list[complex]:
    """All roots of ``p`` with repetition, by Aberth-Ehrlich iteration."""
    if p.degree < 1:
        raise PreconditionError("root finding needs degree >= 1")
    cs = list(p.coeffs)
    zeros = 0
    while cs[0] == 0:
        cs.pop(0)
        zeros += 1
    roots: list[complex] = [0j] * zeros
    if len(cs) == 1:
        return roots
    monic = np.array(cs, dtype=complex) / cs[-1]
    deg = len(monic) - 1
    if deg == 1:
        return roots + [complex(-monic[0])]
    desc = monic[::-1]
    ddesc = np.polyder(desc)
    absdesc = np.abs(desc)
    z = _initial_guesses(monic)
    eps = np.finfo(float).eps
    active = np.ones(deg, dtype=bool)
    for _ in range(max_iter):
        pz = np.polyval(desc, z)
        scale = np.polyval(absdesc, np.abs(z))
        active &= np.abs(pz) > 8 * eps * scale
        if not active.any():
            break
        dpz = np.polyval(ddesc, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            w = ratio / (1.0 - ratio * inv.sum(axis=1))
        w = np.where(np.isfinite(w), w, 0.0)
        z = np.where(active, z - w, z)
    else:
        pz = np.polyval(desc, z)
        scale = np.polyval(absdesc, np.abs(z))
        if np.any(np.abs(pz) > 1e-10 * scale):
            raise NumericalBreakdownError(
                f"Aberth iteration did not converge in {max_iter} iterations"
            )
    return roots + [complex(r) for r in z]


def cluster_roots(roots: Sequence[complex], rel_tol: float = 1e-6) -> list[tuple[complex, int]]:
    """Group nearly equal roots, returning (mean, multiplicity) pairs sorted by (re, im)."""
    remaining = sorted(roots, key=lambda r: (r.real, r.imag))
    groups: list[list[complex]] = []
    for r in remaining:
        for g in groups:
            c = sum(g) / len(g)
            if abs(r - c) <= rel_tol * max(1.0, abs(c)):
                g.append(r)
                break
        else:
            groups.append([r])
    out = [(complex(sum(g) / len(g)), len(g)) for g in groups]
    return sorted(out, key=lambda rm: (rm[0].real, rm[0].imag))


def poly_roots(p: DensePoly, cluster_tol: float = 1e-6, max_iter: int = 200) -> list[tuple[complex, int]]:
    """Roots of ``p`` as ``(root, multiplicity)`` pairs.

    Each reported root satisfies ``|p(r)| < 1e-10 * ||p|| * (1 + |r|)**deg``.
    """
    roots = aberth_roots(p, max_iter=max_iter)
    clusters = cluster_roots(roots, cluster_tol)
    bound = 1e-10 * p.norm_inf()
    for r, _ in clusters:
        if abs(p(r)) >= bound * (1 + abs(r)) ** p.degree:
            raise NumericalBreakdownError(f"root {r} has residual {abs(p(r)):.3e}")
    return clusters


def format_complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def principal_root(z: complex, k: int) -> complex:
    """Principal branch of ``z ** (1/k)``."""
    if z == 0:
        return 0j
    return cmath.rect(abs(z) ** (1.0 / k), cmath.phase(z) / k)
