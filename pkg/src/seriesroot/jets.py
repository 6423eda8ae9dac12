"""Truncated multivariate polynomials (jets) and polynomial maps.

Exponent vectors are plain tuples of non-negative ints.  A :class:`Jet`
keeps a sparse ``{exponent: coefficient}`` mapping restricted to total degree
``<= cap``.  Coefficients are either Python complex numbers or
:class:`~seriesroot.extscalar.ExtScalar`; the two kinds are never mixed in a
single jet by the library itself.

All summations run in sorted key order so that results are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .errors import PreconditionError
from .extscalar import ExtScalar

Exponent = tuple[int, ...]

# plain complex coefficients below this magnitude are dropped
PRUNE_EPS = 1e-300


def total_degree(v: Exponent) -> int:
    return sum(v)


def unit_vector(n: int, k: int) -> Exponent:
    return tuple(1 if i == k else 0 for i in range(n))


def exponents_up_to(n: int, d: int, min_degree: int = 0) -> list[Exponent]:
    """All v in N^n with min_degree <= |v| <= d, by degree then lexicographically (descending)."""
    out: list[Exponent] = []
    for deg in range(min_degree, d + 1):
        block = []
        for combo in combinations_with_replacement(range(n), deg):
            v = [0] * n
            for k in combo:
                v[k] += 1
            block.append(tuple(v))
        out.extend(sorted(set(block), reverse=True))
    return out


def _negligible(c) -> bool:
    if isinstance(c, ExtScalar):
        return c.is_zero()
    return abs(c) < PRUNE_EPS


def _coerce(c):
    if isinstance(c, ExtScalar):
        return c
    return complex(c)


@dataclass(frozen=True)
class Jet:
    """A polynomial in ``n_vars`` variables truncated at total degree ``cap``."""

    n_vars: int
    cap: int
    terms: Mapping[Exponent, object] = field(default_factory=dict)

    @classmethod
    def from_terms(cls, n_vars: int, cap: int, terms: Mapping[Exponent, object] | Iterable) -> "Jet":
        """Build a jet, summing duplicates, truncating and pruning."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, object] = {}
        for v, c in items:
            v = tuple(int(x) for x in v)
            if len(v) != n_vars or any(x < 0 for x in v):
                raise PreconditionError(f"exponent {v} invalid for {n_vars} variables")
            if sum(v) > cap:
                continue
            c = _coerce(c)
            acc[v] = acc[v] + c if v in acc else c
        return cls(n_vars, cap, {v: c for v, c in sorted(acc.items()) if not _negligible(c)})

    @classmethod
    def zero(cls, n_vars: int, cap: int) -> "Jet":
        return cls(n_vars, cap, {})

    @classmethod
    def constant(cls, n_vars: int, cap: int, value) -> "Jet":
        return cls.from_terms(n_vars, cap, {(0,) * n_vars: value})

    @classmethod
    def variable(cls, n_vars: int, k: int, cap: int, coeff=1.0) -> "Jet":
        return cls.from_terms(n_vars, cap, {unit_vector(n_vars, k): coeff})

    def coefficient(self, v: Sequence[int]):
        v = tuple(v)
        if v in self.terms:
            return self.terms[v]
        sample = next(iter(self.terms.values()), None)
        return ExtScalar() if isinstance(sample, ExtScalar) else 0j

    def degree(self) -> int:
        return max((sum(v) for v in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, cap: int) -> "Jet":
        return Jet(self.n_vars, cap, {v: c for v, c in self.terms.items() if sum(v) <= cap})

    def homogeneous_part(self, deg: int) -> "Jet":
        return Jet(self.n_vars, self.cap, {v: c for v, c in self.terms.items() if sum(v) == deg})

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def scaled(self, s) -> "Jet":
        return Jet.from_terms(self.n_vars, self.cap, {v: c * s for v, c in self.terms.items()})

    def __add__(self, other: "Jet") -> "Jet":
        _same_space(self, other)
        acc = dict(self.terms)
        for v, c in other.terms.items():
            acc[v] = acc[v] + c if v in acc else c
        return Jet.from_terms(self.n_vars, min(self.cap, other.cap), acc)

    def __neg__(self) -> "Jet":
        return Jet(self.n_vars, self.cap, {v: -c for v, c in self.terms.items()})

    def __sub__(self, other: "Jet") -> "Jet":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other, min(self.cap, other.cap))
        return self.scaled(other)

    __rmul__ = scaled

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for v, c in self.terms.items():
            mono = "*".join(f"x{k}^{e}" if e > 1 else f"x{k}" for k, e in enumerate(v) if e)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _same_space(a: Jet, b: Jet) -> None:
    if a.n_vars != b.n_vars:
        raise PreconditionError(f"dimension mismatch: {a.n_vars} vs {b.n_vars} variables")


def jet_mul(a: Jet, b: Jet, cap: int) -> Jet:
    """Truncated product; products are accumulated in lexicographic order of a's keys."""
    _same_space(a, b)
    by_degree: dict[int, list] = {}
    for w, cw in b.terms.items():
        by_degree.setdefault(sum(w), []).append((w, cw))
    acc: dict[Exponent, object] = {}
    for u, cu in a.terms.items():
        room = cap - sum(u)
        for deg in range(room + 1):
            for w, cw in by_degree.get(deg, ()):
                v = tuple(x + y for x, y in zip(u, w))
                p = cu * cw
                acc[v] = acc[v] + p if v in acc else p
    return Jet.from_terms(a.n_vars, cap, acc)


@dataclass(frozen=True)
class PolyMap:
    """A polynomial map C^n -> C^n given by ``n_vars`` component jets.

    A map meant to be used as the outer map of a composition should be
    stored with ``cap`` at least its degree so that nothing is truncated.
    """

    n_vars: int
    components: tuple[Jet, ...]

    def __post_init__(self):
        if len(self.components) != self.n_vars:
            raise PreconditionError(
                f"{len(self.components)} components for {self.n_vars} variables"
            )
        for comp in self.components:
            if comp.n_vars != self.n_vars:
                raise PreconditionError("component lives in the wrong number of variables")

    @classmethod
    def from_terms(cls, n_vars: int, components: Sequence, cap: int | None = None) -> "PolyMap":
        """Components given as mappings or ``(exponent, coeff)`` iterables.

        ``cap`` defaults to the largest total degree present (a full map).
        """
        comps = [list(c.items()) if isinstance(c, Mapping) else list(c) for c in components]
        if cap is None:
            cap = max((sum(v) for comp in comps for v, _ in comp), default=1)
        return cls(n_vars, tuple(Jet.from_terms(n_vars, cap, comp) for comp in comps))

    @classmethod
    def identity(cls, n_vars: int, cap: int = 1) -> "PolyMap":
        return cls(n_vars, tuple(Jet.variable(n_vars, k, cap) for k in range(n_vars)))

    @classmethod
    def from_affine(cls, matrix, offset=None) -> "PolyMap":
        """x -> matrix @ x + offset."""
        n = len(matrix)
        comps = []
        for k in range(n):
            terms = {unit_vector(n, j): matrix[k][j] for j in range(n)}
            if offset is not None:
                terms[(0,) * n] = offset[k]
            comps.append(Jet.from_terms(n, 1, terms))
        return cls(n, tuple(comps))

    @property
    def cap(self) -> int:
        return min(c.cap for c in self.components)

    @property
    def origin_preserving(self) -> bool:
        zero = (0,) * self.n_vars
        return all(zero not in c.terms for c in self.components)

    def degree(self) -> int:
        return max(c.degree() for c in self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def is_nonlinear(self) -> bool:
        return self.degree() >= 2

    def truncate(self, cap: int) -> "PolyMap":
        return PolyMap(self.n_vars, tuple(c.truncate(cap) for c in self.components))

    def with_cap(self, cap: int) -> "PolyMap":
        """Same terms, re-labelled with a new cap (terms above it are dropped)."""
        return PolyMap(
            self.n_vars,
            tuple(Jet.from_terms(self.n_vars, cap, c.terms) for c in self.components),
        )

    def coefficient(self, k: int, v: Sequence[int]):
        """Coefficient of X^v in component k (0-based)."""
        if not 0 <= k < self.n_vars:
            raise PreconditionError(f"component index {k} out of range")
        return self.components[k].coefficient(v)

    def max_abs(self) -> float:
        return max(c.max_abs() for c in self.components)

    def __add__(self, other: "PolyMap") -> "PolyMap":
        if other.n_vars != self.n_vars:
            raise PreconditionError("dimension mismatch")
        return PolyMap(self.n_vars, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "PolyMap") -> "PolyMap":
        return self + other.scaled(-1.0)

    def scaled(self, s) -> "PolyMap":
        return PolyMap(self.n_vars, tuple(c.scaled(s) for c in self.components))

    def __call__(self, point: Sequence[complex]) -> tuple[complex, ...]:
        out = []
        for comp in self.components:
            total = 0j
            for v, c in comp.terms.items():
                term = complex(c)
                for x, e in zip(point, v):
                    term *= x**e
                total += term
            out.append(total)
        return tuple(out)


def jet_compose(outer: PolyMap, inner: PolyMap, cap: int) -> PolyMap:
    """``[outer o inner]_cap``.

    Exact as long as ``outer`` carries all of its terms: the coefficient of
    X^v in the composition only involves inner coefficients of total degree
    at most |v|, even when the inner map has constant terms.
    """
    if outer.n_vars != inner.n_vars:
        raise PreconditionError(
            f"dimension mismatch: outer in {outer.n_vars}, inner in {inner.n_vars} variables"
        )
    n = outer.n_vars
    inner_t = [c.truncate(cap) for c in inner.components]
    zero = (0,) * n
    sample = next((c for comp in inner.components for c in comp.terms.values()), 0j)
    one = ExtScalar(1.0) if isinstance(sample, ExtScalar) else 1 + 0j
    memo: dict[Exponent, Jet] = {zero: Jet.constant(n, cap, one)}

    def monomial(v: Exponent) -> Jet:
        if v in memo:
            return memo[v]
        k = max(i for i, e in enumerate(v) if e)
        prev = list(v)
        prev[k] -= 1
        result = jet_mul(monomial(tuple(prev)), inner_t[k], cap)
        memo[v] = result
        return result

    comps = []
    for comp in outer.components:
        acc: dict[Exponent, object] = {}
        for v, c in comp.terms.items():
            for w, cw in monomial(v).terms.items():
                p = c * cw
                acc[w] = acc[w] + p if w in acc else p
        comps.append(Jet.from_terms(n, cap, acc))
    return PolyMap(n, tuple(comps))


def iterate_jets(F: PolyMap, cap: int, N: int) -> list[PolyMap]:
    """``[F^0]_cap, ..., [F^N]_cap``, always recomposing with the full F outside."""
    if N < 0:
        raise PreconditionError("iteration count must be non-negative")
    current = PolyMap.identity(F.n_vars, cap)
    out = [current]
    for _ in range(N):
        current = jet_compose(F, current, cap)
        out.append(current)
    return out


def coeff_sequence(F: PolyMap, cap: int, N: int, k: int, v: Sequence[int]) -> list:
    """``(F^0_(k,v), ..., F^N_(k,v))`` with a 0-based component index ``k``."""
    v = tuple(v)
    if not 0 <= k < F.n_vars:
        raise PreconditionError(f"component index {k} out of range for n={F.n_vars}")
    if len(v) != F.n_vars or sum(v) > cap:
        raise PreconditionError(f"exponent {v} not available at cap {cap}")
    return [it.coefficient(k, v) for it in iterate_jets(F, cap, N)]
