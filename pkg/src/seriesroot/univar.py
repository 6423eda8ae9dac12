"""One-variable polynomials: fixed points, normalizations, shifted iterate tables."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import ExponentSaturationError, NumericalBreakdownError, PreconditionError
from .extscalar import ExtScalar, ZERO, ONE
from .polynomials import DensePoly, poly_roots, principal_root

CLASS_TOL = 1e-9
ZERO_DERIV_TOL = 1e-14

ATTRACTING = "attracting"
NEUTRAL = "neutral"
REPELLING = "repelling"


@dataclass(frozen=True)
class FixedPoint:
    location: complex
    multiplier: complex
    kind: str
    multiplicity: int = 1

    def as_dict(self) -> dict:
        return {
            "location": [self.location.real, self.location.imag],
            "multiplier": [self.multiplier.real, self.multiplier.imag],
            "class": self.kind,
            "multiplicity": self.multiplicity,
        }


def classify_multiplier(m: complex, tol: float = CLASS_TOL) -> str:
    a = abs(m)
    if a < 1 - tol:
        return ATTRACTING
    if a > 1 + tol:
        return REPELLING
    return NEUTRAL


def _refine_multiple_root(h: DensePoly, r: complex, mult: int) -> complex:
    # a root of multiplicity m is a simple root of the (m-1)-th derivative
    g = h.derivative(mult - 1)
    dg = g.derivative()
    for _ in range(8):
        slope = dg(r)
        if slope == 0:
            break
        step = g(r) / slope
        r -= step
        if abs(step) <= 1e-16 * max(1.0, abs(r)):
            break
    return r


def fixed_points(f: DensePoly, tol: float = CLASS_TOL) -> list[FixedPoint]:
    """Roots of f(z) - z with multiplicities, multipliers and classes."""
    if f.degree < 2:
        raise PreconditionError("linear map: every analysis trivial (degree >= 2 required)")
    h = f - DensePoly([0, 1])
    df = f.derivative()
    out = []
    for r, mult in poly_roots(h):
        if mult > 1:
            r = _refine_multiple_root(h, r, mult)
        m = df(r)
        out.append(FixedPoint(complex(r), complex(m), classify_multiplier(m, tol), mult))
    return out


def residue_sum(f: DensePoly, tol: float = CLASS_TOL) -> complex:
    """sum over fixed points of 1 / (f'(r) - 1); vanishes for degree >= 2."""
    total, _ = residue_terms(f, tol)
    return total


def residue_terms(f: DensePoly, tol: float = CLASS_TOL) -> tuple[complex, float]:
    """The residue sum together with ``sum |1 / (f'(r) - 1)|``."""
    total = 0j
    scale = 0.0
    for fp in fixed_points(f, tol):
        if fp.multiplicity > 1 or abs(fp.multiplier - 1) <= tol:
            raise PreconditionError(
                "non-simple fixed point: the residue identity needs distinct fixed points"
            )
        term = 1.0 / (fp.multiplier - 1)
        total += term
        scale += abs(term)
    return total, scale


def conjugate_to_origin(f: DensePoly, w: complex) -> DensePoly:
    """g(z) = f(z + w) - w."""
    g = f.compose_affine(1.0, w)
    cs = list(g.coeffs)
    cs[0] -= w
    return DensePoly(cs)


def select_nonattracting(f: DensePoly, tol: float = CLASS_TOL) -> FixedPoint:
    """The fixed point with the largest |multiplier| among those with |multiplier| >= 1 - tol."""
    candidates = [fp for fp in fixed_points(f, tol) if abs(fp.multiplier) >= 1 - tol]
    if not candidates:
        raise NumericalBreakdownError("no non-attracting fixed point found")
    candidates.sort(key=lambda fp: (-abs(fp.multiplier), fp.location.real, fp.location.imag))
    return candidates[0]


def monic_normalize(f: DensePoly) -> tuple[complex, DensePoly]:
    """gamma = lead^(1/(d-1)) (principal branch) and the monic g(z) = gamma f(z/gamma)."""
    d = f.degree
    if d < 2:
        raise PreconditionError("monic normalization needs degree >= 2")
    lead = f.leading
    if lead == 0:
        raise PreconditionError("zero leading coefficient")
    gamma = principal_root(lead, d - 1)
    cs = [c * gamma ** (1 - k) for k, c in enumerate(f.coeffs)]
    cs[-1] = 1.0
    return gamma, DensePoly(cs)


@dataclass(frozen=True)
class CoeffTable:
    """b[j][i]: degree-j coefficient of the i-th iterate of g = f - c."""

    entries: tuple[tuple[ExtScalar, ...], ...]
    center: complex
    source: DensePoly
    J: int
    I: int

    def b(self, j: int, i: int) -> ExtScalar:
        return self.entries[j][i]

    def column(self, i: int) -> list[ExtScalar]:
        return [self.entries[j][i] for j in range(self.J + 1)]


def _ext_jet_mul(a: list[ExtScalar], b: list[ExtScalar], J: int) -> list[ExtScalar]:
    out = [ZERO] * (J + 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j in range(J + 1 - i):
            y = b[j]
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def _ext_compose(g: list[ExtScalar], h: list[ExtScalar], J: int) -> list[ExtScalar]:
    """[g(h)]_J by Horner with the full outer polynomial g."""
    acc = [g[-1]] + [ZERO] * J
    for c in reversed(g[:-1]):
        acc = _ext_jet_mul(acc, h, J)
        acc[0] = acc[0] + c
    return acc


def shifted_iterate_table(f: DensePoly, c: complex, J: int, I: int) -> CoeffTable:
    """Columns 0..I hold the degree-<=J jets of the iterates of g = f - c.

    Column 0 is the identity; column i + 1 is [g([g^i]_J)]_J.
    """
    if f.degree < 1 or abs(f.leading - 1) > 1e-12:
        raise PreconditionError("the shifted iterate table expects a monic polynomial")
    if abs(f.coeffs[1] if len(f.coeffs) > 1 else 0) <= ZERO_DERIV_TOL:
        raise PreconditionError("f'(0) != 0 is required")
    g = [ExtScalar.coerce(x) for x in f.coeffs]
    g[0] = g[0] - c
    col = [ZERO, ONE] + [ZERO] * (J - 1) if J >= 1 else [ZERO]
    col = col[: J + 1]
    columns = [col]
    for _ in range(I):
        col = _ext_compose(g, col, J)
        columns.append(col)
    entries = tuple(tuple(columns[i][j] for i in range(I + 1)) for j in range(J + 1))
    return CoeffTable(entries, complex(c), f, J, I)


def _wrap(angle: float) -> float:
    return (angle + math.pi) % (2 * math.pi) - math.pi


def _arg_ratio(a: ExtScalar, b: ExtScalar) -> float:
    return _wrap(cmath.phase(a.mantissa) - cmath.phase(b.mantissa))


def _ratio_float(log2_ratio: float) -> float:
    try:
        return 2.0**log2_ratio
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class GrowthDiagnostics:
    """Per-row growth data; ``None`` marks an undefined entry.

    ``arg_drift[j][i]``      Arg(b_j^i / b_0^i)
    ``dominance_log2[j][i]`` log2 |b_j^i / b_(j-1)^i|   (j >= 1)
    ``ratio[i]``             |b_1^(i+1)/b_0^(i+1)| / |b_1^i/b_0^i|, tends to deg f
    ``constant_growth[i]``   log2|b_0^(i+1)| / log2|b_0^i|
    ``error_terms[i]``       |E_i| with b_0^(i+1) = (b_0^i)^(d-1) (b_0^i + E_i)
    ``error_terms_tilde[i]`` |E~_i| with b_1^(i+1) = d (b_0^i)^(d-2) (b_0^i + E~_i) b_1^i
    """

    degree: int
    arg_drift: list[list[float | None]]
    dominance_log2: list[list[float | None]]
    ratio: list[float | None]
    constant_growth: list[float | None]
    error_terms: list[float | None]
    error_terms_tilde: list[float | None]
    gaps: int = 0

    def dominance(self, j: int, i: int) -> float | None:
        x = self.dominance_log2[j][i]
        return None if x is None else _ratio_float(x)

    def as_dict(self) -> dict:
        return {
            "degree": self.degree,
            "arg_drift": self.arg_drift,
            "dominance_log2": self.dominance_log2,
            "ratio": self.ratio,
            "constant_growth": self.constant_growth,
            "error_terms": self.error_terms,
            "error_terms_tilde": self.error_terms_tilde,
            "gaps": self.gaps,
        }


def _magnitude(x: ExtScalar) -> float:
    try:
        return abs(x.to_complex())
    except OverflowError:
        return math.inf


def growth_diagnostics(T: CoeffTable) -> GrowthDiagnostics:
    d = T.source.degree
    J, I = T.J, T.I
    gaps = 0
    arg = [[None] * (I + 1) for _ in range(J + 1)]
    dom = [[None] * (I + 1) for _ in range(J + 1)]
    for i in range(1, I + 1):
        b0 = T.b(0, i)
        for j in range(J + 1):
            bj = T.b(j, i)
            if j >= 1 and not b0.is_zero() and not bj.is_zero():
                arg[j][i] = _arg_ratio(bj, b0)
            elif j >= 1:
                gaps += 1
            if j >= 1:
                prev = T.b(j - 1, i)
                if bj.is_zero() or prev.is_zero():
                    gaps += 1
                else:
                    dom[j][i] = bj.log2abs() - prev.log2abs()
    ratio: list[float | None] = [None] * I
    growth: list[float | None] = [None] * I
    err: list[float | None] = [None] * I
    err_t: list[float | None] = [None] * I
    if J >= 1:
        for i in range(1, I):
            b0, b1 = T.b(0, i), T.b(1, i)
            n0, n1 = T.b(0, i + 1), T.b(1, i + 1)
            if any(x.is_zero() for x in (b0, b1, n0, n1)):
                gaps += 1
                continue
            ratio[i] = _ratio_float((n1.log2abs() - n0.log2abs()) - (b1.log2abs() - b0.log2abs()))
            if d >= 2:
                err[i] = _magnitude(n0 / b0 ** (d - 1) - b0)
                err_t[i] = _magnitude(n1 / (b0 ** (d - 2) * b1 * d) - b0)
            l0 = b0.log2abs()
            if l0 != 0:
                growth[i] = n0.log2abs() / l0
    return GrowthDiagnostics(d, arg, dom, ratio, growth, err, err_t, gaps)


@dataclass(frozen=True)
class ConstantScan:
    thetas: list[float]
    estimates: list[float | None]
    chosen: int
    radius: float
    iterations: int

    def as_dict(self) -> dict:
        return {
            "thetas": self.thetas,
            "estimates": self.estimates,
            "chosen": self.chosen,
            "radius": self.radius,
            "iterations": self.iterations,
        }


def choose_constant(f: DensePoly, R: float, trials: int = 64, I: int = 10) -> tuple[complex, ConstantScan]:
    """Scan c = R e^(i theta) and keep the c with the smallest terminal |Arg(b_1^I / b_0^I)|."""
    if trials < 1:
        raise PreconditionError("at least one trial is needed")
    thetas = [2 * math.pi * k / trials for k in range(trials)]
    estimates: list[float | None] = []
    for theta in thetas:
        c = cmath.rect(R, theta)
        try:
            T = shifted_iterate_table(f, c, 1, I)
        except ExponentSaturationError:
            estimates.append(None)
            continue
        b0, b1 = T.b(0, I), T.b(1, I)
        if b0.is_zero() or b1.is_zero():
            estimates.append(None)
            continue
        estimates.append(abs(_arg_ratio(b1, b0)))
    valid = [(e, k) for k, e in enumerate(estimates) if e is not None]
    if not valid:
        raise NumericalBreakdownError(
            f"every candidate constant saturated the exponent range; try a radius below {R:g}"
        )
    _, best = min(valid)
    return cmath.rect(R, thetas[best]), ConstantScan(thetas, estimates, best, R, I)
