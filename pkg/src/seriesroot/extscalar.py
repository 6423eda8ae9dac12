"""Complex numbers with an unbounded-looking binary exponent.

An :class:`ExtScalar` stores ``mantissa * 2**exponent`` where the mantissa is
a Python complex with modulus in ``[1, 2)`` and the exponent is an integer
kept inside the signed 64-bit range.  Arithmetic is carried out on the
mantissas after exponent alignment, so the relative accuracy matches plain
double arithmetic while the range is effectively doubly exponential.
"""

from __future__ import annotations

import cmath
import math
from numbers import Number

from .errors import ExponentSaturationError

EXP_MAX = 2**63 - 1
EXP_MIN = -(2**63)

# beyond this gap the smaller addend is below half an ulp of the larger one
_ALIGN_LIMIT = 1100


def _check_exponent(e: int) -> int:
    if e > EXP_MAX or e < EXP_MIN:
        raise ExponentSaturationError(f"binary exponent {e} outside 64-bit range")
    return e


def _normalize(m: complex, e: int) -> tuple[complex, int]:
    if m == 0:
        return 0j, 0
    if not (math.isfinite(m.real) and math.isfinite(m.imag)):
        raise ExponentSaturationError("non-finite mantissa")
    a = abs(m)
    if math.isinf(a):
        m = complex(math.ldexp(m.real, -2), math.ldexp(m.imag, -2))
        e += 2
        a = abs(m)
    _, k = math.frexp(a)
    shift = 1 - k
    m = complex(math.ldexp(m.real, shift), math.ldexp(m.imag, shift))
    e -= shift
    # abs() rounding can leave the modulus a hair outside [1, 2)
    a = abs(m)
    if a >= 2.0:
        m = complex(m.real * 0.5, m.imag * 0.5)
        e += 1
    elif a < 1.0:
        m = complex(m.real * 2.0, m.imag * 2.0)
        e -= 1
    return m, _check_exponent(e)


class ExtScalar:
    """Extended-exponent complex scalar, immutable.

    Supports ``+ - * /`` against other ExtScalars and plain numbers.
    """

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: complex = 0j, exponent: int = 0):
        m, e = _normalize(complex(mantissa), int(exponent))
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    def __setattr__(self, name, value):
        raise AttributeError("ExtScalar is immutable")

    @classmethod
    def coerce(cls, x) -> "ExtScalar":
        if isinstance(x, ExtScalar):
            return x
        return cls(complex(x), 0)

    @classmethod
    def from_log2(cls, log2_mag: float, arg: float) -> "ExtScalar":
        e = math.floor(log2_mag)
        return cls(cmath.rect(2.0 ** (log2_mag - e), arg), e)

    def is_zero(self) -> bool:
        return self.mantissa == 0

    def to_complex(self) -> complex:
        """Value as a plain complex; raises OverflowError when out of range."""
        if self.mantissa == 0:
            return 0j
        return complex(
            math.ldexp(self.mantissa.real, self.exponent),
            math.ldexp(self.mantissa.imag, self.exponent),
        )

    def log2abs(self) -> float:
        if self.mantissa == 0:
            return -math.inf
        return self.exponent + math.log2(abs(self.mantissa))

    def arg(self) -> float:
        return cmath.phase(self.mantissa)

    def conjugate(self) -> "ExtScalar":
        return ExtScalar(self.mantissa.conjugate(), self.exponent)

    def __abs__(self) -> "ExtScalar":
        return ExtScalar(abs(self.mantissa), self.exponent)

    def __neg__(self) -> "ExtScalar":
        return ExtScalar(-self.mantissa, self.exponent)

    def __pos__(self) -> "ExtScalar":
        return self

    def __add__(self, other) -> "ExtScalar":
        if not isinstance(other, ExtScalar):
            if not isinstance(other, Number):
                return NotImplemented
            other = ExtScalar.coerce(other)
        return ext_add(self, other)

    __radd__ = __add__

    def __sub__(self, other) -> "ExtScalar":
        if not isinstance(other, ExtScalar):
            if not isinstance(other, Number):
                return NotImplemented
            other = ExtScalar.coerce(other)
        return ext_add(self, -other)

    def __rsub__(self, other) -> "ExtScalar":
        return ExtScalar.coerce(other) - self

    def __mul__(self, other) -> "ExtScalar":
        if not isinstance(other, ExtScalar):
            if not isinstance(other, Number):
                return NotImplemented
            other = ExtScalar.coerce(other)
        return ext_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExtScalar":
        if not isinstance(other, ExtScalar):
            if not isinstance(other, Number):
                return NotImplemented
            other = ExtScalar.coerce(other)
        return ext_div(self, other)

    def __rtruediv__(self, other) -> "ExtScalar":
        return ext_div(ExtScalar.coerce(other), self)

    def __pow__(self, k: int) -> "ExtScalar":
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = ExtScalar(1.0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Number):
            other = ExtScalar.coerce(other)
        if not isinstance(other, ExtScalar):
            return NotImplemented
        return self.mantissa == other.mantissa and self.exponent == other.exponent

    def __hash__(self) -> int:
        return hash((self.mantissa, self.exponent))

    def __repr__(self) -> str:
        return f"ExtScalar({self.mantissa!r}, {self.exponent})"


ZERO = ExtScalar()
ONE = ExtScalar(1.0)


def ext_add(a: ExtScalar, b: ExtScalar) -> ExtScalar:
    """Sum of two extended scalars, rounded once at the larger exponent."""
    if a.mantissa == 0:
        return b
    if b.mantissa == 0:
        return a
    if a.exponent < b.exponent:
        a, b = b, a
    gap = a.exponent - b.exponent
    if gap > _ALIGN_LIMIT:
        return a
    mb = complex(math.ldexp(b.mantissa.real, -gap), math.ldexp(b.mantissa.imag, -gap))
    return ExtScalar(a.mantissa + mb, a.exponent)


def ext_mul(a: ExtScalar, b: ExtScalar) -> ExtScalar:
    """Product: mantissas multiply, exponents add."""
    if a.mantissa == 0 or b.mantissa == 0:
        return ZERO
    return ExtScalar(a.mantissa * b.mantissa, _check_exponent(a.exponent + b.exponent))


def ext_div(a: ExtScalar, b: ExtScalar) -> ExtScalar:
    if b.mantissa == 0:
        raise ZeroDivisionError("division by extended zero")
    if a.mantissa == 0:
        return ZERO
    return ExtScalar(a.mantissa / b.mantissa, _check_exponent(a.exponent - b.exponent))
