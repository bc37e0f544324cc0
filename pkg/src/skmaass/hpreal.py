"""Fixed-point reals with a rigorously tracked absolute error.

A value is ``mant / 2**bits`` and its error bound is ``err / 2**bits`` with
``err`` a non-negative int, so bound bookkeeping itself never rounds the
wrong way.  Every operation adds the propagated error of its inputs plus the
rounding of its own result.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

from mpmath import libmp

DEFAULT_BITS = 128
_GUARD = 64

Number = Union[int, Fraction, "HighPrecisionReal"]


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class HighPrecisionReal:
    __slots__ = ("mant", "err", "bits")

    def __init__(self, mant: int, err: int = 0, bits: int = DEFAULT_BITS):
        if err < 0:
            raise ValueError("error bound must be non-negative")
        if bits < 1:
            raise ValueError("bits must be positive")
        self.mant = int(mant)
        self.err = int(err)
        self.bits = int(bits)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_int(cls, n: int, bits: int = DEFAULT_BITS) -> HighPrecisionReal:
        return cls(int(n) << bits, 0, bits)

    @classmethod
    def from_fraction(cls, q: Fraction | int, bits: int = DEFAULT_BITS) -> HighPrecisionReal:
        q = Fraction(q)
        num = q.numerator << bits
        mant = (2 * num + q.denominator) // (2 * q.denominator)
        return cls(mant, 0 if num % q.denominator == 0 else 1, bits)

    @classmethod
    def coerce(cls, x: Number, bits: int = DEFAULT_BITS) -> HighPrecisionReal:
        if isinstance(x, HighPrecisionReal):
            return x
        if isinstance(x, int):
            return cls.from_int(x, bits)
        if isinstance(x, Fraction):
            return cls.from_fraction(x, bits)
        raise TypeError(f"cannot use {type(x).__name__} as an exact operand; pass int or Fraction")

    @classmethod
    def sqrt_of(cls, q: Fraction | int, bits: int = DEFAULT_BITS) -> HighPrecisionReal:
        """sqrt(q) for exact non-negative q, floor-rounded (error < 1 unit)."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative number")
        return cls(isqrt((q.numerator << (2 * bits)) // q.denominator), 1, bits)

    @classmethod
    def log_of(cls, q: Fraction | int, bits: int = DEFAULT_BITS) -> HighPrecisionReal:
        """log(q) for exact positive q."""
        q = Fraction(q)
        if q <= 0:
            raise ValueError("logarithm of a non-positive number")
        prec = bits + _GUARD + max(q.numerator.bit_length(), q.denominator.bit_length()).bit_length()
        x = libmp.from_rational(q.numerator, q.denominator, prec, libmp.round_nearest)
        y = libmp.mpf_log(x, prec, libmp.round_nearest)
        # from_rational and mpf_log are each within an ulp at prec; 2 units covers both plus truncation
        return cls(libmp.to_fixed(y, bits), 2, bits)

    # -- views --------------------------------------------------------------

    @property
    def value(self) -> Fraction:
        return Fraction(self.mant, 1 << self.bits)

    @property
    def error(self) -> Fraction:
        return Fraction(self.err, 1 << self.bits)

    @property
    def lower(self) -> Fraction:
        return Fraction(self.mant - self.err, 1 << self.bits)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.mant + self.err, 1 << self.bits)

    def contains(self, q: Fraction | int) -> bool:
        return self.lower <= Fraction(q) <= self.upper

    def sign(self) -> int | None:
        """Certified sign: 1, -1, 0 (exactly zero) or None if undecided."""
        if self.mant - self.err > 0:
            return 1
        if self.mant + self.err < 0:
            return -1
        if self.mant == 0 and self.err == 0:
            return 0
        return None

    def __float__(self) -> float:
        return self.mant / (1 << self.bits)

    def to_decimal(self, digits: int = 20) -> str:
        """Midpoint rounded to ``digits`` places after the decimal point."""
        scaled = (2 * abs(self.mant) * 10**digits + (1 << self.bits)) >> (self.bits + 1)
        whole, frac = divmod(scaled, 10**digits)
        sign = "-" if self.mant < 0 and scaled else ""
        return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"

    def __repr__(self) -> str:
        return f"HighPrecisionReal({self.to_decimal(24)} ± {float(self.error):.3g})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HighPrecisionReal):
            return NotImplemented
        return (self.mant, self.err, self.bits) == (other.mant, other.err, other.bits)

    def __hash__(self) -> int:
        return hash((self.mant, self.err, self.bits))

    # -- arithmetic ---------------------------------------------------------

    def _align(self, other: Number) -> tuple[HighPrecisionReal, HighPrecisionReal]:
        o = HighPrecisionReal.coerce(other, self.bits)
        if o.bits == self.bits:
            return self, o
        bits = max(self.bits, o.bits)
        return self._widen(bits), o._widen(bits)

    def _widen(self, bits: int) -> HighPrecisionReal:
        shift = bits - self.bits
        return HighPrecisionReal(self.mant << shift, self.err << shift, bits)

    def __neg__(self) -> HighPrecisionReal:
        return HighPrecisionReal(-self.mant, self.err, self.bits)

    def __abs__(self) -> HighPrecisionReal:
        return HighPrecisionReal(abs(self.mant), self.err, self.bits)

    def __add__(self, other: Number) -> HighPrecisionReal:
        a, b = self._align(other)
        return HighPrecisionReal(a.mant + b.mant, a.err + b.err, a.bits)

    __radd__ = __add__

    def __sub__(self, other: Number) -> HighPrecisionReal:
        a, b = self._align(other)
        return HighPrecisionReal(a.mant - b.mant, a.err + b.err, a.bits)

    def __rsub__(self, other: Number) -> HighPrecisionReal:
        return (-self) + other

    def __mul__(self, other: Number) -> HighPrecisionReal:
        if isinstance(other, int):
            return HighPrecisionReal(self.mant * other, self.err * abs(other), self.bits)
        a, b = self._align(other)
        bits = a.bits
        prod = a.mant * b.mant
        mant = (prod + (1 << (bits - 1))) >> bits
        spread = abs(a.mant) * b.err + abs(b.mant) * a.err + a.err * b.err
        return HighPrecisionReal(mant, _ceil_div(spread, 1 << bits) + 1, bits)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> HighPrecisionReal:
        a, b = self._align(other)
        bits = a.bits
        den = abs(b.mant) - b.err
        if den <= 0:
            raise ZeroDivisionError("divisor interval contains zero")
        num = a.mant << bits
        mant = (2 * num + b.mant) // (2 * b.mant) if b.mant > 0 else -((2 * num - b.mant) // (-2 * b.mant))
        spread = (a.err * abs(b.mant) + abs(a.mant) * b.err) << bits
        return HighPrecisionReal(mant, _ceil_div(spread, abs(b.mant) * den) + 1, bits)

    def __rtruediv__(self, other: Number) -> HighPrecisionReal:
        return HighPrecisionReal.coerce(other, self.bits) / self

    def __pow__(self, n: int) -> HighPrecisionReal:
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = HighPrecisionReal.from_int(1, self.bits)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def log(self) -> HighPrecisionReal:
        low = self.mant - self.err
        if low <= 0:
            raise ValueError("logarithm of an interval reaching zero or below")
        out = HighPrecisionReal.log_of(self.value, self.bits)
        out.err += _ceil_div(self.err << self.bits, low)
        return out

    def sqrt(self) -> HighPrecisionReal:
        if self.mant + self.err < 0:
            raise ValueError("square root of a negative interval")
        low = self.mant - self.err
        mant = isqrt(max(self.mant, 0) << self.bits)
        if low > 0:
            # |sqrt(v +- e) - sqrt(v)| <= e / sqrt(v - e)
            bound = _ceil_div((self.err * self.err) << self.bits, low)
            spread = isqrt(bound) + 1
        else:
            spread = isqrt((self.mant + self.err) << self.bits) + 1
        return HighPrecisionReal(mant, spread + 1, self.bits)
