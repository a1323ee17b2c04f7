"""Exact arithmetic on rational multiples of half-integer powers of pi.

Every exact quantity in the package has the form ``q * pi**(h/2)`` with ``q``
rational and ``h`` an integer.  :class:`PiMonomial` holds such a value and
refuses to add two monomials carrying different powers of pi.  Rationals are
plain :class:`fractions.Fraction` objects, which are always kept in lowest
terms with a positive denominator.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

from gpiq.errors import DomainError, StructuralError

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = None

# 100 digits; enough headroom for the 50-digit default working precision.
_PI_DIGITS = (
    "3.141592653589793238462643383279502884197169399375105820974944592307816"
    "406286208998628034825342117067982"
)

RationalLike = Union[int, Fraction]


@dataclass(frozen=True, order=False)
class HalfInt:
    """A number of the form ``twice / 2`` with ``twice`` an integer."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int) or isinstance(self.twice, bool):
            raise TypeError(f"twice must be an int, got {self.twice!r}")

    @classmethod
    def of(cls, value) -> "HalfInt":
        """Coerce an int, Fraction, ``"p/q"`` string or HalfInt."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, float):
            if not (2 * value).is_integer():
                raise DomainError(f"{value!r} is not a half-integer")
            return cls(int(2 * value))
        if isinstance(value, Rational):
            doubled = Fraction(value) * 2
            if doubled.denominator != 1:
                raise DomainError(f"{value} is not a half-integer")
            return cls(doubled.numerator)
        raise TypeError(f"cannot make a HalfInt from {value!r}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other):
        other = _as_halfint(other)
        if other is None:
            return NotImplemented
        return HalfInt(self.twice + other.twice)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_halfint(other)
        if other is None:
            return NotImplemented
        return HalfInt(self.twice - other.twice)

    def __rsub__(self, other):
        other = _as_halfint(other)
        if other is None:
            return NotImplemented
        return HalfInt(other.twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        if isinstance(other, Rational):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        return self.value < _cmp_value(other)

    def __le__(self, other):
        return self.value <= _cmp_value(other)

    def __gt__(self, other):
        return self.value > _cmp_value(other)

    def __ge__(self, other):
        return self.value >= _cmp_value(other)

    def __float__(self):
        return self.twice / 2

    def __str__(self):
        if self.is_integer():
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def _as_halfint(x):
    if isinstance(x, HalfInt):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return HalfInt(2 * x)
    if isinstance(x, Fraction):
        return HalfInt.of(x)
    return None


def _cmp_value(x):
    if isinstance(x, HalfInt):
        return x.value
    if isinstance(x, Rational):
        return x
    raise TypeError(f"cannot compare HalfInt with {x!r}")


@dataclass(frozen=True)
class PiMonomial:
    """The exact value ``coeff * pi**(half_pi_exponent / 2)``."""

    coeff: Fraction
    half_pi_exponent: int = 0

    def __post_init__(self):
        coeff = self.coeff
        if not isinstance(coeff, Fraction):
            coeff = Fraction(coeff)
            object.__setattr__(self, "coeff", coeff)
        if coeff == 0 and self.half_pi_exponent != 0:
            object.__setattr__(self, "half_pi_exponent", 0)

    @classmethod
    def pi_power(cls, half_exponent: int, coeff: RationalLike = 1) -> "PiMonomial":
        return cls(Fraction(coeff), half_exponent)

    def is_zero(self) -> bool:
        return self.coeff == 0

    def _coerce(self, other):
        if isinstance(other, PiMonomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return PiMonomial(Fraction(other), 0)
        return None

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PiMonomial(
            self.coeff * other.coeff, self.half_pi_exponent + other.half_pi_exponent
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by a zero PiMonomial")
        return PiMonomial(
            self.coeff / other.coeff, self.half_pi_exponent - other.half_pi_exponent
        )

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0 and self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return PiMonomial(self.coeff**k, self.half_pi_exponent * k)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.half_pi_exponent != other.half_pi_exponent:
            raise StructuralError(
                f"cannot add {self} and {other}: pi exponents "
                f"{self.half_pi_exponent}/2 and {other.half_pi_exponent}/2 differ"
            )
        return PiMonomial(self.coeff + other.coeff, self.half_pi_exponent)

    __radd__ = __add__

    def __neg__(self):
        return PiMonomial(-self.coeff, self.half_pi_exponent)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def to_decimal(self, precision: int = 50) -> Decimal:
        """Decimal value with ``precision`` significant digits."""
        if precision > len(_PI_DIGITS) - 10:
            raise DomainError(f"precision {precision} exceeds the stored pi constant")
        with localcontext() as ctx:
            ctx.prec = precision + 10
            pi = Decimal(_PI_DIGITS)
            h = self.half_pi_exponent
            val = Decimal(self.coeff.numerator) / Decimal(self.coeff.denominator)
            if h:
                val *= pi ** (abs(h) // 2) if h > 0 else 1 / pi ** (abs(h) // 2)
                if h % 2:
                    root = pi.sqrt()
                    val = val * root if h > 0 else val / root
            ctx.prec = precision
            return +val

    def to_float(self, precision: int = 50) -> float:
        return float(self.to_decimal(precision))

    def __float__(self):
        return self.to_float()

    def log10(self) -> float:
        """log10 of a positive value; safe far outside the float range."""
        if self.coeff <= 0:
            raise DomainError("log10 needs a positive value")
        return (
            math.log10(self.coeff.numerator)
            - math.log10(self.coeff.denominator)
            + self.half_pi_exponent / 2 * math.log10(math.pi)
        )

    def to_text(self, pow2: bool = False) -> str:
        """Canonical ``"<num>/<den> * pi^<e>"`` rendering.

        With ``pow2`` a power-of-two denominator is written as ``2^m``.
        """
        num, den = self.coeff.numerator, self.coeff.denominator
        if pow2 and den > 1 and den & (den - 1) == 0:
            den_text = f"2^{den.bit_length() - 1}"
        else:
            den_text = _int_text(den)
        return f"{_int_text(num)}/{den_text} * pi^{_exponent_text(self.half_pi_exponent)}"

    @classmethod
    def parse(cls, text: str) -> "PiMonomial":
        m = _TEXT_RE.fullmatch(text.strip())
        if m is None:
            raise DomainError(f"not a PiMonomial: {text!r}")
        num = _text_int(m["num"])
        den = 2 ** int(m["den2"]) if m["den2"] is not None else _text_int(m["den"])
        if den <= 0:
            raise DomainError(f"non-positive denominator in {text!r}")
        exp = Fraction(m["exp"].strip("()"))
        if (2 * exp).denominator != 1:
            raise DomainError(f"pi exponent in {text!r} is not a half-integer")
        return cls(Fraction(num, den), int(2 * exp))

    def __str__(self):
        return self.to_text()


_TEXT_RE = re.compile(
    r"(?P<num>-?\d+)/(?:2\^(?P<den2>\d+)|(?P<den>\d+))"
    r"\s*\*\s*pi\^(?P<exp>-?\d+|\(-?\d+(?:/2)?\))"
)


def _int_text(x: int) -> str:
    # str(int) refuses more than 4300 digits; p_N numerators pass that near N = 100
    if _mpz is not None:
        return str(_mpz(x))
    return str(Decimal(x))


def _text_int(s: str) -> int:
    if _mpz is not None:
        return int(_mpz(s))
    return int(Decimal(s))


def _exponent_text(h: int) -> str:
    if h % 2 == 0:
        e = h // 2
        return str(e) if e >= 0 else f"({e})"
    return f"({h}/2)"


def binomial_exact(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise DomainError(f"binomial({n}, {k}) needs non-negative arguments")
    if k > n:
        raise DomainError(f"binomial({n}, {k}) needs k <= n")
    return math.comb(n, k)


def pochhammer_exact(a, n: int) -> Fraction:
    """Rising factorial ``a (a+1) ... (a+n-1)``; 1 when ``n == 0``."""
    if n < 0:
        raise DomainError(f"Pochhammer length must be non-negative, got {n}")
    a = HalfInt.of(a)
    # product of (twice + 2i) / 2
    top = 1
    for i in range(n):
        top *= a.twice + 2 * i
        if top == 0:
            return Fraction(0)
    return Fraction(top, 2**n)


@lru_cache(maxsize=None)
def _gamma_cached(twice: int) -> PiMonomial:
    if twice % 2 == 0:
        return PiMonomial(Fraction(math.factorial(twice // 2 - 1)), 0)
    # Gamma(m + 1/2) = sqrt(pi) * (2m-1)!! / 2^m
    m = (twice - 1) // 2
    odd = 1
    for i in range(1, 2 * m, 2):
        odd *= i
    return PiMonomial(Fraction(odd, 2**m), 1)


def gamma_exact(x) -> PiMonomial:
    """Gamma at a positive integer or half-odd integer, exactly."""
    x = HalfInt.of(x)
    if x.twice <= 0:
        raise DomainError(f"Gamma({x}) is not exact: argument must be positive")
    return _gamma_cached(x.twice)
