"""
Exact dyadic rationals shared by the weight scheme, length bounds and rho.

Every letter weight is p / 2^e, so the whole metric layer stays exact and
never touches floating point.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

# "p/2^e", "p" or "-p/2^e"
DYADIC_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*2\^(\d+))?\s*$")


@total_ordering
@dataclass(frozen=True)
class Dyadic:
    """The number numerator / 2**exponent in canonical form.

    Canonical means the numerator is odd, or the value is zero with
    exponent 0. Construction normalizes, so equal values compare equal
    field by field and hash alike.
    """

    numerator: int
    exponent: int = 0

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError(f"Dyadic exponent must be non-negative, got {self.exponent}")
        num, exp = self.numerator, self.exponent
        if num == 0:
            exp = 0
        elif exp:
            shift = min((num & -num).bit_length() - 1, exp)
            num >>= shift
            exp -= shift
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def halve(self, times: int = 1) -> "Dyadic":
        return Dyadic(self.numerator, self.exponent + times)

    def _aligned(self, other: "Dyadic") -> tuple[int, int, int]:
        exp = max(self.exponent, other.exponent)
        return (
            self.numerator << (exp - self.exponent),
            other.numerator << (exp - other.exponent),
            exp,
        )

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b, exp = self._aligned(other)
        return Dyadic(a + b, exp)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b, exp = self._aligned(other)
        return Dyadic(a - b, exp)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Dyadic(-self.numerator, self.exponent)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Dyadic(self.numerator * other.numerator, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.numerator == other.numerator and self.exponent == other.exponent
        if isinstance(other, int):
            return self.exponent == 0 and self.numerator == other
        if isinstance(other, Fraction):
            return self.as_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.as_fraction())

    def __lt__(self, other):
        if isinstance(other, Dyadic):
            a, b, _ = self._aligned(other)
            return a < b
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() < other
        return NotImplemented

    def __str__(self):
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"


def _coerce(value):
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, int):
        return Dyadic(value)
    return None


ZERO = Dyadic(0)
ONE = Dyadic(1)


def half_power(n: int) -> Dyadic:
    """Return 1 / 2^n."""
    return Dyadic(1, n)


def midpoint(a: Dyadic, b: Dyadic) -> Dyadic:
    return (a + b).halve()


def parse_dyadic(text: str) -> Dyadic:
    """Parse the `p/2^e` rendering back into a Dyadic.

    Raises:
        ValueError: if the text is not in `p` or `p/2^e` form.
    """
    match = DYADIC_RE.match(text)
    if not match:
        raise ValueError(f"Not a dyadic rational in p/2^e form: {text!r}")
    return Dyadic(int(match.group(1)), int(match.group(2) or 0))
