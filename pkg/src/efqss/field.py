"""Exact arithmetic over GF(d) for prime d.

Field elements carry their modulus; combining elements of different fields
raises :class:`ModulusMismatch` instead of coercing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import ConfigError, InvalidEvaluationPoints, ModulusMismatch, ZeroInverse

_TRIAL_DIVISION_LIMIT = 1 << 20
# Deterministic for every n < 3.3e24, which covers the 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _trial_division(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _miller_rabin(n: int) -> bool:
    r, s = 0, n - 1
    while s % 2 == 0:
        r += 1
        s //= 2
    for a in _MR_WITNESSES:
        if a % n == 0:
            continue
        x = pow(a, s, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=256)
def is_prime(n: int) -> bool:
    if n < _TRIAL_DIVISION_LIMIT:
        return _trial_division(n)
    return _miller_rabin(n)


@dataclass(frozen=True)
class PrimeModulus:
    d: int

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, int):
            raise ConfigError(f"modulus must be an integer, got {self.d!r}")
        if self.d < 2 or not is_prime(self.d):
            raise ConfigError(f"modulus {self.d} is not prime")

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    def __int__(self) -> int:
        return self.d

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(v, self) for v in range(self.d)]


IntLike = Union[int, "FieldElement"]


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.modulus.d)

    def _coerce(self, other: IntLike) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ModulusMismatch(
                    f"GF({self.modulus.d}) and GF({other.modulus.d}) elements do not mix"
                )
            return other
        if isinstance(other, int):
            return FieldElement(other, self.modulus)
        return NotImplemented

    def __add__(self, other: IntLike) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.value - other.value, self.modulus)

    def __rsub__(self, other: IntLike) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(other.value - self.value, self.modulus)

    def __mul__(self, other: IntLike) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other: IntLike) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * mod_inverse(other)

    def __rtruediv__(self, other: IntLike) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * mod_inverse(self)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value, self.modulus)

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return mod_inverse(self) ** (-exponent)
        return FieldElement(pow(self.value, exponent, self.modulus.d), self.modulus)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.modulus.d
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.modulus.d))

    def __int__(self) -> int:
        return self.value

    __index__ = __int__

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus.d})"


def _xgcd(a: int, b: int) -> tuple[int, int]:
    """Return (g, s) with g = gcd(a, b) and s*a = g mod b."""
    old_r, r = a, b
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    return old_r, old_s


def mod_inverse(x: FieldElement) -> FieldElement:
    """Multiplicative inverse via the extended Euclidean algorithm."""
    if x.value == 0:
        raise ZeroInverse(f"0 has no inverse in GF({x.modulus.d})")
    g, s = _xgcd(x.value, x.modulus.d)
    assert g == 1
    return FieldElement(s, x.modulus)


@dataclass(frozen=True)
class Polynomial:
    """Polynomial a_0 + a_1 x + ... + a_{t-1} x^{t-1} over GF(d)."""

    coefficients: tuple[FieldElement, ...]
    modulus: PrimeModulus

    def __post_init__(self):
        coeffs = tuple(
            c if isinstance(c, FieldElement) else FieldElement(c, self.modulus)
            for c in self.coefficients
        )
        if not coeffs:
            raise ConfigError("polynomial needs at least one coefficient")
        for c in coeffs:
            if c.modulus != self.modulus:
                raise ModulusMismatch("coefficient modulus differs from polynomial modulus")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_ints(cls, coeffs: Iterable[int], modulus: PrimeModulus) -> "Polynomial":
        return cls(tuple(FieldElement(c, modulus) for c in coeffs), modulus)

    @property
    def threshold(self) -> int:
        return len(self.coefficients)

    @property
    def constant(self) -> FieldElement:
        return self.coefficients[0]

    def __call__(self, x: IntLike) -> FieldElement:
        return poly_eval(self, x)


def poly_eval(p: Polynomial, x: IntLike) -> FieldElement:
    if isinstance(x, FieldElement):
        if x.modulus != p.modulus:
            raise ModulusMismatch("evaluation point lives in a different field")
        xv = x.value
    else:
        xv = int(x) % p.modulus.d
    d = p.modulus.d
    acc = 0
    for c in reversed(p.coefficients):
        acc = (acc * xv + c.value) % d
    return FieldElement(acc, p.modulus)


def check_points(xs: Sequence[FieldElement]) -> None:
    """Reject zero or repeated evaluation points."""
    seen = set()
    for x in xs:
        if x.value == 0:
            raise InvalidEvaluationPoints("evaluation points must be nonzero")
        if x.value in seen:
            raise InvalidEvaluationPoints(f"duplicate evaluation point {x.value}")
        seen.add(x.value)


def lagrange_weight(active_xs: Sequence[FieldElement], target_x: FieldElement) -> FieldElement:
    """Return prod_{r != j} x_r / (x_r - x_j), the weight of ``target_x`` at zero."""
    active_xs = list(active_xs)
    check_points(active_xs)
    if target_x not in active_xs:
        raise InvalidEvaluationPoints(f"{target_x.value} is not among the active points")
    w = FieldElement(1, target_x.modulus)
    for xr in active_xs:
        if xr == target_x:
            continue
        w = w * xr * mod_inverse(xr - target_x)
    return w
