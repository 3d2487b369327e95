"""Exact information-theoretic checks and closed-form figures of merit."""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetError, ConfigError
from .field import PrimeModulus, is_prime

MAX_ENUM_D = 11
MAX_ENUM_T = 3


@dataclass(frozen=True)
class EntropyReport:
    d: int
    t: int
    known_shares: int
    H_S: float
    H_S_given_shares: float
    mutual_information: float
    enumeration_size: int
    # Exact form of I as {ratio: probability mass}; empty means I == 0 exactly.
    information_terms: tuple[tuple[str, str], ...] = ()

    @property
    def is_exactly_zero(self) -> bool:
        return not self.information_terms

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "t": self.t,
            "known_shares": self.known_shares,
            "H_S": self.H_S,
            "H_S_given_shares": self.H_S_given_shares,
            "mutual_information": self.mutual_information,
            "enumeration_size": self.enumeration_size,
            "exactly_zero": self.is_exactly_zero,
        }


def _log2(q: Fraction) -> float:
    # log2 of numerator and denominator separately keeps log2(d) exact for 1/d.
    return math.log2(q.numerator) - math.log2(q.denominator)


def _grouped_sum(mass_by_value: dict[Fraction, Fraction]) -> float:
    return sum(float(mass) * _log2(value) for value, mass in sorted(mass_by_value.items()))


def _entropies(joint: Counter, total: int):
    secret_counts: Counter = Counter()
    view_counts: Counter = Counter()
    for (s, view), c in joint.items():
        secret_counts[s] += c
        view_counts[view] += c

    h_s: dict[Fraction, Fraction] = defaultdict(Fraction)
    for c in secret_counts.values():
        h_s[Fraction(total, c)] += Fraction(c, total)

    h_cond: dict[Fraction, Fraction] = defaultdict(Fraction)
    info: dict[Fraction, Fraction] = defaultdict(Fraction)
    for (s, view), c in joint.items():
        h_cond[Fraction(view_counts[view], c)] += Fraction(c, total)
        ratio = Fraction(total * c, secret_counts[s] * view_counts[view])
        if ratio != 1:
            info[ratio] += Fraction(c, total)
    return _grouped_sum(h_s), _grouped_sum(h_cond), _grouped_sum(info), info


def mutual_information_exhaustive(
    d: int,
    t: int,
    num_known_shares: int,
    xs: Sequence[int] | None = None,
    include_published: bool = False,
) -> EntropyReport:
    """Exact I(secret; known shares) by enumerating every polynomial.

    All ``d**t`` polynomials of degree < t are equally likely, so counting
    them gives the exact joint distribution of the private value and the
    shares at ``xs`` (default ``1..num_known_shares``).

    With ``include_published`` the secret is the protocol secret S, drawn
    uniformly and independently, and the colluders additionally see the
    masked value ``S - s mod d`` they obtain by pooling their randoms and
    components; the enumeration grows to ``d**(t+1)``.
    """
    if d > MAX_ENUM_D or t > MAX_ENUM_T:
        raise BudgetError(f"enumeration capped at d <= {MAX_ENUM_D}, t <= {MAX_ENUM_T}")
    if not is_prime(d):
        raise ConfigError(f"{d} is not prime")
    if t < 1:
        raise ConfigError("threshold must be positive")
    if xs is None:
        xs = list(range(1, num_known_shares + 1))
    xs = [int(x) % d for x in xs]
    if len(xs) != num_known_shares:
        raise ConfigError("need one evaluation point per known share")
    if len(set(xs)) != len(xs) or 0 in xs:
        raise ConfigError("known share points must be distinct and nonzero mod d")

    joint: Counter = Counter()
    secrets: Iterable[int | None] = range(d) if include_published else [None]
    total = 0
    for S in secrets:
        for coeffs in itertools.product(range(d), repeat=t):
            view = []
            for x in xs:
                acc = 0
                for c in reversed(coeffs):
                    acc = (acc * x + c) % d
                view.append(acc)
            s = coeffs[0]
            if S is None:
                key = s
            else:
                key = S
                view.append((S - s) % d)
            joint[(key, tuple(view))] += 1
            total += 1

    h_s, h_cond, mi, info = _entropies(joint, total)
    terms = tuple((f"{r.numerator}/{r.denominator}", f"{w.numerator}/{w.denominator}") for r, w in sorted(info.items()))
    return EntropyReport(d, t, num_known_shares, h_s, h_cond, mi, total, terms)


def mutual_information_table(d: int, t: int, include_published: bool = False) -> list[EntropyReport]:
    """Reports for 0..t known shares."""
    return [mutual_information_exhaustive(d, t, j, include_published=include_published) for j in range(t + 1)]


def theoretical_detection_rate(d: int) -> Fraction:
    """Probability that a uniformly random forgery is caught, 1 - 1/d."""
    PrimeModulus(int(d))
    return 1 - error_rate(d)


def error_rate(d: int) -> Fraction:
    return Fraction(1, int(d))


def qubit_efficiency(scheme_id: str, k: int | None = None, n: int | None = None) -> Fraction:
    """Shared classical bits per transmitted qubit.

    ``this_scheme`` needs k, ``dicke`` needs n.
    """
    key = scheme_id.lower().replace("-", "_")
    if key in ("this_scheme", "ours"):
        if k is None or k < 2:
            raise ConfigError("this_scheme efficiency needs k >= 2")
        return Fraction(k - 1, k)
    if key == "hbb":
        return Fraction(1, 3)
    if key == "schmid":
        return Fraction(1, 1)
    if key == "dicke":
        if n is None or n < 1:
            raise ConfigError("dicke efficiency needs n >= 1")
        return Fraction(1, 2 * n)
    raise ConfigError(f"unknown scheme {scheme_id!r}")


# Comparison rows kept as reference constants; the other schemes are not simulated.
COMPARISON_TABLE = {
    "this_scheme": {
        "initial_state": "single qudit",
        "shared_secrets": "both",
        "threshold": True,
        "qubit_efficiency": "(k-1)/k",
        "cheat_detection": True,
    },
    "shamir": {
        "initial_state": None,
        "shared_secrets": "C",
        "threshold": True,
        "qubit_efficiency": None,
        "cheat_detection": False,
    },
    "cleve": {
        "initial_state": "single qudit",
        "shared_secrets": "Q",
        "threshold": True,
        "qubit_efficiency": None,
        "cheat_detection": False,
    },
    "hbb": {
        "initial_state": "3-qubit GHZ state",
        "shared_secrets": "C",
        "threshold": False,
        "qubit_efficiency": "1/3",
        "cheat_detection": False,
    },
    "schmid": {
        "initial_state": "single qubit",
        "shared_secrets": "C",
        "threshold": False,
        "qubit_efficiency": "1",
        "cheat_detection": False,
    },
    "dicke": {
        "initial_state": "n-qubit Dicke state",
        "shared_secrets": "C",
        "threshold": True,
        "qubit_efficiency": "1/(2n)",
        "cheat_detection": True,
    },
}
