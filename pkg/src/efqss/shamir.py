"""Classical Shamir dealing of k private values and Lagrange components."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, InvalidEvaluationPoints, NotActive
from .field import (
    FieldElement,
    Polynomial,
    PrimeModulus,
    check_points,
    lagrange_weight,
    poly_eval,
)


@dataclass(frozen=True)
class Share:
    holder_id: int
    x: FieldElement
    y: FieldElement
    secret_index: int


@dataclass(frozen=True)
class DealerSecrets:
    private_values: tuple[FieldElement, ...]
    polynomials: tuple[Polynomial, ...]
    t: int
    n: int

    @property
    def k(self) -> int:
        return len(self.polynomials)


def default_points(n: int, modulus: PrimeModulus) -> list[FieldElement]:
    return [modulus(j) for j in range(1, n + 1)]


def validate_deal(t: int, n: int, xs: Sequence[FieldElement], modulus: PrimeModulus) -> None:
    if t < 1:
        raise ConfigError(f"threshold must be positive, got t={t}")
    if t > n:
        raise ConfigError(f"threshold t={t} exceeds number of shareholders n={n}")
    if n >= modulus.d:
        raise ConfigError(f"need n < d for distinct nonzero points (n={n}, d={modulus.d})")
    if len(xs) != n:
        raise ConfigError(f"expected {n} evaluation points, got {len(xs)}")
    try:
        check_points(xs)
    except InvalidEvaluationPoints as exc:
        raise ConfigError(str(exc)) from exc


def random_polynomial(
    secret: FieldElement, t: int, rng: np.random.Generator
) -> Polynomial:
    """Degree at most t-1; the leading coefficient may be zero."""
    mod = secret.modulus
    rest = rng.integers(0, mod.d, size=t - 1)
    return Polynomial((secret, *(mod(int(c)) for c in rest)), mod)


def deal_shares(
    s_values: Sequence[FieldElement],
    t: int,
    n: int,
    xs: Sequence[FieldElement] | None = None,
    rng: np.random.Generator | None = None,
    polynomials: Sequence[Polynomial] | None = None,
) -> tuple[DealerSecrets, list[list[Share]]]:
    """Deal ``k = len(s_values)`` independent (t, n) sharings.

    Returns the dealer's record and a k-by-n matrix of shares, row v holding
    ``f_v(x_1) .. f_v(x_n)``. Passing ``polynomials`` pins the coefficients
    instead of sampling them.
    """
    if not s_values:
        raise ConfigError("need at least one private value")
    mod = s_values[0].modulus
    if xs is None:
        xs = default_points(n, mod)
    xs = list(xs)
    validate_deal(t, n, xs, mod)

    if polynomials is None:
        if rng is None:
            raise ConfigError("a random generator is required to sample polynomials")
        polynomials = [random_polynomial(s, t, rng) for s in s_values]
    else:
        polynomials = list(polynomials)
        if len(polynomials) != len(s_values):
            raise ConfigError("one polynomial per private value is required")
        for s, p in zip(s_values, polynomials):
            if p.threshold != t:
                raise ConfigError(f"polynomial has {p.threshold} coefficients, expected t={t}")
            if p.constant != s:
                raise ConfigError("polynomial constant term must equal the private value")

    shares = [
        [Share(j + 1, x, poly_eval(p, x), v + 1) for j, x in enumerate(xs)]
        for v, p in enumerate(polynomials)
    ]
    dealer = DealerSecrets(tuple(s_values), tuple(polynomials), t, n)
    return dealer, shares


def lagrange_component(share: Share, active_xs: Sequence[FieldElement]) -> FieldElement:
    if share.x not in list(active_xs):
        raise NotActive(f"holder {share.holder_id} (x={share.x.value}) is not in the active set")
    return share.y * lagrange_weight(active_xs, share.x)


def classical_reconstruct(components: Sequence[FieldElement]) -> FieldElement:
    if not components:
        raise ConfigError("no components to sum")
    total = components[0]
    for c in components[1:]:
        total = total + c
    return total
