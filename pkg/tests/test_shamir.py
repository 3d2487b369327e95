import itertools
from collections import Counter

import numpy as np
import pytest

from efqss.errors import ConfigError, NotActive
from efqss.field import Polynomial, PrimeModulus, poly_eval
from efqss.shamir import classical_reconstruct, deal_shares, lagrange_component
from oracles import all_polynomials, brute_weight, direct_poly


def test_worked_example_shares(gf23):
    poly = Polynomial.from_ints([17, 5, 12, 6], gf23)
    xs = [gf23(x) for x in range(2, 8)]
    dealer, shares = deal_shares([gf23(17)], 4, 6, xs, polynomials=[poly])
    assert [sh.y.value for sh in shares[0]] == [8, 3, 15, 11, 4, 7]
    assert [sh.holder_id for sh in shares[0]] == [1, 2, 3, 4, 5, 6]
    assert dealer.private_values[0].value == 17


@pytest.mark.parametrize("holder, expected", [(1, 22), (3, 9), (4, 3), (6, 6)])
def test_worked_example_components(gf23, holder, expected):
    poly = Polynomial.from_ints([17, 5, 12, 6], gf23)
    xs = [gf23(x) for x in range(2, 8)]
    _, shares = deal_shares([gf23(17)], 4, 6, xs, polynomials=[poly])
    active = [xs[h - 1] for h in (1, 3, 4, 6)]
    assert lagrange_component(shares[0][holder - 1], active).value == expected
    # oracle: direct product with brute-force inverse
    y = direct_poly([17, 5, 12, 6], holder + 1, 23)
    assert y * brute_weight([2, 4, 5, 7], holder + 1, 23) % 23 == expected


def test_reconstruct_worked_example(gf23):
    assert classical_reconstruct([gf23(c) for c in (22, 9, 3, 6)]).value == 17
    assert classical_reconstruct([gf23(5)]).value == 5


def test_threshold_one_is_constant(gf23, rng):
    _, shares = deal_shares([gf23(9)], 1, 5, rng=rng)
    assert all(sh.y.value == 9 for sh in shares[0])


def test_every_subset_reconstructs(rng):
    mod = PrimeModulus(7)
    for _ in range(20):
        secrets = [mod(int(v)) for v in rng.integers(0, 7, size=2)]
        dealer, shares = deal_shares(secrets, 3, 5, rng=rng)
        for v, row in enumerate(shares):
            for size in range(3, 6):
                for subset in itertools.combinations(row, size):
                    xs = [sh.x for sh in subset]
                    comps = [lagrange_component(sh, xs) for sh in subset]
                    assert classical_reconstruct(comps) == secrets[v]


def test_polynomials_are_independent_and_full_length(rng):
    mod = PrimeModulus(101)
    dealer, _ = deal_shares([mod(1), mod(2), mod(3)], 4, 6, rng=rng)
    assert all(p.threshold == 4 for p in dealer.polynomials)
    assert [p.constant.value for p in dealer.polynomials] == [1, 2, 3]
    assert len({p.coefficients for p in dealer.polynomials}) == 3


@pytest.mark.parametrize(
    "t, n, xs",
    [(5, 4, None), (2, 3, [1, 1, 2]), (2, 3, [0, 1, 2]), (2, 23, None), (2, 3, [1, 2])],
)
def test_deal_config_errors(gf23, rng, t, n, xs):
    points = None if xs is None else [gf23(x) for x in xs]
    with pytest.raises(ConfigError):
        deal_shares([gf23(1)], t, n, points, rng=rng)


def test_component_requires_active_holder(gf23, rng):
    _, shares = deal_shares([gf23(1)], 2, 4, rng=rng)
    with pytest.raises(NotActive):
        lagrange_component(shares[0][0], [shares[0][1].x, shares[0][2].x])


def test_component_depends_only_on_own_share(gf23):
    # two different deals that agree only at x=1
    xs = [gf23(x) for x in (1, 2, 3)]
    a = Polynomial.from_ints([4, 7, 1], gf23)
    b = Polynomial.from_ints([11, 0, 1], gf23)
    assert poly_eval(a, gf23(1)) == poly_eval(b, gf23(1))
    _, sa = deal_shares([a.constant], 3, 3, xs, polynomials=[a])
    _, sb = deal_shares([b.constant], 3, 3, xs, polynomials=[b])
    assert sa[0][1].y != sb[0][1].y
    assert lagrange_component(sa[0][0], xs) == lagrange_component(sb[0][0], xs)


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_single_share_is_uniform_for_fixed_secret(d):
    """Exhaustive count: with t=2 and s fixed, one share takes each value equally often."""
    mod = PrimeModulus(d)
    for s in range(d):
        for x in range(1, d):
            counts = Counter(
                poly_eval(Polynomial.from_ints(c, mod), mod(x)).value
                for c in all_polynomials(d, 2)
                if c[0] == s
            )
            assert set(counts) == set(range(d))
            assert len(set(counts.values())) == 1


def test_sampling_is_uniform_over_coefficients():
    mod = PrimeModulus(5)
    rng = np.random.default_rng(3)
    counts = Counter()
    for _ in range(5000):
        dealer, _ = deal_shares([mod(0)], 2, 2, rng=rng)
        counts[dealer.polynomials[0].coefficients[1].value] += 1
    # leading coefficient may be zero
    assert set(counts) == set(range(5))
    assert min(counts.values()) > 850
