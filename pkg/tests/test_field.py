import pytest
from hypothesis import given
from hypothesis import strategies as st

from efqss.errors import ConfigError, InvalidEvaluationPoints, ModulusMismatch, ZeroInverse
from efqss.field import (
    FieldElement,
    Polynomial,
    PrimeModulus,
    is_prime,
    lagrange_weight,
    mod_inverse,
    poly_eval,
)
from oracles import brute_inverse, brute_weight, direct_poly, prime_list

PRIMES = prime_list(102)


def test_primality_matches_sieve():
    assert [p for p in range(200) if is_prime(p)] == prime_list(200)


@pytest.mark.parametrize("n", [2**31 - 1, 2**61 - 1, 1_000_003, 18446744073709551557])
def test_large_primes(n):
    assert is_prime(n)


@pytest.mark.parametrize("n", [2**32 + 1, 1_000_001 * 1_000_003, 561, 3_215_031_751])
def test_large_composites(n):
    assert not is_prime(n)


@pytest.mark.parametrize("d", [0, 1, 4, 9, 21, 25])
def test_non_prime_modulus_rejected(d):
    with pytest.raises(ConfigError):
        PrimeModulus(d)


@pytest.mark.parametrize(
    "x, d, expected",
    [(8, 23, brute_inverse(8, 23)), (1, 23, 1), (1, 101, 1), (5, 23, brute_inverse(5, 23))],
)
def test_mod_inverse_examples(x, d, expected):
    assert mod_inverse(PrimeModulus(d)(x)).value == expected


def test_mod_inverse_frozen_values():
    # brute-force oracle outputs, frozen
    assert brute_inverse(8, 23) == 3
    assert brute_inverse(5, 23) == 14


@pytest.mark.parametrize("d", PRIMES)
def test_mod_inverse_exhaustive(d):
    mod = PrimeModulus(d)
    for x in range(1, d):
        assert (mod(x) * mod_inverse(mod(x))).value == 1


def test_zero_has_no_inverse(gf23):
    with pytest.raises(ZeroInverse):
        mod_inverse(gf23(0))


@pytest.mark.parametrize("x, expected", [(2, 8), (0, 17), (7, 7), (3, 3), (4, 15), (5, 11), (6, 4)])
def test_poly_eval_worked_example(gf23, x, expected):
    p = Polynomial.from_ints([17, 5, 12, 6], gf23)
    assert poly_eval(p, gf23(x)).value == expected
    assert direct_poly([17, 5, 12, 6], x, 23) == expected


def test_lagrange_weight_examples(gf23):
    xs = [gf23(x) for x in (2, 4, 5, 7)]
    assert brute_weight([2, 4, 5, 7], 2, 23) == 20
    assert brute_weight([2, 4, 5, 7], 4, 23) == 19
    assert lagrange_weight(xs, gf23(2)).value == 20
    assert lagrange_weight(xs, gf23(4)).value == 19
    # cross-check against the worked example's components
    assert (8 * 20) % 23 == 22 and (15 * 19) % 23 == 9
    assert lagrange_weight([gf23(9)], gf23(9)).value == 1


@pytest.mark.parametrize("xs", [[2, 2, 5], [0, 3, 4]])
def test_lagrange_weight_rejects_bad_points(gf23, xs):
    with pytest.raises(InvalidEvaluationPoints):
        lagrange_weight([gf23(x) for x in xs], gf23(xs[1]))


def test_mixed_modulus_is_an_error():
    a, b = PrimeModulus(5)(2), PrimeModulus(7)(2)
    with pytest.raises(ModulusMismatch):
        a + b
    with pytest.raises(ModulusMismatch):
        a * b


def test_multiples_of_modulus_vanish(gf23):
    for L in (-3, 0, 1, 17, 10**6):
        assert gf23(5 + L * 23) == gf23(5)


@st.composite
def field_triples(draw):
    d = draw(st.sampled_from(PRIMES))
    vals = draw(st.lists(st.integers(-(10**6), 10**6), min_size=3, max_size=3))
    mod = PrimeModulus(d)
    return [mod(v) for v in vals]


@given(field_triples())
def test_field_laws(triple):
    a, b, c = triple
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    for x in (a + b, a * b, a - b, -a):
        assert 0 <= x.value < a.modulus.d
    if b.value:
        assert (a / b) * b == a


@given(
    d=st.sampled_from([5, 7, 11, 23, 101]),
    data=st.data(),
)
def test_weighted_shares_sum_to_secret(d, data):
    mod = PrimeModulus(d)
    t = data.draw(st.integers(1, min(5, d - 1)))
    coeffs = data.draw(st.lists(st.integers(0, d - 1), min_size=t, max_size=t))
    m = data.draw(st.integers(t, d - 1))
    points = data.draw(st.lists(st.integers(1, d - 1), min_size=m, max_size=m, unique=True))
    p = Polynomial.from_ints(coeffs, mod)
    xs = [mod(x) for x in points]
    total = mod(0)
    for x in xs:
        total = total + poly_eval(p, x) * lagrange_weight(xs, x)
    assert total.value == coeffs[0]


def test_field_element_is_immutable(gf23):
    x = gf23(3)
    with pytest.raises(AttributeError):
        x.value = 4
    assert FieldElement(-1, gf23).value == 22
