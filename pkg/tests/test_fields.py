import pytest
import sympy

from cubicphi.arith import is_fundamental, kronecker, mirror
from cubicphi.fields import (
    CoverageError,
    CubicField,
    FieldStore,
    inventory,
    is_isomorphic,
    omega,
    rank_from_count,
    resolvent_decompose,
)
from cubicphi.forms import act

x = sympy.symbols("x")


def test_resolvent_decompose_examples():
    assert resolvent_decompose(49) == (1, 7)
    assert resolvent_decompose(-8751 * 9) == (-8751, 3)
    assert resolvent_decompose(2917) == (2917, 1)
    assert resolvent_decompose(-108) == (-3, 6)
    with pytest.raises(ValueError):
        resolvent_decompose(0)


def test_field_from_polynomial():
    E = CubicField.from_polynomial((1, -1, -4, 1))
    assert E.discriminant == 321
    assert sympy.discriminant(sum(c * x ** (3 - i) for i, c in enumerate(E.poly)), x) % 321 == 0
    with pytest.raises(ValueError):
        CubicField.from_polynomial((1, 0, -1, 0))


def _sympy_omega(poly, p):
    factors = sympy.factor_list(sum(c * x ** (3 - i) for i, c in enumerate(poly)), modulus=p)[1]
    degs = sorted(sympy.degree(f, x) for f, e in factors for _ in range(e))
    if degs == [1, 1, 1] and len(factors) == 3:
        return 2
    if degs == [3]:
        return -1
    return 0


def test_omega_examples():
    L321 = CubicField.from_polynomial((1, -1, -4, 1))
    assert omega(L321, 2) == -1
    assert omega(L321, 7) == 0
    E49 = CubicField.from_form((1, 1, -2, -1))
    assert omega(E49, 13) == 2
    assert omega(E49, 7) == 0
    assert omega(E49, 2) == -1


def test_omega_matches_factorisation_of_monic_poly(small_store):
    # away from the index the monic polynomial factors like the prime
    for E in list(small_store)[::40]:
        a = E.form.a
        for p in sympy.primerange(2, 60):
            if a % p and E.discriminant % p:
                assert omega(E, p) == _sympy_omega(E.poly, p), (E, p)


def test_omega_large_prime_path():
    E = CubicField.from_polynomial((1, -1, -4, 1))
    for p in sympy.primerange(257, 400):
        assert omega(E, p) == _sympy_omega((1, -1, -4, 1), p)


def test_omega_vanishes_exactly_off_split_quadratic():
    store = FieldStore.enumerate(max_pos=10**5, max_neg=10**5)
    primes = [p for p in sympy.primerange(2, 101) if p != 3]
    for E in store:
        for p in primes:
            assert (omega(E, p) == 0) == (kronecker(E.discriminant, p) != 1), (E, p)


def test_omega_zero_at_ramified_primes(small_store):
    for E in list(small_store)[::7]:
        for p in sympy.primefactors(abs(E.discriminant)):
            if E.discriminant % (p * p) == 0 or p > 3:
                assert omega(E, p) == 0


@pytest.mark.parametrize(
    "D, sizes",
    [(-4, (0, 0)), (-107, (1, 0)), (-255, (0, 1)), (-8751, (1, 3)), (-34603, (4, 0)), (321, (1, 3))],
)
def test_inventory_sizes(example_store, D, sizes):
    assert inventory(D, example_store).sizes == sizes


def test_inventory_discriminants(example_store):
    inv = inventory(-8751, example_store)
    assert {E.discriminant for E in inv.fields_Dstar} == {2917}
    assert {E.discriminant for E in inv.fields_27D} == {236277}


def test_inventory_coverage_error(small_store):
    with pytest.raises(CoverageError):
        inventory(-34603, small_store)
    with pytest.raises(ValueError):
        inventory(9, small_store)


def test_is_isomorphic():
    E1 = CubicField.from_polynomial((1, 0, -138, 413))
    E2 = CubicField.from_polynomial((1, 0, -129, -532))
    assert is_isomorphic(E1, E1)
    assert not is_isomorphic(E1, E2)
    F = act(E1.form, (2, 1, 1, 1))
    assert is_isomorphic(E1, CubicField.from_form(F))


def test_rank_from_count():
    assert [rank_from_count(n) for n in (0, 1, 4, 13)] == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        rank_from_count(2)


def test_pattern_and_scholz_reflection(small_store):
    # sizes of L_{D*} and L_{-27D} follow the (3^r-1)/2, {0, 3^r} pattern
    for n in range(3, 1001):
        for D in (-n, n):
            if not is_fundamental(D):
                continue
            inv = inventory(D, small_store)
            a, b = inv.sizes
            r = rank_from_count(a)
            assert b in (0, 3**r), (D, inv.sizes)
            if D < 0 and small_store.covers(D):
                rD = rank_from_count(len(small_store.fields_of_disc(D)))
                rDs = rank_from_count(len(small_store.fields_of_disc(mirror(D))))
                assert 0 <= rD - rDs <= 1, D
