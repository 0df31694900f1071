import time
from fractions import Fraction

import pytest

from shimquot.arith import is_fundamental_discriminant, kronecker, prime_divisors, primes_up_to
from shimquot.quadorders import (
    InvalidDiscriminant,
    UnsupportedOrder,
    class_number,
    eichler_symbol,
    genus_character_fields,
    make_order,
    order_of_discriminant,
    principal_form,
    reduced_forms,
    represents,
    ring_class_field,
    table2_orders,
)


def analytic_class_number(dk):
    # Dirichlet: h = -(w / 2|d|) * sum chi(a) a
    w = {-3: 6, -4: 4}.get(dk, 2)
    s = sum(kronecker(dk, a) * a for a in range(1, -dk))
    return Fraction(-w * s, 2 * -dk)


def conductor_class_number(dk, f):
    w = {-3: 6, -4: 4}.get(dk, 2)
    h = Fraction(analytic_class_number(dk) * f, w // 2 if f > 1 else 1)
    for p in prime_divisors(f):
        h *= 1 - Fraction(kronecker(dk, p), p)
    return h


FUND = [d for d in range(-2000, -2) if is_fundamental_discriminant(d)]


def test_class_numbers_match_dirichlet_formula():
    for d in FUND:
        assert class_number(d) == analytic_class_number(d), d


@pytest.mark.parametrize("dk", [-3, -4, -7, -8, -15, -20, -23, -163])
def test_class_numbers_of_orders(dk):
    for f in range(1, 13):
        assert class_number(f * f * dk) == conductor_class_number(dk, f)


def test_known_small_class_numbers():
    assert [d for d in FUND if class_number(d) == 1] == [-163, -67, -43, -19, -11, -8, -7, -4, -3]
    assert reduced_forms(-20) == [(1, 0, 5), (2, 2, 3)]
    assert principal_form(-15) == (1, 1, 4)
    with pytest.raises(InvalidDiscriminant):
        reduced_forms(-5)


def test_represents_brute_force():
    for form in [(1, 0, 5), (2, 2, 3), (1, 1, 4), (2, 1, 2), (1, 0, 1)]:
        a, b, c = form
        vals = {a * x * x + b * x * y + c * y * y for x in range(-30, 31) for y in range(-30, 31)}
        for n in range(1, 120):
            assert represents(form, n) == (n in vals), (form, n)


def test_table2_is_complete_and_fast():
    t0 = time.perf_counter()
    orders = table2_orders()
    assert time.perf_counter() - t0 < 1.0
    assert len(orders) == 42
    assert all(R.h in (1, 2) for R in orders)
    # every order of class number 1 or 2 with small discriminant is listed
    deltas = {R.delta for R in orders}
    for d in range(-400, -2):
        if d % 4 in (0, 1) and class_number(d) <= 2:
            assert d in deltas
    assert sum(R.h == 1 for R in orders) == 13


def test_principal_primes_split_in_every_genus_field():
    # primes represented by the principal form split in the whole genus field
    for R in table2_orders():
        if R.h != 2:
            continue
        H = ring_class_field(R)
        f0 = principal_form(R.delta)
        for p in primes_up_to(400):
            if (R.delta * 2) % p and represents(f0, p):
                for d in H.quadratic_subfields:
                    assert kronecker(d if d % 4 == 1 else 4 * d, p) == 1


def test_ring_class_field_examples():
    R = make_order(-15)
    H = ring_class_field(R)
    assert H.degree_over_Q == 4 and H.quadratic_subfields == (-15, -3, 5)
    assert ring_class_field(make_order(-4, 2)).quadratic_subfields == (-1,)
    assert sorted(ring_class_field(order_of_discriminant(-60)).quadratic_subfields) == [-15, -3, 5]
    assert sorted(genus_character_fields(-20)) == [-1, 5]
    with pytest.raises(UnsupportedOrder):
        ring_class_field(make_order(-23))


def test_eichler_symbol():
    R = make_order(-4, 3)
    assert eichler_symbol(R, 3) == 1
    assert eichler_symbol(R, 5) == 1 and eichler_symbol(R, 7) == -1
    assert eichler_symbol(make_order(-7), 7) == 0
    assert order_of_discriminant(-28).label == "-7.2"
    assert make_order(-4).d == -1 and make_order(-8).d == -2
