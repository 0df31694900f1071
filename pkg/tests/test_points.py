import dataclasses
import logging
from fractions import Fraction
from math import gcd

import pytest

from shimquot.arith import primes_up_to
from shimquot.curves import RatPoint, parse_model
from shimquot.points import (
    QC_NOTE,
    TORSION_PRIMES,
    Verdict,
    best_stoll_bound,
    division_polynomials,
    has_rational_l_torsion,
    search,
    stoll_bound,
    torsion_certify,
    verdict,
)
from shimquot import polys


def naive_search(model, H):
    pts = set(model.infinity_points())
    for b in range(1, H + 1):
        for a in range(-H, H + 1):
            if gcd(a, b) != 1:
                continue
            x = Fraction(a, b)
            Fx = polys.evaluate(model.F, x)
            if Fx < 0:
                continue
            n, d = Fx.numerator, Fx.denominator
            rn, rd = int(n**0.5 + 0.5), int(d**0.5 + 0.5)
            for sn in (rn - 1, rn, rn + 1):
                for sd in (rd - 1, rd, rd + 1):
                    if sn >= 0 and sd > 0 and sn * sn == n and sd * sd == d:
                        Y = Fraction(sn, sd)
                        hx = model.h_at(x)
                        pts.add(RatPoint.affine(x, (Y - hx) / 2))
                        pts.add(RatPoint.affine(x, (-Y - hx) / 2))
    return pts


def naive_count(model, p):
    h, f = model.h, model.f
    ev = lambda a, x: sum(c * x**i for i, c in enumerate(a)) % p
    return 1 + sum(1 for x in range(p) for y in range(p) if (y * y + ev(h, x) * y - ev(f, x)) % p == 0)


@pytest.mark.parametrize("key", ["26.1.13", "38.1.19", "35.1.5", "93.1.93", "51.1.17", "62.1.31", "87.1.29"])
def test_search_matches_brute_force(rec, key):
    m = rec(key).model
    assert set(search(m, 25).points) == naive_search(m, 25)


def test_search_examples(rec):
    assert [str(P) for P in search(rec("35.1.5").model).points] == ["(-1,-1)", "(3/4,-25/32)", "inf"]
    assert len(search(rec("93.1.93").model).points) == 14
    assert [str(P) for P in search(rec("26.1.13").model).points] == ["(4,-9)", "(4,4)", "inf"]
    with pytest.raises(ValueError):
        search(rec("26.1.13").model, 0)


def test_search_closed_under_involution_and_monotone(modelled):
    for r in modelled[::5]:
        small = search(r.model, 20).points
        big = search(r.model, 60).points
        assert set(small) <= set(big)
        assert {r.model.involution(P) for P in big} == set(big)


def test_stoll_bound_rules(rec):
    m = rec("62.1.31").model
    assert stoll_bound(m, 0, 3) == stoll_bound(m, 0, 3)
    c = stoll_bound(m, 0, 3)
    assert c.applicable and c.bound == 2 and c.fp_count == 2
    assert not stoll_bound(m, 2, 7).applicable  # rank not below genus
    assert stoll_bound(m, 1, 3).reason == "needs p > 4"
    assert not stoll_bound(m, 0, 31).applicable  # bad reduction
    assert not best_stoll_bound(m, 0, 2).applicable
    assert best_stoll_bound(m, 0, 2).p == 0
    with pytest.raises(ValueError):
        stoll_bound(rec("26.1.13").model, 0, 3)


def test_best_stoll_bound_values(rec):
    # with the sourced rank 0 the bound exceeds the three known points
    c = best_stoll_bound(rec("35.1.5").model, 0, 30)
    assert (c.p, c.bound) == (3, 5)
    c = best_stoll_bound(rec("51.1.17").model, 0, 30)
    assert (c.p, c.bound) == (5, 3)


def test_stoll_certified_path_with_hypothetical_rank(rec):
    # test-only assumption: rank 0 for the Jacobian of 62.1.31
    r = dataclasses.replace(rec("62.1.31"), rank=0)
    v = verdict(r)
    assert v.status == "complete_certified"
    assert v.certificate["kind"] == "stoll" and v.certificate["bound"] == 2


def test_stoll_bound_below_found_points_is_an_error(rec):
    r = dataclasses.replace(rec("93.1.93"), rank=0)
    with pytest.raises(AssertionError):
        verdict(r)


def test_group_orders_match_brute_force(rec):
    m = rec("58.1.2").model
    for p in m.good_primes(40):
        assert m.count_points_mod_p(p).count == naive_count(m, p)


@pytest.mark.parametrize("key,g,refined,ok", [
    ("26.1.13", 3, 3, True), ("58.1.2", 5, 1, True), ("26.1.2", 7, 1, True),
    ("38.1.2", 5, 1, True), ("51.1.3", 3, 1, True), ("38.1.19", 3, 3, True),
])
def test_torsion_certificates(rec, key, g, refined, ok):
    m = rec(key).model
    counts = [naive_count(m, p) for p in TORSION_PRIMES if m.is_good_prime(p)]
    want = 0
    for c in counts:
        want = gcd(want, c)
    tc = torsion_certify(m, 0, TORSION_PRIMES)
    assert tc.gcd_bound == want == g
    assert tc.refined_bound == refined and tc.certified == ok
    assert not torsion_certify(m, 1, TORSION_PRIMES).certified


def test_torsion_needs_two_good_primes(rec, caplog):
    m = rec("26.1.13").model
    with caplog.at_level(logging.WARNING):
        tc = torsion_certify(m, 0, [2, 13, 3])
    assert not tc.certified and "good prime" in tc.warning
    assert caplog.records


def _add(E, P, Q):
    """Group law on y^2 + (a1 x + a3) y = x^3 + a2 x^2 + a4 x + a6."""
    a3, a1 = (list(E.h) + [0, 0])[:2]
    a6, a4, a2 = E.f[0], E.f[1], E.f[2]
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and y1 + y2 + a1 * x2 + a3 == 0:
        return None
    if x1 == x2:
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    return x3, -(lam + a1) * x3 - nu - a3


@pytest.mark.parametrize("h,f,P", [
    ([1], [0, -1, 0, 1], (0, 0)),          # 37a
    ([1, 1], [0, 0, -1, 1], (0, 0)),       # 53a
    ([], [-2, 0, 0, 1], (3, 5)),
])
def test_division_polynomials_against_group_law(h, f, P):
    E = parse_model(h, f)
    P = (Fraction(P[0]), Fraction(P[1]))
    assert E.evaluate(RatPoint.affine(*P))
    fs = division_polynomials(E, 7)
    x, y = P
    w2 = (2 * y + E.h_at(x)) ** 2  # equals F(x)
    psi2 = lambda k: polys.evaluate(fs[k], x) ** 2 * (w2 if k % 2 == 0 else 1)
    Q = None
    for k in range(1, 7):
        Q = _add(E, Q, P)
        if k < 2 or Q is None:
            continue
        # x(kP) = x - psi_{k-1} psi_{k+1} / psi_k^2
        num = polys.evaluate(fs[k - 1], x) * polys.evaluate(fs[k + 1], x)
        if k % 2 == 1:
            num *= w2
        assert Q[0] == x - num / psi2(k), k


def test_eleven_a3_has_five_torsion():
    E = parse_model([1], [0, 0, -1, 1])
    f5 = division_polynomials(E, 5)[5]
    assert polys.evaluate(f5, 0) == 0
    assert has_rational_l_torsion(E, 5) and not has_rational_l_torsion(E, 3)
    assert not has_rational_l_torsion(E, 2)
    tc = torsion_certify(E, 0, TORSION_PRIMES)
    assert tc.refined_bound == 5 and tc.points_found == 5 and tc.certified


def test_verdict_statuses(rec):
    assert verdict(rec("26.1.13")).status == "complete_certified"
    assert verdict(rec("38.1.1")).status == "empty_local"
    v = verdict(rec("93.1.93"))
    assert v.status == "search_only" and v.note == QC_NOTE and len(v.points) == 14
    v = verdict(rec("10.19.190"))
    assert v.status == "search_only" and v.note.startswith(QC_NOTE) and not v.points
    assert verdict(rec("35.1.5")).status == "complete_matches_paper"
    assert Verdict.from_json(v.to_json()) == v
