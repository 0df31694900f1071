import random

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from shimquot import polys
from shimquot.arith import valuation
from shimquot.curves import SingularModel, parse_model
from shimquot.local import (
    DepthExceeded,
    LocalReport,
    _disk_has_square,
    count_real_roots,
    everywhere_locally_solvable,
    qp_solvable,
    real_solvable,
)

HASSE = ["87.1.3", "93.1.3", "119.1.7", "6.29.6", "6.37.3", "39.2.78"]


def witness_oracle(F, n, p, K):
    """Scan primitive (x : z) modulo p^K.

    Returns True if some residue pins F(x, z) down to a square class, False if
    every residue pins it down to a non-square class, None otherwise.
    """
    q = p**K
    need = 3 if p == 2 else 1
    unknown = False
    pairs = [(x, 1) for x in range(q)] + [(1, z) for z in range(0, q, p)]
    for x, z in pairs:
        v = sum(c * pow(x, i, q) * pow(z, n - i, q) for i, c in enumerate(F)) % q
        if v == 0:
            unknown = True
            continue
        e = valuation(v, p)
        if K - e < need:
            unknown = True
            continue
        u = v // p**e
        sq = u % 8 == 1 if p == 2 else pow(u, (p - 1) // 2, p) == 1
        if e % 2 == 0 and sq:
            return True
    return None if unknown else False


def test_catalog_examples(rec):
    assert not real_solvable(rec("38.1.1").model)
    rep = everywhere_locally_solvable(rec("38.1.1").model)
    assert not rep.everywhere_locally_solvable
    for key in HASSE:
        rep = everywhere_locally_solvable(rec(key).model)
        assert rep.everywhere_locally_solvable, key


def test_negative_witness_at_three():
    for f in ([3, 0, 0, 0, 0, 0, 3], [3, 0, 0, 0, 3]):
        m = parse_model([], f)
        assert not qp_solvable(m, 3)
        assert qp_solvable(m, 5)
        assert not everywhere_locally_solvable(m).everywhere_locally_solvable
    # x^6 + 1 is 1 or 2 mod 7 and 3, 6 are non-residues: no F_7 points either
    m = parse_model([], [3, 0, 0, 0, 0, 0, 3])
    assert m.count_points_mod_p(7).count == 0 and not qp_solvable(m, 7)


def test_negative_witness_at_two():
    m = parse_model([], [-1, 0, 0, 0, -1])
    assert not real_solvable(m)
    m = parse_model([], [6, 0, 0, 0, 0, 0, 6])
    assert qp_solvable(m, 2) == witness_oracle(list(m.F), m.n, 2, 9)


def _random_models(seed, count, deg=6):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f = [rng.randint(-30, 30) for _ in range(deg + 1)]
        if f[-1] == 0:
            continue
        try:
            out.append(parse_model([], f))
        except SingularModel:
            pass
    return out


@pytest.mark.parametrize("p,K", [(2, 9), (3, 6), (5, 4), (7, 3), (11, 3), (13, 3)])
def test_qp_solvable_against_residue_scan(p, K):
    conclusive = 0
    for m in _random_models(p, 60):
        want = witness_oracle(list(m.F), m.n, p, K)
        if want is None:
            continue
        conclusive += 1
        assert qp_solvable(m, p) == want, (m.f, p)
    assert conclusive > 20


def test_qp_solvable_finds_hidden_negatives():
    # p * (unit non-residue form) has no points; multiply random forms by p
    seen = 0
    for m in _random_models(99, 40, deg=4):
        for p in (3, 5, 7):
            f = [p * c for c in m.f]
            g = parse_model([], f)
            want = witness_oracle(list(g.F), g.n, p, 4 if p > 3 else 5)
            if want is not None:
                assert qp_solvable(g, p) == want
                seen += 1
    assert seen > 30


def test_depth_cap_raises():
    with pytest.raises(DepthExceeded):
        _disk_has_square([1, 0, 3], 3, 0, -1)


def test_real_roots_match_sympy():
    x = sp.Symbol("x")
    rng = random.Random(7)
    for _ in range(1000):
        F = [rng.randint(-20, 20) for _ in range(7)]
        if F[-1] == 0 or polys.discriminant(F) == 0:
            continue
        P = sp.Poly(list(reversed(F)), x)
        assert count_real_roots(F) == P.count_roots()
        has_real = F[-1] > 0 or P.count_roots() > 0
        assert real_solvable(parse_model([], F)) == has_real


@settings(max_examples=50)
@given(st.lists(st.integers(-9, 9), min_size=5, max_size=7))
def test_report_json_roundtrip(f):
    try:
        m = parse_model([], f)
    except SingularModel:
        return
    if m.genus < 1:
        return
    rep = everywhere_locally_solvable(m)
    assert LocalReport.from_json(rep.to_json()) == rep
    if not rep.real_solvable:
        assert not rep.everywhere_locally_solvable
