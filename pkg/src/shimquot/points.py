"""Rational points: box search, Stoll bounds, torsion certificates, verdicts."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd

import sympy as sp

from . import polys
from .arith import factor, integer_sqrt, primes_up_to
from .curves import BadReduction, CurveModel, RatPoint
from .kernels import SIEVE_MODULI, square_sieve

log = logging.getLogger(__name__)

DEFAULT_HEIGHT = 100


@dataclass
class SearchResult:
    points: list[RatPoint]
    height_bound: int

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, P: RatPoint) -> bool:
        return P in self.points


def _sorted(points) -> list[RatPoint]:
    return sorted(set(points), key=RatPoint.sort_key)


def points_above(model: CurveModel, x: Fraction) -> list[RatPoint]:
    """Rational points with the given x-coordinate."""
    n = model.n
    Fx = polys.hom_evaluate(model.F, x.numerator, x.denominator, n)
    s = integer_sqrt(Fx)
    if s is None:
        return []
    Y = Fraction(s, x.denominator ** (n // 2))
    hx = model.h_at(x)
    return [RatPoint.affine(x, (Y - hx) / 2), RatPoint.affine(x, (-Y - hx) / 2)]


def search(model: CurveModel, H: int = DEFAULT_HEIGHT) -> SearchResult:
    if H < 1:
        raise ValueError("height bound must be positive")
    # b^n F(a/b) is a square exactly when F(a/b) is, since n is even
    cands = square_sieve(list(model.F), model.n, H, SIEVE_MODULI)
    found = list(model.infinity_points())
    for a, b in cands:
        found += points_above(model, Fraction(a, b))
    pts = _sorted(found)
    assert all(model.evaluate(P) for P in pts)
    return SearchResult(pts, H)


# --- Stoll bound --------------------------------------------------------------


@dataclass(frozen=True)
class BoundCertificate:
    p: int
    r: int
    fp_count: int | None
    bound: int | None
    applicable: bool
    reason: str = ""

    def to_json(self) -> dict:
        return dict(self.__dict__)


def stoll_bound(model: CurveModel, r: int, p: int) -> BoundCertificate:
    if model.genus < 2:
        raise ValueError("the Stoll bound needs genus at least 2")
    try:
        count = model.count_points_mod_p(p).count
    except BadReduction:
        return BoundCertificate(p, r, None, None, False, "bad reduction")
    bound = count + 2 * r
    if r >= model.genus:
        return BoundCertificate(p, r, count, bound, False, "rank not below genus")
    if p <= 2 * r + 2:
        return BoundCertificate(p, r, count, bound, False, f"needs p > {2 * r + 2}")
    return BoundCertificate(p, r, count, bound, True)


def best_stoll_bound(model: CurveModel, r: int, p_limit: int) -> BoundCertificate:
    certs = [stoll_bound(model, r, p) for p in primes_up_to(p_limit)]
    ok = [c for c in certs if c.applicable]
    if not ok:
        return BoundCertificate(0, r, None, None, False, f"no applicable prime up to {p_limit}")
    return min(ok, key=lambda c: (c.bound, c.p))


# --- genus one ------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionCertificate:
    gcd_bound: int
    points_found: int
    certified: bool
    primes: tuple[int, ...] = ()
    refined_bound: int = 0
    warning: str = ""

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["primes"] = list(self.primes)
        return d


def division_polynomials(model: CurveModel, n: int) -> list[list[int]]:
    """f_0..f_n with psi_k = f_k for odd k and psi_k = (2y + h) f_k for even k."""
    F = model.F  # 4x^3 + b2 x^2 + 2 b4 x + b6
    b2, b4, b6 = F[2], F[1] // 2, F[0]
    b8 = (b2 * b6 - b4 * b4) // 4
    f = [[0], [1], [1], [b8, 3 * b6, 3 * b4, b2, 3]]
    f.append([b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2])
    F2 = polys.mul(F, F)
    M = polys.mul
    while len(f) <= n:
        k = len(f)
        m = k // 2
        if k % 2:
            a = M(f[m + 2], M(f[m], M(f[m], f[m])))
            b = M(f[m - 1], M(f[m + 1], M(f[m + 1], f[m + 1])))
            if m % 2 == 0:
                a = M(F2, a)
            else:
                b = M(F2, b)
            f.append(polys.add(a, polys.scale(b, -1)))
        else:
            a = M(f[m + 2], M(f[m - 1], f[m - 1]))
            b = M(f[m - 2], M(f[m + 1], f[m + 1]))
            f.append(M(f[m], polys.add(a, polys.scale(b, -1))))
    return [polys.trim(g) or [0] for g in f[: n + 1]]


def _rational_roots(a: list[int]) -> list[Fraction]:
    x = sp.Symbol("x")
    P = sp.Poly(list(reversed(a)), x, domain="QQ")
    return [Fraction(int(sp.numer(r)), int(sp.denom(r))) for r in P.ground_roots()]


def has_rational_l_torsion(model: CurveModel, ell: int) -> bool:
    """Whether E(Q) has a point of prime order ell."""
    if ell == 2:
        return bool(_rational_roots(list(model.F)))
    fl = division_polynomials(model, ell)[ell]
    return any(points_above(model, x0) for x0 in _rational_roots(fl))


def torsion_certify(model: CurveModel, rank: int | None, primes, points_found: int | None = None) -> TorsionCertificate:
    """Bound E(Q)_tors by gcd #E(F_p) over good odd p, where torsion injects.

    Primes ell dividing the gcd with no rational ell-torsion point are then
    removed, which handles curves isogenous to one with larger torsion.
    """
    if model.genus != 1 or model.deg_F != 3:
        raise ValueError("torsion certificates need a plane Weierstrass cubic")
    good = tuple(p for p in primes if model.is_good_prime(p))
    if points_found is None:
        points_found = len(search(model))
    if len(good) < 2:
        msg = f"only {len(good)} good prime(s) supplied"
        log.warning(msg)
        return TorsionCertificate(0, points_found, False, good, 0, msg)
    g = reduce(gcd, (model.count_points_mod_p(p).count for p in good))
    refined = g
    for ell in factor(g).primes if g > 1 else []:
        if not has_rational_l_torsion(model, ell):
            while refined % ell == 0:
                refined //= ell
    return TorsionCertificate(g, points_found, rank == 0 and points_found == refined, good, refined)


TORSION_PRIMES = tuple(p for p in primes_up_to(60) if p > 2)
STOLL_PRIME_LIMIT = 30


# --- verdicts -------------------------------------------------------------------

QC_NOTE = "out-of-scope certification (quadratic Chabauty)"

STATUSES = (
    "empty_local",
    "complete_certified",
    "complete_matches_paper",
    "search_only",
    "infinite",
    "untranscribed",
)


@dataclass
class Verdict:
    status: str
    points: list[RatPoint] = field(default_factory=list)
    certificate: dict | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "points": [str(P) for P in self.points],
            "certificate": self.certificate,
            "note": self.note,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Verdict":
        return cls(d["status"], [RatPoint.parse(s) for s in d["points"]], d["certificate"], d["note"])


def verdict(record, H: int = DEFAULT_HEIGHT, local_report=None) -> Verdict:
    """local check, search, certification, comparison with the catalog."""
    from .local import everywhere_locally_solvable

    if record.model is None:
        if record.rank is not None and record.genus >= 2 and record.rank >= record.genus:
            return Verdict("search_only", note=f"{QC_NOTE}; no model in the catalog, search skipped")
        if record.expected_n == "inf":
            return Verdict("infinite", note="no model needed: infinitely many points")
        return Verdict("untranscribed", note="no model in the catalog")
    model = record.model
    rep = local_report or everywhere_locally_solvable(model)
    if not rep.everywhere_locally_solvable:
        return Verdict("empty_local", note="fails local solvability")
    found = search(model, H).points
    if record.expected_n == "inf":
        return Verdict("infinite", found, note="infinitely many points; search lists a finite sample")

    cert = None
    if record.rank is not None:
        if model.genus == 1 and model.deg_F == 3:
            tc = torsion_certify(model, record.rank, TORSION_PRIMES, len(found))
            cert = {"kind": "torsion", **tc.to_json()}
            if tc.certified:
                return Verdict("complete_certified", found, cert)
        elif model.genus >= 2:
            bc = best_stoll_bound(model, record.rank, STOLL_PRIME_LIMIT)
            cert = {"kind": "stoll", **bc.to_json()}
            if bc.applicable and bc.bound < len(found):
                raise AssertionError(f"{record.id}: Stoll bound {bc.bound} below {len(found)} found points")
            if bc.applicable and bc.bound == len(found):
                return Verdict("complete_certified", found, cert)
    note = ""
    if record.rank is not None and model.genus >= 2 and record.rank >= model.genus:
        note = QC_NOTE
    if note:
        return Verdict("search_only", found, cert, note)
    if record.expected_points is not None and set(found) == set(record.expected_points):
        return Verdict("complete_matches_paper", found, cert)
    if record.expected_points is None and record.expected_n == len(found):
        return Verdict("complete_matches_paper", found, cert, "matches the tabulated count")
    return Verdict("search_only", found, cert)
