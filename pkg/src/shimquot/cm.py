"""CM points on X_0(D, N) and their images on Atkin-Lehner quotients.

Orders are restricted to class number at most 2, where the Galois bookkeeping
of the rationality criterion reduces to degree counting.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from math import gcd, prod

import sympy as sp

from .arith import factor, fundamental_discriminant, is_rational_square, kronecker, prime_divisors, squarefree_part
from .curves import CurveModel, RatPoint
from .quadorders import (
    ImagQuadOrder,
    UnsupportedOrder,
    eichler_symbol,
    order_of_discriminant,
    principal_form,
    represents,
    ring_class_field,
    table2_orders,
)


class UnsupportedLevel(ValueError):
    pass


class MapDataInconsistent(ValueError):
    pass


@dataclass(frozen=True)
class CMContext:
    D: int
    N: int
    R: ImagQuadOrder
    D_R: int
    N_R: int
    Nstar_R: int


def cm_context(D: int, N: int, R: ImagQuadOrder) -> CMContext:
    if any(e > 1 for _, e in factor(N)) if N > 1 else False:
        raise UnsupportedLevel(f"level {N} is not squarefree")
    D_R = prod(p for p in prime_divisors(D) if eichler_symbol(R, p) == -1)
    N_R = prod(p for p in prime_divisors(N) if eichler_symbol(R, p) == 1)
    Nstar = prod(p for p in prime_divisors(N) if R.f % p and kronecker(R.delta_K, p) == 1)
    return CMContext(D, N, R, D_R, N_R, Nstar)


@dataclass(frozen=True)
class CMCount:
    nonempty: bool
    count: int


def cm_count(ctx: CMContext) -> CMCount:
    R = ctx.R
    DN = ctx.D * ctx.N
    ok = R.delta % (DN // (ctx.D_R * ctx.Nstar_R)) == 0
    # an optimal embedding into the maximal order at p | D needs p to miss the conductor
    ok = ok and all(R.f % p for p in prime_divisors(ctx.D))
    if not ok:
        return CMCount(False, 0)
    return CMCount(True, 2 ** len(prime_divisors(ctx.D_R * ctx.N_R)) * R.h)


@dataclass(frozen=True)
class FixedPointSet:
    m: int
    orders: tuple[ImagQuadOrder, ...]

    @property
    def discriminants(self) -> list[int]:
        return [R.delta for R in self.orders]


def fixed_point_orders(m: int) -> FixedPointSet:
    if m < 2:
        raise ValueError("fixed points are defined for nontrivial involutions")
    if m == 2:
        ds = [-4, -8]
    elif m % 4 == 3:
        ds = [-4 * m, -m]
    else:
        ds = [-4 * m]
    return FixedPointSet(m, tuple(order_of_discriminant(d) for d in ds))


@dataclass(frozen=True)
class RationalImageCount:
    R: ImagQuadOrder
    m: int
    m_r: int
    case: str
    rational_points_on_quotient: int
    field_of_image: str

    def to_json(self) -> dict:
        return {
            "order": self.R.label,
            "disc": self.R.delta,
            "h": self.R.h,
            "m": self.m,
            "m_r": self.m_r,
            "case": self.case,
            "rational_points_on_quotient": self.rational_points_on_quotient,
            "field_of_image": self.field_of_image,
        }


def rational_image_count(ctx: CMContext, m: int) -> RationalImageCount:
    R = ctx.R
    if R.h > 2:
        raise UnsupportedOrder(f"{R} has class number {R.h} > 2")
    cnt = cm_count(ctx)
    if not cnt.nonempty:
        raise ValueError(f"no CM points by {R} on X_0({ctx.D},{ctx.N})")
    DN = ctx.D * ctx.N
    m_r = gcd(m, DN // (ctx.D_R * ctx.N_R))
    cofactor = m // m_r
    dn_star = ctx.D_R * ctx.Nstar_R
    quad = f"quadratic({R.d})"
    if dn_star != 1:
        if cofactor == dn_star:
            case, field = "a_conjugation", "rational" if R.h == 1 else "larger"
        else:
            case = "a_other"
            # h = 1: the involution acts trivially on H_R = K
            field = quad if R.h == 1 else "larger"
    elif cofactor == 1:
        case = "b_case1"
        if R.h == 1:
            field = "rational"
        elif m_r == 1:
            field = "larger"
        elif any(kronecker(R.delta, p) != 0 for p in prime_divisors(m_r)):
            field = "undetermined"
        else:
            # sigma_b is trivial exactly when m_r is the norm of a principal ideal
            field = "larger" if represents(principal_form(R.delta), m_r) else "rational"
    else:
        case = "b_case2"
        field = "rational" if R.h == 1 else "larger"
    n = 0
    if field == "rational":
        fixed = m > 1 and R in fixed_point_orders(m).orders
        n = cnt.count if (m == 1 or fixed) else cnt.count // 2
    return RationalImageCount(R, m, m_r, case, n, field)


# --- fibers of a quotient map ---------------------------------------------------


@dataclass(frozen=True)
class QuotientMap:
    """(x:y:z) -> (X:Y:Z) from a source model (y weight g+1) to a target model.

    ``target_coords`` is 'plane' for an ordinary plane cubic (x = X/Z, y = Y/Z)
    or 'weighted' for the weighted model with y = Y/Z^(g+1).
    """

    source: CurveModel
    target: CurveModel
    X: str
    Y: str
    Z: str
    target_coords: str = "weighted"

    @property
    def y_weight(self) -> int:
        return 1 if self.target_coords == "plane" else self.target.genus + 1


_x, _y, _z, _t, _s = sp.symbols("x y z t s")


def _source_equation(model: CurveModel, z):
    w = model.genus + 1
    h = sum(c * _x**i * z ** (w - i) for i, c in enumerate(model.h))
    f = sum(c * _x**i * z ** (2 * w - i) for i, c in enumerate(model.f))
    return _y**2 + h * _y - f


def _target_point(Q: RatPoint, qmap: QuotientMap):
    """Projective coordinates of Q in the map's target convention."""
    if not Q.at_infinity:
        return (Q.x, Q.y, Fraction(1))
    tgt = qmap.target
    if qmap.target_coords == "plane":
        return (Fraction(0), Fraction(1), Fraction(0))
    w = tgt.genus + 1
    h_top = tgt.h[w] if len(tgt.h) > w else 0
    if Q.branch == "odd":
        # odd degree: Y^2 + h_top Y - f_top has the double root -h_top/2
        return (Fraction(1), Fraction(-h_top, 2), Fraction(0)) if tgt.deg_F % 2 else None
    s = is_rational_square(Fraction(tgt.lc))
    sign = 1 if Q.branch == "+" else -1
    return (Fraction(1), (sign * s - h_top) / 2, Fraction(0))


def _fiber_conditions(qmap: QuotientMap, P, X, Y, Z):
    X0, Y0, Z0 = (sp.Rational(c.numerator, c.denominator) for c in P)
    k = qmap.y_weight
    if Z0 != 0:
        return [X * Z0 - X0 * Z, Y * Z0**k - Y0 * Z**k], Z
    if qmap.target_coords == "plane":
        return [Z, X], Y
    return [Z, Y - Y0 * X**k], X


def fiber_field(qmap: QuotientMap, Q: RatPoint) -> int:
    """Square-free d with Q(preimage of Q) = Q(sqrt d); d = 1 for a rational fiber."""
    P = _target_point(Q, qmap)
    if P is None:
        raise MapDataInconsistent(f"{Q} is not a point of the target model")
    return _fiber_field_proj(qmap, P)


def fiber_field_projective(qmap: QuotientMap, coords) -> int:
    """Same as fiber_field, for any projective representative (X0:Y0:Z0)."""
    X0, Y0, Z0 = (Fraction(c) for c in coords)
    k = qmap.y_weight
    if Z0 != 0:
        return _fiber_field_proj(qmap, (X0 / Z0, Y0 / Z0**k, Fraction(1)))
    if qmap.target_coords == "plane":
        return _fiber_field_proj(qmap, (Fraction(0), Fraction(1), Fraction(0)))
    return _fiber_field_proj(qmap, (Fraction(1), Y0 / X0**k, Fraction(0)))


@cache
def _parsed(expr: str):
    return sp.sympify(expr, locals={"x": _x, "y": _y, "z": _z})


def _fiber_field_proj(qmap: QuotientMap, P) -> int:
    src = qmap.source
    X, Y, Z = (_parsed(e) for e in (qmap.X, qmap.Y, qmap.Z))
    deg = 0
    field_d = None

    # affine chart z = 1 of the source
    aff = [e.subs(_z, 1) for e in (X, Y, Z)]
    conds, nonzero = _fiber_conditions(qmap, P, *aff)
    eqs = [sp.expand(_source_equation(src, 1))] + [sp.expand(c) for c in conds]
    eqs.append(sp.expand(_t * nonzero - 1))
    aff_deg, aff_d = _zero_dim_field(eqs)
    deg += aff_deg
    if aff_deg:
        field_d = aff_d

    # the points at infinity of the source: (1 : y : 0) with y^2 + h_w y = f_2w
    w = src.genus + 1
    h_top = src.h[w] if len(src.h) > w else 0
    f_top = src.f[2 * w] if len(src.f) > 2 * w else 0
    ys = sp.solve(_y**2 + h_top * _y - f_top, _y)
    inf_hits = 0
    for yv in ys:
        vals = [sp.simplify(e.subs({_x: 1, _y: yv, _z: 0})) for e in (X, Y, Z)]
        if all(v == 0 for v in vals):
            raise MapDataInconsistent("quotient map is undefined at a point at infinity of the source")
        conds, nonzero = _fiber_conditions(qmap, P, *vals)
        if all(sp.simplify(c) == 0 for c in conds) and sp.simplify(nonzero) != 0:
            inf_hits += 1 if len(ys) == 2 else 2
    if inf_hits:
        deg += inf_hits
        disc = h_top * h_top + 4 * f_top
        # one point each in the two charts means both are rational
        rational = inf_hits == 1 or disc == 0 or is_rational_square(disc) is not None
        field_d = 1 if rational else squarefree_part(disc)
    if deg != 2:
        raise MapDataInconsistent(f"fiber has degree {deg}, expected 2")
    return field_d


def _zero_dim_field(eqs) -> tuple[int, int]:
    """Degree of the fiber cut out in the chart and its field of definition."""
    for c in (1, 2, 3, 5, 7):
        G = sp.groebner(eqs + [_s - (_x + c * _y)], _t, _x, _y, _s, order="lex")
        if list(G.exprs) == [1]:
            return 0, 1
        uni = [g for g in G.exprs if g.free_symbols <= {_s}]
        if not uni:
            raise MapDataInconsistent("fiber is not zero-dimensional")
        u = sp.Poly(uni[0], _s)
        d = u.degree()
        if d == 1:
            return 1, 1
        if d != 2:
            raise MapDataInconsistent(f"fiber has degree {d} in the affine chart")
        disc = sp.discriminant(u)
        if disc == 0:
            # a double point; try another linear form in case of accidental collision
            continue
        q = Fraction(int(sp.numer(disc)), int(sp.denom(disc)))
        return 2, 1 if is_rational_square(q) is not None else squarefree_part(q.numerator * q.denominator)
    return 2, 1


# --- classification ---------------------------------------------------------------


def _field_in(d: int, H) -> bool:
    return d == 1 or d in H.quadratic_subfields


@dataclass
class PointClass:
    point: str
    is_cm: bool | None
    fiber_field_d: int | None
    candidate_orders: list[str] = field(default_factory=list)
    candidate_fields: list[int] = field(default_factory=list)
    ambiguity: bool = False
    status: str = ""

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class CMReport:
    key: str
    m: int | None
    mode: str
    contexts: list[dict] = field(default_factory=list)
    total_cm_points: int = 0
    image_counts: list[dict] = field(default_factory=list)
    rational_cm_points: int = 0
    field_groups: list[dict] = field(default_factory=list)
    points: list[dict] = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict:
        return dict(self.__dict__)

    def field_multiset(self) -> Counter:
        """Counter of (tuple of CM field discriminants) -> number of rational CM points."""
        if self.mode == "fiber":
            c = Counter()
            for p in self.points:
                if p["is_cm"]:
                    c[tuple(sorted(set(p["candidate_fields"])))] += 1
            return c
        return Counter({tuple(g["delta_K"]): g["count"] for g in self.field_groups})


def _supported_orders() -> list[ImagQuadOrder]:
    return table2_orders()


def image_counts(D: int, N: int, m: int) -> list[RationalImageCount]:
    out = []
    for R in _supported_orders():
        ctx = cm_context(D, N, R)
        if cm_count(ctx).nonempty:
            out.append(rational_image_count(ctx, m))
    return out


def _field_groups(counts: list[RationalImageCount]) -> list[dict]:
    """Group orders whose ring class fields nest; within a group CM fields are indistinguishable."""
    pos = [c for c in counts if c.rational_points_on_quotient > 0]
    parent = list(range(len(pos)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, a in enumerate(pos):
        for j, b in enumerate(pos):
            Ha, Hb = ring_class_field(a.R), ring_class_field(b.R)
            if i < j and (Ha.contains_field(Hb) or Hb.contains_field(Ha)):
                parent[find(i)] = find(j)
    groups: dict[int, list[RationalImageCount]] = {}
    for i, c in enumerate(pos):
        groups.setdefault(find(i), []).append(c)
    out = []
    for g in groups.values():
        fields = sorted({fundamental_discriminant(c.R.d) for c in g}, reverse=True)
        out.append({
            "delta_K": fields,
            "orders": [c.R.label for c in g],
            "count": sum(c.rational_points_on_quotient for c in g),
        })
    return sorted(out, key=lambda g: g["delta_K"])


def classify_points(counts: list[RationalImageCount], fibers: dict[str, int]) -> list[PointClass]:
    """Containment test: points whose fiber field lies in H, against CM images with class field in H."""
    pos = [c for c in counts if c.rational_points_on_quotient > 0]
    result = {q: PointClass(q, None, d) for q, d in fibers.items()}
    decided: set[str] = set()
    for c in pos:
        H = ring_class_field(c.R)
        S_H = sum(o.rational_points_on_quotient for o in pos if H.contains_field(ring_class_field(o.R)))
        P_H = [q for q, d in fibers.items() if _field_in(d, H)]
        if len(P_H) == S_H:
            decided.update(P_H)
    for q, d in fibers.items():
        pc = result[q]
        cands = [o for o in pos if _field_in(d, ring_class_field(o.R))]
        if q in decided:
            pc.is_cm = True
            pc.candidate_orders = [o.R.label for o in cands]
            pc.candidate_fields = sorted({fundamental_discriminant(o.R.d) for o in cands}, reverse=True)
            pc.ambiguity = len(pc.candidate_fields) > 1
            pc.status = "cm"
        elif not cands:
            pc.is_cm = False
            pc.status = "non_cm"
        else:
            pc.status = "inconclusive"
    return list(result.values())


def cm_report(record, points=None) -> CMReport:
    """CM analysis of a catalog record; ``points`` are the rational points found."""
    cid = record.id
    rep = CMReport(cid.key, None, "unsupported")
    if cid.N > 1 and any(e > 1 for _, e in factor(cid.N)):
        rep.note = f"level {cid.N} is not squarefree; CM analysis not supported"
        return rep
    if len(cid.W) > 1:
        rep.note = "CM analysis covers single involutions only"
        return rep
    m = cid.W[0] if cid.W else 1
    rep.m = m
    for R in _supported_orders():
        ctx = cm_context(cid.D, cid.N, R)
        cnt = cm_count(ctx)
        if cnt.nonempty:
            rep.contexts.append({"order": R.label, "disc": R.delta, "D_R": ctx.D_R, "N_R": ctx.N_R,
                                 "Nstar_R": ctx.Nstar_R, "count": cnt.count})
            rep.total_cm_points += cnt.count
    counts = image_counts(cid.D, cid.N, m)
    rep.image_counts = [c.to_json() for c in counts]
    rep.rational_cm_points = sum(c.rational_points_on_quotient for c in counts)
    rep.field_groups = _field_groups(counts)
    if record.quotient_map is not None and points is not None:
        rep.mode = "fiber"
        qmap = record.quotient_map
        fibers = {str(P): fiber_field(qmap, P) for P in points}
        rep.points = [pc.to_json() for pc in classify_points(counts, fibers)]
    else:
        rep.mode = "counts-only"
    if any(c.field_of_image == "undetermined" for c in counts):
        rep.note = "some image fields undetermined by degree counting"
    return rep
