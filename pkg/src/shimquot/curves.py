"""Plane models y^2 + h(x) y = f(x) of the catalog curves.

Everything is done on the completed form (2y + h)^2 = F(x), F = 4f + h^2,
in weighted projective coordinates of weights (1, g+1, 1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import polys
from .arith import factor, is_prime, is_rational_square, kronecker, primes_up_to
from .kernels import fp_affine_count

KINDS = ("hyperelliptic_even", "hyperelliptic_odd", "weierstrass", "plane_cubic")


class SingularModel(ValueError):
    pass


class BadReduction(ValueError):
    pass


class InvalidCurveId(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CurveId:
    D: int
    N: int
    W: tuple[int, ...] = ()

    def __post_init__(self):
        if self.D <= 1:
            raise InvalidCurveId(f"discriminant {self.D} must exceed 1")
        fac = factor(self.D)
        if any(e != 1 for _, e in fac) or len(fac) % 2:
            raise InvalidCurveId(f"{self.D} is not a product of an even number of distinct primes")
        if self.N < 1 or gcd(self.D, self.N) != 1:
            raise InvalidCurveId(f"level {self.N} must be positive and coprime to {self.D}")
        DN = self.D * self.N
        for m in self.W:
            if m <= 1 or DN % m or gcd(m, DN // m) != 1:
                raise InvalidCurveId(f"omega_{m} is not an Atkin-Lehner index for DN = {DN}")
        object.__setattr__(self, "W", tuple(self.W))

    @property
    def key(self) -> str:
        tail = "-".join(map(str, self.W)) if self.W else "1"
        return f"{self.D}.{self.N}.{tail}"

    @classmethod
    def parse(cls, key: str) -> "CurveId":
        try:
            d, n, tail = key.split(".")
            W = () if tail == "1" else tuple(int(m) for m in tail.split("-"))
            return cls(int(d), int(n), W)
        except ValueError as exc:
            raise InvalidCurveId(f"bad curve key {key!r}: {exc}") from None

    def __str__(self) -> str:
        return self.key


@dataclass(frozen=True)
class RatPoint:
    """Affine point (x, y), or a point at infinity tagged '+', '-' or 'odd'."""

    x: Fraction | None = None
    y: Fraction | None = None
    branch: str | None = None

    @classmethod
    def affine(cls, x, y) -> "RatPoint":
        return cls(Fraction(x), Fraction(y), None)

    @classmethod
    def infinity(cls, branch: str = "odd") -> "RatPoint":
        if branch not in ("+", "-", "odd"):
            raise ValueError(f"bad infinity branch {branch!r}")
        return cls(None, None, branch)

    @property
    def at_infinity(self) -> bool:
        return self.branch is not None

    def sort_key(self):
        if self.at_infinity:
            return (1, Fraction(0), Fraction(0), self.branch)
        return (0, self.x, self.y, "")

    def __str__(self) -> str:
        if self.at_infinity:
            return "inf" if self.branch == "odd" else f"inf{self.branch}"
        return f"({_fmt(self.x)},{_fmt(self.y)})"

    @classmethod
    def parse(cls, s: str) -> "RatPoint":
        s = s.strip().replace(" ", "")
        if s in ("inf", "oo", "∞"):
            return cls.infinity("odd")
        if s in ("inf+", "inf-"):
            return cls.infinity(s[-1])
        m = re.fullmatch(r"\(([-0-9/]+),([-0-9/]+)\)", s)
        if not m:
            raise ValueError(f"cannot parse point {s!r}")
        return cls.affine(Fraction(m.group(1)), Fraction(m.group(2)))


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class FpPointCount:
    p: int
    count: int


@dataclass(frozen=True)
class CurveModel:
    h: tuple[int, ...]
    f: tuple[int, ...]
    kind: str
    genus: int
    id: CurveId | None = None
    F: tuple[int, ...] = field(default=(), repr=False)

    @property
    def n(self) -> int:
        """Degree of the binary form F(x, z); always even."""
        return 2 * self.genus + 2

    @property
    def deg_F(self) -> int:
        return len(self.F) - 1

    @property
    def lc(self) -> int:
        return self.F[-1]

    @property
    def disc(self) -> int:
        return polys.discriminant(self.F)

    def h_at(self, x):
        return polys.evaluate(self.h, x)

    def f_at(self, x):
        return polys.evaluate(self.f, x)

    def infinity_points(self) -> list[RatPoint]:
        if self.deg_F % 2:
            return [RatPoint.infinity("odd")]
        if is_rational_square(Fraction(self.lc)) is not None:
            return [RatPoint.infinity("+"), RatPoint.infinity("-")]
        return []

    def evaluate(self, P: RatPoint) -> bool:
        if P.at_infinity:
            return P in self.infinity_points()
        return P.y * P.y + self.h_at(P.x) * P.y == self.f_at(P.x)

    def involution(self, P: RatPoint) -> RatPoint:
        if P.at_infinity:
            return RatPoint.infinity({"+": "-", "-": "+", "odd": "odd"}[P.branch])
        return RatPoint.affine(P.x, -P.y - self.h_at(P.x))

    def bad_primes(self) -> list[int]:
        return sorted(set(factor(2 * self.disc * self.lc).primes))

    def is_good_prime(self, p: int) -> bool:
        return p > 2 and (self.disc * self.lc) % p != 0

    def good_primes(self, limit: int) -> list[int]:
        return [p for p in primes_up_to(limit) if self.is_good_prime(p)]

    def infinity_count_mod_p(self, p: int) -> int:
        if self.deg_F % 2:
            return 1
        return 1 + kronecker(self.lc, p)

    def count_points_mod_p(self, p: int) -> FpPointCount:
        """Points of the smooth projective reduction over F_p (good odd p only)."""
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if not self.is_good_prime(p):
            raise BadReduction(f"{p} is a bad prime for {self.id or 'this model'}")
        count = fp_affine_count(list(self.F), p) + self.infinity_count_mod_p(p)
        t = count - p - 1
        assert t * t <= 4 * self.genus**2 * p, "Hasse-Weil bound violated"
        return FpPointCount(p, count)

    def to_json(self) -> dict:
        return {"kind": self.kind, "h": list(self.h), "f": list(self.f)}

    def equation(self) -> str:
        lhs = "y^2"
        if any(self.h):
            hs = polys.format_poly(self.h)
            lhs += f" + ({hs})*y" if len(polys.trim(self.h)) > 1 else f" + {hs}*y"
        return f"{lhs} = {polys.format_poly(self.f)}"


def genus_of_degree(d: int) -> int:
    return max(-(-d // 2) - 1, 0)


def parse_model(h, f, id: CurveId | None = None, kind: str | None = None) -> CurveModel:
    h = tuple(polys.trim([int(c) for c in h]))
    f = tuple(polys.trim([int(c) for c in f]))
    F = tuple(polys.add(polys.scale(f, 4), polys.mul(h, h)))
    if not F:
        raise SingularModel("4f + h^2 vanishes identically")
    d = len(F) - 1
    if d < 1 or polys.discriminant(F) == 0:
        raise SingularModel(f"F = {polys.format_poly(F)} is not squarefree")
    genus = genus_of_degree(d)
    cubic = len(f) == 4 and f[3] == 1 and len(h) <= 2
    if kind is None:
        if genus == 1 and cubic:
            kind = "weierstrass"
        else:
            kind = "hyperelliptic_odd" if d % 2 else "hyperelliptic_even"
    if kind not in KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    if kind in ("weierstrass", "plane_cubic") and not cubic:
        raise ValueError("Weierstrass models need monic cubic f and deg h <= 1")
    if kind == "hyperelliptic_odd" and d % 2 == 0 or kind == "hyperelliptic_even" and d % 2:
        raise ValueError(f"model kind {kind} does not match deg F = {d}")
    return CurveModel(h, f, kind, genus, id, F)
