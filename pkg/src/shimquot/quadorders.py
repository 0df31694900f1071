"""Imaginary quadratic orders of small class number.

Class numbers come from reduced binary quadratic forms; ring class fields are
described only through their quadratic subfields, built from genus characters
(enough for every order with h <= 2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cache
from importlib import resources
from itertools import combinations
from math import gcd, isqrt

from .arith import factor, is_fundamental_discriminant, kronecker, squarefree_part


class InvalidDiscriminant(ValueError):
    pass


class UnsupportedOrder(ValueError):
    pass


def _check_disc(delta: int) -> None:
    if delta >= 0 or delta % 4 not in (0, 1):
        raise InvalidDiscriminant(f"{delta} is not a negative discriminant")


def reduced_forms(delta: int) -> list[tuple[int, int, int]]:
    """Reduced primitive positive definite forms (a, b, c) with b^2 - 4ac = delta."""
    _check_disc(delta)
    out = []
    a = 1
    while 3 * a * a <= -delta:
        for b in range(-a + 1, a + 1):
            num = b * b - delta
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                out.append((a, b, c))
        a += 1
    return out


def class_number(delta: int) -> int:
    return len(reduced_forms(delta))


def principal_form(delta: int) -> tuple[int, int, int]:
    _check_disc(delta)
    b = delta % 2
    return (1, b, (b * b - delta) // 4)


def represents(form: tuple[int, int, int], n: int) -> bool:
    """Whether the positive definite form takes the value n."""
    a, b, c = form
    delta = b * b - 4 * a * c
    # 4a n = (2a x + b y)^2 - delta y^2  =>  |y| <= sqrt(4 a n / -delta)
    ymax = isqrt(4 * a * n // -delta) + 1
    for y in range(-ymax, ymax + 1):
        # a x^2 + b y x + (c y^2 - n) = 0
        disc = b * b * y * y - 4 * a * (c * y * y - n)
        if disc < 0:
            continue
        r = isqrt(disc)
        if r * r != disc:
            continue
        for s in (r, -r):
            num = -b * y + s
            if num % (2 * a) == 0:
                return True
    return False


@dataclass(frozen=True)
class ImagQuadOrder:
    delta_K: int
    f: int
    h: int

    @property
    def delta(self) -> int:
        return self.f * self.f * self.delta_K

    @property
    def label(self) -> str:
        return f"{self.delta_K}.{self.f}"

    @property
    def d(self) -> int:
        """Square-free radicand of the CM field."""
        return squarefree_part(self.delta_K)

    def __str__(self) -> str:
        return f"R(disc={self.delta}, conductor {self.f}, h={self.h})"


def make_order(delta_K: int, f: int = 1) -> ImagQuadOrder:
    if not is_fundamental_discriminant(delta_K) or delta_K >= 0:
        raise InvalidDiscriminant(f"{delta_K} is not a negative fundamental discriminant")
    if f < 1:
        raise ValueError("conductor must be positive")
    return ImagQuadOrder(delta_K, f, class_number(f * f * delta_K))


def order_of_discriminant(delta: int) -> ImagQuadOrder:
    _check_disc(delta)
    d = squarefree_part(delta)
    dk = d if d % 4 == 1 else 4 * d
    f2 = delta // dk
    f = isqrt(f2)
    assert f * f == f2
    return make_order(dk, f)


def eichler_symbol(R: ImagQuadOrder, p: int) -> int:
    if R.f % p == 0:
        return 1
    return kronecker(R.delta_K, p)


@cache
def _load_table2() -> tuple[ImagQuadOrder, ...]:
    raw = json.loads(resources.files(__package__).joinpath("data/table2_orders.json").read_text())
    out = []
    for row in raw["orders"]:
        R = make_order(row["delta_K"], row["f"])
        if R.h != row["h_R"]:
            raise ValueError(f"table entry {row} disagrees with computed class number {R.h}")
        out.append(R)
    return tuple(out)


def table2_orders() -> list[ImagQuadOrder]:
    """The 42 orders of class number at most 2, validated on load."""
    return list(_load_table2())


# --- ring class fields ------------------------------------------------------


@dataclass(frozen=True)
class RingClassField:
    degree_over_Q: int
    quadratic_subfields: tuple[int, ...]

    def __contains__(self, d: int) -> bool:
        return d in self.quadratic_subfields

    def contains_field(self, other: "RingClassField") -> bool:
        return set(other.quadratic_subfields) <= set(self.quadratic_subfields)


def genus_character_fields(delta: int) -> list[int]:
    """Square-free d for each assigned genus character of discriminant delta."""
    out = []
    odd = delta
    while odd % 2 == 0:
        odd //= 2
    for p, _ in factor(odd):
        out.append(p if p % 4 == 1 else -p)
    if delta % 4 == 0:
        n = -delta // 4
        if n % 4 == 1:
            out.append(-1)
        elif n % 8 == 2:
            out.append(-2)
        elif n % 8 == 6:
            out.append(2)
        elif n % 8 == 4:
            out.append(-1)
        elif n % 8 == 0:
            out += [-1, 2]
    return out


def _product_mod_squares(ds) -> int:
    prod = 1
    for d in ds:
        prod *= d
    return squarefree_part(prod)


@cache
def ring_class_field(R: ImagQuadOrder) -> RingClassField:
    if R.h == 1:
        return RingClassField(2, (R.d,))
    if R.h != 2:
        raise UnsupportedOrder(f"ring class field for h = {R.h} is not supported")
    chars = genus_character_fields(R.delta)
    if len(chars) != 2:
        raise UnsupportedOrder(f"{R} has {len(chars)} genus characters; expected 2 when h = 2")
    subs = set()
    for k in (1, 2):
        for combo in combinations(chars, k):
            subs.add(_product_mod_squares(combo))
    subs.discard(1)
    if R.d not in subs:
        raise ValueError(f"genus field of {R} does not contain its CM field")
    return RingClassField(4, tuple(sorted(subs)))


def field_contained(d: int, H: RingClassField) -> bool:
    return d in H.quadratic_subfields
