"""The Atkin-Lehner group W(D, N) as an F_2-vector space of Hall divisors."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from math import gcd

from .arith import factor, hall_divisors, prime_divisors


class AmbientMismatch(ValueError):
    pass


class InvalidLevel(ValueError):
    pass


def check_ambient(D: int, N: int) -> None:
    fac = factor(D) if D > 1 else None
    if fac is None or any(e != 1 for _, e in fac) or len(fac) % 2:
        raise InvalidLevel(f"D = {D} must be a product of an even number of distinct primes")
    if N < 1 or gcd(D, N) != 1:
        raise InvalidLevel(f"N = {N} must be positive and coprime to D = {D}")


@dataclass(frozen=True, order=True)
class ALElement:
    D: int
    N: int
    m: int

    def __post_init__(self):
        DN = self.D * self.N
        if self.m < 1 or DN % self.m or gcd(self.m, DN // self.m) != 1:
            raise ValueError(f"{self.m} is not a Hall divisor of {DN}")

    def __mul__(self, other: "ALElement") -> "ALElement":
        return compose(self, other)

    def __str__(self) -> str:
        return f"w_{self.m}"


def compose(a: ALElement, b: ALElement) -> ALElement:
    if (a.D, a.N) != (b.D, b.N):
        raise AmbientMismatch(f"w_{a.m} on ({a.D},{a.N}) vs w_{b.m} on ({b.D},{b.N})")
    g = gcd(a.m, b.m)
    return ALElement(a.D, a.N, a.m * b.m // (g * g))


def _mul(m: int, n: int) -> int:
    g = gcd(m, n)
    return m * n // (g * g)


def span(ms) -> frozenset[int]:
    out = {1}
    for m in ms:
        out |= {_mul(m, x) for x in out}
    return frozenset(out)


def canonical_generators(elements) -> tuple[int, ...]:
    """Greedy basis: walk the sorted elements, keep each one outside the current span."""
    gens: list[int] = []
    cur = frozenset({1})
    for m in sorted(elements):
        if m not in cur:
            gens.append(m)
            cur = span(gens)
    return tuple(gens)


@dataclass(frozen=True)
class ALSubgroup:
    D: int
    N: int
    elements: tuple[int, ...]

    @property
    def generators(self) -> tuple[int, ...]:
        return canonical_generators(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def key(self) -> str:
        g = self.generators
        return f"{self.D}.{self.N}." + ("-".join(map(str, g)) if g else "1")

    def __contains__(self, m: int) -> bool:
        return m in self.elements

    def __str__(self) -> str:
        g = self.generators
        return "<" + ", ".join(f"w_{m}" for m in g) + ">" if g else "<1>"


def subgroup(D: int, N: int, gens) -> ALSubgroup:
    check_ambient(D, N)
    for m in gens:
        ALElement(D, N, m)
    return ALSubgroup(D, N, tuple(sorted(span(gens))))


def full_group(D: int, N: int) -> ALSubgroup:
    check_ambient(D, N)
    els = tuple(hall_divisors(D * N))
    assert len(els) == 2 ** len(prime_divisors(D * N))
    return ALSubgroup(D, N, els)


@cache
def subgroups(D: int, N: int) -> list[ALSubgroup]:
    """All subgroups, ordered by rank then by canonical generators."""
    els = full_group(D, N).elements
    seen: dict[frozenset[int], ALSubgroup] = {}
    frontier = [frozenset({1})]
    seen[frontier[0]] = ALSubgroup(D, N, (1,))
    while frontier:
        nxt = []
        for H in frontier:
            for m in els:
                if m in H:
                    continue
                K = frozenset(H | {_mul(m, x) for x in H})
                if K not in seen:
                    seen[K] = ALSubgroup(D, N, tuple(sorted(K)))
                    nxt.append(K)
        frontier = nxt
    return sorted(seen.values(), key=lambda G: (len(G.generators), G.generators))
