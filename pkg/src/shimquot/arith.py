"""Exact integer and rational primitives: Kronecker symbols, factorization,
square-free parts and rational square roots."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache, reduce
from math import gcd, isqrt
from typing import Iterator

# Deterministic Miller-Rabin witnesses; correct for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981
_TRIAL_LIMIT = 1 << 16
# Brent cycle length cap; roughly bounds the smallest factor found near 2^44
_RHO_CAP = 1 << 22


class OutOfRangeError(ValueError):
    pass


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), with the usual extension to n even and n < 0."""
    if n == 0:
        raise ValueError("kronecker symbol undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd positive n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise OutOfRangeError(f"primality of {n} is out of supported range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


@cache
def _small_primes() -> tuple[int, ...]:
    return tuple(primes_up_to(_TRIAL_LIMIT))


def next_prime(n: int) -> int:
    n = max(n + 1, 2)
    while not is_prime(n):
        n += 1
    return n


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        return self.sign * reduce(lambda acc, pe: acc * pe[0] ** pe[1], self.factors, 1)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __str__(self) -> str:
        parts = ["-1"] if self.sign < 0 else []
        parts += [str(p) if e == 1 else f"{p}^{e}" for p, e in self.factors]
        return " * ".join(parts) or "1"


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        y, r, q, g = 2, 1, 1, 1
        x = ys = 2
        f = lambda t: (t * t + c) % n  # noqa: E731
        while g == 1:
            if r > _RHO_CAP:
                raise OutOfRangeError(f"could not split {n} within the iteration budget")
            x = y
            for _ in range(r):
                y = f(y)
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = f(y)
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = f(ys)
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise OutOfRangeError(f"could not split {n}")


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


def factor(n: int) -> Factorization:
    """Complete factorization by trial division, then Miller-Rabin/Pollard on the cofactor."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    found: dict[int, int] = {}
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    _split(n, found)
    return Factorization(sign, tuple(sorted(found.items())))


def prime_divisors(n: int) -> list[int]:
    return factor(n).primes


def squarefree_part(n: int) -> int:
    """The unique square-free d with n/d a positive rational square."""
    if n == 0:
        raise ValueError("square-free part of 0 is undefined")
    fac = factor(n)
    d = fac.sign
    for p, e in fac:
        if e % 2:
            d *= p
    return d


def fundamental_discriminant(d: int) -> int:
    """Discriminant of Q(sqrt(d)) for square-free d != 1."""
    return d if d % 4 == 1 else 4 * d


def integer_sqrt(n: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def is_rational_square(q: Fraction | int) -> Fraction | None:
    """Nonnegative rational square root of q, or None."""
    q = Fraction(q)
    a = integer_sqrt(q.numerator)
    if a is None:
        return None
    b = integer_sqrt(q.denominator)
    if b is None:
        return None
    return Fraction(a, b)


def hall_divisors(n: int) -> list[int]:
    """Divisors m of n with gcd(m, n/m) = 1."""
    out = [1]
    for p, e in factor(n):
        out += [m * p**e for m in out]
    return sorted(out)


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return squarefree_part(d) == d
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree_part(m) == m
    return False
