"""Dense univariate polynomials over Z/Q as little-endian coefficient lists."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Poly = list  # little-endian, constant term first


def trim(a: Sequence) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a: Sequence) -> int:
    return len(trim(a)) - 1


def lead(a: Sequence):
    a = trim(a)
    return a[-1] if a else 0


def add(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def scale(a: Sequence, c) -> list:
    return trim([c * x for x in a])


def mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def deriv(a: Sequence) -> list:
    return trim([i * a[i] for i in range(1, len(a))])


def evaluate(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def hom_evaluate(a: Sequence, num: int, den: int, n: int) -> int:
    """den^n * a(num/den) for an integer polynomial with deg a <= n."""
    acc = 0
    pw = 1
    for i in range(n, -1, -1):
        c = a[i] if i < len(a) else 0
        acc += c * pw * num**i
        pw *= den
    return acc


def compose_linear(a: Sequence, c0, c1) -> list:
    """a(c0 + c1 t) as a polynomial in t."""
    out: list = []
    for c in reversed(a):
        out = add(mul(out, [c0, c1]), [c])
    return out


def reverse(a: Sequence, n: int) -> list:
    """t^n a(1/t)."""
    a = list(a) + [0] * (n + 1 - len(a))
    return trim(a[: n + 1][::-1])


def divmod_poly(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = [Fraction(x) for x in trim(a)]
    b = [Fraction(x) for x in trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        a = trim(a)
    return trim(q), a


def gcd_poly(a: Sequence, b: Sequence) -> list:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    if not a:
        return []
    c = Fraction(a[-1])
    return [Fraction(x) / c for x in a]


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def resultant(a: Sequence[int], b: Sequence[int]) -> int:
    a, b = trim(a), trim(b)
    da, db = len(a) - 1, len(b) - 1
    if da < 0 or db < 0:
        return 0
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    size = da + db
    rows = []
    for i in range(db):
        rows.append([0] * i + a[::-1] + [0] * (size - da - 1 - i))
    for i in range(da):
        rows.append([0] * i + b[::-1] + [0] * (size - db - 1 - i))
    return _bareiss_det(rows)


def discriminant(a: Sequence[int]) -> int:
    a = trim(a)
    n = len(a) - 1
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return 1
    r = resultant(a, deriv(a))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, a[-1])
    assert rem == 0
    return q


def content(a: Sequence[int]) -> int:
    from math import gcd

    g = 0
    for c in a:
        g = gcd(g, c)
    return g


# --- arithmetic mod p -------------------------------------------------------


def reduce_mod(a: Sequence[int], p: int) -> list[int]:
    return trim([c % p for c in a])


def divmod_mod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a, b = reduce_mod(a, p), reduce_mod(b, p)
    if not b:
        raise ZeroDivisionError("division by zero polynomial mod p")
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
        a = trim(a)
    return trim(q), a


def gcd_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = reduce_mod(a, p), reduce_mod(b, p)
    while b:
        a, b = b, divmod_mod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def mul_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    return reduce_mod(mul(a, b), p)


def squarefree_decomposition_mod(a: Sequence[int], p: int) -> list[tuple[list[int], int]]:
    """Yun-style decomposition a = c * prod g_i^i over F_p (p odd, deg a < p)."""
    a = reduce_mod(a, p)
    out = []
    da = reduce_mod(deriv(a), p)
    c = gcd_mod(a, da, p)
    w = divmod_mod(a, c, p)[0]
    i = 1
    while degree(w) > 0:
        y = gcd_mod(w, c, p)
        z = divmod_mod(w, y, p)[0]
        if degree(z) > 0:
            out.append((z, i))
        i += 1
        w = y
        c = divmod_mod(c, y, p)[0]
    if degree(c) > 0:
        # p-th power content; only possible when deg a >= p
        raise ValueError("inseparable factor in squarefree decomposition")
    return out


def format_poly(a: Sequence, var: str = "x") -> str:
    a = trim(a)
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(c) == 1:
            coef = ""
        else:
            coef = str(abs(c))
            if mono:
                coef += "*"
        sign = "-" if c < 0 else "+"
        terms.append((sign, coef + mono))
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, t in terms[1:]:
        s += f" {sign} {t}"
    return s
