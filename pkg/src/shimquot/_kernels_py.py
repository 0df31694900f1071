"""Pure-Python versions of the compiled kernels; same signatures and results."""

from __future__ import annotations

from math import gcd


def fp_affine_count(coeffs, p):
    c = [x % p for x in coeffs]
    squares = {x * x % p for x in range(1, p)}
    total = 0
    for x in range(p):
        acc = 0
        for ci in reversed(c):
            acc = (acc * x + ci) % p
        if acc == 0:
            total += 1
        elif acc in squares:
            total += 2
    return total


def square_sieve(coeffs, n, height, moduli):
    tables = []
    for q in moduli:
        sq = bytearray(q)
        for a in range(q):
            sq[a * a % q] = 1
        cm = [(coeffs[i] % q) if i < len(coeffs) else 0 for i in range(n + 1)]
        tables.append((q, sq, cm))
    out = []
    for b in range(1, height + 1):
        rows = []
        for q, sq, cm in tables:
            bpow = [pow(b, n - i, q) for i in range(n + 1)]
            rows.append((q, sq, [cm[i] * bpow[i] % q for i in range(n + 1)]))
        for a in range(-height, height + 1):
            if gcd(a, b) != 1:
                continue
            for q, sq, w in rows:
                acc = 0
                for i in range(n, -1, -1):
                    acc = (acc * a + w[i]) % q
                if not sq[acc]:
                    break
            else:
                out.append((a, b))
    return out
