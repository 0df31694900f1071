# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: F_p character sums and the modular square sieve."""

from libc.stdlib cimport malloc, free


cdef inline long long _mod(long long a, long long q) nogil:
    a %= q
    return a + q if a < 0 else a


def fp_affine_count(coeffs, long long p):
    """Sum over x in F_p of 1 + chi(F(x)), F given little-endian."""
    cdef Py_ssize_t n = len(coeffs), i
    cdef long long x, acc, total = 0
    cdef long long *c = <long long *> malloc(n * sizeof(long long))
    cdef char *sq = <char *> malloc(p * sizeof(char))
    if c == NULL or sq == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            c[i] = coeffs[i] % p
        for x in range(p):
            sq[x] = 0
        for x in range(1, p):
            sq[x * x % p] = 1
        with nogil:
            for x in range(p):
                acc = 0
                for i in range(n - 1, -1, -1):
                    acc = (acc * x + c[i]) % p
                if acc == 0:
                    total += 1
                elif sq[acc]:
                    total += 2
    finally:
        free(c)
        free(sq)
    return total


cdef long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    while b:
        a, b = b, a % b
    return a


def square_sieve(coeffs, int n, long long height, moduli):
    """Coprime (a, b), |a| <= height, 1 <= b <= height, with b^n F(a/b) a square
    modulo every modulus (a necessary condition for being an integer square)."""
    cdef Py_ssize_t k = len(moduli), deg = len(coeffs), i, j
    cdef long long a, b, q, acc, bp
    cdef long long *cm = <long long *> malloc(k * (n + 1) * sizeof(long long))
    cdef long long *qs = <long long *> malloc(k * sizeof(long long))
    cdef long long *bpow = <long long *> malloc(k * (n + 1) * sizeof(long long))
    cdef Py_ssize_t total_q = 0
    for j in range(k):
        total_q += moduli[j]
    cdef char *sq = <char *> malloc(total_q * sizeof(char))
    cdef Py_ssize_t *off = <Py_ssize_t *> malloc(k * sizeof(Py_ssize_t))
    if cm == NULL or qs == NULL or bpow == NULL or sq == NULL or off == NULL:
        raise MemoryError()
    out = []
    cdef bint ok
    try:
        total_q = 0
        for j in range(k):
            q = moduli[j]
            qs[j] = q
            off[j] = total_q
            for a in range(q):
                sq[total_q + a] = 0
            for a in range(q):
                sq[total_q + a * a % q] = 1
            total_q += q
            for i in range(n + 1):
                cm[j * (n + 1) + i] = (coeffs[i] % q) if i < deg else 0
        for b in range(1, height + 1):
            for j in range(k):
                q = qs[j]
                bp = 1
                for i in range(n + 1):
                    bpow[j * (n + 1) + i] = bp
                    bp = bp * (b % q) % q
            for a in range(-height, height + 1):
                if _gcd(a, b) != 1:
                    continue
                ok = True
                for j in range(k):
                    q = qs[j]
                    acc = 0
                    # Horner in a, with b powers folded in: sum c_i a^i b^(n-i)
                    for i in range(n, -1, -1):
                        acc = _mod(acc * a + cm[j * (n + 1) + i] * bpow[j * (n + 1) + n - i], q)
                    if not sq[off[j] + acc]:
                        ok = False
                        break
                if ok:
                    out.append((a, b))
    finally:
        free(cm)
        free(qs)
        free(bpow)
        free(sq)
        free(off)
    return out
