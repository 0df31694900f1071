"""Points over R and over the p-adic completions.

For Q_p we look for t in Z_p with G(t) a square in Q_p, splitting Z_p into
residue disks and recursing only where the residue data cannot decide.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import polys
from .arith import factor, is_prime, kronecker, primes_up_to, valuation
from .curves import CurveModel


class DepthExceeded(RuntimeError):
    """The disk recursion went past its proven depth bound (a bug, not an answer)."""


# --- real place -------------------------------------------------------------


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_sequence(F) -> list[list[Fraction]]:
    P0 = [Fraction(c) for c in polys.trim(F)]
    seq = [P0, [Fraction(c) for c in polys.deriv(P0)]]
    while polys.degree(seq[-1]) > 0:
        _, r = polys.divmod_poly(seq[-2], seq[-1])
        r = polys.trim(r)
        if not r:
            break
        seq.append(polys.scale(r, -1))
    return seq


def _variations(signs) -> int:
    s = [x for x in signs if x]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def count_real_roots(F) -> int:
    """Distinct real roots of F, by Sturm's theorem."""
    seq = sturm_sequence(F)
    at_pinf = [_sign(polys.lead(P)) for P in seq]
    at_minf = [_sign(polys.lead(P)) * (-1) ** polys.degree(P) for P in seq]
    return _variations(at_minf) - _variations(at_pinf)


def real_solvable(model: CurveModel) -> bool:
    F = model.F
    if model.deg_F % 2 or F[-1] > 0:
        return True
    # F < 0 at both ends: a real point exists iff F reaches 0 somewhere
    return count_real_roots(F) > 0


# --- p-adic places ----------------------------------------------------------


def _is_unit_square(u: int, p: int) -> bool:
    if p == 2:
        return u % 8 == 1
    return kronecker(u, p) == 1


def _shift_scale(G, r: int, p: int) -> list[int]:
    """G(r + p t) as an integer polynomial in t."""
    return [int(c) for c in polys.compose_linear(G, r, p)]


def _content_val(G, p: int) -> int:
    return min(valuation(c, p) for c in G if c)


def _disk_has_square(G, p: int, depth: int, cap: int) -> bool:
    """Is there t in Z_p with G(t) in Q_p^2 (zero allowed)?"""
    G = polys.trim(G)
    if not G:
        return True
    if depth > cap:
        raise DepthExceeded(f"residue-disk recursion at p = {p} passed depth {cap}")
    v = _content_val(G, p)
    if v >= 2:
        G = [c // p ** (2 * (v // 2)) for c in G]
        v %= 2
    if v == 1:
        # G = p G1: need G1(t) = 0 mod p, then continue inside that disk
        G1 = [c // p for c in G]
        for r in range(p):
            if polys.evaluate(G1, r) % p == 0:
                if _disk_has_square(_shift_scale(G, r, p), p, depth + 1, cap):
                    return True
        return False
    dG = polys.deriv(G)
    for r in range(p):
        val = polys.evaluate(G, r)
        if val % p:
            if p == 2:
                if any(polys.evaluate(G, r + 2 * k) % 8 == 1 for k in range(4)):
                    return True
            elif _is_unit_square(val, p):
                return True
            continue
        # smooth root of G in the disk: v(G(r)) > 2 v(G'(r)) lifts by Hensel
        d = polys.evaluate(dG, r)
        if val == 0 or (d and valuation(val, p) > 2 * valuation(d, p)):
            return True
        if _disk_has_square(_shift_scale(G, r, p), p, depth + 1, cap):
            return True
    return False


def depth_cap(model: CurveModel, p: int) -> int:
    """Recursion bound for the disk search at p.

    The binary form F(x, z) has discriminant lc(F)^2 disc(F) when deg F is odd,
    so both charts are covered by v_p(disc) + 2 v_p(lc) plus slack.
    """
    v = valuation(model.disc, p) + 2 * valuation(model.lc, p)
    return v + (4 if p == 2 else 2)


def qp_solvable(model: CurveModel, p: int) -> bool:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if model.is_good_prime(p):
        # smooth reduction: any F_p point lifts
        return model.count_points_mod_p(p).count > 0
    cap = depth_cap(model, p)
    F = list(model.F)
    if _disk_has_square(F, p, 0, cap):
        return True
    # x = 1/z with z in p Z_p: Y^2 = F(1, z) = rev(F)(z), z = p s
    rev = polys.reverse(F, model.n)
    return _disk_has_square(_shift_scale(rev, 0, p), p, 0, cap)


@dataclass
class LocalReport:
    real_solvable: bool
    bad_primes_checked: list[tuple[int, bool]] = field(default_factory=list)
    small_good_primes_checked: list[tuple[int, bool]] = field(default_factory=list)
    good_prime_cutoff: int = 0
    everywhere_locally_solvable: bool = False

    def to_json(self) -> dict:
        d = asdict(self)
        d["bad_primes_checked"] = [list(t) for t in self.bad_primes_checked]
        d["small_good_primes_checked"] = [list(t) for t in self.small_good_primes_checked]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "LocalReport":
        return cls(
            d["real_solvable"],
            [tuple(t) for t in d["bad_primes_checked"]],
            [tuple(t) for t in d["small_good_primes_checked"]],
            d["good_prime_cutoff"],
            d["everywhere_locally_solvable"],
        )


def everywhere_locally_solvable(model: CurveModel) -> LocalReport:
    bad = sorted(set(factor(2 * model.disc * model.lc).primes))
    cutoff = 4 * model.genus**2
    small = [p for p in primes_up_to(cutoff) if p not in bad]
    rep = LocalReport(real_solvable(model), good_prime_cutoff=cutoff)
    rep.bad_primes_checked = [(p, qp_solvable(model, p)) for p in bad]
    rep.small_good_primes_checked = [(p, qp_solvable(model, p)) for p in small]
    rep.everywhere_locally_solvable = rep.real_solvable and all(
        ok for _, ok in rep.bad_primes_checked + rep.small_good_primes_checked
    )
    return rep
