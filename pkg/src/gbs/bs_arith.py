"""Arithmetic deciders on Baumslag-Solitar parameters (m, n).

BS(m, n) = < a, t | t a^m t^-1 = a^n >, m, n nonzero.  Everything here is
pure integer arithmetic; graph-level questions live in quotients.py and
embeddings.py.
"""

from fractions import Fraction

from .arith import factorize, gcd, prime_set, sign, valuation
from .decision import Decision
from .errors import DecisionError
from .lattice import RationalMultGroup


def _require_nonzero(*values):
    if any(v == 0 for v in values):
        raise DecisionError("Baumslag-Solitar parameters must be nonzero")


def is_hopfian_bs(m: int, n: int) -> bool:
    """Hopfian iff m or n is a unit or |m|, |n| share their prime set."""
    _require_nonzero(m, n)
    if abs(m) == 1 or abs(n) == 1:
        return True
    return prime_set(m) == prime_set(n)


def exists_epi_bs(m: int, n: int, m2: int, n2: int) -> bool:
    """BS(m,n) ->> BS(m2,n2): (m,n) an integral multiple of (m2,n2) or
    (n2,m2), or the target is the Klein bottle group and m = n is even."""
    _require_nonzero(m, n, m2, n2)
    for a, b in ((m2, n2), (n2, m2)):
        if m % a == 0 and n % b == 0 and m // a == n // b:
            return True
    if (m2, n2) in ((1, -1), (-1, 1)) and m == n and m % 2 == 0:
        return True
    return False


def power_of_ratio(r: int, s: int, m: int, n: int):
    """Integer beta with r/s = (m/n)^beta in Q*, or None.  beta = 0 only for
    r/s = 1; sign compatibility is part of the test."""
    _require_nonzero(r, s, m, n)
    target = Fraction(r, s)
    base = Fraction(m, n)
    if base == 1:
        return 0 if target == 1 else None
    if base == -1:
        if target == 1:
            return 0
        return 1 if target == -1 else None
    if target == 1:
        return 0
    base_f = factorize(base.numerator)
    for p, e in factorize(base.denominator).items():
        base_f[p] = base_f.get(p, 0) - e
    tgt_f = factorize(target.numerator)
    for p, e in factorize(target.denominator).items():
        tgt_f[p] = tgt_f.get(p, 0) - e
    p0, d0 = next((p, e) for p, e in sorted(base_f.items()) if e != 0)
    if tgt_f.get(p0, 0) % d0 != 0:
        return None
    beta = tgt_f.get(p0, 0) // d0
    for p in set(base_f) | set(tgt_f):
        if tgt_f.get(p, 0) != beta * base_f.get(p, 0):
            return None
    if target != base**beta:  # covers the sign
        return None
    return beta


def embeds_bs(r: int, s: int, m: int, n: int) -> Decision:
    """BS(r,s) embeds into BS(m,n)?  Three-condition test; (r, s) must be
    non-elementary (route Z^2 and K through embeds_elementary)."""
    _require_nonzero(r, s, m, n)
    if abs(r) == 1 and abs(s) == 1:
        raise DecisionError("elementary BS(r,s): use embeds_elementary")
    beta = power_of_ratio(r, s, m, n)
    if beta is None:
        return Decision(False, "condition 1", (f"{r}/{s} is not a power of {m}/{n}",))
    for p in sorted(prime_set(r) | prime_set(s) | prime_set(m) | prime_set(n)):
        vm, vn = valuation(m, p), valuation(n, p)
        if vm == vn:
            alpha = vm
            if valuation(r, p) > alpha or valuation(s, p) > alpha:
                return Decision(
                    False, "condition 2", (f"p={p}, alpha={alpha}",)
                )
    if (abs(m) == 1 or abs(n) == 1) and not (abs(r) == 1 or abs(s) == 1):
        return Decision(False, "condition 3", ("target is solvable, source is not",))
    return Decision(True, f"conditions 1-3 hold (beta={beta})")


def embeds_elementary(which: str, m: int, n: int) -> bool:
    """which = 'Z2' or 'K': does it embed into BS(m, n)?"""
    _require_nonzero(m, n)
    if which == "Z2":
        solvable = (abs(m) == 1) != (abs(n) == 1)
        return not solvable
    if which == "K":
        if m == -n:
            return True
        if m % 2 == 0 and abs(n) != 1:
            return True
        if n % 2 == 0 and abs(m) != 1:
            return True
        return False
    raise DecisionError(f"unknown elementary group {which!r} (want 'Z2' or 'K')")


def is_rf_bs(m: int, n: int) -> bool:
    """Residually finite iff m = +-1, n = +-1, or m = +-n."""
    _require_nonzero(m, n)
    return abs(m) == 1 or abs(n) == 1 or abs(m) == abs(n)


def mult_group(generators) -> RationalMultGroup:
    """Multiplicative subgroup of Q* generated by the given rationals."""
    return RationalMultGroup(generators)
