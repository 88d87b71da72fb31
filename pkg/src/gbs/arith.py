"""Exact integer arithmetic helpers: gcd/Bezout, trial-division factoring, valuations.

Everything works on arbitrary-precision ints.  Factorization is trial
division with a hard cap; inputs in this toolkit are human-scale.
"""

import os
from fractions import Fraction

from .errors import FactorizationCapError

FACTOR_CAP_DEFAULT = 10**9


def _factor_cap() -> int:
    return int(os.environ.get("GBS_TOOLKIT_FACTOR_CAP", FACTOR_CAP_DEFAULT))


def gcd(a: int, b: int) -> int:
    """Positive gcd, gcd(0, 0) == 0."""
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def gcd_many(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


def lcm(a: int, b: int) -> int:
    """lcm with the sign of a*b (matches m*n / (m^n): may be negative)."""
    if a == 0 or b == 0:
        return 0
    return a * b // gcd(a, b)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g, coefficients small."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    r0, r1 = a, b
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if r0 < 0:
        r0, x0, y0 = -r0, -x0, -y0
    return r0, x0, y0


def factorize(n: int, cap: int | None = None) -> dict[int, int]:
    """Prime factorization of |n| as {p: exponent}.  Raises above the cap."""
    if n == 0:
        raise ValueError("cannot factor 0")
    if cap is None:
        cap = _factor_cap()
    n = abs(n)
    if n > cap:
        raise FactorizationCapError(f"|{n}| exceeds factorization cap {cap}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for q in (d, d + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_set(n: int) -> frozenset[int]:
    return frozenset(factorize(n))


def valuation(n: int, p: int) -> int:
    """p-adic valuation of n != 0."""
    if n == 0:
        raise ValueError("valuation of 0")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def sign(n: int) -> int:
    if n == 0:
        return 0
    return 1 if n > 0 else -1


def frac(m: int, n: int) -> Fraction:
    return Fraction(m, n)


def divides(a: int, b: int) -> bool:
    """a | b (a != 0)."""
    return b % a == 0
