"""Small exact-arithmetic helpers used throughout the package.

Everything here is pure integer/`fractions.Fraction` arithmetic; square roots
are produced as directed rational bounds so that callers can keep comparisons
sound in the presence of irrational norms.
"""

from __future__ import annotations

import math
from fractions import Fraction


def monus(a, b):
    """Truncated subtraction on naturals: a - b, floored at zero."""
    return a - b if a > b else 0


def ceil_q(q):
    """Ceiling of a rational as an int."""
    return -((-Fraction(q)).__floor__())


def floor_q(q):
    return Fraction(q).__floor__()


def parse_rational(text):
    """Parse 'num/den' or decimal strings into a Fraction."""
    return Fraction(str(text).strip())


def format_rational(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def ceil_sqrt(q):
    """Least integer n >= sqrt(q) for a nonnegative rational q."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return 0
    # smallest n with n*n >= q
    n = math.isqrt(ceil_q(q))
    while n * n < q:
        n += 1
    while n >= 1 and (n - 1) * (n - 1) >= q:
        n -= 1
    return n


def sqrt_bounds(q, prec_bits=64):
    """Directed rational bounds (lo, hi) with lo <= sqrt(q) <= hi.

    Exact when q is a perfect rational square.  The gap is below 2^-prec_bits
    relative to the scaled integer square root.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return Fraction(0), Fraction(0)
    num, den = q.numerator, q.denominator
    scale = 1 << prec_bits
    # sqrt(num/den) = sqrt(num*den)/den
    target = num * den * scale * scale
    r = math.isqrt(target)
    lo = Fraction(r, den * scale)
    if r * r == target:
        return lo, lo
    hi = Fraction(r + 1, den * scale)
    return lo, hi


def sqrt_lb(q, prec_bits=64):
    return sqrt_bounds(q, prec_bits)[0]


def sqrt_ub(q, prec_bits=64):
    return sqrt_bounds(q, prec_bits)[1]
