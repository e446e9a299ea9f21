"""Periodic expansions of quadratic irrationals from Rédei-type identities.

A root of ``x^2 + h x - d`` has, for any integer ``z`` with
``N = z^2 + h z - d`` non-zero, the formal periodic expansion

    [z, -(h+2z)/N, h+2z, -(h+2z)/N, h+2z, ...]

whose tail fixed point satisfies the same polynomial. When ``N`` is a prime
``p`` and both ``z`` and ``h + 2z`` are small balanced residues, this is
exactly Browkin's second algorithm at ``p``.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import padic
from .algorithms import AlgorithmId, context_for, expand
from .analysis import Condition, check_convergence
from .cf import Expansion, Status, consecutive_gap_valuations, evaluate_periodic
from .errors import DegenerateZ, UnsupportedInput
from .padic import Convention, PadicContext, Quadratic

REDEI = "redei"


def _check_irreducible(h: int, d: int):
    disc = h * h + 4 * d
    if disc >= 0 and math.isqrt(disc) ** 2 == disc:
        raise UnsupportedInput(f"x^2 + {h}x - {d} is reducible over Q")


def _odd_prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            if f != 2:
                out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 2:
        out.append(n)
    return out


def default_prime(h: int, d: int, z: int) -> int:
    """Prime used when no context is given.

    The smallest odd prime dividing ``z^2 + hz - d`` but not ``h + 2z`` makes
    the expansion converge p-adically. Failing that, the smallest odd prime
    at which the discriminant is a non-zero square is used; the expansion is
    then only a formal identity there.
    """
    N = z * z + h * z - d
    for q in _odd_prime_factors(N):
        if (h + 2 * z) % q:
            return q
    disc = h * h + 4 * d
    q = 3
    while True:
        if padic.is_prime(q) and disc % q and pow(disc % q, (q - 1) // 2, q) == 1:
            return q
        q += 2


def redei_expansion(h: int, d: int, z: int, ctx: PadicContext | None = None) -> Expansion:
    """The periodic expansion ``[z, overline{-(h+2z)/N, h+2z}]`` with ``N = z^2 + hz - d``."""
    h, d, z = int(h), int(d), int(z)
    _check_irreducible(h, d)
    N = z * z + h * z - d
    if N == 0:
        raise DegenerateZ(f"z={z} is a root of x^2 + {h}x - {d}")
    k = h + 2 * z
    if k == 0:
        raise DegenerateZ(f"h + 2z = 0 for z={z}; the period map is the identity")
    if ctx is None:
        ctx = PadicContext(default_prime(h, d, z), Convention.BALANCED)
    # the block is kept as (-(h+2z)/N, h+2z) even when both entries agree
    qs = [Fraction(z), Fraction(-k, N), Fraction(k)]
    return Expansion.simple(qs, Status.periodic(1, 2), REDEI, ctx)


def polynomial_check(h: int, d: int, x) -> bool:
    """Exact test of ``x^2 + h x - d = 0``."""
    x = padic.as_number(x)
    val = padic.sub(padic.add(padic.mul(x, x), padic.mul(Fraction(h), x)), Fraction(d))
    return padic.is_zero(val)


def redei_value(h: int, d: int, z: int, ctx: PadicContext | None = None):
    return evaluate_periodic(redei_expansion(h, d, z, ctx))


def redei_convergence(e: Expansion) -> dict:
    """Which valuation patterns the quotients satisfy, plus ``v_p(B_nB_{n+1})`` over four periods."""
    upto = e.status.pre_period + 4 * e.status.period
    return {
        "patterns": {c.value: check_convergence(e, c, upto).holds for c in Condition},
        "gaps": consecutive_gap_valuations(e, upto),
    }


def _match_candidates(h: int, d: int, p: int) -> list[int]:
    # integer solutions of z^2 + h z - (d + p) = 0
    disc = h * h + 4 * (d + p)
    if disc < 0:
        return []
    s = math.isqrt(disc)
    if s * s != disc:
        return []
    if (s - h) % 2:
        return []
    return sorted({(-h + s) // 2, (-h - s) // 2}, key=lambda z: (abs(z), z))


def browkin2_redei_match(h: int, d: int, ctx: PadicContext) -> int | None:
    """A ``z`` with ``z^2 + hz - d = p`` and ``1 <= |z|, |h+2z| <= (p-1)/2``, if any."""
    _check_irreducible(h, d)
    p = ctx.p
    for z in _match_candidates(h, d, p):
        if 1 <= abs(z) <= ctx.half and 1 <= abs(h + 2 * z) <= ctx.half:
            return z
    return None


def root_near(h: int, d: int, z: int, p: int) -> Quadratic:
    """The root of ``x^2 + hx - d`` congruent to ``z`` modulo ``p``."""
    _check_irreducible(h, d)
    disc = h * h + 4 * d
    for branch in (padic.Branch.PRINCIPAL, padic.Branch.CONJUGATE):
        r = Quadratic(-h, 2, disc, branch)
        if padic._vp(padic.sub(r, Fraction(z)), p) >= 1:
            return r
    raise UnsupportedInput(f"no root of x^2 + {h}x - {d} is congruent to {z} mod {p}")


def browkin2_of_root(h: int, d: int, z: int, ctx: PadicContext, max_steps: int | None = None) -> Expansion:
    """Browkin II's own expansion of the root matched by ``z``."""
    ctx2 = context_for(AlgorithmId.BROWKIN2, ctx.p, step_budget=ctx.step_budget)
    return expand(root_near(h, d, z, ctx.p), AlgorithmId.BROWKIN2, ctx2, max_steps)


def same_terms(e1: Expansion, e2: Expansion, count: int | None = None) -> bool:
    """Quotient-by-quotient equality of two periodic expansions over ``count`` terms."""
    if not (e1.is_periodic and e2.is_periodic):
        return False
    if count is None:
        count = max(e1.status.pre_period, e2.status.pre_period) + 2 * e1.status.period * e2.status.period
    return all(e1.quotient(n) == e2.quotient(n) and e1.numerator(n + 1) == e2.numerator(n + 1) for n in range(count))
