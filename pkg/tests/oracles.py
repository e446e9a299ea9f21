"""Independent reference computations used by the tests.

Nothing here imports padiccf: digits come from schoolbook long division,
square roots from exhaustive search, lattices from enumeration.
"""

from fractions import Fraction
from itertools import product


def valuation(x: Fraction, p: int):
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    a, b = x.numerator, x.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def long_division_digits(x: Fraction, p: int, count: int, balanced: bool):
    """``(v, digits)`` of a non-zero rational by repeated digit extraction.

    Each digit is found by trying every candidate ``c`` until ``(a - c*b)``
    is divisible by ``p``.
    """
    x = Fraction(x)
    v = valuation(x, p)
    y = x / Fraction(p) ** v
    a, b = y.numerator, y.denominator
    cands = range(-(p - 1) // 2, (p - 1) // 2 + 1) if balanced else range(p)
    out = []
    for _ in range(count):
        c = next(c for c in cands if (a - c * b) % p == 0)
        out.append(c)
        a = (a - c * b) // p
    return v, out


def head_from_digits(x: Fraction, p: int, last_index: int, balanced: bool) -> Fraction:
    """Sum of the digits ``c_i p^i`` with ``i <= last_index``."""
    v = valuation(x, p)
    if v is None or v > last_index:
        return Fraction(0)
    _, ds = long_division_digits(x, p, last_index - v + 1, balanced)
    return sum(c * Fraction(p) ** (v + i) for i, c in enumerate(ds))


def sqrt_by_search(D: int, p: int, k: int):
    """All roots of ``r^2 = D (mod p^k)`` found by exhaustive search."""
    m = p ** k
    return [r for r in range(m) if (r * r - D) % m == 0]


def principal_sqrt_by_search(D: int, p: int, k: int) -> int:
    """The root mod ``p^k`` (``p`` not dividing D) whose residue mod ``p`` is in ``1..(p-1)/2``."""
    roots = sqrt_by_search(D, p, k)
    return next(r for r in roots if 1 <= r % p <= (p - 1) // 2)


def quadratic_residue_mod(P: Fraction, Q: Fraction, r: int, p: int, k: int):
    """``(P + r)/Q`` reduced mod ``p^k``, with ``r`` an integer approximation of the root."""
    m = p ** k
    y = (Fraction(P) + r) / Fraction(Q)
    return y.numerator * pow(y.denominator, -1, m) % m


def eval_finite_cf(quotients, numerators=None) -> Fraction:
    """Back-substitution ``a_0 + b_1/(a_1 + b_2/(...))``."""
    qs = [Fraction(a) for a in quotients]
    bs = [Fraction(1)] * (len(qs) - 1) if numerators is None else [Fraction(b) for b in numerators]
    val = qs[-1]
    for j in range(len(qs) - 2, -1, -1):
        val = qs[j] + bs[j] / val
    return val


def lattice_shortest(x: Fraction, p: int, n: int, bound: int):
    """Shortest non-zero ``(A, B)`` with ``v_p(Bx - A) >= n`` among ``|A|, |B| <= bound``."""
    x = Fraction(x)
    best = None
    for A, B in product(range(-bound, bound + 1), repeat=2):
        if A == 0 and B == 0:
            continue
        diff = B * x - A
        if diff != 0 and (valuation(diff, p) < n):
            continue
        norm = A * A + B * B
        if best is None or norm < best[0]:
            best = (norm, (A, B))
    return best


def in_lattice_residue(r: int, p: int, n: int, vec) -> bool:
    A, B = vec
    return (B * r - A) % p ** n == 0
