"""Exact p-adic numbers: rationals and quadratic irrationals.

Rationals are plain :class:`fractions.Fraction` values. Quadratic irrationals
are ``(P + sqrt(D)) / Q`` with rational ``P, Q`` and a chosen p-adic square
root of ``D``. Every operation here is exact: digits of a quadratic number
are obtained from a Hensel-lifted root computed to exactly the precision the
request needs, and valuations of quadratic numbers are decided with the
norm identity ``v(P + r) + v(P - r) = v(P^2 - D)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import ConventionMismatch, DivisionByZero, NegativeValuation, NonResidue

INF = math.inf


class Convention(enum.Enum):
    STANDARD = "standard"  # digits 0 .. p-1
    BALANCED = "balanced"  # digits -(p-1)/2 .. (p-1)/2


class Branch(enum.Enum):
    PRINCIPAL = "principal"
    CONJUGATE = "conjugate"

    def flipped(self) -> "Branch":
        return Branch.CONJUGATE if self is Branch.PRINCIPAL else Branch.PRINCIPAL


class Exactness(enum.Enum):
    EXACT = "exact"
    WINDOW = "window"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class PadicContext:
    """Ambient parameters: the prime, the digit convention and budgets."""

    p: int
    convention: Convention = Convention.BALANCED
    precision_guard: int = 4
    step_budget: int = 10_000

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p!r}")
        if self.precision_guard < 1:
            raise ValueError("precision_guard must be >= 1")
        if self.step_budget < 1:
            raise ValueError("step_budget must be >= 1")

    @property
    def half(self) -> int:
        return (self.p - 1) // 2

    def with_convention(self, convention: Convention) -> "PadicContext":
        return PadicContext(self.p, convention, self.precision_guard, self.step_budget)

    def with_budget(self, step_budget: int) -> "PadicContext":
        return PadicContext(self.p, self.convention, self.precision_guard, step_budget)


@lru_cache(maxsize=1024)
def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@dataclass(frozen=True, eq=False)
class Quadratic:
    """The number ``(P + sqrt(D)) / Q`` for a fixed p-adic root of ``D``.

    ``branch`` selects the root: PRINCIPAL is the root whose first p-adic
    digit lies in ``1 .. (p-1)/2`` (equivalently, the smaller standard
    representative); CONJUGATE is its negative. Equality and hashing use the
    principal-branch form, so ``(P - sqrt(D))/Q == (-P + sqrt(D))/(-Q)``.
    """

    P: Fraction
    Q: Fraction
    D: int
    branch: Branch = Branch.PRINCIPAL

    def __post_init__(self):
        object.__setattr__(self, "P", Fraction(self.P))
        object.__setattr__(self, "Q", Fraction(self.Q))
        if self.Q == 0:
            raise ValueError("Q must be nonzero")
        if not isinstance(self.D, int):
            raise TypeError("D must be an integer")
        if _is_square(self.D):
            raise ValueError(f"D = {self.D} is a perfect square")

    def normalized(self) -> "Quadratic":
        if self.branch is Branch.PRINCIPAL:
            return self
        return Quadratic(-self.P, -self.Q, self.D)

    def conjugate(self) -> "Quadratic":
        return Quadratic(self.P, self.Q, self.D, self.branch.flipped())

    def coefficients(self) -> tuple[Fraction, Fraction]:
        """Return ``(u, v)`` with value ``u + v*r`` for the principal root r."""
        q = self.normalized()
        return q.P / q.Q, 1 / q.Q

    def _key(self):
        q = self.normalized()
        return (q.P, q.Q, q.D)

    def __eq__(self, other):
        if isinstance(other, Quadratic):
            return self._key() == other._key()
        return NotImplemented

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Quadratic(P={self.P}, Q={self.Q}, D={self.D}, branch={self.branch.name})"

    def __str__(self):
        tail = ",conjugate" if self.branch is Branch.CONJUGATE else ""
        return f"quad:{self.P},{self.Q},{self.D}{tail}"


QpNumber = Union[Fraction, Quadratic]


@dataclass(frozen=True)
class PAdicDigits:
    start_valuation: int
    digits: tuple[int, ...]
    exactness: Exactness

    def value(self, p: int) -> Fraction:
        """The rational number spelled by the digit window."""
        total = sum(c * Fraction(p) ** i for i, c in enumerate(self.digits))
        return total * Fraction(p) ** self.start_valuation


def as_number(x) -> QpNumber:
    if isinstance(x, Quadratic):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_number(x)
    raise TypeError(f"cannot interpret {x!r} as a p-adic number")


def parse_number(text: str) -> QpNumber:
    """Parse ``"a/b"``, ``"a"`` or ``"quad:P,Q,D[,conjugate]"``."""
    text = text.strip()
    if text.startswith("quad:"):
        parts = [t.strip() for t in text[5:].split(",")]
        if len(parts) not in (3, 4):
            raise ValueError(f"malformed quadratic literal {text!r}")
        branch = Branch.PRINCIPAL
        if len(parts) == 4:
            branch = Branch(parts[3].lower())
        return Quadratic(Fraction(parts[0]), Fraction(parts[1]), int(parts[2]), branch)
    return Fraction(text)


def format_number(x: QpNumber) -> str:
    return str(x)


# --- integer and rational helpers -------------------------------------------


def vp_int(n: int, p: int):
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_rational(x: Fraction, p: int):
    if x == 0:
        return INF
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def _unit_residue_rational(x: Fraction, p: int, k: int) -> int:
    """Residue of the unit ``x`` modulo ``p**k``."""
    m = p ** k
    return x.numerator * pow(x.denominator, -1, m) % m


def _symmetric(r: int, m: int) -> int:
    return r - m if r > m // 2 else r


# --- square roots -----------------------------------------------------------


def _sqrt_mod_p(a: int, p: int) -> int:
    """Tonelli-Shanks: some x with x^2 = a (mod p), a a nonzero residue."""
    a %= p
    if pow(a, (p - 1) // 2, p) != 1:
        raise NonResidue(f"{a} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


@lru_cache(maxsize=None)
def split_square(D: int, p: int) -> tuple[int, int]:
    """Write ``D = p**(2k) * D'`` with ``p`` not dividing ``D'``.

    Raises NonResidue when sqrt(D) is not in Q_p.
    """
    if D == 0:
        raise NonResidue("D = 0 has no irrational square root")
    e = vp_int(D, p)
    if e % 2:
        raise NonResidue(f"v_{p}({D}) = {e} is odd; sqrt({D}) is not in Q_{p}")
    unit = D // p ** e
    if pow(unit % p, (p - 1) // 2, p) != 1:
        raise NonResidue(f"{unit} is not a quadratic residue mod {p}")
    return e // 2, unit


@lru_cache(maxsize=4096)
def _unit_root(unit: int, p: int, k: int) -> int:
    """Principal root of the p-adic unit ``unit`` modulo ``p**k``."""
    if k <= 1:
        r = _sqrt_mod_p(unit, p)
        return min(r, p - r)
    half = _unit_root(unit, p, (k + 1) // 2)
    m = p ** k
    r = half - (half * half - unit) * pow(2 * half, -1, m)
    return r % m


def _root_approx(D: int, p: int, n: int) -> int:
    """Integer congruent to the principal sqrt(D) modulo ``p**n``."""
    k, unit = split_square(D, p)
    if n <= k:
        return 0
    # round the lift precision up so nearby requests share cache entries
    need = n - k
    prec = 1 << (need - 1).bit_length()
    return p ** k * _unit_root(unit, p, prec)


def sqrt_hensel(D: int, ctx: PadicContext, k: int, branch: Branch = Branch.PRINCIPAL) -> int:
    """Return ``s`` in ``[0, p**k)`` with ``s**2 = D (mod p**k)``.

    The principal root has first digit in ``1 .. (p-1)/2``; under the standard
    convention that is the root with the smaller first digit, under the
    balanced convention the one with a positive first digit, so both
    conventions select the same root.
    """
    if k < 1:
        raise ValueError("k must be positive")
    p = ctx.p
    s = _root_approx(D, p, k)
    if branch is Branch.CONJUGATE:
        s = -s
    return s % p ** k


# --- valuations and residues -----------------------------------------------


def _sign(branch: Branch) -> int:
    return 1 if branch is Branch.PRINCIPAL else -1


def _vp_numerator(x: Quadratic, p: int):
    """v_p(P + sigma*sqrt(D)) for the root chosen by the branch."""
    k, unit = split_square(x.D, p)
    if x.P == 0:
        return k
    vP = vp_rational(x.P, p)
    if vP != k:
        return min(vP, k)
    # same valuation: cancellation iff leading digits cancel
    lead_P = _unit_residue_rational(x.P / Fraction(p) ** k, p, 1)
    lead_r = _sign(x.branch) * _unit_root(unit, p, 1)
    if (lead_P + lead_r) % p:
        return k
    return vp_rational(x.P * x.P - x.D, p) - k


def _vp(x: QpNumber, p: int):
    if isinstance(x, Quadratic):
        return _vp_numerator(x, p) - vp_rational(x.Q, p)
    return vp_rational(Fraction(x), p)


def valuation(x, ctx: PadicContext):
    """p-adic valuation; ``INF`` for zero."""
    return _vp(as_number(x), ctx.p)


def _strip_unit_residue(num: int, den: int, p: int, k: int) -> int:
    """Residue modulo ``p**k`` of ``num/den`` once its p-power is removed."""
    e = vp_int(num, p)
    num //= p ** e
    f = vp_int(den, p)
    den //= p ** f
    m = p ** k
    return num * pow(den, -1, m) % m


def unit_residue(x: QpNumber, p: int, k: int) -> tuple:
    """Return ``(v, R)`` with ``v = v_p(x)`` and ``R = x / p**v (mod p**k)``."""
    v = _vp(x, p)
    if v == INF:
        return v, 0
    if not isinstance(x, Quadratic):
        x = Fraction(x)
        return v, _strip_unit_residue(x.numerator, x.denominator, p, k)
    vq = vp_rational(x.Q, p) + v
    kD, _ = split_square(x.D, p)
    n = max(k + vq, kD + 1, 1)
    s = _sign(x.branch) * _root_approx(x.D, p, n)
    # (P + s)/Q agrees with x to valuation >= n - v_p(Q) >= k + v, so after
    # removing p**v it is a unit with the right residue mod p**k
    P, Q = x.P, x.Q
    num = (P.numerator + s * P.denominator) * Q.denominator
    den = P.denominator * Q.numerator
    return v, _strip_unit_residue(num, den, p, k)


def _digits_of(r: int, p: int, count: int, balanced: bool) -> list[int]:
    out = []
    for _ in range(count):
        c = r % p
        if balanced and c > p // 2:
            c -= p
        out.append(c)
        r = (r - c) // p
    return out


def digits(x, ctx: PadicContext, count: int) -> PAdicDigits:
    """First ``count`` digits of ``x`` starting at its valuation."""
    if count < 1:
        raise ValueError("count must be >= 1")
    x = as_number(x)
    balanced = ctx.convention is Convention.BALANCED
    v, r = unit_residue(x, ctx.p, count)
    if v == INF:
        return PAdicDigits(0, (0,) * count, Exactness.EXACT)
    ds = tuple(_digits_of(r, ctx.p, count, balanced))
    exact = Exactness.WINDOW
    if not isinstance(x, Quadratic):
        window = PAdicDigits(v, ds, Exactness.EXACT)
        if window.value(ctx.p) == x:
            return window
    return PAdicDigits(v, ds, exact)


# --- floor functions --------------------------------------------------------


def _require(ctx: PadicContext, convention: Convention, what: str):
    if ctx.convention is not convention:
        raise ConventionMismatch(f"{what} needs the {convention.value} convention")


def _head(x: QpNumber, p: int, last_index: int, balanced: bool) -> Fraction:
    """Sum of the digits of ``x`` from its valuation up to ``last_index``."""
    v = _vp(x, p)
    if v > last_index:
        return Fraction(0)
    k = last_index - v + 1
    _, r = unit_residue(x, p, k)
    m = p ** k
    if balanced:
        r = _symmetric(r, m)
    return r * Fraction(p) ** v


def floor_s(x, ctx: PadicContext) -> Fraction:
    """Browkin's s: balanced digits of index <= 0."""
    _require(ctx, Convention.BALANCED, "s")
    return _head(as_number(x), ctx.p, 0, True)


def floor_t(x, ctx: PadicContext) -> Fraction:
    """Browkin's t: balanced digits of index <= -1."""
    _require(ctx, Convention.BALANCED, "t")
    return _head(as_number(x), ctx.p, -1, True)


def floor_ruban(x, ctx: PadicContext) -> Fraction:
    """Ruban's integer part: standard digits of index <= 0."""
    _require(ctx, Convention.STANDARD, "Ruban's floor")
    return _head(as_number(x), ctx.p, 0, False)


def constant_digit(x, ctx: PadicContext) -> int:
    """Digit of index 0 in the context convention (0 when v_p(x) > 0)."""
    x = as_number(x)
    v = _vp(x, ctx.p)
    if v > 0:
        return 0
    head = _head(x, ctx.p, 0, ctx.convention is Convention.BALANCED)
    low = _head(x, ctx.p, -1, ctx.convention is Convention.BALANCED)
    return int(head - low)


def floor_u(x, ctx: PadicContext) -> int:
    """The +-1/0 correction of the three-step algorithm."""
    _require(ctx, Convention.BALANCED, "u")
    x = as_number(x)
    if _vp(x, ctx.p) < 0:
        raise NegativeValuation("u is defined on Z_p only")
    c0 = constant_digit(x, ctx)
    if c0 == 0:
        return 0
    if c0 == -1 or c0 >= 2:
        return 1
    return -1


# --- field arithmetic in Q(sqrt(D)) ------------------------------------------


def _from_coefficients(u: Fraction, v: Fraction, D: int) -> QpNumber:
    if v == 0:
        return Fraction(u)
    return Quadratic(u / v, 1 / v, D)


def _coeffs(x: QpNumber, D: int | None):
    if isinstance(x, Quadratic):
        if D is not None and x.D != D:
            raise ValueError("mixed quadratic fields")
        return x.coefficients()
    return Fraction(x), Fraction(0)


def _field(x, y):
    D = None
    for z in (x, y):
        if isinstance(z, Quadratic):
            if D is not None and z.D != D:
                raise ValueError(f"cannot combine sqrt({D}) and sqrt({z.D})")
            D = z.D
    return D


def add(x, y) -> QpNumber:
    D = _field(x, y)
    (a, b), (c, d) = _coeffs(x, D), _coeffs(y, D)
    return _from_coefficients(a + c, b + d, D) if D is not None else a + c


def sub(x, y) -> QpNumber:
    D = _field(x, y)
    (a, b), (c, d) = _coeffs(x, D), _coeffs(y, D)
    return _from_coefficients(a - c, b - d, D) if D is not None else a - c


def mul(x, y) -> QpNumber:
    D = _field(x, y)
    if D is None:
        return Fraction(x) * Fraction(y)
    (a, b), (c, d) = _coeffs(x, D), _coeffs(y, D)
    return _from_coefficients(a * c + b * d * D, a * d + b * c, D)


def reciprocal(x) -> QpNumber:
    if isinstance(x, Quadratic):
        q = x.normalized()
        # Q / (P + r) = (-P + r) / ((D - P^2) / Q)
        return Quadratic(-q.P, (q.D - q.P * q.P) / q.Q, q.D)
    x = Fraction(x)
    if x == 0:
        raise DivisionByZero("reciprocal of zero")
    return 1 / x


def div(x, y) -> QpNumber:
    if not isinstance(y, Quadratic) and Fraction(y) == 0:
        raise DivisionByZero("division by zero")
    return mul(x, reciprocal(y))


def is_zero(x) -> bool:
    return not isinstance(x, Quadratic) and Fraction(x) == 0


def reciprocal_shift(x, a) -> QpNumber:
    """Return ``1 / (x - a)`` exactly.

    For ``x = (P + r)/Q`` the result is ``(P' + r)/Q'`` with ``P' = aQ - P``
    and ``Q' = (D - P'^2)/Q``; ``D`` and the root are unchanged.
    """
    x = as_number(x)
    a = Fraction(a)
    if isinstance(x, Quadratic):
        q = x.normalized()
        P1 = a * q.Q - q.P
        return Quadratic(P1, (q.D - P1 * P1) / q.Q, q.D)
    if x == a:
        raise DivisionByZero(f"reciprocal_shift: x equals a = {a}")
    return 1 / (x - a)


def same_number(x, y, p: int) -> bool:
    """Value equality, also across different representations of the root.

    ``(P1 + r1)/Q1`` equals ``(P2 + r2)/Q2`` iff the rational parts agree and
    ``r1/Q1 = r2/Q2``; the latter is checked through ``D1*Q2^2 = D2*Q1^2``
    plus a comparison of leading p-adic digits to fix the sign.
    """
    x, y = as_number(x), as_number(y)
    if not isinstance(x, Quadratic) or not isinstance(y, Quadratic):
        return x == y
    a, b = x.normalized(), y.normalized()
    if a.D == b.D:
        return a == b
    if a.P / a.Q != b.P / b.Q:
        return False
    if a.D * b.Q * b.Q != b.D * a.Q * a.Q:
        return False
    ra = Quadratic(Fraction(0), a.Q, a.D)
    rb = Quadratic(Fraction(0), b.Q, b.D)
    va, resa = unit_residue(ra, p, 1)
    vb, resb = unit_residue(rb, p, 1)
    return va == vb and resa == resb
