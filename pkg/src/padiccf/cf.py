"""Algorithm-independent continued fraction machinery.

An :class:`Expansion` stores partial quotients ``a_n`` and partial
numerators ``b_n``. ``partial_numerators[j]`` is ``b_{j+1}``, the numerator
that links ``a_j`` to the next complete quotient, so a simple expansion has
all entries equal to 1. Periodic expansions store the pre-period and exactly
one period; later terms are synthesized on demand.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import padic
from .errors import DivisionByZero, IndexBeyondFinite, InconsistentPeriod, NonResidue, NotFinite
from .padic import INF, Convention, PadicContext, QpNumber, Quadratic


class StatusKind(enum.Enum):
    FINITE = "finite"
    PERIODIC = "periodic"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class Status:
    kind: StatusKind
    pre_period: int | None = None
    period: int | None = None
    steps: int | None = None

    @classmethod
    def finite(cls):
        return cls(StatusKind.FINITE)

    @classmethod
    def periodic(cls, pre_period: int, period: int):
        if pre_period < 0 or period < 1:
            raise ValueError("need pre_period >= 0 and period >= 1")
        return cls(StatusKind.PERIODIC, pre_period, period)

    @classmethod
    def truncated(cls, steps: int):
        return cls(StatusKind.TRUNCATED, steps=steps)

    def __str__(self):
        if self.kind is StatusKind.PERIODIC:
            return f"periodic({self.pre_period},{self.period})"
        if self.kind is StatusKind.TRUNCATED:
            return f"truncated({self.steps})"
        return "finite"

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if self.kind is StatusKind.PERIODIC:
            out["pre_period"] = self.pre_period
            out["period"] = self.period
        elif self.kind is StatusKind.TRUNCATED:
            out["steps"] = self.steps
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Status":
        kind = StatusKind(d["kind"])
        return cls(kind, d.get("pre_period"), d.get("period"), d.get("steps"))


def _pair(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


@dataclass(frozen=True)
class Expansion:
    partial_quotients: tuple[Fraction, ...]
    partial_numerators: tuple[Fraction, ...]
    status: Status
    algorithm: str
    context: PadicContext

    def __post_init__(self):
        q = tuple(Fraction(a) for a in self.partial_quotients)
        b = tuple(Fraction(x) for x in self.partial_numerators)
        object.__setattr__(self, "partial_quotients", q)
        object.__setattr__(self, "partial_numerators", b)
        if not q:
            raise ValueError("an expansion needs at least one quotient")
        st = self.status
        if st.kind is StatusKind.PERIODIC:
            if st.pre_period + st.period > len(q):
                raise ValueError("stored quotients are shorter than pre-period + period")
            if len(b) < len(q):
                raise ValueError("periodic expansions need one numerator per quotient")
            for j in range(st.pre_period + st.period, len(q)):
                if q[j] != q[j - st.period]:
                    raise ValueError("stored tail does not repeat the period block")
        elif len(b) < len(q) - 1:
            raise ValueError("missing partial numerators")

    @classmethod
    def simple(cls, quotients: Sequence, status: Status, algorithm: str, context: PadicContext):
        n = len(quotients) if status.kind is not StatusKind.FINITE else len(quotients) - 1
        return cls(tuple(quotients), (Fraction(1),) * n, status, algorithm, context)

    @property
    def is_finite(self) -> bool:
        return self.status.kind is StatusKind.FINITE

    @property
    def is_periodic(self) -> bool:
        return self.status.kind is StatusKind.PERIODIC

    @property
    def is_simple(self) -> bool:
        return all(b == 1 for b in self.partial_numerators)

    def __len__(self):
        return len(self.partial_quotients)

    def _fold(self, j: int) -> int:
        st = self.status
        if st.kind is StatusKind.PERIODIC and j >= st.pre_period:
            return st.pre_period + (j - st.pre_period) % st.period
        return j

    def quotient(self, n: int) -> Fraction:
        j = self._fold(n)
        if n < 0 or j >= len(self.partial_quotients):
            raise IndexBeyondFinite(f"quotient {n} is beyond the expansion")
        return self.partial_quotients[j]

    def numerator(self, n: int) -> Fraction:
        """``b_n`` for ``n >= 1``; ``b_0`` is taken to be 1."""
        if n == 0:
            return Fraction(1)
        j = self._fold(n - 1)
        if n < 0 or j >= len(self.partial_numerators):
            raise IndexBeyondFinite(f"numerator {n} is beyond the expansion")
        return self.partial_numerators[j]

    def available(self, n: int) -> bool:
        """True if quotients 0..n can be produced."""
        return self.is_periodic or n < len(self.partial_quotients)

    def quotients(self, count: int) -> list[Fraction]:
        return [self.quotient(n) for n in range(count)]

    # -- serialization --

    def to_dict(self) -> dict:
        return {
            "p": self.context.p,
            "convention": self.context.convention.value,
            "precision_guard": self.context.precision_guard,
            "step_budget": self.context.step_budget,
            "algorithm": str(self.algorithm),
            "quotients": [_pair(a) for a in self.partial_quotients],
            "numerators": [_pair(b) for b in self.partial_numerators],
            "status": self.status.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Expansion":
        ctx = PadicContext(
            d["p"],
            Convention(d["convention"]),
            d.get("precision_guard", 4),
            d.get("step_budget", 10_000),
        )
        return cls(
            tuple(Fraction(n, m) for n, m in d["quotients"]),
            tuple(Fraction(n, m) for n, m in d["numerators"]),
            Status.from_dict(d["status"]),
            d["algorithm"],
            ctx,
        )

    @classmethod
    def from_json(cls, text: str) -> "Expansion":
        return cls.from_dict(json.loads(text))

    def text(self) -> str:
        q = [str(a) for a in self.partial_quotients]
        st = self.status
        if st.kind is StatusKind.PERIODIC:
            head = ", ".join(q[: st.pre_period])
            block = ", ".join(q[st.pre_period : st.pre_period + st.period])
            return f"[{head} | {block}]" if head else f"[| {block}]"
        if st.kind is StatusKind.TRUNCATED:
            return "[" + ", ".join(q + ["..."]) + "]"
        return "[" + ", ".join(q) + "]"


@dataclass(frozen=True)
class Convergent:
    A: Fraction
    B: Fraction
    index: int

    @property
    def value(self) -> Fraction:
        if self.B == 0:
            raise DivisionByZero(f"convergent {self.index} has B = 0")
        return self.A / self.B


def convergents(e: Expansion, upto: int) -> list[Convergent]:
    """Convergents ``(A_n, B_n)`` for ``n = 0 .. upto``."""
    if not e.available(upto):
        raise IndexBeyondFinite(f"expansion has {len(e)} quotients, asked for index {upto}")
    A2, A1 = Fraction(0), Fraction(1)  # A_{-2}, A_{-1}
    B2, B1 = Fraction(1), Fraction(0)
    out = []
    for n in range(upto + 1):
        a, b = e.quotient(n), e.numerator(n)
        A = a * A1 + b * A2
        B = a * B1 + b * B2
        out.append(Convergent(A, B, n))
        A2, A1, B2, B1 = A1, A, B1, B
    return out


Matrix = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


def _matmul(m: Matrix, n: Matrix) -> Matrix:
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def matrix_form(e: Expansion, n: int) -> Matrix:
    """``[[A_n, A_{n-1}], [B_n, B_{n-1}]]`` as the product of elementary factors."""
    if not e.available(n):
        raise IndexBeyondFinite(f"expansion has {len(e)} quotients, asked for index {n}")
    one, zero = Fraction(1), Fraction(0)
    m: Matrix = ((e.quotient(0), one), (one, zero))
    for i in range(1, n + 1):
        m = _matmul(m, ((one, zero), (zero, e.numerator(i))))
        m = _matmul(m, ((e.quotient(i), one), (one, zero)))
    return m


def evaluate_finite(e: Expansion) -> Fraction:
    if not e.is_finite:
        raise NotFinite(f"expansion status is {e.status}")
    q = e.partial_quotients
    value = q[-1]
    for i in range(len(q) - 2, -1, -1):
        if value == 0:
            raise DivisionByZero(f"tail value vanishes at index {i + 1}")
        value = q[i] + e.numerator(i + 1) / value
    return value


def _apply_head(e: Expansion, tail: QpNumber, upto: int) -> QpNumber:
    """Value of ``[a_0, ..., a_{upto-1}, tail]`` (with the stored numerators)."""
    x = tail
    for i in range(upto - 1, -1, -1):
        if padic.is_zero(x):
            raise DivisionByZero(f"tail value vanishes at index {i + 1}")
        x = padic.add(e.quotient(i), padic.div(e.numerator(i + 1), x))
    return x


def _square_part(n: int, limit: int = 1 << 16) -> int:
    """Largest ``f`` with ``f*f | n`` found by trial division up to ``limit``."""
    n = abs(n)
    f = 1
    d = 2
    while d <= limit and d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
            f *= d
        d += 1 if d == 2 else 2
    # large square factors: look for a small cofactor d with n/d a perfect square
    for d in range(1, min(n, limit) + 1):
        if n % d == 0:
            r = math.isqrt(n // d)
            if r * r == n // d:
                return f * r
    return f


def simplify_radicand(x: QpNumber, p: int) -> QpNumber:
    """Rewrite ``(P + sqrt(D))/Q`` over ``D/f^2`` for a square factor ``f^2`` of D."""
    if not isinstance(x, Quadratic):
        return x
    x = x.normalized()
    f = _square_part(x.D)
    if f == 1:
        return x
    D0 = x.D // (f * f)
    # sqrt(D) = eps * f * sqrt(D0); eps fixed by the leading p-adic digit
    cand = Quadratic(x.P / f, x.Q / f, D0)
    if padic.same_number(cand, x, p):
        return cand
    return Quadratic(-x.P / f, -x.Q / f, D0)


def _fixed_point_candidates(M: Matrix, p: int) -> list[QpNumber]:
    (A, A2), (B, B2) = M
    if B == 0:
        if B2 == A:
            raise InconsistentPeriod("period map is a translation; no finite fixed point")
        return [A2 / (B2 - A)]
    disc = (B2 - A) ** 2 + 4 * B * A2
    N = disc.numerator * disc.denominator
    d = disc.denominator
    if N >= 0 and math.isqrt(N) ** 2 == N:
        s = Fraction(math.isqrt(N), d)
        roots = {(A - B2 + s) / (2 * B), (A - B2 - s) / (2 * B)}
        return sorted(roots)
    try:
        padic.split_square(N, p)
    except NonResidue as exc:
        raise InconsistentPeriod(f"period discriminant has no square root in Q_{p}") from exc
    # (A - B2 +- sqrt(N)/d)/(2B) with sqrt(N) = f sqrt(N0), N0 free of small squares
    f = _square_part(N)
    N0 = N // (f * f)
    P, Q = (A - B2) * d / f, 2 * B * d / f
    return [Quadratic(P, Q, N0), Quadratic(P, Q, N0, padic.Branch.CONJUGATE).normalized()]


def _multiplier_valuation(M: Matrix, y: QpNumber, p: int):
    """v_p of the derivative of the period map at the fixed point ``y``."""
    (A, A2), (B, B2) = M
    det = A * B2 - A2 * B
    denom = padic.add(padic.mul(B, y), B2)
    return padic.vp_rational(det, p) - 2 * padic._vp(denom, p)


def _surd_sign(a: Fraction, b: Fraction, N: int) -> int:
    """Exact sign of the real number ``a + b*sqrt(N)`` for ``N > 0``."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sa == 0 or sb == 0 or sa == sb:
        return sa or sb
    return sa if a * a > b * b * N else -sa


def _real_attracting(M: Matrix, y: QpNumber) -> bool:
    """Whether ``y``'s real image is an attracting fixed point of ``M``.

    Uses the embedding that sends ``sqrt(D)`` to the positive real root and
    tests ``(B y + B2)^2 > |det M|`` exactly.
    """
    if not isinstance(y, Quadratic) or y.D < 0:
        return False
    (A, A2), (B, B2) = M
    y = y.normalized()
    det = abs(A * B2 - A2 * B)
    u = B * y.P + B2 * y.Q
    v = B
    # (u + v sqrt(D))^2 - det Q^2 = (u^2 + v^2 D - det Q^2) + 2uv sqrt(D)
    return _surd_sign(u * u + v * v * y.D - det * y.Q * y.Q, 2 * u * v, y.D) > 0


def _reproduces(e: Expansion, y: QpNumber) -> bool:
    from .algorithms import ExpansionState, step, AlgorithmId

    alg = AlgorithmId(e.algorithm)
    pre, period = e.status.pre_period, e.status.period
    state = ExpansionState(y, pre)
    for j in range(period):
        a, b, state = step(state, alg, e.context)
        if a != e.quotient(pre + j) or b != e.numerator(pre + j + 1):
            return False
        if state.finished:
            return False
    return state.alpha == y


def _known_algorithm(name: str) -> bool:
    from .algorithms import AlgorithmId

    try:
        AlgorithmId(name)
    except ValueError:
        return False
    return True


def evaluate_periodic(e: Expansion) -> QpNumber:
    """Exact value of a periodic expansion.

    The tail value is a fixed point of the period's Moebius map. Candidates
    are tried attracting-first; when the expansion records one of the
    package's algorithms the candidate must also regenerate one period under
    that algorithm, otherwise the most attracting fixed point is taken.
    """
    if not e.is_periodic:
        raise NotFinite(f"expansion status is {e.status}, not periodic")
    p = e.context.p
    pre, period = e.status.pre_period, e.status.period
    one, zero = Fraction(1), Fraction(0)
    M: Matrix = ((one, zero), (zero, one))
    for j in range(pre, pre + period):
        M = _matmul(M, ((e.quotient(j), e.numerator(j + 1)), (one, zero)))
    cands = _fixed_point_candidates(M, p)
    scored = sorted(cands, key=lambda y: -_multiplier_valuation(M, y, p))
    if _known_algorithm(e.algorithm):
        chosen = next((y for y in scored if _reproduces(e, y)), None)
    else:
        chosen = scored[0]
        if _multiplier_valuation(M, chosen, p) <= 0:
            # not convergent in Q_p: the value is only formal, and the fixed
            # point attracting in the real embedding is preferred
            chosen = next((y for y in scored if _real_attracting(M, y)), chosen)
    if chosen is None:
        raise InconsistentPeriod("no fixed point of the period map reproduces the expansion")
    value = _apply_head(e, chosen, pre)
    return simplify_radicand(value, p)


def evaluate(e: Expansion) -> QpNumber:
    """Value of a finite or periodic expansion."""
    if e.is_finite:
        return evaluate_finite(e)
    return evaluate_periodic(e)


def approximation_profile(e: Expansion, x, upto: int) -> list:
    """``v_p(x - A_k/B_k)`` for ``k = 0 .. upto``; INF where the convergent equals x.

    Entries are None where ``B_k = 0``.
    """
    x = padic.as_number(x)
    p = e.context.p
    out = []
    for c in convergents(e, upto):
        if c.B == 0:
            out.append(None)
            continue
        out.append(padic._vp(padic.sub(x, c.A / c.B), p))
    return out


def predicted_profile(e: Expansion, upto: int) -> list:
    """``v_p(b_1 ... b_{k+1}) - v_p(B_k B_{k+1})`` for ``k = 0 .. upto``.

    For simple expansions this is ``-v_p(B_k B_{k+1})``. The last index of a
    finite expansion has no successor and yields INF (exact recovery).
    """
    p = e.context.p
    last = upto + 1
    finite_end = e.is_finite and last >= len(e)
    cs = convergents(e, min(last, len(e) - 1) if e.is_finite else last)
    out = []
    bsum = 0
    for k in range(upto + 1):
        if finite_end and k + 1 >= len(e):
            out.append(INF)
            continue
        bsum += padic.vp_rational(e.numerator(k + 1), p)
        vb = padic.vp_rational(cs[k].B, p) + padic.vp_rational(cs[k + 1].B, p)
        out.append(bsum - vb)
    return out


def consecutive_gap_valuations(e: Expansion, upto: int) -> list:
    """``v_p(B_n B_{n+1})`` for ``n = 0 .. upto``; the quantity that must tend to -inf."""
    cs = convergents(e, upto + 1)
    p = e.context.p
    return [padic.vp_rational(cs[n].B, p) + padic.vp_rational(cs[n + 1].B, p) for n in range(upto + 1)]
