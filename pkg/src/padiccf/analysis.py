"""Convergence validators, finiteness/periodicity classification and
approximation diagnostics for one-dimensional expansions."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction

from . import padic
from .algorithms import (
    AlgorithmId,
    _minimal_cycle,
    expand,
    initial_state,
    phase,
    schneider_rational_budget,
    step,
    trace,
)
from .cf import Expansion, StatusKind, convergents
from .errors import UnsupportedAlgorithm
from .padic import INF, PadicContext, Quadratic


class Condition(str, enum.Enum):
    ALL_NEGATIVE = "AllNegative"
    EVEN_ZERO_ODD_NEGATIVE = "EvenZeroOddNegative"
    PAIRWISE_NEGATIVE = "PairwiseNegative"
    THREE_STEP = "ThreeStep"


@dataclass(frozen=True)
class ConvergenceReport:
    condition: Condition
    holds: bool
    first_violation: int | None = None


def _inspected_length(e: Expansion, upto: int | None) -> int:
    if upto is not None:
        return upto + 1
    if e.is_periodic:
        # two full periods past the pre-period cover every distinct transition
        return e.status.pre_period + 2 * e.status.period + 3
    return len(e)


def check_convergence(e: Expansion, cond, upto: int | None = None) -> ConvergenceReport:
    """Check a valuation pattern on the quotients ``a_1 .. a_upto``.

    ``a_0`` is never constrained, matching the "for n >= n0" form of the
    convergence results.
    """
    cond = Condition(cond)
    p = e.context.p
    n_q = _inspected_length(e, upto)
    v = [padic.vp_rational(e.quotient(n), p) for n in range(n_q)]
    a = [e.quotient(n) for n in range(n_q)]

    def report(bad):
        return ConvergenceReport(cond, bad is None, bad)

    if cond is Condition.ALL_NEGATIVE:
        return report(next((n for n in range(1, n_q) if not v[n] < 0), None))
    if cond is Condition.EVEN_ZERO_ODD_NEGATIVE:
        return report(_first(range(1, n_q), lambda n: (v[n] != 0) if n % 2 == 0 else not v[n] < 0))
    if cond is Condition.PAIRWISE_NEGATIVE:
        return report(_first(range(1, n_q - 1), lambda n: not v[n] + v[n + 1] < 0))

    # three-step pattern on residues 1, 2, 0 (mod 3), n >= 1
    def bad_quotient(n):
        r = n % 3
        if r == 1:
            return not v[n] < 0
        if r == 2:
            return v[n] != 0
        return v[n] != 0 or padic.vp_rational(a[n] * a[n - 1] + 1, p) != 0

    bad = _first(range(1, n_q), bad_quotient)
    if bad is not None:
        return report(bad)
    cs = convergents(e, n_q - 1)
    vb = [padic.vp_rational(c.B, p) for c in cs]
    for k in range(1, (n_q - 2) // 3 + 1):
        if not (vb[3 * k - 2] == vb[3 * k - 1] == vb[3 * k] > vb[3 * k + 1]):
            return report(3 * k - 2)
    return report(None)


def _first(indices, predicate):
    return next((n for n in indices if predicate(n)), None)


def verify_valuation_identities(e: Expansion, upto: int) -> bool:
    """Check ``v(A_n) = sum_{i<=n} v(a_i)`` and ``v(B_n) = sum_{1<=i<=n} v(a_i)``."""
    p = e.context.p
    upto = min(upto, len(e) - 1) if e.is_finite else upto
    sa = sb = 0
    for n, c in enumerate(convergents(e, upto)):
        va = padic.vp_rational(e.quotient(n), p)
        sa = sa + va
        if n >= 1:
            sb = sb + va
        if padic.vp_rational(c.A, p) != sa or padic.vp_rational(c.B, p) != sb:
            return False
    return True


# --- classification ----------------------------------------------------------


class Verdict(str, enum.Enum):
    FINITE = "Finite"
    PERIODIC = "Periodic"
    NOT_PERIODIC = "NotPeriodic"
    UNDETERMINED = "Undetermined"


class Certificate(str, enum.Enum):
    OOTO_SIGN = "OotoSign"
    DE_WEGER_SIGN = "DeWegerSign"
    TWO_NEGATIVE_EMBEDDINGS = "TwoNegativeEmbeddings"
    LAO_TAIL = "LaoTail"


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    steps_used: int
    pre_period: int | None = None
    period: int | None = None
    certificate: Certificate | None = None

    def __post_init__(self):
        if self.verdict is Verdict.NOT_PERIODIC and self.certificate is None:
            raise ValueError("NotPeriodic needs a certificate")

    def to_dict(self) -> dict:
        out: dict = {"verdict": self.verdict.value}
        if self.pre_period is not None:
            out["pre_period"] = self.pre_period
            out["period"] = self.period
        if self.certificate is not None:
            out["certificate"] = self.certificate.value
        out["steps_used"] = self.steps_used
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Classification":
        cert = d.get("certificate")
        return cls(
            Verdict(d["verdict"]),
            d["steps_used"],
            d.get("pre_period"),
            d.get("period"),
            Certificate(cert) if cert else None,
        )

    @classmethod
    def from_json(cls, text: str) -> "Classification":
        return cls.from_dict(json.loads(text))


def _from_expansion(e: Expansion) -> Classification:
    st = e.status
    if st.kind is StatusKind.FINITE:
        return Classification(Verdict.FINITE, len(e))
    if st.kind is StatusKind.PERIODIC:
        return Classification(Verdict.PERIODIC, len(e), st.pre_period, st.period)
    return Classification(Verdict.UNDETERMINED, st.steps)


def is_lao_tail(e: Expansion) -> bool:
    """Ruban expansion whose period is the single quotient ``p - 1/p``."""
    p = e.context.p
    if not e.is_periodic or e.status.period != 1:
        return False
    return e.quotient(e.status.pre_period) == p - Fraction(1, p)


def classify_rational(x, alg, ctx: PadicContext, budget: int | None = None) -> Classification:
    alg = AlgorithmId(alg)
    x = Fraction(x)
    if x == 0:
        return Classification(Verdict.FINITE, 1)
    if budget is None:
        budget = schneider_rational_budget(x) if alg is AlgorithmId.SCHNEIDER else ctx.step_budget
    e = expand(x, alg, ctx, max_steps=budget)
    c = _from_expansion(e)
    if alg is AlgorithmId.RUBAN and is_lao_tail(e):
        c = Classification(c.verdict, c.steps_used, c.pre_period, c.period, Certificate.LAO_TAIL)
    return c


def real_embedding_signs(x: Quadratic) -> tuple[int, int]:
    """Signs of the real numbers ``(P + sqrt(D))/Q`` and ``(P - sqrt(D))/Q`` (D > 0)."""
    if x.D <= 0:
        raise ValueError("no real embedding for D <= 0")
    P, Q, D = x.P, x.Q, x.D
    plus = 1 if (P >= 0 or P * P < D) else -1
    minus = -1 if (P <= 0 or P * P < D) else 1
    sq = 1 if Q > 0 else -1
    return plus * sq, minus * sq


def _two_negative_embeddings(x: Quadratic) -> bool:
    # both conjugates negative <=> product (P^2 - D)/Q^2 > 0 and sum 2P/Q < 0
    return x.D > 0 and x.P * x.P > x.D and x.P * x.Q < 0


def _is_square_root(x: Quadratic) -> bool:
    return x.P == 0 and abs(x.Q) == 1


def classify_quadratic(x: Quadratic, alg, ctx: PadicContext, budget: int | None = None) -> Classification:
    """Run ``alg`` on ``x`` with exact ``(P_n, Q_n, phase)`` cycle detection.

    Ruban runs also test Ooto's sign condition (square roots only) and the
    two-negative-embeddings condition; Schneider runs test de Weger's sign
    condition (square roots only). Browkin-family algorithms never receive a
    non-periodicity certificate.
    """
    alg = AlgorithmId(alg)
    if not isinstance(x, Quadratic):
        raise TypeError("classify_quadratic needs a Quadratic")
    padic.split_square(x.D, ctx.p)
    budget = ctx.step_budget if budget is None else budget
    sqrt_input = _is_square_root(x)
    state = initial_state(x)
    seen: dict = {}
    pairs = []
    for n in range(budget):
        alpha = state.alpha
        key = (alpha, phase(alg, n))
        if key in seen:
            pre, period = _minimal_cycle(pairs, seen[key], n - seen[key])
            return Classification(Verdict.PERIODIC, n, pre, period)
        seen[key] = n
        if alg is AlgorithmId.RUBAN and _two_negative_embeddings(alpha):
            return Classification(Verdict.NOT_PERIODIC, n + 1, certificate=Certificate.TWO_NEGATIVE_EMBEDDINGS)
        a, b, state = step(state, alg, ctx)
        pairs.append((a, b))
        P1 = state.alpha.P
        if sqrt_input and alg is AlgorithmId.RUBAN:
            if alpha.P * alpha.Q <= 0 and P1 * P1 > x.D:
                return Classification(Verdict.NOT_PERIODIC, n + 1, certificate=Certificate.OOTO_SIGN)
        if sqrt_input and alg is AlgorithmId.SCHNEIDER:
            if alpha.P * alpha.Q < 0 and P1 * P1 > x.D:
                return Classification(Verdict.NOT_PERIODIC, n + 1, certificate=Certificate.DE_WEGER_SIGN)
    return Classification(Verdict.UNDETERMINED, budget)


def classify(x, alg, ctx: PadicContext, budget: int | None = None) -> Classification:
    x = padic.as_number(x)
    if isinstance(x, Quadratic):
        return classify_quadratic(x, alg, ctx, budget)
    return classify_rational(x, alg, ctx, budget)


@dataclass(frozen=True)
class PeriodicityPredicate:
    """Outcome of a pure-periodicity criterion.

    ``exact`` is False when the criterion is only necessary. Truthiness is
    the outcome itself.
    """

    holds: bool
    exact: bool

    def __bool__(self):
        return self.holds


def purely_periodic_predicate(x: Quadratic, alg, ctx: PadicContext) -> PeriodicityPredicate:
    alg = AlgorithmId(alg)
    v = padic.valuation(x, ctx)
    vbar = padic.valuation(x.conjugate(), ctx)
    if alg is AlgorithmId.BROWKIN1:
        return PeriodicityPredicate(v < 0 and vbar > 0, True)
    if alg is AlgorithmId.MRST:
        return PeriodicityPredicate(v <= 0 and vbar > 0, True)
    if alg is AlgorithmId.BROWKIN2:
        return PeriodicityPredicate(v == 0 and vbar > 0, False)
    raise UnsupportedAlgorithm(f"no pure-periodicity criterion for {alg.value}")


def preperiod_constraints(x: Quadratic, alg, found: Classification, ctx: PadicContext) -> bool:
    """Check a found pre-period against the known constraints for square roots.

    Inputs other than ``sqrt(D)`` carry no constraint and pass.
    """
    alg = AlgorithmId(alg)
    if found.verdict is not Verdict.PERIODIC:
        raise ValueError("preperiod_constraints needs a Periodic classification")
    pre = found.pre_period
    if not (isinstance(x, Quadratic) and _is_square_root(x)):
        return True
    if alg is AlgorithmId.BROWKIN2:
        return pre == 1 or pre % 2 == 0
    if alg is AlgorithmId.MRST:
        v = padic.valuation(Quadratic(0, 1, x.D), ctx)
        return pre == (1 if v <= 0 else 2)
    if alg is AlgorithmId.BROWKIN1:
        return pre in (0, 2, 3)
    return True


# --- approximation lattices -------------------------------------------------


@dataclass(frozen=True)
class ApproximationLattice:
    """Reduced basis of ``{(A, B) : v_p(B*x' - A) >= n}`` with ``x' = p**shift * x``."""

    basis: tuple[tuple[int, int], tuple[int, int]]
    n: int
    shift: int
    residue: int


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def gauss_reduce(u: tuple[int, int], v: tuple[int, int]):
    """Lagrange-Gauss reduction of a two-dimensional integer basis."""
    if _dot(u, u) > _dot(v, v):
        u, v = v, u
    while True:
        m = round(Fraction(_dot(u, v), _dot(u, u)))
        v = (v[0] - m * u[0], v[1] - m * u[1])
        if _dot(v, v) >= _dot(u, u):
            return u, v
        u, v = v, u


def approximation_lattice(x, n: int, ctx: PadicContext) -> ApproximationLattice:
    if n < 1:
        raise ValueError("n must be positive")
    x = padic.as_number(x)
    p = ctx.p
    v = padic._vp(x, p)
    shift = 0
    if v != INF and v < 0:
        shift = -v
        x = padic.mul(x, Fraction(p) ** shift)
        v = 0
    m = p ** n
    if v == INF or v >= n:
        r = 0
    else:
        _, unit = padic.unit_residue(x, p, n - v)
        r = p ** v * unit % m
    basis = gauss_reduce((m, 0), (r, 1))
    return ApproximationLattice(basis, n, shift, r)


def in_lattice(x, vec: tuple[int, int], n: int, ctx: PadicContext, shift: int = 0) -> bool:
    """Whether ``|B x' - A|_p <= p**-n`` for ``vec = (A, B)``."""
    x = padic.as_number(x)
    if shift:
        x = padic.mul(x, Fraction(ctx.p) ** shift)
    A, B = vec
    return padic._vp(padic.sub(padic.mul(x, B), A), ctx.p) >= n


# --- rational-input diagnostics ---------------------------------------------


def complete_quotients(x, alg, ctx: PadicContext, steps: int) -> list:
    return [alpha for _, alpha, _, _ in trace(x, alg, ctx, steps)]


def descent_sequence(x, ctx: PadicContext, steps: int | None = None) -> list[int]:
    """``|A_n| + 2|B_n|`` for Browkin I complete quotients ``alpha_n = A_n/(p^j B_n)``."""
    p = ctx.p
    out = []
    for alpha in complete_quotients(x, AlgorithmId.BROWKIN1, ctx, steps or ctx.step_budget):
        alpha = Fraction(alpha)
        num, den = alpha.numerator, alpha.denominator
        num //= p ** padic.vp_int(num, p) if num else 1
        den //= p ** padic.vp_int(den, p)
        out.append(abs(num) + 2 * abs(den))
    return out


def ruban_negativity_bound(x: Fraction, p: int) -> int:
    """``max{2, ceil(log b / log p)}`` for ``x = a/b``."""
    b = Fraction(x).denominator
    k = 0
    while p**k < b:  # exact ceil(log_p b)
        k += 1
    return max(2, k)


def first_negative_complete_quotient(x, ctx: PadicContext, steps: int) -> int | None:
    for n, alpha, _, _ in trace(x, AlgorithmId.RUBAN, ctx, steps):
        if alpha < 0:
            return n
    return None
