"""The six one-dimensional p-adic continued fraction algorithms.

Each algorithm is a policy choosing the partial quotient ``a_n`` from the
complete quotient ``alpha_n`` (and, for the alternating ones, from the step
index). Simple algorithms then continue with ``alpha_{n+1} = 1/(alpha_n - a_n)``;
Schneider's algorithm uses ``alpha_{n+1} = p^e/(alpha_n - a_n)`` with
``e = v_p(alpha_n - a_n)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import padic
from .cf import Expansion, Status
from .errors import ConventionMismatch, SchneiderDomain, Terminated
from .padic import Convention, PadicContext, QpNumber, Quadratic


class AlgorithmId(str, enum.Enum):
    SCHNEIDER = "schneider"
    RUBAN = "ruban"
    BROWKIN1 = "browkin1"
    BROWKIN2 = "browkin2"
    MRS3 = "mrs3"
    MRST = "mr-st"

    def __str__(self):
        return self.value


_STANDARD = {AlgorithmId.SCHNEIDER, AlgorithmId.RUBAN}


def required_convention(alg: AlgorithmId) -> Convention:
    return Convention.STANDARD if AlgorithmId(alg) in _STANDARD else Convention.BALANCED


def phase(alg: AlgorithmId, n: int) -> int:
    if alg in (AlgorithmId.BROWKIN2, AlgorithmId.MRST):
        return n % 2
    if alg is AlgorithmId.MRS3:
        return n % 3
    return 0


def context_for(alg, p: int, **kwargs) -> PadicContext:
    """A context with the digit convention the algorithm needs."""
    return PadicContext(p, required_convention(AlgorithmId(alg)), **kwargs)


def _check_context(alg: AlgorithmId, ctx: PadicContext):
    if ctx.convention is not required_convention(alg):
        raise ConventionMismatch(f"{alg.value} needs the {required_convention(alg).value} convention")


@dataclass(frozen=True)
class ExpansionState:
    """Complete quotient ``alpha`` at step ``index``; ``alpha`` is None once finished."""

    alpha: QpNumber | None
    index: int = 0
    finished: bool = False


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _t_adjusted(alpha: QpNumber, ctx: PadicContext) -> Fraction:
    t = padic.floor_t(alpha, ctx)
    if t == 0:
        raise AssertionError("t(alpha) vanished at a t-step; v_p(alpha) must be negative there")
    if padic._vp(padic.sub(alpha, t), ctx.p) == 0:
        return t
    return t - _sign(t)


def partial_quotient(alpha: QpNumber, n: int, alg: AlgorithmId, ctx: PadicContext) -> Fraction:
    if alg is AlgorithmId.SCHNEIDER:
        return Fraction(padic.constant_digit(alpha, ctx))
    if alg is AlgorithmId.RUBAN:
        return padic.floor_ruban(alpha, ctx)
    if alg is AlgorithmId.BROWKIN1:
        return padic.floor_s(alpha, ctx)
    if alg is AlgorithmId.BROWKIN2:
        return padic.floor_s(alpha, ctx) if n % 2 == 0 else _t_adjusted(alpha, ctx)
    if alg is AlgorithmId.MRST:
        return padic.floor_s(alpha, ctx) if n % 2 == 0 else padic.floor_t(alpha, ctx)
    if alg is AlgorithmId.MRS3:
        r = n % 3
        if r == 0:
            return padic.floor_s(alpha, ctx)
        if r == 1:
            return _t_adjusted(alpha, ctx)
        return padic.floor_s(alpha, ctx) - padic.floor_u(alpha, ctx)
    raise ValueError(f"unknown algorithm {alg!r}")


def step(state: ExpansionState, alg, ctx: PadicContext):
    """Apply one step of ``alg``.

    Returns ``(a_n, b_{n+1}, next_state)``. When ``alpha_n = a_n`` the
    returned state is finished (its ``alpha`` is None) and ``b`` is 1.
    """
    if state.finished:
        raise Terminated("expansion already terminated")
    alg = AlgorithmId(alg)
    _check_context(alg, ctx)
    alpha, n = state.alpha, state.index
    if alg is AlgorithmId.SCHNEIDER and padic._vp(alpha, ctx.p) < 0:
        raise SchneiderDomain("Schneider's algorithm needs v_p(alpha) >= 0")
    a = partial_quotient(alpha, n, alg, ctx)
    if not isinstance(alpha, Quadratic) and alpha == a:
        return a, Fraction(1), ExpansionState(None, n + 1, True)
    if alg is AlgorithmId.SCHNEIDER:
        diff = padic.sub(alpha, a)
        b = Fraction(ctx.p) ** padic._vp(diff, ctx.p)
        nxt = padic.div(b, diff)
    else:
        b = Fraction(1)
        nxt = padic.reciprocal_shift(alpha, a)
    return a, b, ExpansionState(nxt, n + 1)


def initial_state(x) -> ExpansionState:
    x = padic.as_number(x)
    if isinstance(x, Quadratic):
        x = x.normalized()
    return ExpansionState(x, 0)


def trace(x, alg, ctx: PadicContext, steps: int) -> Iterator[tuple[int, QpNumber, Fraction, Fraction]]:
    """Yield ``(n, alpha_n, a_n, b_{n+1})`` for up to ``steps`` steps (no cycle detection)."""
    alg = AlgorithmId(alg)
    state = initial_state(x)
    for _ in range(steps):
        alpha = state.alpha
        a, b, state = step(state, alg, ctx)
        yield state.index - 1, alpha, a, b
        if state.finished:
            return


def _minimal_cycle(pairs: list, start: int, length: int) -> tuple[int, int]:
    """Shrink a detected cycle to its minimal quotient-level period and pre-period."""
    block = pairs[start : start + length]
    period = length
    for d in range(1, length):
        if length % d == 0 and all(block[j] == block[(j + d) % length] for j in range(length)):
            period = d
            break
    pre = start
    while pre > 0 and pairs[pre - 1] == pairs[pre - 1 + period]:
        pre -= 1
    return pre, period


def expand(x, alg, ctx: PadicContext, max_steps: int | None = None) -> Expansion:
    """Expand ``x`` until it terminates, a complete-quotient state repeats, or the budget ends.

    Cycle detection keys on the exact complete quotient together with the
    policy phase (``n mod 2`` or ``n mod 3`` for the alternating algorithms).
    """
    alg = AlgorithmId(alg)
    _check_context(alg, ctx)
    x = padic.as_number(x)
    if alg is AlgorithmId.SCHNEIDER and padic._vp(x, ctx.p) < 0:
        raise SchneiderDomain("Schneider's algorithm needs v_p(x) >= 0")
    budget = ctx.step_budget if max_steps is None else max_steps
    state = initial_state(x)
    seen: dict = {}
    qs: list[Fraction] = []
    bs: list[Fraction] = []
    for n in range(budget):
        key = (state.alpha, phase(alg, n))
        if key in seen:
            pre, period = _minimal_cycle(list(zip(qs, bs)), seen[key], n - seen[key])
            end = pre + period
            return Expansion(tuple(qs[:end]), tuple(bs[:end]), Status.periodic(pre, period), alg.value, ctx)
        seen[key] = n
        a, b, state = step(state, alg, ctx)
        qs.append(a)
        if state.finished:
            return Expansion(tuple(qs), tuple(bs), Status.finite(), alg.value, ctx)
        bs.append(b)
    return Expansion(tuple(qs), tuple(bs), Status.truncated(budget), alg.value, ctx)


def height(x: Fraction) -> int:
    x = Fraction(x)
    return max(abs(x.numerator), abs(x.denominator))


SCHNEIDER_BUDGET_CONSTANT = 64


def schneider_rational_budget(x: Fraction) -> int:
    """Step budget ``C * ceil(log^2 H(x))`` for Schneider on a rational."""
    h = height(x)
    return SCHNEIDER_BUDGET_CONSTANT * max(1, math.ceil(math.log(h) ** 2)) if h > 1 else SCHNEIDER_BUDGET_CONSTANT
