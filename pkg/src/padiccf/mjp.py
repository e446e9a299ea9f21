"""Multidimensional p-adic Jacobi-Perron algorithm.

An m-tuple ``(alpha^(1), ..., alpha^(m))`` is expanded with Browkin's ``s``
floor on every coordinate:

    a_n^(i) = s(alpha_n^(i))
    alpha_{n+1}^(1) = 1 / (alpha_n^(m) - a_n^(m))
    alpha_{n+1}^(i) = (alpha_n^(i-1) - a_n^(i-1)) / (alpha_n^(m) - a_n^(m)),  i = 2..m

With ``m = 1`` this is Browkin's first algorithm. The convention
``a_n^(m+1) = 1`` is used throughout the convergent recursion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import padic
from .algorithms import _minimal_cycle
from .cf import Status, StatusKind, _pair
from .errors import ConventionMismatch, IndexBeyondFinite, UnsupportedInput
from .padic import Convention, PadicContext, Quadratic


@dataclass(frozen=True)
class MjpExpansion:
    m: int
    rows: tuple[tuple[Fraction, ...], ...]
    status: Status
    context: PadicContext
    terminal: tuple | None = None

    def __post_init__(self):
        if self.terminal is not None:
            object.__setattr__(self, "terminal", tuple(padic.as_number(x) for x in self.terminal))
        rows = tuple(tuple(Fraction(a) for a in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.m < 1:
            raise ValueError("dimension must be at least 1")
        if not rows or any(len(r) != self.m for r in rows):
            raise ValueError(f"every row needs exactly {self.m} quotients")
        st = self.status
        if st.kind is StatusKind.PERIODIC and st.pre_period + st.period > len(rows):
            raise ValueError("stored rows are shorter than pre-period + period")

    def __len__(self):
        return len(self.rows)

    @property
    def is_finite(self) -> bool:
        return self.status.kind is StatusKind.FINITE

    @property
    def is_periodic(self) -> bool:
        return self.status.kind is StatusKind.PERIODIC

    def row(self, n: int) -> tuple[Fraction, ...]:
        """``(a_n^(1), ..., a_n^(m))``, unrolling a periodic tail on demand."""
        st = self.status
        j = n
        if st.kind is StatusKind.PERIODIC and n >= st.pre_period:
            j = st.pre_period + (n - st.pre_period) % st.period
        if n < 0 or j >= len(self.rows):
            raise IndexBeyondFinite(f"row {n} is beyond the expansion")
        return self.rows[j]

    def full_row(self, n: int) -> tuple[Fraction, ...]:
        """Row ``n`` with the implicit ``a_n^(m+1) = 1`` appended."""
        return self.row(n) + (Fraction(1),)

    def available(self, n: int) -> bool:
        return self.is_periodic or n < len(self.rows)

    def to_dict(self) -> dict:
        out = {
            "p": self.context.p,
            "m": self.m,
            "rows": [[_pair(a) for a in row] for row in self.rows],
            "status": self.status.to_dict(),
        }
        if self.terminal is not None:
            out["terminal"] = [padic.format_number(x) for x in self.terminal]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "MjpExpansion":
        rows = tuple(tuple(Fraction(n, m) for n, m in row) for row in d["rows"])
        terminal = d.get("terminal")
        if terminal is not None:
            terminal = tuple(padic.parse_number(t) for t in terminal)
        ctx = PadicContext(d["p"], Convention.BALANCED)
        return cls(d["m"], rows, Status.from_dict(d["status"]), ctx, terminal)

    @classmethod
    def from_json(cls, text: str) -> "MjpExpansion":
        return cls.from_dict(json.loads(text))

    def text(self) -> str:
        def fmt(row):
            return "(" + ", ".join(str(a) for a in row) + ")"

        rows = [fmt(r) for r in self.rows]
        st = self.status
        if st.kind is StatusKind.PERIODIC:
            head = ", ".join(rows[: st.pre_period])
            block = ", ".join(rows[st.pre_period : st.pre_period + st.period])
            return f"[{head} | {block}]" if head else f"[| {block}]"
        if st.kind is StatusKind.TRUNCATED:
            return "[" + ", ".join(rows + ["..."]) + "]"
        return "[" + ", ".join(rows) + "]"


def _prepare(xs: Sequence) -> tuple:
    values = tuple(padic.as_number(x) for x in xs)
    if not values:
        raise ValueError("need at least one coordinate")
    radicands = {x.D for x in values if isinstance(x, Quadratic)}
    if len(radicands) > 1:
        raise UnsupportedInput(f"coordinates lie over different radicands {sorted(radicands)}")
    return tuple(x.normalized() if isinstance(x, Quadratic) else x for x in values)


def jp_step(state: tuple, ctx: PadicContext):
    """One Jacobi-Perron step: ``(row, next_state)`` with ``next_state`` None on termination."""
    row = tuple(padic.floor_s(x, ctx) for x in state)
    last = state[-1]
    if not isinstance(last, Quadratic) and last == row[-1]:
        return row, None
    denom = padic.sub(last, row[-1])
    nxt = [padic.reciprocal(denom)]
    for i in range(1, len(state)):
        nxt.append(padic.div(padic.sub(state[i - 1], row[i - 1]), denom))
    return row, tuple(y.normalized() if isinstance(y, Quadratic) else y for y in nxt)


def jp_expand(xs: Sequence, ctx: PadicContext, max_steps: int | None = None) -> MjpExpansion:
    if ctx.convention is not Convention.BALANCED:
        raise ConventionMismatch("the Jacobi-Perron algorithm uses the balanced convention")
    state = _prepare(xs)
    m = len(state)
    budget = ctx.step_budget if max_steps is None else max_steps
    seen: dict = {}
    rows: list = []
    for n in range(budget):
        if state in seen:
            pairs = [(r, 1) for r in rows]
            pre, period = _minimal_cycle(pairs, seen[state], n - seen[state])
            return MjpExpansion(m, tuple(rows[: pre + period]), Status.periodic(pre, period), ctx)
        seen[state] = n
        current = state
        row, state = jp_step(state, ctx)
        rows.append(row)
        if state is None:
            return MjpExpansion(m, tuple(rows), Status.finite(), ctx, current)
    return MjpExpansion(m, tuple(rows), Status.truncated(budget), ctx)


def jp_convergents(e: MjpExpansion, upto: int) -> list[tuple[Fraction, ...]]:
    """``(A_n^(1), ..., A_n^(m+1))`` for ``n = 0 .. upto``.

    Seeds are ``A_{-j}^(i) = delta_ij`` for ``j = 1 .. m+1``.
    """
    if not e.available(upto):
        raise IndexBeyondFinite(f"expansion has {len(e)} rows, asked for index {upto}")
    k = e.m + 1
    # history[-j] holds A_{n-j}; start with A_{-(m+1)}, ..., A_{-1}
    history = [tuple(Fraction(int(i == j)) for i in range(1, k + 1)) for j in range(k, 0, -1)]
    out = []
    for n in range(upto + 1):
        a = e.full_row(n)
        new = tuple(sum(a[j - 1] * history[-j][i] for j in range(1, k + 1)) for i in range(k))
        out.append(new)
        history = history[1:] + [new]
    return out


def jp_convergent_values(e: MjpExpansion, upto: int) -> list[tuple[Fraction, ...] | None]:
    """``A_n^(i) / A_n^(m+1)``; None where the last coordinate vanishes."""
    out = []
    for A in jp_convergents(e, upto):
        out.append(None if A[-1] == 0 else tuple(a / A[-1] for a in A[:-1]))
    return out


def terminal_row_exact(e: MjpExpansion) -> bool:
    """Whether every coordinate of the last complete quotient equals its partial quotient."""
    if not e.is_finite:
        return False
    return all(not isinstance(x, Quadratic) and x == a for x, a in zip(e.terminal, e.rows[-1]))


def jp_recover(e: MjpExpansion) -> tuple:
    """Input tuple of a finite expansion rebuilt from the terminal complete quotients.

    The final convergent ``A_N^(i)/A_N^(m+1)`` uses the partial quotients of
    row ``N``; when termination leaves other coordinates of that row inexact
    the convergent differs from the input, and the complete quotients must
    be used instead.
    """
    if not e.is_finite:
        raise ValueError("jp_recover needs a finite expansion")
    k = e.m + 1
    N = len(e) - 1
    seeds = [tuple(Fraction(int(i == j)) for i in range(1, k + 1)) for j in range(k, 0, -1)]
    history = seeds + (jp_convergents(e, N - 1) if N >= 1 else [])
    weights = tuple(e.terminal) + (Fraction(1),)
    combo = []
    for i in range(k):
        total = Fraction(0)
        for j in range(1, k + 1):
            total = padic.add(total, padic.mul(weights[j - 1], history[-j][i]))
        combo.append(total)
    return tuple(padic.div(c, combo[-1]) for c in combo[:-1])


def jp_check_convergence(e: MjpExpansion) -> bool:
    """``v_p(a_n^(1)) < v_p(a_n^(i))`` for ``i = 2..m+1`` on every stored row ``n >= 1``."""
    p = e.context.p
    for n in range(1, len(e.rows)):
        row = e.full_row(n)
        v1 = padic.vp_rational(row[0], p)
        if not all(v1 < padic.vp_rational(a, p) for a in row[1:]):
            return False
    return True


def jp_strong_convergence_profile(e: MjpExpansion, xs: Sequence, upto: int) -> list[list]:
    """``v_p(A_n^(i) - x^(i) A_n^(m+1))`` for each coordinate, ``n = 0 .. upto``; INF on exact hits."""
    xs = _prepare(xs)
    p = e.context.p
    if e.is_finite:
        upto = min(upto, len(e) - 1)
    cs = jp_convergents(e, upto)
    return [[padic._vp(padic.sub(A[i], padic.mul(x, A[-1])), p) for A in cs] for i, x in enumerate(xs)]


def _rank(vectors: list[list[Fraction]]) -> int:
    rows = [list(v) for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def linearly_dependent_over_q(xs: Sequence) -> bool:
    """Whether ``1, x^(1), ..., x^(m)`` are linearly dependent over Q."""
    xs = _prepare(xs)
    vectors = [[Fraction(1), Fraction(0)]]
    for x in xs:
        if isinstance(x, Quadratic):
            u, v = x.coefficients()
            vectors.append([u, v])
        else:
            vectors.append([Fraction(x), Fraction(0)])
    return _rank(vectors) < len(vectors)


def is_strictly_increasing(seq: Sequence) -> bool:
    return all(b > a for a, b in zip(seq, seq[1:]))
