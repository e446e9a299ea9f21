from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padiccf.algorithms import AlgorithmId, context_for, expand
from padiccf.cf import Status, convergents
from padiccf.errors import ConventionMismatch, UnsupportedInput
from padiccf.mjp import (
    MjpExpansion,
    is_strictly_increasing,
    jp_check_convergence,
    jp_convergent_values,
    jp_convergents,
    jp_expand,
    jp_recover,
    jp_strong_convergence_profile,
    linearly_dependent_over_q,
    terminal_row_exact,
)
from padiccf.padic import INF, Convention, PadicContext, Quadratic

rationals = st.builds(F, st.integers(-10**4, 10**4), st.integers(1, 10**4))


def test_pair_example():
    e = jp_expand([F(22, 7), F(3, 4)], PadicContext(5))
    assert e.is_finite
    assert e.rows == ((1, 2), (F(-4, 5), -1), (F(-7, 5), 0))
    assert jp_convergent_values(e, len(e) - 1)[-1] == (F(22, 7), F(3, 4))
    assert jp_recover(e) == (F(22, 7), F(3, 4))


def test_seeds_for_dimension_one():
    e = jp_expand([F(-2, 5)], PadicContext(7))
    A = jp_convergents(e, 0)[0]
    # A_0 = a_0 * A_{-1} + 1 * A_{-2} with A_{-1} = (1, 0), A_{-2} = (0, 1)
    assert A == (1, 1)


@settings(max_examples=150, deadline=None)
@given(rationals, st.sampled_from([3, 5, 7, 13]))
def test_dimension_one_is_browkin1(x, p):
    e = jp_expand([x], PadicContext(p))
    b = expand(x, AlgorithmId.BROWKIN1, context_for(AlgorithmId.BROWKIN1, p))
    assert tuple(r[0] for r in e.rows) == b.partial_quotients
    cs = convergents(b, len(b) - 1)
    for c, A in zip(cs, jp_convergents(e, len(e) - 1)):
        assert (c.A, c.B) == A


@settings(max_examples=150, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=3), st.sampled_from([3, 5, 7]))
def test_rational_tuples_terminate_and_recover(xs, p):
    e = jp_expand(xs, PadicContext(p))
    assert e.is_finite
    assert jp_recover(e) == tuple(xs)
    if terminal_row_exact(e):
        assert jp_convergent_values(e, len(e) - 1)[-1] == tuple(xs)
        profile = jp_strong_convergence_profile(e, xs, len(e) - 1)
        assert all(seq[-1] == INF for seq in profile)


def test_immediate_termination():
    e = jp_expand([F(1, 3), F(2)], PadicContext(7))
    assert len(e) == 1 and e.is_finite


def test_quadratic_pair_recovery():
    xs = [Quadratic(1, 2, 6), Quadratic(0, 3, 6)]
    e = jp_expand(xs, PadicContext(5), max_steps=60)
    assert e.is_finite
    assert jp_recover(e) == tuple(x.normalized() for x in xs)
    assert linearly_dependent_over_q(xs)


def test_convergence_condition():
    ctx = PadicContext(7)
    good = MjpExpansion(2, ((1, 1), (F(1, 49), 1)), Status.finite(), ctx)
    assert jp_check_convergence(good)
    bad = MjpExpansion(2, ((1, 1), (F(3), F(1, 7))), Status.finite(), ctx)
    assert not jp_check_convergence(bad)


def test_distinct_radicands_rejected():
    with pytest.raises(UnsupportedInput):
        jp_expand([Quadratic(0, 1, 2), Quadratic(0, 1, 3)], PadicContext(7))


def test_standard_convention_rejected():
    with pytest.raises(ConventionMismatch):
        jp_expand([F(1, 2)], PadicContext(7, Convention.STANDARD))


def test_json_round_trip():
    for xs in ([F(22, 7), F(3, 4)], [Quadratic(1, 2, 6), Quadratic(0, 3, 6)]):
        e = jp_expand(xs, PadicContext(5))
        assert MjpExpansion.from_json(e.to_json()) == e


def test_strictly_increasing_helper():
    assert is_strictly_increasing([1, 2, 5, INF])
    assert not is_strictly_increasing([1, 1, 2])
