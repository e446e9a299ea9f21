from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padiccf.algorithms import AlgorithmId, context_for, expand
from padiccf.analysis import (
    Certificate,
    Classification,
    Condition,
    Verdict,
    approximation_lattice,
    check_convergence,
    classify,
    classify_rational,
    descent_sequence,
    first_negative_complete_quotient,
    gauss_reduce,
    in_lattice,
    preperiod_constraints,
    purely_periodic_predicate,
    ruban_negativity_bound,
    verify_valuation_identities,
)
from padiccf.cf import Expansion, Status
from padiccf.padic import PadicContext, Quadratic

import oracles

A = AlgorithmId


def ctx(alg, p):
    return context_for(alg, p)


def test_policy_conditions_hold():
    e = expand(Quadratic(0, 1, 2), A.BROWKIN1, ctx(A.BROWKIN1, 7))
    assert check_convergence(e, Condition.ALL_NEGATIVE).holds
    e = expand(Quadratic(0, 1, 2), A.BROWKIN2, ctx(A.BROWKIN2, 7))
    assert check_convergence(e, Condition.EVEN_ZERO_ODD_NEGATIVE).holds
    e = expand(F(22, 7), A.BROWKIN2, ctx(A.BROWKIN2, 5))
    assert check_convergence(e, Condition.PAIRWISE_NEGATIVE).holds


def test_pairwise_negative_violation_at_index_3():
    qs = [F(1), F(1, 7), F(2, 49), F(3), F(2), F(1, 7)]
    e = Expansion.simple(qs, Status.finite(), "hand", PadicContext(7))
    report = check_convergence(e, Condition.PAIRWISE_NEGATIVE)
    assert not report.holds and report.first_violation == 3


def test_three_step_pattern_on_mrs3():
    e = expand(Quadratic(0, 1, 2), A.MRS3, ctx(A.MRS3, 7), max_steps=60)
    report = check_convergence(e, Condition.THREE_STEP, upto=30)
    assert report.holds


def test_valuation_identities():
    e = expand(F(-2, 5), A.BROWKIN1, ctx(A.BROWKIN1, 7))
    assert verify_valuation_identities(e, 5)
    e = expand(Quadratic(0, 1, 2), A.BROWKIN1, ctx(A.BROWKIN1, 7))
    assert verify_valuation_identities(e, 20)
    # a_2 = -7 makes B_2 vanish; the failure is reported, not raised
    bad = Expansion.simple([F(1), F(1, 7), F(-7)], Status.finite(), "hand", PadicContext(7))
    assert verify_valuation_identities(bad, 2) is False


def test_classify_examples():
    c = classify_rational(F(-2, 5), A.RUBAN, ctx(A.RUBAN, 7))
    assert (c.verdict, c.pre_period, c.period) == (Verdict.PERIODIC, 2, 1)
    c = classify(Quadratic(0, 1, -1), A.SCHNEIDER, ctx(A.SCHNEIDER, 5))
    assert (c.verdict, c.certificate) == (Verdict.NOT_PERIODIC, Certificate.DE_WEGER_SIGN)
    c = classify(Quadratic(0, 1, -2), A.RUBAN, ctx(A.RUBAN, 3))
    assert c.verdict is Verdict.NOT_PERIODIC
    c = classify(F(3, 4), A.BROWKIN1, ctx(A.BROWKIN1, 5))
    assert c.verdict is Verdict.FINITE


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_lao_tail_certificates(p):
    c = classify_rational(F(-1, p), A.RUBAN, ctx(A.RUBAN, p))
    assert (c.verdict, c.pre_period, c.period, c.certificate) == (Verdict.PERIODIC, 0, 1, Certificate.LAO_TAIL)
    c = classify_rational(F(-p), A.RUBAN, ctx(A.RUBAN, p))
    assert (c.pre_period, c.period, c.certificate) == (1, 1, Certificate.LAO_TAIL)


def test_undetermined_within_budget():
    c = classify(Quadratic(0, 1, 3), A.BROWKIN1, ctx(A.BROWKIN1, 13), budget=50)
    assert c.verdict is Verdict.UNDETERMINED and c.steps_used == 50


def test_classification_json_round_trip():
    cases = [
        classify_rational(F(-2, 5), A.RUBAN, ctx(A.RUBAN, 7)),
        classify(Quadratic(0, 1, -1), A.SCHNEIDER, ctx(A.SCHNEIDER, 5)),
        classify(F(3, 4), A.BROWKIN1, ctx(A.BROWKIN1, 5)),
        classify(Quadratic(0, 1, 3), A.BROWKIN1, ctx(A.BROWKIN1, 13), budget=20),
    ]
    for c in cases:
        assert Classification.from_json(c.to_json()) == c


def test_browkin1_purely_periodic_predicate():
    c = ctx(A.BROWKIN1, 7)
    x = Quadratic(10, 7, 2)  # v(x) = -1 and the conjugate has valuation 1
    assert purely_periodic_predicate(x, A.BROWKIN1, c).holds
    found = classify(x, A.BROWKIN1, c)
    assert found.verdict is Verdict.PERIODIC and found.pre_period == 0
    assert not purely_periodic_predicate(Quadratic(0, 1, 2), A.BROWKIN1, c)


def test_preperiod_constraints():
    sqrt2 = Quadratic(0, 1, 2)
    c7 = ctx(A.MRST, 7)
    found = classify(sqrt2, A.MRST, c7)
    assert found.pre_period == 1 and preperiod_constraints(sqrt2, A.MRST, found, c7)
    bad = Classification(Verdict.PERIODIC, 10, 3, 2, None)
    assert not preperiod_constraints(sqrt2, A.BROWKIN2, bad, ctx(A.BROWKIN2, 7))
    pure = Classification(Verdict.PERIODIC, 10, 0, 2, None)
    assert preperiod_constraints(sqrt2, A.BROWKIN2, pure, ctx(A.BROWKIN2, 7))


def test_lattice_shortest_vector_matches_search():
    c = ctx(A.BROWKIN1, 5)
    lat = approximation_lattice(F(2, 7), 3, c)
    u, v = lat.basis
    norm, _ = oracles.lattice_shortest(F(2, 7), 5, 3, 25)
    assert u[0] ** 2 + u[1] ** 2 == norm
    assert lat.basis == ((2, 7), (17, -3))


def test_lattice_for_multiples_of_p():
    lat = approximation_lattice(F(21, 4), 1, ctx(A.BROWKIN1, 7))
    assert sorted(lat.basis) == [(0, 1), (7, 0)]


@settings(max_examples=100, deadline=None)
@given(
    st.integers(-10**4, 10**4).filter(bool),
    st.integers(1, 10**4),
    st.sampled_from([3, 5, 7]),
    st.integers(1, 4),
)
def test_lattice_closure_and_residue(a, b, p, n):
    x = F(a, b)
    if oracles.valuation(x, p) < 0:
        return
    c = ctx(A.BROWKIN1, p)
    lat = approximation_lattice(x, n, c)
    for i, j in product(range(-3, 4), repeat=2):
        vec = (i * lat.basis[0][0] + j * lat.basis[1][0], i * lat.basis[0][1] + j * lat.basis[1][1])
        assert in_lattice(x, vec, n, c)
        assert oracles.in_lattice_residue(lat.residue, p, n, vec)
    (u, v) = lat.basis
    assert abs(u[0] * v[1] - u[1] * v[0]) == p**n


def test_gauss_reduce_orders_and_shortens():
    u, v = gauss_reduce((125, 0), (36, 1))
    assert u[0] ** 2 + u[1] ** 2 <= v[0] ** 2 + v[1] ** 2
    assert abs(u[0] * v[1] - u[1] * v[0]) == 125


def test_descent_is_strict_after_first_step():
    seq = descent_sequence(F(22, 7), ctx(A.BROWKIN1, 5), 20)
    assert all(b < a for a, b in zip(seq[1:], seq[2:]))


def test_ruban_negativity():
    assert ruban_negativity_bound(F(-1, 125), 5) == 3
    assert ruban_negativity_bound(F(-3), 5) == 2
    c = ctx(A.RUBAN, 7)
    assert first_negative_complete_quotient(F(-2, 5), c, 10) == 0
