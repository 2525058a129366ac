import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from metricext import (
    AxiomError, Flag, Geometric, HalfLine, MembershipError, MetricTable, MissingWitness,
    ProperWitness, RealFunction, RosterMismatch, Space, ball, certify_proper, check_isosceles,
    discrete_metric, join, ms_ball_structure, ms_distance, proper_function_into, properize,
    properize_ult, pullback_abs, pullback_ms, quantize_metric, truncate, verify_axioms, zero_table,
)
from metricext.combinator import proper_metric, proper_ultrametric
from metricext.instances import VALUESETS, random_metric, random_ultrametric

from oracles import axioms_hold, geometric_floor, isosceles_violations

P3 = ["u", "v", "w"]


def tri(values, flag="metric"):
    """3-point table with d(u,v), d(u,w), d(v,w) = values."""
    a, b, c = values
    X = Space.finite(P3)
    return MetricTable.from_matrix(X, [[0, a, b], [a, 0, c], [b, c, 0]], flag)


def pairs(M):
    return (M("u", "v"), M("u", "w"), M("v", "w"))


def func(X, values, **kw):
    return RealFunction(X, dict(zip(X.points(), values)), **kw)


# --- M_S -----------------------------------------------------------------------


@pytest.mark.parametrize("x, y, expected", [(3, 3, 0), (2, 5, 5), (0, 7, 7)])
def test_ms_distance(x, y, expected):
    assert ms_distance(HalfLine(), x, y) == expected


def test_ms_distance_checks_membership():
    with pytest.raises(MembershipError):
        ms_distance(Geometric(2, 1), 3, 4)


@pytest.mark.parametrize("x", [F(1, 4), 1, 4, 8])
def test_ms_ball_structure(x):
    rep = ms_ball_structure(Geometric(2, 1), x)
    assert rep.ok
    assert rep.details["U(x,x)"] == [x]


def test_open_ball_at_zero_is_everything_below():
    rep = ms_ball_structure(Geometric(2, 1), 4, window=(4, 3))
    assert rep.details["U(0,x)"] == [0, F(1, 4), F(1, 2), 1, 2]


def test_smallest_window_member_sees_only_zero():
    rep = ms_ball_structure(Geometric(2, 1), 1, window=(0, 3))
    assert rep.ok and rep.details["U(0,x)"] == [0]


# --- pullbacks -------------------------------------------------------------------


def test_pullback_abs_of_constant_is_zero():
    X = Space.finite(P3)
    assert pairs(pullback_abs(func(X, [5, 5, 5]))) == (0, 0, 0)


def test_pullback_abs_entries():
    X = Space.finite(P3)
    E = pullback_abs(func(X, [0, 1, 5]))
    assert pairs(E) == (1, 5, 4)
    assert verify_axioms(E, "pseudo").ok


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2**32))
def test_distance_to_basepoint_is_one_lipschitz(n, seed):
    d = random_metric(random.Random(seed), n)
    p = d.space.basepoint
    E = pullback_abs(RealFunction(d.space, lambda x: d(p, x)))
    pts = d.points()
    assert all(E(x, y) <= d(x, y) for x in pts for y in pts)


def test_pullback_ms_entries():
    X = Space.finite(P3)
    M = pullback_ms(Geometric(2, 1), func(X, [1, 2, 4]))
    assert pairs(M) == (2, 4, 4)
    assert M.flag is Flag.PSEUDO_ULTRAMETRIC


def test_pullback_ms_equal_values_give_zero():
    X = Space.finite(P3)
    M = pullback_ms(Geometric(2, 1), func(X, [2, 2, 8]))
    assert M("u", "v") == 0 and not verify_axioms(M, "metric").ok
    assert verify_axioms(M, "pseudo-ultrametric").ok


def test_pullback_ms_rejects_values_outside():
    X = Space.finite(P3)
    with pytest.raises(MembershipError):
        pullback_ms(Geometric(2, 1), func(X, [1, 3, 4]))


# --- join and truncation -----------------------------------------------------------


def test_join_examples():
    d = tri((1, 1, 1))
    assert pairs(join(d, zero_table(d.space))) == pairs(d)
    assert pairs(join(d, d)) == pairs(d)
    e = MetricTable.from_matrix(d.space, [[0, 0, 2], [0, 0, 0], [2, 0, 0]], "pseudo")
    assert pairs(join(d, e)) == (1, 2, 1)


def test_join_flags():
    d = tri((1, 2, 2), "ultrametric")
    e = tri((3, 3, 3), "metric")
    assert join(d, d).flag is Flag.ULTRAMETRIC
    assert join(d, e).flag is Flag.METRIC
    z = zero_table(d.space)
    assert join(d, z).flag is Flag.ULTRAMETRIC and join(z, z).flag is Flag.PSEUDO_ULTRAMETRIC


def test_join_needs_same_points():
    with pytest.raises(RosterMismatch):
        join(tri((1, 1, 1)), MetricTable.from_matrix(Space.finite(["p"]), [[0]]))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**32))
def test_join_laws(n, seed):
    rng = random.Random(seed)
    a = random_ultrametric(rng, n)
    X = a.space
    b = MetricTable.from_matrix(X, random_metric(rng, n).matrix())
    c = MetricTable.from_matrix(X, random_ultrametric(rng, n).matrix(), "ultrametric")
    for M in (join(a, b), join(b, a)):
        assert axioms_hold(M.matrix(), "metric")
    assert axioms_hold(join(a, c).matrix(), "ultrametric")
    assert join(join(a, b), c).matrix() == join(a, join(b, c)).matrix()
    assert join(a, b).matrix() == join(b, a).matrix()


def test_truncate_examples():
    X = Space.naturals()
    d = MetricTable(X, lambda m, n: F(abs(m - n)), Flag.METRIC)
    u = truncate(d, 2)
    assert [u(0, k) for k in range(4)] == [0, 1, 2, 2]
    small = tri((1, 2, 2), "ultrametric")
    assert pairs(truncate(small, 5)) == pairs(small)


def test_truncate_keeps_ultrametrics_and_value_sets():
    d = tri((1, 4, 4), "ultrametric")
    d.valueset = Geometric(2, 1)
    u = truncate(d, 2)
    assert verify_axioms(u, "ultrametric").ok and u.valueset == Geometric(2, 1)
    assert truncate(d, 3).valueset == HalfLine()


def test_truncate_rejects_nonpositive_levels():
    with pytest.raises(ValueError):
        truncate(tri((1, 1, 1)), 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32), st.fractions(F(1, 8), 20, max_denominator=8))
def test_truncation_preserves_axioms(n, seed, c):
    rng = random.Random(seed)
    d = random_metric(rng, n)
    w = random_ultrametric(rng, n)
    assert axioms_hold(truncate(d, c).matrix(), "metric")
    assert axioms_hold(truncate(w, c).matrix(), "ultrametric")


# --- properization ---------------------------------------------------------------


def test_properize_with_constant_function_is_identity():
    d = tri((1, 2, 2))
    D = properize(d, func(d.space, [3, 3, 3]))
    assert pairs(D) == pairs(d) and D.witness.trivial


def test_properize_discrete_naturals():
    X = Space.naturals()
    d = discrete_metric(X, 1)
    f = RealFunction(X, lambda n: F(n), witness=ProperWitness.linear(1))
    D = properize(d, f)
    assert all(D(m, n) == max(1, abs(m - n)) for m in range(12) for n in range(12) if m != n)
    assert [ball(D, 0, r) for r in (0, 1, 3)] == [[0], [0, 1], [0, 1, 2, 3]]
    assert certify_proper(X, D, D.witness, 64).ok


def test_properize_needs_a_metric_and_a_witness():
    X = Space.naturals()
    with pytest.raises(AxiomError):
        properize(zero_table(X), proper_function_into(X, HalfLine()))
    with pytest.raises(MissingWitness):
        properize(discrete_metric(X, 1), RealFunction(X, lambda n: F(n)))


def test_properize_ult_with_constant_function_is_identity():
    d = tri((1, 4, 4), "ultrametric")
    D = properize_ult(d, func(d.space, [2, 2, 2]), Geometric(2, 1), HalfLine())
    assert pairs(D) == pairs(d)


def test_properize_ult_on_naturals_gives_powers_of_two():
    X = Space.naturals()
    D = properize_ult(discrete_metric(X, 1, Geometric(2, 1)), proper_function_into(X, Geometric(2, 1)),
                      Geometric(2, 1), Geometric(2, 1))
    assert all(D(m, n) == 2 ** max(m, n) for m in range(10) for n in range(10) if m != n)
    assert verify_axioms(D, "ultrametric", depth=12).ok
    assert certify_proper(X, D, D.witness, 64).ok
    assert ball(D, 0, 8) == [0, 1, 2, 3]


def test_properize_ult_contracts():
    X = Space.naturals()
    f = proper_function_into(X, Geometric(2, 1))
    with pytest.raises(MembershipError):
        properize_ult(discrete_metric(X, 1, Geometric(2, 1)), f, Geometric(2, 1), Geometric(4, 1))
    with pytest.raises(AxiomError):
        properize_ult(proper_metric(X), f, Geometric(2, 1))


def test_generated_proper_metrics():
    X = Space.naturals(2)
    for D, claim in ((proper_metric(X), "metric"), (proper_ultrametric(X), "ultrametric")):
        assert verify_axioms(D, claim, depth=10).ok
        assert certify_proper(X, D, D.witness, 64).ok


# --- quantization ----------------------------------------------------------------


def test_quantize_fixes_member_valued_tables():
    d = tri((1, 4, 4), "ultrametric")
    assert pairs(quantize_metric(d, Geometric(2, 1))) == (1, 4, 4)


def test_quantize_example():
    w = quantize_metric(tri((3, 5, 5), "ultrametric"), Geometric(2, 1))
    assert pairs(w) == (2, 4, 4)
    assert verify_axioms(w, "ultrametric").ok and w("u", "u") == 0


def test_quantize_rejects_plain_metrics():
    with pytest.raises(AxiomError):
        quantize_metric(tri((1, 1, 2)), Geometric(2, 1))


def test_quantize_keeps_properness():
    X = Space.naturals()
    d = proper_ultrametric(X, HalfLine())
    d3 = MetricTable(X, lambda m, n: d(m, n) * 3, Flag.ULTRAMETRIC,
                     witness=ProperWitness(lambda k: 3 * d.witness(k), "3 beta"))
    w = quantize_metric(d3, Geometric(2, 1))
    assert certify_proper(X, w, w.witness, 64).ok


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2**32))
def test_quantize_properties(n, seed):
    rng = random.Random(seed)
    d = random_ultrametric(rng, n, HalfLine())
    T = rng.choice(VALUESETS[1:])
    w = quantize_metric(d, T)
    W = w.matrix()
    assert is_below(W, d.matrix())
    assert all(x == geometric_floor(T.base, T.scale, y) for rw, rd in zip(W, d.matrix()) for x, y in zip(rw, rd))
    assert quantize_metric(w, T).matrix() == W
    assert axioms_hold(W, "ultrametric") and not isosceles_violations(W)


def is_below(A, B):
    return all(a <= b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


# --- isosceles ---------------------------------------------------------------------


def test_isosceles_examples():
    assert check_isosceles(tri((1, 3, 3), "ultrametric")).ok
    rep = check_isosceles(tri((1, 3, 1), "metric"))
    assert not rep.ok


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 9), st.integers(0, 2**32))
def test_isosceles_matches_oracle(n, seed):
    rng = random.Random(seed)
    d = random_ultrametric(rng, n) if seed % 2 else random_metric(rng, n)
    assert check_isosceles(d).ok == (not isosceles_violations(d.matrix()))
