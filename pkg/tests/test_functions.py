import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from odolab import gallery
from odolab.functions import (apply_composition, exp_minus_one_gauge, lp_distance,
                              lp_norm, lp_norm_pow, orbit_trace,
                              orlicz_indicator_norm, period_of, power_gauge)
from odolab.maps import InducedBijection, boundedness, preimage_cylinder
from odolab.space import DepthSet, SimpleFunction

from conftest import listed_spec


def indicator(spec, symbols):
    return SimpleFunction.indicator(DepthSet.basic_cylinder(spec, symbols))


def test_apply_zero_is_identity(binary_uniform):
    f = indicator(binary_uniform, (0,))
    assert apply_composition(binary_uniform, f, 0) is f


def test_apply_one_step_matches_preimage(binary_uniform):
    f = indicator(binary_uniform, (0,))
    g = apply_composition(binary_uniform, f, 1)
    # C f = indicator of the preimage cylinder of [0]
    pre = preimage_cylinder(binary_uniform, (0,))
    assert g.values == indicator(binary_uniform, pre).values


def test_apply_order_returns_f(ornstein):
    f = indicator(ornstein, (1, 2))
    order = InducedBijection(ornstein, 2).order()
    assert apply_composition(ornstein, f, order).values == f.values


def test_lp_norm_examples(binary_uniform):
    c = SimpleFunction.constant(binary_uniform, 2, Fraction(-3, 2))
    assert lp_norm(binary_uniform, c, 1) == 1.5
    b = indicator(binary_uniform, (0, 1))
    assert lp_norm_pow(binary_uniform, b, 1) == Fraction(1, 4)
    assert lp_norm(binary_uniform, b, 2) == pytest.approx(0.5)
    f = indicator(binary_uniform, (0, 0)) - indicator(binary_uniform, (1, 1))
    assert lp_norm_pow(binary_uniform, f, 2) == Fraction(1, 2)
    assert lp_norm(binary_uniform, f, 2) == pytest.approx(1 / math.sqrt(2))


def test_lp_distance(binary_uniform):
    f = indicator(binary_uniform, (0, 0))
    g = indicator(binary_uniform, (1, 1))
    assert lp_distance(binary_uniform, f, g, 1) == pytest.approx(0.5)


def test_period_examples(binary_uniform, ornstein):
    const = SimpleFunction.constant(binary_uniform, 1, Fraction(2))
    assert period_of(binary_uniform, const) == 1
    f = indicator(binary_uniform, (0,))
    assert period_of(binary_uniform, f) == 2
    g = indicator(ornstein, (0, 0))
    d = period_of(ornstein, g)
    assert 6 % d == 0
    # oracle: iterate one step at a time until the function returns
    h = g
    for steps in range(1, 7):
        h = apply_composition(ornstein, h, 1)
        if h.values == g.values:
            break
    assert steps == d == 6


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_period_divides_block_order(data):
    gid = data.draw(st.sampled_from(["ornstein", "hc-not-mixing", "fhc-binary"]))
    spec = gallery.get_spec(gid)
    depth = data.draw(st.integers(1, 3))
    symbols = tuple(data.draw(st.integers(0, spec.m(i) - 1))
                    for i in range(1, depth + 1))
    f = indicator(spec, symbols)
    order = spec.cell_count(depth)
    assert order % period_of(spec, f) == 0


def test_translation_period_divides_lcm():
    vec = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]
    spec = listed_spec("diagonal-translation", [vec, vec[:2] + [vec[2]], vec])
    f = indicator(spec, (0, 1))
    assert math.lcm(3, 3) % period_of(spec, f) == 0


def test_orbit_trace_period_two(binary_uniform):
    f = indicator(binary_uniform, (0,))
    g = indicator(binary_uniform, (1,))
    trace = orbit_trace(binary_uniform, f, g, epsilon=0.1, p=1, horizon=12)
    assert trace.visit_set == [1, 3, 5, 7, 9, 11]
    assert trace.period == 2
    assert trace.running_density[-1] == Fraction(1, 2)


def test_orbit_trace_self_visits_on_period(binary_uniform):
    f = indicator(binary_uniform, (0, 1))
    trace = orbit_trace(binary_uniform, f, f, epsilon=0.05, p=1, horizon=16)
    per = trace.period
    assert set(range(per, 17, per)) <= set(trace.visit_set)


def test_orbit_trace_constant_misses_shift(binary_uniform):
    eps = 0.1
    f = SimpleFunction.constant(binary_uniform, 1, Fraction(1, 2))
    g = SimpleFunction.constant(binary_uniform, 1,
                                Fraction(1, 2) + Fraction(1, 5))
    trace = orbit_trace(binary_uniform, f, g, epsilon=eps, p=1, horizon=10)
    assert trace.visit_set == []


def test_orbit_visit_set_periodic(ornstein):
    f = indicator(ornstein, (1,))
    g = indicator(ornstein, (0,))
    bij_order = InducedBijection(ornstein, 1).order()
    trace = orbit_trace(ornstein, f, g, epsilon=0.2, p=1,
                        horizon=3 * bij_order)
    visits = set(trace.visit_set)
    for n in range(1, bij_order + 1):
        assert (n in visits) == ((n + bij_order) in visits)


def test_orbit_tsv_shape(binary_uniform):
    f = indicator(binary_uniform, (0,))
    trace = orbit_trace(binary_uniform, f, f, epsilon=0.5, p=1, horizon=5)
    rows = trace.to_tsv_rows()
    assert rows[0] == ("n", "distance", "visited", "running_density")
    assert len(rows) == 6


def test_isometry_on_uniform(binary_uniform):
    f = indicator(binary_uniform, (0, 1)) - indicator(binary_uniform, (1, 0)).scale(3)
    base = lp_norm_pow(binary_uniform, f, 2)
    for n in range(1, 5):
        g = apply_composition(binary_uniform, f, n)
        assert lp_norm_pow(binary_uniform, g, 2) == base


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_contraction_bound(data):
    spec = gallery.get_spec("hc-not-mixing")
    sup = boundedness(spec, 8).supremum
    depth = 2
    count = spec.cell_count(depth)
    values = tuple(Fraction(data.draw(st.integers(-4, 4)), 3)
                   for _ in range(count))
    f = SimpleFunction(spec=spec, depth=depth, values=values)
    g = apply_composition(spec, f, 1)
    assert lp_norm_pow(spec, g, 1) <= sup * lp_norm_pow(spec, f, 1)
    assert lp_norm_pow(spec, g, 2) <= sup * lp_norm_pow(spec, f, 2)


def test_orlicz_indicator_norms():
    gauge = power_gauge(2.0)
    assert orlicz_indicator_norm(gauge, 0.25) == pytest.approx(0.5)
    one = power_gauge(1.0)
    assert orlicz_indicator_norm(one, 1.0) == pytest.approx(1.0)
    exp_gauge = exp_minus_one_gauge()
    mu_e = 1 / (math.e - 1)
    assert orlicz_indicator_norm(exp_gauge, mu_e) == pytest.approx(
        1.0 / math.log(1.0 / mu_e + 1.0))
    with pytest.raises(ValueError):
        orlicz_indicator_norm(gauge, 0.0)
