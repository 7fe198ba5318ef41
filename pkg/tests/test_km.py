import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmspectral import (
    Kind,
    Method,
    NoClosedForm,
    NonConvergedQuadrature,
    OutOfDomain,
    QuadratureConfig,
    build_model,
    closed_form_current,
    closed_form_transition,
    current_row,
    probability_current,
    transition_probability,
    transition_row,
)

# dense expm of a 301-state truncated generator (scipy.linalg.expm), frozen
FROZEN_EXPM = [
    ("split-queues", (1, 2, 3, 4), 0, 1, 1.0, 0.16716451030035798),
    ("defect-case1", (1, 2, 1, 5), -1, 2, 3.0, 0.0074156239971273664),
    ("alternating-case1", (1, 2), 0, 0, 0.5, 0.5198029982089736),
    ("alternating-case2", (2, 1), 1, -2, 3.0, 0.08991411801257375),
    ("defect-case2", (1, 2, 1, 5), 0, 0, 3.0, 0.15445093822765668),
    ("symmetric-bilateral", (1, 2), 2, -1, 1.0, 0.11705385433177051),
    ("split-queues", (0.5, 1 / 3, 2.6, 0.1), -3, 2, 3.0, 5.56208836721472e-06),
]

# 30-digit mpmath evaluations of the Bessel expressions
FROZEN_BESSEL = [
    ("constant-bilateral", (1, 1), 0, 0, 1.0, 0.308508322553671039533),
    ("mm1", (1, 2), 1, 2, 2.0, 0.0691690017015168964884),
    ("constant-bilateral", (2, 1), -1, 3, 3.0, 0.124453547119289396634),
]


@pytest.mark.parametrize("family,params,i,j,t,expected", FROZEN_EXPM)
def test_quadrature_matches_frozen_matrix_exponential(family, params, i, j, t, expected):
    res = transition_probability(build_model(family, *params), i, j, t)
    assert res.value == pytest.approx(expected, abs=1e-10)
    assert res.method is Method.QUADRATURE


@pytest.mark.parametrize("family,params,i,j,t,expected", FROZEN_BESSEL)
def test_closed_forms_match_frozen_values(family, params, i, j, t, expected):
    m = build_model(family, *params)
    assert closed_form_transition(m, i, j, t).value == pytest.approx(expected, rel=1e-13)
    assert transition_probability(m, i, j, t).value == pytest.approx(expected, abs=1e-10)


def test_identity_at_time_zero(figure_model):
    lo = 0 if figure_model.kind is Kind.HALF_LINE else -8
    for i in range(lo, 9):
        row = transition_row(figure_model, i, 0.0, lo, 8)
        p = np.array([r.value for r in row])
        expected = np.zeros_like(p)
        expected[i - lo] = 1.0
        assert np.max(np.abs(p - expected)) <= 1e-7


def test_row_is_substochastic(figure_model):
    lo = 0 if figure_model.kind is Kind.HALF_LINE else -8
    row = transition_row(figure_model, 0, 1.0, lo, 8)
    p = np.array([r.value for r in row])
    err = np.array([r.err_estimate for r in row])
    assert np.all(p >= -err - 1e-12)
    assert p.sum() <= 1.0 + err.sum() + 1e-12


def test_error_estimate_covers_rounding_far_from_the_origin():
    # pi_{-30} = 2^30 amplifies rounding in the integral; the estimate must say so
    m = build_model("constant-bilateral", 1, 2)
    for r, j in zip(transition_row(m, 0, 1.0, -30, -25), range(-30, -24)):
        assert abs(r.value - closed_form_transition(m, 0, j, 1.0).value) <= r.err_estimate


def test_conservative_models_conserve_mass():
    m = build_model("defect-case2", 1, 2, 1, 5)
    p = np.array([r.value for r in transition_row(m, 0, 0.5, -40, 40)])
    assert p.sum() == pytest.approx(1.0, abs=1e-9)


def test_currents_direct_and_dual_agree(figure_model):
    lo = 0 if figure_model.kind is Kind.HALF_LINE else -10
    for t in (0.5, 3.0):
        direct = current_row(figure_model, 0, t, lo, 10, method="direct")
        dual = current_row(figure_model, 0, t, lo, 10, method="dual")
        assert np.max(np.abs(direct - dual)) <= 1e-8


def test_current_of_constant_rates_against_bessel():
    m = build_model("constant-bilateral", 2, 1)
    for n in range(-4, 5):
        assert probability_current(m, 0, n, 2.0) == pytest.approx(closed_form_current(m, 0, n, 2.0), abs=1e-10)


def test_current_at_time_zero():
    m = build_model("split-queues", 1, 2, 3, 4)
    om = current_row(m, 0, 0.0, -2, 2, method="dual")
    # lam_{n-1} delta_{0,n-1} - mu_n delta_{0,n}
    assert om == pytest.approx([0.0, 0.0, -2.0, 1.0, 0.0], abs=1e-8)


def test_mm1_current_is_negative_near_the_absorbing_state():
    m = build_model("mm1", 1, 2)
    for t in (3.0, 6.0, 9.0):
        assert probability_current(m, 0, 1, t) < 0.0


def test_errors():
    m = build_model("constant-bilateral", 1, 2)
    with pytest.raises(OutOfDomain):
        transition_probability(m, 0, 0, -1.0)
    with pytest.raises(OutOfDomain):
        transition_probability(m, 0, 100, 1.0)
    with pytest.raises(OutOfDomain):
        transition_probability(build_model("mm1", 1, 2), -1, 0, 1.0)
    with pytest.raises(NoClosedForm):
        closed_form_transition(build_model("symmetric-bilateral", 1, 2), 0, 0, 1.0)
    with pytest.raises(ValueError):
        current_row(m, 0, 1.0, 0, 2, method="sideways")


def test_too_few_nodes_is_reported():
    m = build_model("alternating-case1", 1, 2)
    with pytest.raises(NonConvergedQuadrature):
        transition_probability(m, 0, 40, 0.0, QuadratureConfig(nodes_per_piece=16))


def test_unresolvable_states_are_reported():
    # pi_{-n} grows like 26^n, far beyond what double precision can integrate
    m = build_model("split-queues", 0.5, 1 / 3, 2.6, 0.1)
    with pytest.raises(NonConvergedQuadrature):
        transition_probability(m, 0, -30, 1.0)


@settings(max_examples=25, deadline=None)
@given(
    lam=st.floats(0.3, 3.0),
    mu=st.floats(0.3, 3.0),
    i=st.integers(-6, 6),
    j=st.integers(-6, 6),
    t=st.floats(0.1, 9.0),
)
def test_constant_rates_quadrature_vs_bessel_property(lam, mu, i, j, t):
    m = build_model("constant-bilateral", lam, mu)
    ref = closed_form_transition(m, i, j, t).value
    assert transition_probability(m, i, j, t).value == pytest.approx(ref, abs=1e-8)
