import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmspectral import Kind, OutOfDomain, build_model, potential_coefficient, spectral_measure
from kmspectral.polynomials import (
    MAX_INDEX,
    eval_closed_form_Q,
    eval_dual_H,
    eval_Q_bilateral,
    eval_Q_halfline,
    q_table_bilateral,
    q_table_halfline,
)


def support_grid(model, per_piece=21):
    measure = spectral_measure(model)
    xs = [np.linspace(p.a, p.b, per_piece) for p in measure.pieces]
    xs.append(np.array([a.location for a in measure.atoms]))
    return np.concatenate(xs)


def test_initial_values():
    m = build_model("defect-case1", 1, 2, 3, 5)
    x = np.linspace(0.0, 8.0, 7)
    assert np.all(eval_Q_bilateral(m, 1, 0, x) == 1.0)
    assert np.all(eval_Q_bilateral(m, 1, -1, x) == 0.0)
    assert np.all(eval_Q_bilateral(m, 2, 0, x) == 0.0)
    assert np.all(eval_Q_bilateral(m, 2, -1, x) == 1.0)


def test_mm1_first_polynomials():
    lam, mu = 1.5, 0.5
    m = build_model("mm1", lam, mu)
    x = 0.7
    q1 = (lam + mu - x) / lam
    q2 = ((lam + mu - x) * q1 - mu) / lam
    assert eval_Q_halfline(m, 1, x) == pytest.approx(q1, rel=1e-15)
    assert eval_Q_halfline(m, 2, x) == pytest.approx(q2, rel=1e-15)


def test_recurrence_matches_closed_forms(figure_model):
    x = support_grid(figure_model)
    if figure_model.kind is Kind.HALF_LINE:
        table = q_table_halfline(figure_model.rule, 15, x)
        for n in range(16):
            ref = eval_closed_form_Q(figure_model, None, n, x)
            assert np.max(np.abs(table[n] - ref) / np.maximum(np.abs(ref), 1.0)) <= 1e-10
        return
    table = q_table_bilateral(figure_model, -15, 15, x)
    for alpha in (1, 2):
        for k, n in enumerate(range(-15, 16)):
            ref = eval_closed_form_Q(figure_model, alpha, n, x)
            assert np.max(np.abs(table[alpha - 1, k] - ref) / np.maximum(np.abs(ref), 1.0)) <= 1e-10


def test_dual_polynomials_are_scaled_differences():
    m = build_model("split-queues", 1, 2, 3, 4)
    x = np.array([0.1, 1.0, 4.0])
    for n in (-3, 0, 2):
        for alpha in (1, 2):
            diff = eval_Q_bilateral(m, alpha, n, x) - eval_Q_bilateral(m, alpha, n - 1, x)
            expected = m.rates(n - 1)[0] * potential_coefficient(m, n - 1) * diff
            assert np.allclose(eval_dual_H(m, alpha, n, x), expected, rtol=1e-14, atol=0)
    mm1 = build_model("mm1", 1, 2)
    assert eval_dual_H(mm1, None, 0, 0.3) == 2.0


def test_index_limits():
    m = build_model("constant-bilateral", 1, 2)
    with pytest.raises(OutOfDomain):
        eval_Q_bilateral(m, 1, MAX_INDEX + 1, 0.5)
    with pytest.raises(OutOfDomain):
        eval_Q_bilateral(m, 3, 1, 0.5)
    with pytest.raises(OutOfDomain):
        eval_Q_halfline(build_model("mm1", 1, 2), -1, 0.5)
    with pytest.raises(OutOfDomain):
        q_table_bilateral(build_model("mm1", 1, 2), 0, 3, 0.5)


@settings(max_examples=60, deadline=None)
@given(
    lam=st.floats(0.2, 5.0),
    mu=st.floats(0.2, 5.0),
    n=st.integers(-12, 12),
    u=st.floats(0.0, 1.0),
)
def test_constant_rate_closed_form_property(lam, mu, n, u):
    m = build_model("constant-bilateral", lam, mu)
    x = (np.sqrt(lam) - np.sqrt(mu)) ** 2 + u * 4.0 * np.sqrt(lam * mu)
    for alpha in (1, 2):
        ref = eval_closed_form_Q(m, alpha, n, x)
        assert abs(eval_Q_bilateral(m, alpha, n, x) - ref) <= 1e-9 * max(1.0, abs(ref))
