import numpy as np
import pytest

from kmspectral import (
    Verdict,
    atom_at_zero_weight,
    build_model,
    classify,
    invariant_distribution,
    potential_sum,
    potential_tail,
    spectral_matrix,
    truncated_generator,
)

T, N, P = Verdict.TRANSIENT, Verdict.NULL_RECURRENT, Verdict.POSITIVE_RECURRENT


@pytest.mark.parametrize(
    "family,params,verdict",
    [
        ("mm1", (1, 1), N),
        ("mm1", (1, 2), T),
        ("mm1", (2, 1), T),
        ("constant-bilateral", (1, 1), N),
        ("constant-bilateral", (1, 3), T),
        ("symmetric-bilateral", (1, 2), P),
        ("symmetric-bilateral", (2, 2), N),
        ("symmetric-bilateral", (2, 1), T),
        ("alternating-case1", (1, 3), N),
        ("alternating-case2", (3, 1), N),
        ("defect-case1", (1, 1, 3, 5), N),
        ("defect-case1", (1, 2, 1, 5), T),
        ("defect-case2", (1, 2, 1, 5), P),
        ("defect-case2", (2, 2, 1, 5), N),
        ("defect-case2", (2, 1, 5, 1), T),
        ("split-queues", (1, 2, 1, 2), P),
        ("split-queues", (1, 1, 2, 2), N),
        ("split-queues", (3, 1, 2, 1.5), T),
        ("split-queues", (1, 2, 3, 1.5), T),
        ("split-queues", (1, 1, 3, 2), T),
        ("split-queues", (1, 2, 3, 3), N),
    ],
)
def test_verdicts(family, params, verdict):
    c = classify(build_model(family, *params))
    assert c.verdict is verdict
    assert c.agree


def test_invariant_distribution_of_the_symmetric_model():
    pi = invariant_distribution(build_model("symmetric-bilateral", 1, 2), -2, 2)
    assert pi == pytest.approx([0.125, 0.25, 0.25, 0.125, 0.0625], rel=1e-14)


def test_invariant_distribution_of_split_queues():
    lam, mu, al, be = 1.0, 2.0, 1.0, 2.0
    pi = invariant_distribution(build_model("split-queues", lam, mu, al, be), 0, 0)
    assert pi[0] == pytest.approx((be - al) * (mu - lam) / (mu * (be - al + mu - lam)), rel=1e-14)


def test_invariant_distribution_of_defect_model():
    lam, mu, lam0, mu0 = 1.0, 2.0, 1.0, 5.0
    pi = invariant_distribution(build_model("defect-case2", lam, mu, lam0, mu0), -1, 1)
    scale = (mu - lam) / (mu - lam + mu0 + lam0)
    assert pi == pytest.approx([scale * mu0 / mu, scale, scale * lam0 / mu], rel=1e-14)


def test_no_invariant_distribution_unless_positive_recurrent():
    assert invariant_distribution(build_model("constant-bilateral", 1, 1), -2, 2) is None
    with pytest.raises(ValueError):
        invariant_distribution(build_model("symmetric-bilateral", 1, 2), 2, -2)


@pytest.mark.parametrize(
    "family,params",
    [("symmetric-bilateral", (1, 2)), ("defect-case2", (1, 2, 1, 5)), ("split-queues", (1, 2, 1, 2)), ("split-queues", (1, 2.5, 1, 2))],
)
def test_atom_weight_and_stationarity(family, params):
    m = build_model(family, *params)
    w = atom_at_zero_weight(m)
    assert w == pytest.approx(1.0 / potential_sum(m), rel=1e-14)
    atom = spectral_matrix(m).atom_at(0.0)
    assert float(np.asarray(atom.weight)[0, 0]) == pytest.approx(w, abs=1e-10)
    pi = invariant_distribution(m, -20, 20)
    assert pi.sum() + potential_tail(m, -20, 20) * w == pytest.approx(1.0, abs=1e-12)
    residual = pi @ truncated_generator(m, -20, 20).matrix
    assert np.max(np.abs(residual[1:-1])) <= 1e-12 * np.linalg.norm(pi)


def test_no_atom_weight_without_positive_recurrence():
    assert atom_at_zero_weight(build_model("constant-bilateral", 1, 2)) == 0.0
    assert atom_at_zero_weight(build_model("mm1", 1, 2)) == 0.0
