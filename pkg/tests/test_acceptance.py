"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (lines are printed even with output capture on) or directly
with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from kmspectral import (
    Family,
    Kind,
    Verdict,
    atom_at_zero_weight,
    build_model,
    classify,
    closed_form_transition,
    current_row,
    figure_models,
    invariant_distribution,
    oracle_row,
    potential_tail,
    spectral_matrix,
    spectral_measure,
    spectral_measure_halfline,
    total_mass,
    transition_row,
    truncated_generator,
    verify_coupling,
)
from kmspectral.errors import DegenerateParameters
from kmspectral.model import FIGURE_FAMILY
from kmspectral.polynomials import eval_closed_form_Q, q_table_bilateral, q_table_halfline

T, N, P = Verdict.TRANSIENT, Verdict.NULL_RECURRENT, Verdict.POSITIVE_RECURRENT

# e^{-2} I_0(2) from a 30-digit mpmath evaluation
SPOT_P00 = 0.308508322553671039533


def _all_models():
    return [m for f in Family for m in figure_models(f)]


def _states(model, k):
    return range(0, k + 1) if model.kind is Kind.HALF_LINE else range(-k, k + 1)


def _row(model, i, t, states):
    return np.array([r.value for r in transition_row(model, i, t, states[0], states[-1])])


# --------------------------------------------------------------------------


def criterion_1():
    start = time.perf_counter()
    worst = 0.0
    for m in _all_models():
        states = list(_states(m, 5))
        for t in (0.5, 1.0, 3.0):
            for i in states:
                km = _row(m, i, t, states)
                ref = np.array([r.value for r in oracle_row(m, i, t, states[0], states[-1])])
                worst = max(worst, float(np.max(np.abs(km - ref))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed <= 120.0
    return ok, f"oracle agreement: max |KM - oracle| = {worst:.2e} (tol 1e-6), {elapsed:.1f} s (limit 120 s)"


def criterion_2():
    worst_const = worst_mm1 = 0.0
    times = (0.5, 1.0, 3.0, 6.0, 9.0)
    for m in figure_models(Family.CONSTANT):
        states = list(_states(m, 6))
        for t in times:
            for i in states:
                km = _row(m, i, t, states)
                ref = np.array([closed_form_transition(m, i, j, t).value for j in states])
                worst_const = max(worst_const, float(np.max(np.abs(km - ref))))
    for m in figure_models(Family.MM1):
        states = list(_states(m, 6))
        for t in times:
            for i in states:
                km = _row(m, i, t, states)
                ref = np.array([closed_form_transition(m, i, j, t).value for j in states])
                worst_mm1 = max(worst_mm1, float(np.max(np.abs(km - ref))))
    m = build_model(Family.CONSTANT, 1.0, 1.0)
    spot = max(
        abs(closed_form_transition(m, 0, 0, 1.0).value - SPOT_P00),
        abs(_row(m, 0, 1.0, [0])[0] - SPOT_P00),
    )
    ok = worst_const <= 1e-8 and worst_mm1 <= 1e-8 and spot <= 1e-8
    return ok, (
        f"closed forms: constant {worst_const:.2e}, M/M/1 {worst_mm1:.2e}, "
        f"P_00(1) spot {spot:.2e} (tol 1e-8)"
    )


def criterion_3():
    worst = 0.0
    for m in _all_models():
        if m.kind is Kind.HALF_LINE:
            worst = max(worst, abs(float(total_mass(spectral_measure(m))) - 1.0))
            continue
        mass = total_mass(spectral_matrix(m))
        target = np.array([[1.0, 0.0], [0.0, m.rates(-1)[0] / m.rates(0)[1]]])
        worst = max(worst, float(np.max(np.abs(mass - target))))
        for side in ("+", "-"):
            worst = max(worst, abs(float(total_mass(spectral_measure_halfline(m, side))) - 1.0))
    return worst <= 1e-8, f"mass identities: max residual {worst:.2e} (tol 1e-8)"


def criterion_4():
    worst = 0.0
    for m in _all_models():
        if m.kind is Kind.HALF_LINE:
            continue
        for z in (-0.25, -1.0, -5.0, -50.0):
            worst = max(worst, max(verify_coupling(m, z)))
    return worst <= 1e-8, f"coupling relations: max residual {worst:.2e} (tol 1e-8)"


def criterion_5():
    worst = 0.0
    for m in _all_models():
        states = list(_states(m, 8))
        for i in states:
            p = _row(m, i, 0.0, states)
            p[i - states[0]] -= 1.0
            worst = max(worst, float(np.max(np.abs(p))))
    return worst <= 1e-7, f"P(0) = I: max |P_ij(0) - delta_ij| {worst:.2e} (tol 1e-7)"


def criterion_6():
    cases = [
        (build_model(Family.DEFECT2, 1, 2, 1, 5), Fraction(42, 5)),
        (build_model(Family.DEFECT2, 2, 1, 5, 1), Fraction(15, 2)),
        (build_model(Family.SPLIT, 1, 2.5, 1, 2), Fraction(20, 3)),
    ]
    for lam, mu in ((1, 2), (Fraction(1, 2), 3), (Fraction(7, 10), Fraction(19, 10))):
        cases.append((build_model(Family.SYMMETRIC, float(lam), float(mu)), 2 * Fraction(lam) + 2 * Fraction(mu)))
    worst = 0.0
    for m, loc in cases:
        dist = min(abs(a.location - float(loc)) for a in spectral_matrix(m).atoms)
        worst = max(worst, dist)
    return worst <= 1e-12, f"atom locations 42/5, 15/2, 20/3, 2lam+2mu: max error {worst:.2e} (tol 1e-12)"


def _expected_verdict(family, p):
    lam, mu = p[0], p[1]
    if family in (Family.MM1, Family.CONSTANT):
        return N if lam == mu else T
    if family is Family.SYMMETRIC:
        return P if lam < mu else (N if lam == mu else T)
    if family in (Family.ALTERNATING1, Family.ALTERNATING2):
        return N
    if family is Family.DEFECT1:
        return N if lam == mu else T
    if family is Family.DEFECT2:
        return P if lam < mu else (N if lam == mu else T)
    alpha, beta = p[2], p[3]
    if lam > mu or alpha > beta:
        return T
    if lam < mu and alpha < beta:
        return P
    if lam == mu and alpha == beta:
        return N
    return None  # not covered by the stated rules; only agreement is checked


def criterion_7():
    grid = (0.5, 1.0, 2.0, 3.0)
    checked = mismatched = disagree = 0
    bad = []
    for family in Family:
        arity = 2 if family in (Family.MM1, Family.CONSTANT, Family.SYMMETRIC, Family.ALTERNATING1, Family.ALTERNATING2) else 4
        for p in itertools.product(grid, repeat=arity):
            try:
                m = build_model(family, *p)
            except DegenerateParameters:
                continue
            c = classify(m)
            expected = _expected_verdict(family, p)
            checked += 1
            if expected is not None and c.verdict is not expected:
                mismatched += 1
                bad.append(m.describe())
            if not c.agree:
                disagree += 1
                bad.append(m.describe() + " (evidence disagrees)")
    ok = mismatched == 0 and disagree == 0
    detail = f"classification: {checked} models, {mismatched} verdict mismatches, {disagree} evidence disagreements"
    if bad:
        detail += f"; first: {bad[0]}"
    return ok, detail


def criterion_8():
    pr_models = [m for m in _all_models() if classify(m).verdict is P]
    norm = resid = ergodic = 0.0
    for m in pr_models:
        lo, hi = -20, 20
        pi = invariant_distribution(m, lo, hi)
        norm = max(norm, abs(pi.sum() + potential_tail(m, lo, hi) * atom_at_zero_weight(m) - 1.0))
        r = pi @ truncated_generator(m, lo, hi).matrix
        resid = max(resid, float(np.max(np.abs(r[1:-1]))) / float(np.linalg.norm(pi)))
        states = list(range(-3, 4))
        p = _row(m, 0, 200.0, states)
        ergodic = max(ergodic, float(np.max(np.abs(p - pi[states[0] - lo : states[-1] - lo + 1]))))
    sym = invariant_distribution(build_model(Family.SYMMETRIC, 1, 2), -2, 2)
    frozen = max(
        float(np.max(np.abs(sym - [0.125, 0.25, 0.25, 0.125, 0.0625]))),
        abs(invariant_distribution(build_model(Family.SPLIT, 1, 2, 1, 2), 0, 0)[0] - 0.25),
    )
    ok = norm <= 1e-12 and resid <= 1e-12 and ergodic <= 1e-5 and frozen <= 1e-12 and len(pr_models) > 0
    return ok, (
        f"invariant distributions ({len(pr_models)} models): normalization {norm:.2e}, "
        f"stationarity {resid:.2e} (tol 1e-12), ergodic {ergodic:.2e} (tol 1e-5), frozen values {frozen:.2e}"
    )


def criterion_9():
    worst = 0.0
    for family in FIGURE_FAMILY.values():
        for m in figure_models(family):
            lo = 0 if m.kind is Kind.HALF_LINE else -15
            for t in (3.0, 6.0, 9.0):
                direct = current_row(m, 0, t, lo, 15, method="direct")
                dual = current_row(m, 0, t, lo, 15, method="dual")
                worst = max(worst, float(np.max(np.abs(direct - dual))))
    mm1 = build_model(Family.MM1, 1, 2)
    fig1 = max(float(current_row(mm1, 0, t, 1, 1)[0]) for t in (3.0, 6.0, 9.0))
    sym = build_model(Family.SYMMETRIC, 1, 2)
    fig2 = min(float(np.min(current_row(sym, 0, t, -15, 0))) for t in (3.0, 6.0, 9.0))
    ok_agree, ok_fig1, ok_fig2 = worst <= 1e-8, fig1 < 0.0, fig2 >= 0.0
    detail = (
        f"currents: direct vs dual {worst:.2e} (tol 1e-8) {'ok' if ok_agree else 'FAIL'}; "
        f"Fig. 1 max Omega(1) = {fig1:.3e} (< 0) {'ok' if ok_fig1 else 'FAIL'}; "
        f"Fig. 2(a) min Omega(n<=0) = {fig2:.3e} (>= 0) {'ok' if ok_fig2 else 'FAIL'}"
    )
    return ok_agree and ok_fig1 and ok_fig2, detail


def _support_grid(m, per_piece=41):
    measure = spectral_measure(m)
    xs = [np.linspace(p.a, p.b, per_piece) for p in measure.pieces]
    xs.append(np.array([a.location for a in measure.atoms]))
    return np.concatenate(xs)


def criterion_10():
    rel = resid = 0.0
    for m in _all_models():
        x = _support_grid(m)
        if m.kind is Kind.HALF_LINE:
            lo, alphas = 0, (None,)
            table = q_table_halfline(m.rule, 15, x)[None]
        else:
            lo, alphas = -15, (1, 2)
            table = q_table_bilateral(m, -15, 15, x)
        for a_idx, alpha in enumerate(alphas):
            closed = np.array([eval_closed_form_Q(m, alpha, n, x) for n in range(lo, 16)])
            rel = max(rel, float(np.max(np.abs(table[a_idx] - closed) / np.maximum(np.abs(closed), 1.0))))
            # closed forms substituted into lam_n Q_{n+1} - (lam_n + mu_n - x) Q_n + mu_n Q_{n-1} = 0
            for k in range(1, closed.shape[0] - 1):
                lam, mu = m.rates(lo + k)
                terms = (lam * closed[k + 1], (lam + mu - x) * closed[k], mu * closed[k - 1])
                scale = np.maximum(sum(np.abs(v) for v in terms), 1.0)
                resid = max(resid, float(np.max(np.abs(terms[0] - terms[1] + terms[2]) / scale)))
    ok = rel <= 1e-10 and resid <= 1e-9
    return ok, f"polynomials: recurrence vs closed form {rel:.2e} (tol 1e-10), recurrence residual {resid:.2e} (tol 1e-9)"


CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
]


def _line(number, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number, capsys):
    ok, detail = CRITERIA[number - 1]()
    with capsys.disabled():
        print("\n" + _line(number, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for k, fn in enumerate(CRITERIA, start=1):
        ok, detail = fn()
        results.append(ok)
        print(_line(k, ok, detail), flush=True)
    print(f"{sum(results)}/{len(results)} criteria pass")
