"""Recurrence polynomials ``Q_n`` / ``Q_n^alpha``, their duals and closed forms.

Values grow geometrically in ``|n|`` off the spectral support, so recurrence
evaluation is limited to ``|n| <= MAX_INDEX``.  Inside the support the closed
forms are stable for any index.
"""
from __future__ import annotations

import numpy as np

from .errors import NoClosedForm, OutOfDomain
from .model import CatalogModel, Family, Kind, RateRule, half_line, potential_coefficient
from .specialfns import chebyshev_T, chebyshev_U_table

__all__ = [
    "MAX_INDEX",
    "q_table_halfline",
    "q_table_bilateral",
    "eval_Q_halfline",
    "eval_Q_bilateral",
    "eval_dual_H",
    "eval_closed_form_Q",
]

MAX_INDEX = 64


def _check_index(n: int) -> None:
    if abs(n) > MAX_INDEX:
        raise OutOfDomain(f"|n| = {abs(n)} exceeds the recurrence window {MAX_INDEX}")


def _as_rule(model: CatalogModel | RateRule, side: str) -> RateRule:
    if isinstance(model, RateRule):
        if model.kind is not Kind.HALF_LINE:
            raise OutOfDomain("expected a half-line rate rule")
        return model
    if model.kind is Kind.HALF_LINE:
        return model.rule
    return half_line(model, side)


def q_table_halfline(rule: RateRule, nmax: int, x) -> np.ndarray:
    """Rows ``Q_0(x) .. Q_nmax(x)`` of a half-line family (forward recurrence)."""
    _check_index(nmax)
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    prev = np.zeros_like(x)
    out[0] = 1.0
    for n in range(nmax):
        lam, mu = rule.rate_at(n)
        out[n + 1] = ((lam + mu - x) * out[n] - mu * prev) / lam
        prev = out[n]
    return out


def q_table_bilateral(model: CatalogModel, n_lo: int, n_hi: int, x) -> np.ndarray:
    """``Q_n^alpha(x)`` for ``n_lo <= n <= n_hi``, shape ``(2, n_hi-n_lo+1, *x.shape)``.

    Marches outward from the initial pair at indices -1, 0: forward for
    ``n >= 1``, backward for ``n <= -2``.
    """
    if model.kind is not Kind.BILATERAL:
        raise OutOfDomain(f"{model.family} is not a bilateral model")
    _check_index(n_lo)
    _check_index(n_hi)
    x = np.asarray(x, dtype=float)
    lo, hi = min(n_lo, -1), max(n_hi, 0)
    rate = model.rule.rate_at
    full = np.empty((2, hi - lo + 1) + x.shape)
    i0 = -lo  # position of index 0
    full[0, i0], full[1, i0] = 1.0, 0.0
    full[0, i0 - 1], full[1, i0 - 1] = 0.0, 1.0
    for n in range(0, hi):
        lam, mu = rate(n)
        k = i0 + n
        full[:, k + 1] = ((lam + mu - x) * full[:, k] - mu * full[:, k - 1]) / lam
    for n in range(-1, lo, -1):
        lam, mu = rate(n)
        k = i0 + n
        full[:, k - 1] = ((lam + mu - x) * full[:, k] - lam * full[:, k + 1]) / mu
    return full[:, n_lo - lo : n_hi - lo + 1]


def _scalar(v):
    return float(v) if np.ndim(v) == 0 else v


def eval_Q_halfline(model: CatalogModel | RateRule, n: int, x, side: str = "+"):
    """``Q_n(x)`` of a half-line family, ``n >= 0``.

    ``model`` is the M/M/1 model, a bilateral model together with ``side``
    naming its half-line factor, or a half-line ``RateRule``.
    """
    if n < 0:
        raise OutOfDomain(f"half-line polynomials need n >= 0, got {n}")
    rule = _as_rule(model, side)
    return _scalar(q_table_halfline(rule, n, x)[n])


def eval_Q_bilateral(model: CatalogModel, alpha: int, n: int, x):
    if alpha not in (1, 2):
        raise OutOfDomain(f"alpha must be 1 or 2, got {alpha}")
    return _scalar(q_table_bilateral(model, n, n, x)[alpha - 1, 0])


def eval_dual_H(model: CatalogModel, alpha: int | None, n: int, x):
    """Dual polynomial ``H_n`` (half line) or ``H_n^alpha`` (bilateral).

    ``H_{n+1} = lambda_n pi_n (Q_{n+1} - Q_n)``; on the half line ``H_0 = mu_0``.
    """
    x = np.asarray(x, dtype=float)
    if model.kind is Kind.HALF_LINE:
        if n < 0:
            raise OutOfDomain(f"half-line dual polynomials need n >= 0, got {n}")
        if n == 0:
            return _scalar(np.full_like(x, model.rates(0)[1]))
        q = q_table_halfline(model.rule, n, x)
        lam = model.rates(n - 1)[0]
        return _scalar(lam * potential_coefficient(model, n - 1) * (q[n] - q[n - 1]))
    if alpha not in (1, 2):
        raise OutOfDomain(f"alpha must be 1 or 2, got {alpha}")
    q = q_table_bilateral(model, n - 1, n, x)[alpha - 1]
    lam = model.rates(n - 1)[0]
    return _scalar(lam * potential_coefficient(model, n - 1) * (q[1] - q[0]))


# --------------------------------------------------------------------------
# closed forms


def _U(k: int, y):
    return chebyshev_U_table(max(k, 0), y)[k + 2]


def _mm1_pair(r: float, y, n: int, alpha: int):
    """Constant-rate building block: positive index ``n >= 0`` with ratio ``r``."""
    if alpha == 1:
        return r ** (n / 2) * _U(n, y)
    return -(r ** ((n + 1) / 2)) * _U(n - 1, y)


def _mm1_negative(r: float, y, m: int, alpha: int):
    """Value at index ``-m-1`` for a constant-rate negative side with ratio ``r``."""
    if alpha == 1:
        return -(r ** ((m + 1) / 2)) * _U(m - 1, y)
    return r ** (m / 2) * _U(m, y)


def _defect_positive(model: CatalogModel, y, n: int, alpha: int):
    lam, mu, lam0, mu0 = model.lam, model.mu, model.lam0, model.mu0
    r = mu / lam
    if alpha == 1:
        return r ** (n / 2) * (
            2.0 * (lam0 - lam) / lam0 * chebyshev_T(n, y)
            + (2.0 * lam - lam0) / lam0 * _U(n, y)
            + np.sqrt(lam / mu) * (lam0 + mu0 - lam - mu) / lam0 * _U(n - 1, y)
        )
    return -(mu0 / lam0) * r ** ((n - 1) / 2) * _U(n - 1, y)


def _alt1(model: CatalogModel, x, n: int, alpha: int):
    lam, mu = model.lam, model.mu
    y = -1.0 + (2 * lam - x) * (2 * mu - x) / (2 * lam * mu)
    even = lambda k: (2 * y + 1) * _U(k - 1, y) - _U(k - 2, y)  # noqa: E731
    if alpha == 1:
        if n >= 0 and n % 2 == 0:
            return even(n // 2)
        if n >= 0:
            return -(x - 2 * lam) / lam * _U((n - 1) // 2, y)
        if n % 2 == 0:  # n = -2k-2
            return -even((-n - 2) // 2)
        return (x - 2 * lam) / lam * _U((-n - 1) // 2 - 1, y)  # n = -2k-1
    if n == 1:
        return -np.ones_like(y)
    if n >= 0 and n % 2 == 0:
        return (x - 2 * mu) / mu * _U(n // 2 - 1, y)
    if n >= 0:
        return -even((n - 1) // 2)
    if n % 2 == 0:  # n = -2k
        return -(x - 2 * mu) / mu * _U(-n // 2 - 1, y)
    return even((-n - 1) // 2)  # n = -2k-1


def _alt2(model: CatalogModel, x, n: int, alpha: int):
    lam, mu = model.lam, model.mu
    if n < 0:
        # mirror symmetry: Q^1_{-n-1} = Q^2_n and Q^2_{-n-1} = Q^1_n
        return _alt2(model, x, -n - 1, 3 - alpha)
    y = ((lam + mu - x) ** 2 - lam**2 - mu**2) / (2 * lam * mu)
    if alpha == 1:
        if n % 2 == 0:
            k = n // 2
            if k == 0:
                return np.ones_like(y)
            return (2 * y + mu / lam) * _U(k - 1, y) - _U(k - 2, y)
        return (lam + mu - x) / lam * _U((n - 1) // 2, y)
    if n == 1:
        return np.full_like(y, -mu / lam)
    if n % 2 == 0:
        return (x - lam - mu) / lam * _U(n // 2 - 1, y)
    k = (n - 1) // 2
    return -(mu / lam) * ((2 * y + lam / mu) * _U(k - 1, y) - _U(k - 2, y))


def eval_closed_form_Q(model: CatalogModel, alpha: int | None, n: int, x):
    """Closed-form polynomial value for a catalog model.

    ``alpha`` is ignored for the half-line M/M/1 model.
    """
    x = np.asarray(x, dtype=float)
    fam = model.family
    lam, mu = model.lam, model.mu
    y = (lam + mu - x) / (2.0 * np.sqrt(lam * mu))
    if fam is Family.MM1:
        if n < 0:
            raise OutOfDomain("half-line polynomials need n >= 0")
        return _scalar(_mm1_pair(mu / lam, y, n, 1))
    if alpha not in (1, 2):
        raise OutOfDomain(f"alpha must be 1 or 2, got {alpha}")
    if fam in (Family.CONSTANT, Family.SYMMETRIC, Family.SPLIT):
        if n >= 0:
            return _scalar(_mm1_pair(mu / lam, y, n, alpha))
        m = -n - 1
        if fam is Family.CONSTANT:
            return _scalar(_mm1_negative(lam / mu, y, m, alpha))
        if fam is Family.SYMMETRIC:
            return _scalar(_mm1_negative(mu / lam, y, m, alpha))
        a, b = model.alpha, model.beta
        yn = (a + b - x) / (2.0 * np.sqrt(a * b))
        return _scalar(_mm1_negative(b / a, yn, m, alpha))
    if fam in (Family.DEFECT1, Family.DEFECT2):
        if n >= 0:
            return _scalar(_defect_positive(model, y, n, alpha))
        m = -n - 1
        ratio = lam / mu if fam is Family.DEFECT1 else mu / lam
        return _scalar(_mm1_negative(ratio, y, m, alpha))
    if fam is Family.ALTERNATING1:
        return _scalar(_alt1(model, x, n, alpha))
    if fam is Family.ALTERNATING2:
        return _scalar(_alt2(model, x, n, alpha))
    raise NoClosedForm(f"no closed form for {fam}")
