"""Reference transition probabilities from a truncated generator.

The generator is cut to a finite window whose boundary rows keep their full
diagonal, so probability reaching the edge leaks out instead of reflecting.
Uniformization then gives

    P(t) = sum_k Poisson(k; q t) S^k,   S = I + A / q,

with two a-priori error terms: the Poisson tail beyond the last retained
power, and the chance of reaching the window edge at all by time ``t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson

from .errors import OutOfDomain, WindowTooLarge
from .km import Method, TransitionResult
from .model import CatalogModel, Kind

__all__ = [
    "TruncatedGenerator",
    "truncated_generator",
    "leakage_bound",
    "oracle_row",
    "oracle_transition",
    "DEFAULT_WINDOW_CAP",
]

DEFAULT_WINDOW_CAP = 4096


@dataclass(frozen=True)
class TruncatedGenerator:
    """Tridiagonal generator on states ``n_lo..n_hi``.

    ``lower[k]`` is the rate from state ``n_lo + k`` down one step, ``upper[k]``
    the rate up one step and ``diag[k] = -(lambda + mu)`` of that state.
    """

    n_lo: int
    n_hi: int
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    @property
    def window(self) -> tuple[int, int]:
        return self.n_lo, self.n_hi

    @property
    def size(self) -> int:
        return self.n_hi - self.n_lo + 1

    @property
    def q_max(self) -> float:
        return float(np.max(-self.diag))

    @property
    def matrix(self) -> np.ndarray:
        """Dense copy of the generator (for inspection and small windows)."""
        m = np.diag(self.diag)
        m[np.arange(self.size - 1), np.arange(1, self.size)] = self.upper[:-1]
        m[np.arange(1, self.size), np.arange(self.size - 1)] = self.lower[1:]
        return m

    def step(self, v: np.ndarray, q: float) -> np.ndarray:
        """Row vector times ``S = I + A/q``."""
        out = v * (1.0 + self.diag / q)
        out[1:] += v[:-1] * self.upper[:-1] / q
        out[:-1] += v[1:] * self.lower[1:] / q
        return out


def truncated_generator(model: CatalogModel, n_lo: int, n_hi: int) -> TruncatedGenerator:
    """Generator rows ``(mu_n, -(lambda_n + mu_n), lambda_n)`` for ``n_lo <= n <= n_hi``."""
    if n_lo >= n_hi:
        raise OutOfDomain(f"window [{n_lo}, {n_hi}] must contain at least two states")
    if model.kind is Kind.HALF_LINE and n_lo < 0:
        raise OutOfDomain("the M/M/1 model lives on n >= 0")
    rates = np.array([model.rates(n) for n in range(n_lo, n_hi + 1)])
    lam, mu = rates[:, 0], rates[:, 1]
    return TruncatedGenerator(n_lo, n_hi, lower=mu.copy(), diag=-(lam + mu), upper=lam.copy())


def _edge_distance(model: CatalogModel, i: int, n_lo: int, n_hi: int) -> int:
    if model.kind is Kind.HALF_LINE and n_lo == 0:
        # state 0 loses mu_0 to the absorbing state exactly as the true process does
        return n_hi - i
    return min(i - n_lo, n_hi - i)


def leakage_bound(model: CatalogModel, i: int, t: float, n_lo: int, n_hi: int) -> float:
    """Upper bound on the probability of reaching the window edge from ``i`` by time ``t``.

    Every path to the edge makes more than ``d`` jumps, ``d`` being the distance
    to the nearer leaking edge, and jumps are dominated by a Poisson process of
    rate ``q_max``.
    """
    if not n_lo <= i <= n_hi:
        raise OutOfDomain(f"state {i} is outside the window [{n_lo}, {n_hi}]")
    if t == 0.0:
        return 0.0
    q = truncated_generator(model, n_lo, n_hi).q_max
    return float(poisson.sf(_edge_distance(model, i, n_lo, n_hi), q * t))


def _window(model: CatalogModel, i: int, j_lo: int, j_hi: int, t: float, tol: float, cap: int):
    # the exit rate over the relevant states bounds q; family rates are periodic
    probe = range(min(i, j_lo) - 4, max(i, j_hi) + 5)
    if model.kind is Kind.HALF_LINE:
        probe = range(0, max(i, j_hi) + 5)
    q = max(sum(model.rates(n)) for n in probe)
    qt = q * t
    half = int(math.ceil(qt + 12.0 * math.sqrt(qt + 1.0) + 12.0))
    while poisson.sf(half, qt) >= tol / 2:
        half += 8
    n_lo = min(i - half, j_lo - 1)
    n_hi = max(i + half, j_hi + 1)
    if model.kind is Kind.HALF_LINE:
        n_lo = 0
    if n_hi - n_lo + 1 > cap:
        raise WindowTooLarge(f"window of {n_hi - n_lo + 1} states exceeds the cap of {cap}")
    return n_lo, n_hi


def oracle_row(
    model: CatalogModel,
    i: int,
    t: float,
    j_lo: int,
    j_hi: int,
    tol: float = 1e-10,
    cap: int = DEFAULT_WINDOW_CAP,
) -> list[TransitionResult]:
    """``P_{i,j}(t)`` for ``j_lo <= j <= j_hi`` by uniformization."""
    if not (t >= 0.0 and math.isfinite(t)):
        raise OutOfDomain(f"t must be finite and >= 0, got {t}")
    if model.kind is Kind.HALF_LINE and min(i, j_lo) < 0:
        raise OutOfDomain("the M/M/1 model lives on n >= 0")
    n_lo, n_hi = _window(model, i, j_lo, j_hi, t, tol, cap)
    gen = truncated_generator(model, n_lo, n_hi)
    v = np.zeros(gen.size)
    v[i - n_lo] = 1.0
    if t == 0.0:
        return [TransitionResult(float(v[j - n_lo]), Method.ORACLE, 0.0) for j in range(j_lo, j_hi + 1)]
    q = gen.q_max
    qt = q * t
    k_max = int(poisson.isf(tol / 2, qt)) + 1
    pmf = poisson.pmf(np.arange(k_max + 1), qt)
    acc = pmf[0] * v
    for k in range(1, k_max + 1):
        v = gen.step(v, q)
        acc += pmf[k] * v
    tail = float(poisson.sf(k_max, qt))
    leak = leakage_bound(model, i, t, n_lo, n_hi)
    err = tail + leak
    return [TransitionResult(float(acc[j - n_lo]), Method.ORACLE, err) for j in range(j_lo, j_hi + 1)]


def oracle_transition(
    model: CatalogModel, i: int, j: int, t: float, tol: float = 1e-10, cap: int = DEFAULT_WINDOW_CAP
) -> TransitionResult:
    """``P_ij(t)`` by uniformization of the truncated generator, error bounded by ``tol``."""
    return oracle_row(model, i, t, j, j, tol, cap)[0]
