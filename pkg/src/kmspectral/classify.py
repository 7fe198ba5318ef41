"""Recurrence classification and invariant distributions.

Two independent lines of evidence are produced for every model:

* spectral: where 0 sits relative to the spectral matrix. 0 outside the
  support closure means transient and an atom at 0 means positive recurrent.
  When an absolutely continuous part reaches 0 without an atom, the process
  is null recurrent if ``int x^{-1} dpsi`` diverges there (density like
  ``x^{-1/2}``) and transient if it converges (density like ``x^{1/2}``).
* rate sums: divergence of ``sum 1/(lambda_n pi_n)`` on each side of the
  origin (recurrence) and of ``sum pi_n`` (positive recurrence).  All catalog
  rates are periodic away from the origin, so every series is a finite head
  plus a geometric tail summed in closed form.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import CatalogModel, Kind, potential_coefficient
from .spectral import spectral_measure
from .spectral.measures import endpoint_exponent

__all__ = [
    "Verdict",
    "Classification",
    "classify",
    "atom_at_zero_weight",
    "invariant_distribution",
    "potential_sum",
    "potential_tail",
]

#: rates agree with their periodic pattern for |n| >= _HEAD
_HEAD = 4
_PERIOD = 2
_RATIO_TOL = 1e-12
_ZERO_TOL = 1e-12


class Verdict(str, enum.Enum):
    TRANSIENT = "transient"
    NULL_RECURRENT = "null-recurrent"
    POSITIVE_RECURRENT = "positive-recurrent"


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    spectral: Verdict
    ratesum: Verdict

    @property
    def agree(self) -> bool:
        return self.spectral is self.ratesum


def _series(term: Callable[[int], float], start: int, step: int) -> float:
    """``sum_{k >= 0} term(start + k step)`` for eventually periodic-geometric terms.

    Terms are summed explicitly up to ``|n| = _HEAD``; past that, one period
    of ``_PERIOD`` terms repeats with a fixed ratio, giving a geometric series.
    Returns ``inf`` when the ratio is 1 or larger.
    """
    total = 0.0
    n = start
    while abs(n) < _HEAD:
        total += term(n)
        n += step
    block = sum(term(n + step * m) for m in range(_PERIOD))
    ratio = term(n + step * _PERIOD) / term(n)
    if ratio >= 1.0 - _RATIO_TOL:
        return math.inf
    return total + block / (1.0 - ratio)


def _sides(model: CatalogModel):
    """``(start, step)`` of each side: ``0, 1, 2, ...`` and ``-1, -2, ...``."""
    if model.kind is Kind.HALF_LINE:
        return [(0, 1)]
    return [(0, 1), (-1, -1)]


def _pi(model: CatalogModel) -> Callable[[int], float]:
    return lambda n: potential_coefficient(model, n)


def potential_sum(model: CatalogModel) -> float:
    """``sum_n pi_n`` over the whole state space (``inf`` when divergent)."""
    return sum(_series(_pi(model), s, d) for s, d in _sides(model))


def potential_tail(model: CatalogModel, n_lo: int, n_hi: int) -> float:
    """``sum of pi_n`` over states outside ``[n_lo, n_hi]``, in closed form."""
    pi = _pi(model)
    upper = _series(pi, n_hi + 1, 1)
    if model.kind is Kind.HALF_LINE:
        return upper
    return upper + _series(pi, n_lo - 1, -1)


def _ratesum_verdict(model: CatalogModel) -> Verdict:
    pi = _pi(model)

    def inverse_flux(n: int) -> float:
        return 1.0 / (model.rates(n)[0] * pi(n))

    scale = [_series(inverse_flux, s, d) for s, d in _sides(model)]
    mass = [_series(pi, s, d) for s, d in _sides(model)]
    if model.kind is Kind.HALF_LINE:
        # With mu_0 > 0 the chain is absorbed below 0.  The spectral gap closes
        # exactly when both the scale and the speed series diverge; that is
        # the rate-sum counterpart of 0 lying in the support closure.
        if math.isinf(scale[0]) and math.isinf(mass[0]):
            return Verdict.NULL_RECURRENT
        return Verdict.TRANSIENT
    if not all(math.isinf(s) for s in scale):
        return Verdict.TRANSIENT
    if all(math.isfinite(m) for m in mass):
        return Verdict.POSITIVE_RECURRENT
    return Verdict.NULL_RECURRENT


def _spectral_verdict(model: CatalogModel) -> Verdict:
    measure = spectral_measure(model)
    atom = measure.atom_at(0.0)
    if atom is not None:
        w = np.asarray(atom.weight, dtype=float)
        if float(w.flat[0]) > _ZERO_TOL:
            return Verdict.POSITIVE_RECURRENT
    at_zero = [p for p in measure.pieces if p.a <= _ZERO_TOL]
    if not at_zero:
        return Verdict.TRANSIENT
    if model.kind is Kind.HALF_LINE:
        # the absorbing queue is classified by whether its support reaches 0
        return Verdict.NULL_RECURRENT
    # int x^{-1} dpsi diverges iff the density at 0 is not O(x^p) with p > 0;
    # catalog densities behave like x^{1/2} or x^{-1/2} there
    if min(endpoint_exponent(p, "left") for p in at_zero) <= 0.25:
        return Verdict.NULL_RECURRENT
    return Verdict.TRANSIENT


def classify(model: CatalogModel) -> Classification:
    """Transient / null recurrent / positive recurrent, with both lines of evidence.

    The reported verdict is the spectral one; ``agree`` tells whether the
    rate-sum criteria concur.
    """
    spectral = _spectral_verdict(model)
    return Classification(spectral, spectral, _ratesum_verdict(model))


def atom_at_zero_weight(model: CatalogModel) -> float:
    """Size of the jump of every spectral measure at 0: ``(sum pi_n)^{-1}`` or 0.

    The absorbing M/M/1 model never has a jump at 0, even when ``sum pi_n``
    converges, because its measure describes the process killed below 0.
    """
    if model.kind is Kind.HALF_LINE:
        return 0.0
    if _ratesum_verdict(model) is not Verdict.POSITIVE_RECURRENT:
        return 0.0
    return 1.0 / potential_sum(model)


def invariant_distribution(model: CatalogModel, n_lo: int, n_hi: int) -> np.ndarray | None:
    """``pi_n / sum pi`` for ``n_lo <= n <= n_hi``, or ``None`` unless positive recurrent."""
    if n_lo > n_hi:
        raise ValueError(f"empty window [{n_lo}, {n_hi}]")
    if classify(model).verdict is not Verdict.POSITIVE_RECURRENT:
        return None
    total = potential_sum(model)
    return np.array([potential_coefficient(model, n) for n in range(n_lo, n_hi + 1)]) / total
