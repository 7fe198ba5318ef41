"""Karlin-McGregor integrals: transition probabilities and probability currents.

For a bilateral model

    P_ij(t) = pi_j  sum_{a,b} int e^{-xt} Q_i^a(x) Q_j^b(x) dpsi_ab(x),

and for the half-line model ``P_ij(t) = pi_j int e^{-xt} Q_i Q_j dpsi``.  The
measure is discretized once (cosine-substituted Gauss-Legendre on each
absolutely continuous piece, atoms as single nodes), so a whole row of ``P``
costs one pass over the nodes.  Every result carries the difference between
the default rule and the rule with twice the nodes as its error estimate.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoClosedForm, NonConvergedQuadrature, OutOfDomain
from .model import CatalogModel, Family, Kind, potential_coefficient
from .polynomials import MAX_INDEX, q_table_bilateral, q_table_halfline
from .quadrature import QuadratureConfig, default_config, piece_nodes
from .specialfns import bessel_I_scaled
from .spectral import discretize, spectral_measure
from .spectral.measures import ACPiece

__all__ = [
    "Method",
    "TransitionResult",
    "transition_probability",
    "transition_row",
    "closed_form_transition",
    "closed_form_current",
    "probability_current",
    "current_row",
    "integrate_piece",
]


class Method(str, enum.Enum):
    QUADRATURE = "quadrature"
    CLOSED_FORM_BESSEL = "closed-form-bessel"
    ORACLE = "oracle"


@dataclass(frozen=True)
class TransitionResult:
    """A transition probability with its provenance and error estimate."""

    value: float
    method: Method
    err_estimate: float = 0.0

    def __float__(self) -> float:
        return self.value


def _check_time(t: float) -> None:
    if not (t >= 0.0 and math.isfinite(t)):
        raise OutOfDomain(f"t must be finite and >= 0, got {t}")


def _check_states(model: CatalogModel, *states: int) -> None:
    for n in states:
        if abs(n) > MAX_INDEX:
            raise OutOfDomain(f"state {n} is outside the polynomial window |n| <= {MAX_INDEX}")
        if model.kind is Kind.HALF_LINE and n < 0:
            raise OutOfDomain(f"state {n} is outside the half line")


def _decay(x: np.ndarray, t: float) -> np.ndarray:
    # exp(-(x - xmin) t) * exp(-xmin t) keeps atoms near 0 exact for large t
    if t == 0.0:
        return np.ones_like(x)
    xmin = float(x.min()) if x.size else 0.0
    return np.exp(-(x - xmin) * t) * math.exp(-xmin * t)


def _q_rows(model: CatalogModel, lo: int, hi: int, x: np.ndarray) -> np.ndarray:
    """Polynomials for states ``lo..hi``; shape ``(2, N, K)`` or ``(1, N, K)``."""
    if model.kind is Kind.HALF_LINE:
        return q_table_halfline(model.rule, hi, x)[lo:][None]
    return q_table_bilateral(model, lo, hi, x)


# Where the spectral matrix has rank one (atoms, and pieces outside the band
# of one half line) the integrand Q_i^T W Q_j equals W_11 f_i f_j, f being the
# generalized eigenvector normalised by f_0 = 1.  On a side whose rates are
# eventually constant, f is the minimal solution of the recurrence, which is
# exactly geometric.  Forming f from Q_n^1 and Q_n^2 there would instead
# subtract two geometrically growing terms.

_DECAY_PLUS, _DECAY_MINUS, _DECAY_BOTH = "+", "-", "both"


def _tail_rates(model: CatalogModel, side: str):
    """Constant tail rates of one side, or ``None`` for periodic families."""
    if model.family in (Family.ALTERNATING1, Family.ALTERNATING2):
        return None
    return model.rates(2) if side == "+" else model.rates(-2)


def _minimal_ratio(up: float, down: float, x: np.ndarray) -> np.ndarray:
    """Smaller root of ``up r^2 - (up + down - x) r + down = 0`` (``x`` off the band)."""
    c = up + down - x
    root = np.sqrt(np.clip(c * c - 4.0 * up * down, 0.0, None))
    return 2.0 * down / (c + np.copysign(root, c))


def _block_mode(model: CatalogModel, a: float, b: float) -> str | None:
    if model.kind is Kind.HALF_LINE:
        return None
    plus, minus = _tail_rates(model, "+"), _tail_rates(model, "-")
    if plus is None or minus is None:
        return None
    mid = 0.5 * (a + b)
    lo_p, hi_p = _sigma(*plus)
    lo_m, hi_m = _sigma(*minus)
    in_plus = lo_p <= mid <= hi_p
    in_minus = lo_m <= mid <= hi_m
    if in_plus and in_minus:
        return None
    if in_minus:
        return _DECAY_PLUS
    if in_plus:
        return _DECAY_MINUS
    return _DECAY_BOTH


def _sigma(a: float, b: float) -> tuple[float, float]:
    ra, rb = math.sqrt(a), math.sqrt(b)
    return (ra - rb) ** 2, (ra + rb) ** 2


def _blocks(model: CatalogModel, config: QuadratureConfig):
    """Quadrature blocks ``(x, w, mode)`` with ``w`` of shape ``(K, A, A)``."""
    measure = spectral_measure(model)
    blocks = []
    for piece in measure.pieces:
        x, w = discretize(type(measure)((piece,), ()), config)
        blocks.append((x, w, _block_mode(model, piece.a, piece.b)))
    for atom in measure.atoms:
        x, w = discretize(type(measure)((), (atom,)), config)
        mode = _DECAY_BOTH if model.kind is Kind.BILATERAL else None
        if model.family in (Family.ALTERNATING1, Family.ALTERNATING2):
            mode = None
        blocks.append((x, w, mode))
    out = []
    for x, w, mode in blocks:
        if w.ndim == 1:
            w = w[:, None, None]
        elif mode is not None:
            w = w[:, :1, :1]
        out.append((x, w, mode))
    return out


def _vectors(model: CatalogModel, mode, lo: int, hi: int, x: np.ndarray) -> np.ndarray:
    """Rows ``lo..hi`` of the polynomial vectors for one block, shape ``(A, N, K)``."""
    if mode is None:
        return _q_rows(model, lo, hi, x)
    idx = np.arange(lo, hi + 1)
    out = np.empty((1, idx.size, x.size))
    f_minus1 = None
    if mode in (_DECAY_PLUS, _DECAY_BOTH):
        r = _minimal_ratio(*_tail_rates(model, "+"), x)
        lam0, mu0 = model.rates(0)
        f_minus1 = ((lam0 + mu0 - x) - lam0 * r) / mu0
        for k, n in enumerate(idx):
            if n >= 0:
                out[0, k] = r**n
    if mode in (_DECAY_MINUS, _DECAY_BOTH):
        up, down = _tail_rates(model, "-")
        # moving outward on the negative side, mu is the outward rate
        rho = _minimal_ratio(down, up, x)
        for k, n in enumerate(idx):
            if n < 0:
                out[0, k] = rho ** (-n)
        if mode == _DECAY_MINUS:
            f_minus1 = rho
    if mode != _DECAY_BOTH:
        # the oscillatory side follows from f_0 = 1 and f_{-1} by the recurrence
        need = idx[idx < 0] if mode == _DECAY_PLUS else idx[idx >= 0]
        if need.size:
            q = _q_rows(model, int(need.min()), int(need.max()), x)
            for n in need:
                out[0, n - lo] = q[0, n - need.min()] + f_minus1 * q[1, n - need.min()]
    return out


def _block_sums(model, i, lo, hi, t, config, hvec=None):
    """``sum over blocks of e^{-xt} F_i^T W G_n`` for ``n = lo..hi``.

    ``G`` is the polynomial vector itself, or the result of ``hvec`` applied to it.
    Also returns the same sums taken over absolute values of every term, which
    bounds how much rounding the cancellation inside the integral can amplify.
    """
    total = np.zeros(hi - lo + 1)
    magnitude = np.zeros(hi - lo + 1)
    for x, w, mode in _blocks(model, config):
        a0 = min(lo - (1 if hvec else 0), i)
        if model.kind is Kind.HALF_LINE:
            a0 = max(a0, 0)
        b0 = max(hi, i)
        f = _vectors(model, mode, a0, b0, x)
        fi = f[:, i - a0, :]
        g = hvec(f, a0, lo, hi) if hvec else f[:, lo - a0 : hi - a0 + 1, :]
        decay = _decay(x, t)
        left = np.einsum("ak,kab->bk", fi, w) * decay
        total += np.einsum("bk,bmk->m", left, g)
        abs_left = np.einsum("ak,kab->bk", np.abs(fi), np.abs(w)) * decay
        magnitude += np.einsum("bk,bmk->m", abs_left, np.abs(g))
    return total, magnitude


def _row_values(model, i, lo, hi, t, config):
    raw, mag = _block_sums(model, i, lo, hi, t, config)
    pis = np.array([potential_coefficient(model, n) for n in range(lo, hi + 1)])
    return raw * pis, mag * pis


_ROUNDING_FACTOR = 8.0


def _converged_row(model, i, lo, hi, t, config, kernel):
    config = config or default_config()
    coarse, _ = kernel(model, i, lo, hi, t, config)
    fine, magnitude = kernel(model, i, lo, hi, t, config.doubled())
    worst_change = np.abs(fine - coarse)
    worst = float(worst_change.max()) if worst_change.size else 0.0
    # both rules round alike, so add a floor for rounding in cancelling sums
    err = worst_change + _ROUNDING_FACTOR * np.finfo(float).eps * magnitude
    if worst > config.convergence_tol:
        raise NonConvergedQuadrature(
            f"doubling the quadrature nodes changed the result by {worst:.3e} "
            f"(> {config.convergence_tol:g}); raise KM_SPECTRAL_NODES"
        )
    return fine, err


def transition_row(
    model: CatalogModel,
    i: int,
    t: float,
    n_lo: int,
    n_hi: int,
    config: QuadratureConfig | None = None,
) -> list[TransitionResult]:
    """``P_{i,n}(t)`` for ``n_lo <= n <= n_hi`` from one pass over the quadrature nodes."""
    _check_time(t)
    if n_lo > n_hi:
        raise OutOfDomain(f"empty state range [{n_lo}, {n_hi}]")
    _check_states(model, i, n_lo, n_hi)
    vals, err = _converged_row(model, i, n_lo, n_hi, t, config, _row_values)
    return [TransitionResult(float(v), Method.QUADRATURE, float(e)) for v, e in zip(vals, err)]


def transition_probability(
    model: CatalogModel, i: int, j: int, t: float, config: QuadratureConfig | None = None
) -> TransitionResult:
    """``P_ij(t)`` by Karlin-McGregor quadrature."""
    return transition_row(model, i, t, j, j, config)[0]


# --------------------------------------------------------------------------
# closed forms


def closed_form_transition(model: CatalogModel, i: int, j: int, t: float) -> TransitionResult:
    """Bessel-function transition probabilities of the constant-rate models.

    Absorbing M/M/1:
    ``e^{-(lam+mu)t} (lam/mu)^{(j-i)/2} [I_{i-j}(2 sqrt(lam mu) t) - I_{i+j+2}(2 sqrt(lam mu) t)]``;
    constant bilateral rates: ``e^{-(lam+mu)t} (lam/mu)^{(j-i)/2} I_{j-i}(2 sqrt(lam mu) t)``.
    """
    _check_time(t)
    lam, mu = model.lam, model.mu
    z = 2.0 * math.sqrt(lam * mu) * t
    # e^{-(lam+mu)t} I_n(z) = e^{-(sqrt lam - sqrt mu)^2 t} e^{-z} I_n(z)
    damp = math.exp(-((math.sqrt(lam) - math.sqrt(mu)) ** 2) * t)
    ratio = (lam / mu) ** ((j - i) / 2.0)
    if model.family is Family.MM1:
        if i < 0 or j < 0:
            raise OutOfDomain("the M/M/1 model lives on n >= 0")
        val = damp * ratio * (bessel_I_scaled(i - j, z) - bessel_I_scaled(i + j + 2, z))
    elif model.family is Family.CONSTANT:
        val = damp * ratio * bessel_I_scaled(j - i, z)
    else:
        raise NoClosedForm(f"no Bessel closed form for {model.family.value}")
    return TransitionResult(val, Method.CLOSED_FORM_BESSEL, 0.0)


def closed_form_current(model: CatalogModel, j: int, n: int, t: float) -> float:
    """Probability current of the constant bilateral model in Bessel functions.

    ``mu e^{-(lam+mu)t} (lam/mu)^{(n-j)/2} (sqrt(lam/mu) I_{n-j-1}(z) - I_{n-j}(z))``
    with ``z = 2 sqrt(lam mu) t``.
    """
    if model.family is not Family.CONSTANT:
        raise NoClosedForm(f"no Bessel current for {model.family.value}")
    _check_time(t)
    lam, mu = model.lam, model.mu
    z = 2.0 * math.sqrt(lam * mu) * t
    damp = math.exp(-((math.sqrt(lam) - math.sqrt(mu)) ** 2) * t)
    r = math.sqrt(lam / mu)
    return mu * damp * r ** (n - j) * (r * bessel_I_scaled(n - j - 1, z) - bessel_I_scaled(n - j, z))


# --------------------------------------------------------------------------
# probability currents


def _current_direct(model, j, lo, hi, t, config):
    """``Omega_{j,n} = lambda_{n-1} P_{j,n-1} - mu_n P_{j,n}``."""
    first = lo - 1
    if model.kind is Kind.HALF_LINE:
        first = max(first, 0)
    p, mag = _row_values(model, j, first, hi, t, config)
    out = np.empty(hi - lo + 1)
    out_mag = np.empty(hi - lo + 1)
    for k, n in enumerate(range(lo, hi + 1)):
        mu_n = model.rates(n)[1]
        below = below_mag = 0.0
        if n - 1 >= first:
            lam = model.rates(n - 1)[0]
            below, below_mag = lam * p[n - 1 - first], lam * mag[n - 1 - first]
        out[k] = below - mu_n * p[n - first]
        out_mag[k] = below_mag + mu_n * mag[n - first]
    return out, out_mag


def _current_dual(model, j, lo, hi, t, config):
    """``Omega_{j,n} = -int e^{-xt} sum Q_j^a H_n^b dpsi_ab`` with the dual polynomials
    ``H_n = lambda_{n-1} pi_{n-1} (Q_n - Q_{n-1})`` and, on the half line, ``H_0 = mu_0``."""

    def dual(f, a0, lo_, hi_):
        h = np.empty((f.shape[0], hi_ - lo_ + 1, f.shape[2]))
        for k, n in enumerate(range(lo_, hi_ + 1)):
            if model.kind is Kind.HALF_LINE and n == 0:
                h[:, k, :] = model.rates(0)[1]
                continue
            coef = model.rates(n - 1)[0] * potential_coefficient(model, n - 1)
            h[:, k, :] = coef * (f[:, n - a0, :] - f[:, n - 1 - a0, :])
        return h

    total, magnitude = _block_sums(model, j, lo, hi, t, config, hvec=dual)
    return -total, magnitude


_CURRENT_KERNELS = {"direct": _current_direct, "dual": _current_dual}


def current_row(
    model: CatalogModel,
    j: int,
    t: float,
    n_lo: int,
    n_hi: int,
    method: str = "dual",
    config: QuadratureConfig | None = None,
) -> np.ndarray:
    """``Omega_{j,n}(t)`` for ``n_lo <= n <= n_hi``: net flux from ``n-1`` to ``n``."""
    _check_time(t)
    key = str(method).lower()
    if key not in _CURRENT_KERNELS:
        raise ValueError(f"method must be 'direct' or 'dual', got {method!r}")
    if n_lo > n_hi:
        raise OutOfDomain(f"empty state range [{n_lo}, {n_hi}]")
    _check_states(model, j, n_lo, n_hi)
    vals, _ = _converged_row(model, j, n_lo, n_hi, t, config, _CURRENT_KERNELS[key])
    return vals


def probability_current(
    model: CatalogModel,
    j: int,
    n: int,
    t: float,
    method: str = "dual",
    config: QuadratureConfig | None = None,
) -> float:
    """Probability current ``Omega_{j,n}(t)`` by the direct or the dual-polynomial route."""
    return float(current_row(model, j, t, n, n, method, config)[0])


# --------------------------------------------------------------------------


def integrate_piece(piece: ACPiece, f, config: QuadratureConfig | None = None):
    """``int_a^b f(x) density(x) dx`` on one piece, checked by node doubling.

    ``f`` maps an array of nodes to values broadcastable against the density.
    """
    config = config or default_config()

    def rule(n):
        x, jac = piece_nodes(piece.a, piece.b, n)
        d = np.asarray(piece.density(x), dtype=float)
        fx = np.asarray(f(x), dtype=float)
        if d.ndim > 1:
            return np.einsum("k,k...->...", jac, d * fx.reshape(fx.shape + (1,) * (d.ndim - fx.ndim)))
        return float(np.sum(jac * d * fx))

    coarse = rule(config.nodes_per_piece)
    fine = rule(2 * config.nodes_per_piece)
    diff = float(np.max(np.abs(np.asarray(fine) - np.asarray(coarse))))
    if diff > config.convergence_tol:
        raise NonConvergedQuadrature(f"piece [{piece.a}, {piece.b}]: doubling changed the integral by {diff:.3e}")
    return fine
