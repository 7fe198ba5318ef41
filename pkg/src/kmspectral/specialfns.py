"""Chebyshev polynomials and integer-order modified Bessel functions.

Chebyshev polynomials are evaluated by their three-term recurrence for every
argument, so values outside ``[-1, 1]`` (which occur off the spectral support)
are exact polynomial values rather than ``cosh``/``arccos`` continuations.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = ["chebyshev_U", "chebyshev_T", "chebyshev_U_table", "bessel_I", "bessel_I_scaled"]

_SERIES_LIMIT = 25.0


def chebyshev_U_table(nmax: int, y):
    """Return ``[U_{-2}(y), U_{-1}(y), U_0(y), ..., U_nmax(y)]`` stacked on axis 0.

    ``U_{-1} = 0`` and ``U_{-2} = -1`` are the values forced by running the
    recurrence backwards; closed forms with ``U_{k-2}`` at ``k = 0, 1`` use them.
    """
    y = np.asarray(y, dtype=float)
    out = np.empty((max(nmax, -1) + 3,) + y.shape)
    out[0] = -1.0
    out[1] = 0.0
    for k in range(2, out.shape[0]):
        out[k] = 2.0 * y * out[k - 1] - out[k - 2]
    return out


def chebyshev_U(n: int, y):
    """Chebyshev polynomial of the second kind, ``n >= -2``."""
    if n < -2:
        raise ValueError(f"chebyshev_U needs n >= -2, got {n}")
    val = chebyshev_U_table(n, y)[n + 2]
    return float(val) if np.ndim(val) == 0 else val


def chebyshev_T(n: int, y):
    """Chebyshev polynomial of the first kind, ``n >= 0``."""
    if n < 0:
        raise ValueError(f"chebyshev_T needs n >= 0, got {n}")
    y = np.asarray(y, dtype=float)
    prev, cur = np.ones_like(y), y.copy()
    if n == 0:
        cur = prev
    else:
        for _ in range(n - 1):
            prev, cur = cur, 2.0 * y * cur - prev
    return float(cur) if cur.ndim == 0 else cur


def _series(n: int, z: float) -> float:
    # sum_k (z/2)^{2k+n} / (k! (k+n)!)
    half = 0.5 * z
    term = half**n / math.factorial(n)
    total = term
    q = half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        total += term
        if term <= 1e-17 * total:
            return total


def _miller(nmax: int, z: float) -> np.ndarray:
    """Scaled values ``e^{-z} I_k(z)`` for ``k = 0..nmax`` by backward recurrence."""
    start = max(nmax, int(z)) + int(2.0 * math.sqrt(40.0 * max(nmax, z))) + 40
    vals = np.zeros(nmax + 1)
    nxt, cur = 0.0, 1e-300
    total = 0.0
    for k in range(start, 0, -1):
        # I_{k-1} = (2k/z) I_k + I_{k+1}
        prev = (2.0 * k / z) * cur + nxt
        nxt, cur = cur, prev
        if k - 1 <= nmax:
            vals[k - 1] = cur
        total += 2.0 * nxt if k >= 1 else 0.0
        if abs(cur) > 1e250:
            nxt *= 1e-250
            cur *= 1e-250
            vals *= 1e-250
            total *= 1e-250
    # sum rule: e^{-z} (I_0 + 2 sum_{k>=1} I_k) = 1
    total += cur
    return vals / total


def bessel_I_scaled(n: int, z: float) -> float:
    """``e^{-z} I_n(z)`` for integer ``n`` and ``z >= 0``."""
    n = abs(int(n))
    z = float(z)
    if z < 0.0:
        raise ValueError("bessel_I needs z >= 0")
    if z == 0.0:
        return 1.0 if n == 0 else 0.0
    if z <= _SERIES_LIMIT:
        return _series(n, z) * math.exp(-z)
    return float(_miller(n, z)[n])


def bessel_I(n: int, z: float) -> float:
    """Modified Bessel function of the first kind ``I_n(z)``, integer order.

    Negative orders use ``I_{-n} = I_n``.  Power series for ``z <= 25``, Miller's
    backward recurrence normalised by the sum rule above that.
    """
    z = float(z)
    if z == 0.0:
        return 1.0 if n == 0 else 0.0
    if z <= _SERIES_LIMIT:
        return _series(abs(int(n)), z)
    return bessel_I_scaled(n, z) * math.exp(z)
