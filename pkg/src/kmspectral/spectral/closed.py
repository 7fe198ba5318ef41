"""Closed-form spectral data for the catalog families.

Densities are written with real arithmetic on each piece of the support.
Stieltjes transforms take real ``z`` strictly below the support, where every
square root is the positive one.
"""
from __future__ import annotations

import dataclasses
import math

import numpy as np

from ..errors import DegenerateParameters, OutOfDomain, ZInSupport
from ..model import CatalogModel, Family, potential_coefficient
from .measures import ACPiece, Atom, Endpoint, SpectralMatrix, SpectralMeasure, classify_endpoint

SV, IS, RG = Endpoint.SQRT_VANISHING, Endpoint.INVERSE_SQRT, Endpoint.REGULAR

#: strict-inequality tolerance for atom indicator predicates
ATOM_TOL = 1e-12


def sigma_pair(a: float, b: float) -> tuple[float, float]:
    """Band edges ``((sqrt a - sqrt b)^2, (sqrt a + sqrt b)^2)``."""
    ra, rb = math.sqrt(a), math.sqrt(b)
    lo = (ra - rb) ** 2
    if abs(a - b) <= 1e-15 * max(a, b):
        lo = 0.0
    return lo, (ra + rb) ** 2


def _band(x, lo, hi):
    """``sqrt((x - lo)(hi - x))``, clipped at zero against rounding."""
    return np.sqrt(np.clip((x - lo) * (hi - x), 0.0, None))


def _pos_sqrt(v):
    return np.sqrt(np.clip(v, 0.0, None))


def _mat(d11, d12, d22):
    d11, d12, d22 = np.broadcast_arrays(d11, d12, d22)
    out = np.empty(d11.shape + (2, 2))
    out[..., 0, 0] = d11
    out[..., 0, 1] = d12
    out[..., 1, 0] = d12
    out[..., 1, 1] = d22
    return out


def _gt(a: float, b: float) -> bool:
    """Strict ``a > b`` beyond the relative tolerance."""
    return a - b > ATOM_TOL * max(1.0, abs(a), abs(b))


def _check_below(z: float, lo: float) -> None:
    if not z < lo:
        raise ZInSupport(f"z={z} is not below the support minimum {lo}")


# --------------------------------------------------------------------------
# half-line building blocks


def mm1_stieltjes(lam: float, mu: float, z: float) -> float:
    """Stieltjes transform of the absorbing M/M/1 measure, real ``z`` off the band."""
    lo, hi = sigma_pair(lam, mu)
    s = lam + mu - z
    disc = s * s - 4.0 * lam * mu
    if lo <= z <= hi:
        raise ZInSupport(f"z={z} lies in the band [{lo}, {hi}]")
    root = math.sqrt(max(disc, 0.0))
    if z < lo:
        # rationalised form avoids cancellation for large |z|
        return 2.0 / (s + root)
    return (s + root) / (2.0 * lam * mu)


def mm1_stieltjes_derivative(lam: float, mu: float, z: float) -> float:
    s = lam + mu - z
    root = math.sqrt(s * s - 4.0 * lam * mu)
    lo, _ = sigma_pair(lam, mu)
    sign = -1.0 if z < lo else 1.0
    # B = (s + sign*root) / (2 lam mu);  d(root)/dz = -s/root
    return (-1.0 - sign * s / root) / (2.0 * lam * mu)


def _mm1_measure(lam: float, mu: float, label: str) -> SpectralMeasure:
    lo, hi = sigma_pair(lam, mu)
    c = 1.0 / (2.0 * math.pi * lam * mu)
    piece = ACPiece(lo, hi, lambda x: c * _band(x, lo, hi), SV, SV, label="[sigma-, sigma+]")
    return SpectralMeasure((piece,), (), label=label)


def _alt1_half_measure(lam: float, mu: float, label: str) -> SpectralMeasure:
    c = 1.0 / (2.0 * math.pi * lam * mu)
    top = 2 * lam + 2 * mu

    def dens(x):
        return c * np.sqrt(np.abs(x * (2 * mu - x) * (top - x) / (2 * lam - x)))

    lo, hi = 2 * min(lam, mu), 2 * max(lam, mu)
    left_edge = IS if lam < mu else SV  # 2*lam in the denominator
    right_edge = SV if lam < mu else IS
    if abs(lam - mu) <= 1e-15 * max(lam, mu):
        left_edge = right_edge = RG
    pieces = (
        ACPiece(0.0, lo, dens, SV, left_edge, label="J1"),
        ACPiece(hi, top, dens, right_edge, SV, label="J2"),
    )
    return SpectralMeasure(pieces, (), label=label)


def _alt1_half_stieltjes(lam: float, mu: float, z: float) -> float:
    _check_below(z, 0.0)
    root = math.sqrt(-z * (2 * mu - z) * (2 * lam + 2 * mu - z) / (2 * lam - z))
    return (2 * mu - z - root) / (2 * lam * mu)


def _alt2_half_measure(lam: float, mu: float, label: str) -> SpectralMeasure:
    c = 1.0 / (2.0 * math.pi * mu * mu)
    top = 2 * lam + 2 * mu

    def dens(x):
        return c * np.sqrt(np.abs(x * (2 * lam - x) * (2 * mu - x) * (top - x))) / np.abs(lam + mu - x)

    lo, hi = 2 * min(lam, mu), 2 * max(lam, mu)
    inner = RG if abs(lam - mu) <= 1e-15 * max(lam, mu) else SV
    pieces = (
        ACPiece(0.0, lo, dens, SV, inner, label="J1"),
        ACPiece(hi, top, dens, inner, SV, label="J2"),
    )
    atoms = ()
    if _gt(mu, lam):
        atoms = (Atom(lam + mu, 1.0 - lam**2 / mu**2),)
    return SpectralMeasure(pieces, atoms, label=label)


def _alt2_half_stieltjes(lam: float, mu: float, z: float) -> float:
    _check_below(z, 0.0)
    root = math.sqrt(-z * (2 * mu - z) * (2 * lam - z) * (2 * lam + 2 * mu - z))
    return (z * z - 2 * (lam + mu) * z + 2 * mu * (lam + mu) - root) / (2 * mu * mu * (lam + mu - z))


def _defect_half_stieltjes(lam, mu, lam0, mu0, z: float) -> float:
    return 1.0 / (lam0 + mu0 - z - lam0 * mu * mm1_stieltjes(lam, mu, z))


def _defect_half_measure(lam, mu, lam0, mu0, label: str) -> SpectralMeasure:
    """Measure of the half line with rates (lam0, mu0) at 0 and (lam, mu) beyond.

    Its transform is ``1 / (lam0 + mu0 - z - lam0 mu B(z))`` with ``B`` the
    M/M/1 transform; the density is the boundary value of the imaginary part
    and the atoms are the real zeros of the denominator off the band.
    """
    lo, hi = sigma_pair(lam, mu)
    c = lam0 + mu0

    def dens(x):
        s = lam + mu - x
        root = _band(x, lo, hi)
        re = c - x - lam0 * s / (2 * lam)
        im = lam0 * root / (2 * lam)
        return lam0 * root / (2 * math.pi * lam * (re * re + im * im))

    atoms = []
    # 2 lam (c - z) - lam0 (lam + mu - z) = lam0 * S(z), squared
    a0 = 2 * lam * c - lam0 * (lam + mu)
    a1 = lam0 - 2 * lam
    for z0 in _real_quadratic_roots(
        a1 * a1 - lam0 * lam0,
        2 * a0 * a1 + 2 * lam0 * lam0 * (lam + mu),
        a0 * a0 - lam0 * lam0 * (lam - mu) ** 2,
    ):
        if lo - 1e-12 <= z0 <= hi + 1e-12 or z0 < 0:
            continue
        u = a0 + a1 * z0
        if (z0 < lo and u > 1e-12 * max(1.0, abs(a0))) or (z0 > hi and u < -1e-12 * max(1.0, abs(a0))):
            continue  # root of the squared equation on the wrong branch
        w = 1.0 / (1.0 + lam0 * mu * mm1_stieltjes_derivative(lam, mu, z0))
        atoms.append(Atom(z0, w))
    atoms.sort(key=lambda a: a.location)
    piece = ACPiece(lo, hi, dens, SV, SV, label="[sigma-, sigma+]")
    return SpectralMeasure((piece,), tuple(atoms), label=label)


def _real_quadratic_roots(a: float, b: float, c: float) -> list[float]:
    scale = max(abs(a), abs(b), abs(c), 1e-300)
    if abs(a) <= 1e-14 * scale:
        if abs(b) <= 1e-14 * scale:
            return []
        return [-c / b]
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    r = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(r, b))
    roots = [q / a]
    if q != 0.0:
        roots.append(c / q)
    return sorted(roots)


# --------------------------------------------------------------------------
# public half-line dispatch


def halfline_measure(model: CatalogModel, side: str = "+") -> SpectralMeasure:
    fam, lam, mu = model.family, model.lam, model.mu
    label = f"{model.describe()}[{side}]"
    if side not in ("+", "-"):
        raise ValueError(f"side must be '+' or '-', got {side!r}")
    if fam is Family.MM1:
        if side != "+":
            raise OutOfDomain("the M/M/1 model has no negative half line")
        return _mm1_measure(lam, mu, model.describe())
    if fam in (Family.CONSTANT, Family.SYMMETRIC):
        return _mm1_measure(lam, mu, label)
    if fam is Family.ALTERNATING1:
        return _alt1_half_measure(lam, mu, label) if side == "+" else _alt1_half_measure(mu, lam, label)
    if fam is Family.ALTERNATING2:
        return _alt2_half_measure(lam, mu, label)
    if fam in (Family.DEFECT1, Family.DEFECT2):
        if side == "+":
            return _defect_half_measure(lam, mu, model.lam0, model.mu0, label)
        return _mm1_measure(lam, mu, label)
    if fam is Family.SPLIT:
        return _mm1_measure(lam, mu, label) if side == "+" else _mm1_measure(model.alpha, model.beta, label)
    raise AssertionError(fam)


def halfline_stieltjes(model: CatalogModel, side: str, z: float) -> float:
    """Closed-form ``B(z; psi^+-)`` for real ``z`` below the support (``z < 0`` always works)."""
    fam, lam, mu = model.family, model.lam, model.mu
    if fam is Family.MM1 or fam in (Family.CONSTANT, Family.SYMMETRIC):
        if fam is Family.MM1 and side != "+":
            raise OutOfDomain("the M/M/1 model has no negative half line")
        _check_below(z, sigma_pair(lam, mu)[0])
        return mm1_stieltjes(lam, mu, z)
    if fam is Family.ALTERNATING1:
        return _alt1_half_stieltjes(lam, mu, z) if side == "+" else _alt1_half_stieltjes(mu, lam, z)
    if fam is Family.ALTERNATING2:
        return _alt2_half_stieltjes(lam, mu, z)
    if fam in (Family.DEFECT1, Family.DEFECT2):
        if side == "+":
            _check_below(z, halfline_measure(model, "+").support_min())
            return _defect_half_stieltjes(lam, mu, model.lam0, model.mu0, z)
        _check_below(z, sigma_pair(lam, mu)[0])
        return mm1_stieltjes(lam, mu, z)
    if fam is Family.SPLIT:
        a, b = (lam, mu) if side == "+" else (model.alpha, model.beta)
        _check_below(z, sigma_pair(a, b)[0])
        return mm1_stieltjes(a, b, z)
    raise AssertionError(fam)


# --------------------------------------------------------------------------
# bilateral spectral matrices


def _constant_matrix(m: CatalogModel) -> SpectralMatrix:
    lam, mu = m.lam, m.mu
    lo, hi = sigma_pair(lam, mu)

    def dens(x):
        d = 1.0 / (math.pi * _band(x, lo, hi))
        return _mat(d, d * (lam + mu - x) / (2 * mu), d * lam / mu)

    return SpectralMatrix((ACPiece(lo, hi, dens, IS, IS),), (), label=m.describe(), pi_minus1=potential_coefficient(m, -1))


def _symmetric_matrix(m: CatalogModel) -> SpectralMatrix:
    lam, mu = m.lam, m.mu
    lo, hi = sigma_pair(lam, mu)
    top = 2 * lam + 2 * mu

    def dens(x):
        f = _band(x, lo, hi) / (2 * math.pi * mu * x * (top - x))
        return _mat(f * (lam + mu), f * (lam + mu - x), f * (lam + mu))

    atoms = ()
    if _gt(mu, lam):
        w = (mu - lam) / (2 * mu)
        atoms = (
            Atom(0.0, w * np.array([[1.0, 1.0], [1.0, 1.0]])),
            Atom(top, w * np.array([[1.0, -1.0], [-1.0, 1.0]])),
        )
    edge = IS if lo == 0.0 else SV
    piece = ACPiece(lo, hi, dens, edge, edge)
    return SpectralMatrix((piece,), atoms, label=m.describe(), pi_minus1=potential_coefficient(m, -1))


def _alt1_matrix(m: CatalogModel) -> SpectralMatrix:
    lam, mu = m.lam, m.mu
    top = 2 * lam + 2 * mu

    def make(sign12):
        def dens(x):
            a, b, t = 2 * lam - x, 2 * mu - x, top - x
            d11 = np.sqrt(np.abs(b / (x * a * t))) / math.pi
            d12 = sign12 * np.sqrt(np.abs(a * b / (x * t))) / (2 * math.pi * lam)
            d22 = (mu / lam) * np.sqrt(np.abs(a / (x * b * t))) / math.pi
            return _mat(d11, d12, d22)

        return dens

    lo, hi = 2 * min(lam, mu), 2 * max(lam, mu)
    inner = RG if abs(lam - mu) <= 1e-15 * max(lam, mu) else IS
    # the off-diagonal density is positive on J1 and negative on J2
    pieces = (
        ACPiece(0.0, lo, make(+1.0), IS, inner, label="J1"),
        ACPiece(hi, top, make(-1.0), inner, IS, label="J2"),
    )
    return SpectralMatrix(pieces, (), label=m.describe(), pi_minus1=potential_coefficient(m, -1))


def _alt2_matrix(m: CatalogModel) -> SpectralMatrix:
    lam, mu = m.lam, m.mu
    top = 2 * lam + 2 * mu

    def dens(x):
        root = np.sqrt(np.abs(x * (2 * mu - x) * (2 * lam - x) * (top - x)))
        s = lam + mu - x
        d = np.abs(s) / (math.pi * root)
        d12 = np.sign(s) * (s * s + mu * mu - lam * lam) / (2 * math.pi * mu * root)
        return _mat(d, d12, d)

    lo, hi = 2 * min(lam, mu), 2 * max(lam, mu)
    inner = RG if abs(lam - mu) <= 1e-15 * max(lam, mu) else IS
    pieces = (
        ACPiece(0.0, lo, dens, IS, inner, label="J1"),
        ACPiece(hi, top, dens, inner, IS, label="J2"),
    )
    return SpectralMatrix(pieces, (), label=m.describe(), pi_minus1=potential_coefficient(m, -1))


# -- one defect at state 0, constant rates elsewhere


def defect1_D(m: CatalogModel, z):
    lam, mu, l0, m0 = m.lam, m.mu, m.lam0, m.mu0
    return (
        (-2 * l0 * mu - 2 * m0 * lam + 2 * lam * mu) * z**2
        - 2 * l0 * m0 * (lam - mu) ** 2
        + (
            2 * l0**2 * mu
            + 2 * l0 * m0 * lam
            + 2 * l0 * m0 * mu
            - 2 * l0 * lam * mu
            + 2 * l0 * mu**2
            + 2 * m0**2 * lam
            + 2 * m0 * lam**2
            - 2 * m0 * lam * mu
        )
        * z
    )


def _defect1_pq(m: CatalogModel, z):
    lam, mu, l0, m0 = m.lam, m.mu, m.lam0, m.mu0
    p11 = (l0 * mu + m0 * lam - 2 * lam * mu) * z + (lam - mu) * (l0 * mu - m0 * lam)
    q11 = -(l0 * mu + lam * m0) + 0 * z
    p12 = lam * (z**2 - (l0 + m0 + lam + mu) * z + (lam - mu) * (l0 - m0))
    q12 = -lam * (l0 + m0 - z)
    p22 = (
        (l0 - lam) * z**3
        + (-(l0**2) - l0 * m0 - 2 * l0 * mu + 2 * m0 * lam + lam**2 + lam * mu) * z**2
        + m0 * (lam - mu) * (l0 * mu - m0 * lam)
        + (
            l0**2 * lam
            + l0**2 * mu
            - l0 * m0 * lam
            + 2 * l0 * m0 * mu
            - l0 * lam**2
            + l0 * mu**2
            - m0**2 * lam
            - 2 * m0 * lam * mu
        )
        * z
    ) / m0
    q22 = -(
        (lam - l0) * z**2
        + (l0**2 + l0 * m0 - l0 * lam + l0 * mu - 2 * m0 * lam) * z
        + m0 * (2 * l0 * lam - l0 * mu + m0 * lam)
    ) / m0
    return (p11, q11), (p12, q12), (p22, q22)


def defect1_poles(m: CatalogModel):
    """``gamma_+-`` and the weight constants ``A^+-`` (each a 2x2 matrix)."""
    lam, mu, l0, m0 = m.lam, m.mu, m.lam0, m.mu0
    e = l0 * mu + m0 * lam - lam * mu
    f = l0 * mu + m0 * lam
    g = lam + mu - l0 - m0
    R = (l0 - m0 - lam + mu) ** 2 + 4 * l0 * m0
    C = lam * mu * R - e * (f + 2 * lam * mu)
    sR = math.sqrt(R)
    gam = {}
    for sgn, key in ((1, "+"), (-1, "-")):
        gam[key] = (f * (l0 + m0) + (l0 * mu - m0 * lam) * (mu - lam) + sgn * f * sR) / (2 * e)
    A = {}
    for sgn, key in ((1, "+"), (-1, "-")):
        a11 = (f - 2 * lam * mu + sgn * f * g / sR) / (2 * e)
        # the square-root term of a12 enters with the opposite sign to a11 and a22
        a12 = lam * (lam * mu * g - sgn * (C - e * (f - 2 * lam * mu)) / sR) / (2 * e**2)
        a22 = lam**2 * (-C + sgn * g * (C + 2 * lam * mu * e) / sR) / (2 * e**3)
        A[key] = np.array([[a11, a12], [a12, a22]])
    return gam, A


def _defect1_matrix(m: CatalogModel) -> SpectralMatrix:
    lam, mu, l0, m0 = m.lam, m.mu, m.lam0, m.mu0
    lo, hi = sigma_pair(lam, mu)

    def dens(x):
        f = _band(x, lo, hi) / (math.pi * defect1_D(m, x))
        (_, q11), (_, q12), (_, q22) = _defect1_pq(m, x)
        return _mat(-q11 * f, -q12 * f, -q22 * f)

    gam, A = defect1_poles(m)
    atoms = []
    # atom at gamma_+ carries A^-, atom at gamma_- carries A^+
    for loc, w in ((gam["+"], A["-"]), (gam["-"], A["+"])):
        if _gt(w[0, 0], 0.0) and _gt(loc, 0.0):
            atoms.append(Atom(loc, w))
    atoms.sort(key=lambda a: a.location)
    edge = IS if lo == 0.0 else SV
    piece = ACPiece(lo, hi, dens, edge, SV)
    return SpectralMatrix((piece,), tuple(atoms), label=m.describe(), pi_minus1=potential_coefficient(m, -1))


# -- one defect at state 0, mirrored constant rates elsewhere


def defect2_D(m: CatalogModel, z):
    lam, mu, l0, m0 = m.lam, m.mu, m.lam0, m.mu0
    c = l0 + m0
    return 2 * z * (c * (c - lam + mu) - (c - lam) * z)


def _defect2_q22(m: CatalogModel, z):
    lam, mu, l0, m0 = m.lam, m.mu, m.lam0, m.mu0
    return -(
        (lam - l0) * z**2 + (l0**2 + l0 * m0 - l0 * lam + l0 * mu - 2 * m0 * lam) * z + m0 * lam * (l0 + m0)
    ) / (lam * m0)


def _defect2_p22(m: CatalogModel, z):
    lam, mu, l0, m0 = m.lam, m.mu, m.lam0, m.mu0
    return (
        (l0 - lam) * z**3
        + (-(l0**2) - l0 * m0 - 2 * l0 * mu + 2 * m0 * lam + lam**2 + lam * mu) * z**2
        + m0 * lam * (lam - mu) * (l0 + m0)
        + (l0**2 * lam + l0**2 * mu + l0 * m0 * mu - l0 * lam**2 + l0 * mu**2 - m0**2 * lam - 2 * m0 * lam**2) * z
    ) / (lam * m0)


def defect2_eta(m: CatalogModel) -> float:
    c = m.lam0 + m.mu0
    return c * (c - m.lam + m.mu) / (c - m.lam)


def _defect2_matrix(m: CatalogModel) -> SpectralMatrix:
    lam, mu, l0, m0 = m.lam, m.mu, m.lam0, m.mu0
    c = l0 + m0
    lo, hi = sigma_pair(lam, mu)

    def dens(x):
        f = _band(x, lo, hi) / (math.pi * defect2_D(m, x))
        return _mat(c * f, (c - x) * f, -_defect2_q22(m, x) * f)

    atoms = []
    if _gt(mu, lam):
        w0 = (mu - lam) / (c + mu - lam)
        atoms.append(Atom(0.0, w0 * np.ones((2, 2))))
    d = c - lam
    if _gt(abs(d), math.sqrt(lam * mu)):
        w = (d * d - lam * mu) / (d * (c + mu - lam))
        v = np.array([1.0, -mu / d])
        atoms.append(Atom(defect2_eta(m), w * np.outer(v, v)))
    atoms.sort(key=lambda a: a.location)
    edge = IS if lo == 0.0 else SV
    return SpectralMatrix(
        (ACPiece(lo, hi, dens, edge, SV),), tuple(atoms), label=m.describe(), pi_minus1=potential_coefficient(m, -1)
    )


# -- two different M/M/1 queues


def sigma_plus(a: float, b: float, z):
    """``Sigma^{a,b}_+(z) = sqrt((a+b-z)^2 - 4ab)`` (positive root, clipped)."""
    return _pos_sqrt((a + b - z) ** 2 - 4 * a * b)


def sigma_minus(a: float, b: float, z):
    """``Sigma^{a,b}_-(z) = sqrt(4ab - (a+b-z)^2)`` (positive root, clipped)."""
    return _pos_sqrt(4 * a * b - (a + b - z) ** 2)


def split_polys(m: CatalogModel, z):
    """Numerator polynomials ``p, q, r, s`` (dict keyed by component) and ``D``."""
    lam, mu, al, be = m.lam, m.mu, m.alpha, m.beta
    k = al * lam - be * mu
    common = -(z**2) + (al + be + lam + mu) * z + (lam - mu) * (al - be)
    P = {
        "11": ((mu - al) * z + k) * common,
        "12": (al * lam - 2 * al * be - 2 * lam * mu + 3 * be * mu) * z**2
        - (al - 3 * be + lam - 3 * mu) * k * z
        + (lam - mu) * (al - be) * k,
        "22": ((be - lam) * z + k) * common,
    }
    Q = {
        "11": (al - mu) * z**2 + (-(al**2) - al * be - al * lam + al * mu + 2 * be * mu) * z - (al - be) * k,
        "12": (al * lam + be * mu - 2 * al * be) * z - (al - be) * k,
        "22": (be - lam) * z**2 + (-al * be + 2 * al * lam - be**2 + be * lam - be * mu) * z - (al - be) * k,
    }
    Rr = {
        "11": (mu - al) * z**2 + (2 * al * lam + al * mu - be * mu - lam * mu - mu**2) * z - (lam - mu) * k,
        "12": (al * lam + be * mu - 2 * lam * mu) * z - (lam - mu) * k,
        "22": (lam - be) * z**2 + (-al * lam + be * lam + 2 * be * mu - lam**2 - lam * mu) * z - (lam - mu) * k,
    }
    S = {
        "11": (mu - al) * z + k,
        "12": k + 0 * z,
        "22": (be - lam) * z + k,
    }
    # the z multiplies (alpha - mu)(beta - lam); the root zeta is unchanged
    D = 4 * mu * z * ((al - mu) * (be - lam) * z + (al - be + lam - mu) * k)
    return P, Q, Rr, S, D


def split_arrangement(lam: float, mu: float, alpha: float, beta: float) -> str:
    """Which of the six band arrangements holds: ``1a``, ``1b``, ``2a``, ``2b``, ``3a``, ``3b``.

    Containment is tested non-strictly, so bands sharing an endpoint are still
    classified (for instance ``sigma_- = tau_- = 0`` when ``lam = mu`` and
    ``alpha = beta``).
    """
    s_lo, s_hi = sigma_pair(lam, mu)
    t_lo, t_hi = sigma_pair(alpha, beta)
    if s_hi <= t_lo:
        return "1a"
    if t_hi <= s_lo:
        return "1b"
    if s_lo <= t_lo and t_hi <= s_hi:
        return "2a"
    if t_lo <= s_lo and s_hi <= t_hi:
        return "2b"
    return "3a" if s_lo < t_lo else "3b"


def split_zeta(m: CatalogModel) -> float:
    lam, mu, al, be = m.lam, m.mu, m.alpha, m.beta
    return (al - be + lam - mu) * (al * lam - be * mu) / ((lam - be) * (al - mu))


def split_atom_conditions(m: CatalogModel) -> dict[str, bool]:
    lam, mu, al, be = m.lam, m.mu, m.alpha, m.beta
    C1 = lam * (al - mu) ** 2 - mu * (be - lam) ** 2
    C2 = be * (al - mu) ** 2 - al * (be - lam) ** 2
    c_ok = _gt(0.0, C1) and _gt(C2, 0.0)
    return {
        "A1": _gt(al, mu) and _gt(be, lam) and c_ok,
        "A2": _gt(mu, al) and _gt(be, lam) and c_ok,
        "A3": _gt(mu, al) and _gt(lam, be) and c_ok,
    }


def _split_matrix(m: CatalogModel) -> SpectralMatrix:
    lam, mu, al, be = m.lam, m.mu, m.alpha, m.beta
    s_lo, s_hi = sigma_pair(lam, mu)
    t_lo, t_hi = sigma_pair(al, be)
    cuts = sorted({s_lo, s_hi, t_lo, t_hi})
    comps = ("11", "12", "22")

    def make(in_s: bool, in_t: bool, below_t: bool, below_s: bool):
        def dens(x):
            P, Q, Rr, S, D = split_polys(m, x)
            if in_s and in_t:
                sm1, sm2 = sigma_minus(lam, mu, x), sigma_minus(al, be, x)
                vals = [-(Q[c] * sm1 + Rr[c] * sm2) / (math.pi * D) for c in comps]
            elif in_s:
                sg = 1.0 if below_t else -1.0
                sm1, sp2 = sigma_minus(lam, mu, x), sigma_plus(al, be, x)
                vals = [-sm1 * (Q[c] + sg * S[c] * sp2) / (math.pi * D) for c in comps]
            else:
                sg = 1.0 if below_s else -1.0
                sm2, sp1 = sigma_minus(al, be, x), sigma_plus(lam, mu, x)
                vals = [-sm2 * (Rr[c] + sg * S[c] * sp1) / (math.pi * D) for c in comps]
            return _mat(*vals)

        return dens

    pieces = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (a + b)
        in_s = s_lo <= mid <= s_hi
        in_t = t_lo <= mid <= t_hi
        if not (in_s or in_t):
            continue
        label = "overlap" if in_s and in_t else ("sigma" if in_s else "tau")
        piece = ACPiece(a, b, make(in_s, in_t, mid < t_lo, mid < s_lo), label=label)
        # endpoint behaviour depends on which band edges meet here; read it off
        pieces.append(
            dataclasses.replace(piece, left=classify_endpoint(piece, "left"), right=classify_endpoint(piece, "right"))
        )

    atoms = []
    if _gt(mu, lam) and _gt(be, al):
        w0 = (be - al) * (mu - lam) / (mu * (be - al + mu - lam))
        atoms.append(Atom(0.0, w0 * np.ones((2, 2))))
    if any(split_atom_conditions(m).values()):
        denom = mu * (al - mu) * (be - lam) * (al - be + lam - mu)
        if denom == 0.0:
            raise DegenerateParameters(
                "split-queues: alpha - beta + lam - mu vanishes with an atom at zeta",
                expression="alpha - beta + lam - mu",
            )
        C1 = lam * (al - mu) ** 2 - mu * (be - lam) ** 2
        C2 = be * (al - mu) ** 2 - al * (be - lam) ** 2
        v = np.array([1.0 / (be - lam), 1.0 / (al - mu)])
        atoms.append(Atom(split_zeta(m), -C1 * C2 / denom * np.outer(v, v)))
    atoms.sort(key=lambda a: a.location)
    return SpectralMatrix(
        tuple(pieces),
        tuple(atoms),
        label=m.describe(),
        pi_minus1=potential_coefficient(m, -1),
        arrangement=split_arrangement(lam, mu, al, be),
    )


_MATRIX_BUILDERS = {
    Family.CONSTANT: _constant_matrix,
    Family.SYMMETRIC: _symmetric_matrix,
    Family.ALTERNATING1: _alt1_matrix,
    Family.ALTERNATING2: _alt2_matrix,
    Family.DEFECT1: _defect1_matrix,
    Family.DEFECT2: _defect2_matrix,
    Family.SPLIT: _split_matrix,
}


def matrix_for(model: CatalogModel) -> SpectralMatrix:
    try:
        builder = _MATRIX_BUILDERS[model.family]
    except KeyError:
        raise OutOfDomain(f"{model.family} is a half-line model; use spectral_measure_halfline") from None
    return builder(model)


# --------------------------------------------------------------------------
# closed-form Stieltjes transforms of the bilateral matrices


def bilateral_stieltjes(model: CatalogModel, component: str, z: float) -> float:
    """Closed-form ``B(z; psi_{component})`` for real ``z`` below the support."""
    comp = {"21": "12"}.get(str(component), str(component))
    if comp not in ("11", "12", "22"):
        raise ValueError(f"component must be 11, 12 or 22; got {component!r}")
    fam, lam, mu = model.family, model.lam, model.mu
    if fam is Family.CONSTANT:
        _check_below(z, sigma_pair(lam, mu)[0])
        root = math.sqrt((lam + mu - z) ** 2 - 4 * lam * mu)
        if comp == "11":
            return 1.0 / root
        if comp == "22":
            return lam / mu / root
        return (-1.0 + (lam + mu - z) / root) / (2 * mu)
    if fam is Family.SYMMETRIC:
        _check_below(z, matrix_for(model).support_min())
        # both half lines are M/M/1 and lambda_{-1} = mu_0 = mu
        b = mm1_stieltjes(lam, mu, z)
        d = (1.0 - mu * b) * (1.0 + mu * b)
        return mu * b * b / d if comp == "12" else b / d
    if fam is Family.ALTERNATING1:
        _check_below(z, 0.0)
        a, b, t = 2 * lam - z, 2 * mu - z, 2 * lam + 2 * mu - z
        if comp == "11":
            return math.sqrt(-b / (z * a * t))
        if comp == "22":
            return mu / lam * math.sqrt(-a / (z * b * t))
        return -(1.0 - math.sqrt(-a * b / (z * t))) / (2 * lam)
    if fam is Family.ALTERNATING2:
        _check_below(z, 0.0)
        root = math.sqrt(-z * (2 * mu - z) * (2 * lam - z) * (2 * lam + 2 * mu - z))
        s = lam + mu - z
        if comp in ("11", "22"):
            return s / root
        return -(1.0 - (s * s + mu * mu - lam * lam) / root) / (2 * mu)
    if fam in (Family.DEFECT1, Family.DEFECT2):
        _check_below(z, matrix_for(model).support_min())
        root = math.sqrt((lam + mu - z) ** 2 - 4 * lam * mu)
        if fam is Family.DEFECT1:
            pq = dict(zip(("11", "12", "22"), _defect1_pq(model, z)))
            p, q = pq[comp]
            D = defect1_D(model, z)
        else:
            c = model.lam0 + model.mu0
            p, q = {
                "11": ((c - 2 * lam) * z + (lam - mu) * c, -c),
                "12": (z * z - (c + lam + mu) * z + (lam - mu) * c, -(c - z)),
                "22": (_defect2_p22(model, z), _defect2_q22(model, z)),
            }[comp]
            D = defect2_D(model, z)
        return (p + q * root) / D
    if fam is Family.SPLIT:
        _check_below(z, matrix_for(model).support_min())
        return split_stieltjes(lam, mu, model.alpha, model.beta, comp, z)
    raise OutOfDomain(f"{fam} is a half-line model")


def split_stieltjes(lam: float, mu: float, alpha: float, beta: float, component: str, z: float) -> float:
    """Unrationalised split-queue transforms, valid for raw parameters and ``z < 0``.

    Usable for parameter sets that ``build_model`` rejects, e.g. ``alpha = mu``
    and ``beta = lam``, where the family collapses to constant rates.
    """
    s1 = math.sqrt((lam + mu - z) ** 2 - 4 * lam * mu)
    s2 = math.sqrt((alpha + beta - z) ** 2 - 4 * alpha * beta)
    k = alpha * lam - beta * mu
    if component == "11":
        return 2 * alpha / (alpha * s1 + mu * s2 + (mu - alpha) * z + k)
    den = beta * s1 + lam * s2 + (beta - lam) * z + k
    if component == "12":
        return beta / mu * (lam + mu - z - s1) / den
    if component == "22":
        return beta / mu * 2 * lam / den
    raise ValueError(f"component must be 11, 12 or 22; got {component!r}")


def split_stieltjes_rationalized(m: CatalogModel, component: str, z: float) -> float:
    P, Q, Rr, S, D = split_polys(m, z)
    s1 = sigma_plus(m.lam, m.mu, z)
    s2 = sigma_plus(m.alpha, m.beta, z)
    c = str(component)
    return float((P[c] + Q[c] * s1 + Rr[c] * s2 + S[c] * s1 * s2) / D)
