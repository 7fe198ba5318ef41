"""Spectral measures of the catalog families and their Stieltjes transforms."""
from __future__ import annotations

from ..errors import OutOfDomain
from ..model import CatalogModel, Kind
from ..quadrature import QuadratureConfig
from . import closed
from .closed import split_arrangement, split_stieltjes
from .measures import (
    ACPiece,
    Atom,
    Endpoint,
    SpectralMatrix,
    SpectralMeasure,
    discretize,
    to_json_dict,
    total_mass,
)
from .measures import stieltjes_quadrature as _stieltjes_quadrature

__all__ = [
    "ACPiece",
    "Atom",
    "Endpoint",
    "SpectralMatrix",
    "SpectralMeasure",
    "discretize",
    "spectral_matrix",
    "spectral_measure",
    "spectral_measure_halfline",
    "split_arrangement",
    "split_stieltjes",
    "stieltjes_closed",
    "stieltjes_quadrature",
    "to_json_dict",
    "total_mass",
    "verify_coupling",
]


def spectral_matrix(model: CatalogModel) -> SpectralMatrix:
    """The 2x2 spectral matrix ``Psi`` of a bilateral catalog model."""
    if model.kind is not Kind.BILATERAL:
        raise OutOfDomain(f"{model.family.value} is a half-line model; use spectral_measure_halfline")
    return closed.matrix_for(model)


def spectral_measure_halfline(model: CatalogModel, side: str = "+") -> SpectralMeasure:
    """Scalar measure ``psi`` of the M/M/1 model, or ``psi^+`` / ``psi^-`` of a bilateral model.

    ``psi^-`` belongs to the reflected negative half line, whose state ``k``
    is the bilateral state ``-k-1``.
    """
    return closed.halfline_measure(model, side)


def spectral_measure(model: CatalogModel):
    """Matrix for bilateral models, scalar measure for the M/M/1 model."""
    if model.kind is Kind.HALF_LINE:
        return spectral_measure_halfline(model)
    return spectral_matrix(model)


def stieltjes_closed(model: CatalogModel, component: str | None, z: float) -> float:
    """Closed-form Stieltjes transform for real ``z`` below the support.

    ``component`` is ``"11"``, ``"12"`` or ``"22"`` for bilateral models, and
    ``"+"``/``"-"`` (or ``None`` for ``"+"``) to select a half-line factor.
    """
    if component in (None, "+", "-"):
        return closed.halfline_stieltjes(model, component or "+", z)
    if model.kind is not Kind.BILATERAL:
        raise OutOfDomain("half-line models take component None, '+' or '-'")
    return closed.bilateral_stieltjes(model, component, z)


def stieltjes_quadrature(
    model_or_measure, component: str | None, z: float, config: QuadratureConfig | None = None
) -> float:
    """Stieltjes transform by quadrature over the discretized measure."""
    if isinstance(model_or_measure, CatalogModel):
        if component in (None, "+", "-"):
            measure = spectral_measure_halfline(model_or_measure, component or "+")
            component = None
        else:
            measure = spectral_matrix(model_or_measure)
    else:
        measure = model_or_measure
    return _stieltjes_quadrature(measure, component, z, config)


def verify_coupling(
    model: CatalogModel, z: float, config: QuadratureConfig | None = None
) -> tuple[float, float, float]:
    """Residuals ``(r11, r22, r12)`` of the relations linking ``Psi`` to ``psi^+`` and ``psi^-``.

    With ``c = lambda_{-1} mu_0`` and ``d = 1 - c B^+ B^-`` the relations read
    ``B_11 = B^+/d``, ``(mu_0/lambda_{-1}) B_22 = B^-/d`` and
    ``B_12 = lambda_{-1} B^+ B^- / d``.  ``B^+-`` come from the half-line closed
    forms and ``B_kl`` from quadrature over the constructed matrix, so the
    residuals test the matrix measure against independent data.
    """
    if model.kind is not Kind.BILATERAL:
        raise OutOfDomain("coupling relations concern bilateral models")
    lam_m1 = model.rates(-1)[0]
    mu0 = model.rates(0)[1]
    psi = spectral_matrix(model)
    bp = stieltjes_closed(model, "+", z)
    bm = stieltjes_closed(model, "-", z)
    d = 1.0 - lam_m1 * mu0 * bp * bm
    b11, b12, b22 = (stieltjes_quadrature(psi, c, z, config) for c in ("11", "12", "22"))
    return (
        abs(b11 - bp / d),
        abs(mu0 / lam_m1 * b22 - bm / d),
        abs(b12 - lam_m1 * bp * bm / d),
    )
