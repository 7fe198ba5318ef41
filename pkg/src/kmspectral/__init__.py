"""Transition probabilities of birth-death processes on the integers.

The package evaluates the Karlin-McGregor integral representation over the
closed-form spectral measures of a catalog of exactly solvable families, and
cross-checks the results against an independent uniformization oracle.
"""
from __future__ import annotations

from .classify import (
    Classification,
    Verdict,
    atom_at_zero_weight,
    classify,
    invariant_distribution,
    potential_sum,
    potential_tail,
)
from .errors import (
    DegenerateParameters,
    KMSpectralError,
    NoClosedForm,
    NonConvergedQuadrature,
    NonPositiveParameter,
    OutOfDomain,
    WindowTooLarge,
    ZInSupport,
)
from .km import (
    Method,
    TransitionResult,
    closed_form_current,
    closed_form_transition,
    current_row,
    probability_current,
    transition_probability,
    transition_row,
)
from .model import (
    FIGURE_PARAMS,
    PARAM_NAMES,
    CatalogModel,
    Family,
    Kind,
    build_model,
    figure_models,
    half_line,
    potential_coefficient,
    rates_at,
)
from .oracle import oracle_row, oracle_transition, truncated_generator
from .quadrature import QuadratureConfig, default_config
from .spectral import (
    spectral_matrix,
    spectral_measure,
    spectral_measure_halfline,
    stieltjes_closed,
    stieltjes_quadrature,
    total_mass,
    verify_coupling,
)

__version__ = "0.1.0"

__all__ = [
    "CatalogModel",
    "Classification",
    "DegenerateParameters",
    "FIGURE_PARAMS",
    "Family",
    "KMSpectralError",
    "Kind",
    "Method",
    "NoClosedForm",
    "NonConvergedQuadrature",
    "NonPositiveParameter",
    "OutOfDomain",
    "PARAM_NAMES",
    "QuadratureConfig",
    "TransitionResult",
    "Verdict",
    "WindowTooLarge",
    "ZInSupport",
    "atom_at_zero_weight",
    "build_model",
    "classify",
    "closed_form_current",
    "closed_form_transition",
    "current_row",
    "default_config",
    "figure_models",
    "half_line",
    "invariant_distribution",
    "oracle_row",
    "oracle_transition",
    "potential_coefficient",
    "potential_sum",
    "potential_tail",
    "probability_current",
    "rates_at",
    "spectral_matrix",
    "spectral_measure",
    "spectral_measure_halfline",
    "stieltjes_closed",
    "stieltjes_quadrature",
    "total_mass",
    "transition_probability",
    "transition_row",
    "truncated_generator",
    "verify_coupling",
]
