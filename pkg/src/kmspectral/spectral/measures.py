"""Scalar and 2x2 matrix measures: absolutely continuous pieces plus atoms."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import ZInSupport
from ..quadrature import QuadratureConfig, default_config, piece_nodes

__all__ = [
    "Endpoint",
    "ACPiece",
    "Atom",
    "SpectralMatrix",
    "SpectralMeasure",
    "discretize",
    "endpoint_exponent",
    "stieltjes_quadrature",
    "total_mass",
    "to_json_dict",
]

_COMPONENTS = {"11": (0, 0), "12": (0, 1), "21": (1, 0), "22": (1, 1)}


class Endpoint(str, enum.Enum):
    SQRT_VANISHING = "sqrt-vanishing"
    INVERSE_SQRT = "inverse-sqrt"
    REGULAR = "regular"


@dataclass(frozen=True)
class ACPiece:
    """Density on ``[a, b]``; ``density(x)`` returns shape ``x.shape`` (scalar
    measure) or ``x.shape + (2, 2)`` (matrix measure)."""

    a: float
    b: float
    density: Callable[[np.ndarray], np.ndarray]
    left: Endpoint = Endpoint.SQRT_VANISHING
    right: Endpoint = Endpoint.SQRT_VANISHING
    label: str = ""

    def __post_init__(self):
        if not (0.0 <= self.a < self.b):
            raise ValueError(f"invalid interval [{self.a}, {self.b}]")


@dataclass(frozen=True)
class Atom:
    location: float
    weight: float | np.ndarray


@dataclass(frozen=True)
class _Measure:
    pieces: tuple[ACPiece, ...]
    atoms: tuple[Atom, ...]
    label: str = ""

    def support_min(self) -> float:
        locs = [p.a for p in self.pieces] + [a.location for a in self.atoms]
        return min(locs)

    def support_max(self) -> float:
        locs = [p.b for p in self.pieces] + [a.location for a in self.atoms]
        return max(locs)

    def atom_at(self, x: float, tol: float = 1e-12):
        for atom in self.atoms:
            if abs(atom.location - x) <= tol * max(1.0, abs(x)):
                return atom
        return None


@dataclass(frozen=True)
class SpectralMeasure(_Measure):
    """Scalar measure of a half-line process."""

    is_matrix: bool = field(default=False, init=False)


@dataclass(frozen=True)
class SpectralMatrix(_Measure):
    """2x2 spectral matrix of a bilateral process.

    ``pi_minus1`` is the potential coefficient of state -1, fixing the
    normalisation ``int dpsi_22 = 1 / pi_minus1``.
    """

    pi_minus1: float = 1.0
    arrangement: str | None = None
    is_matrix: bool = field(default=True, init=False)


def endpoint_exponent(piece: ACPiece, end: str = "left") -> float:
    """Local power ``p`` in ``density ~ |x - endpoint|^p`` at one end of a piece.

    Estimated from two evaluations very close to the endpoint; catalog
    densities give ``p`` within 1e-5 of ``1/2``, ``-1/2`` or ``0``.  Matrix
    densities are measured through their trace.
    """
    h = piece.b - piece.a
    eps = np.array([1e-9, 4e-9]) * h
    x = piece.a + eps if end == "left" else piece.b - eps
    d = np.asarray(piece.density(x), dtype=float)
    if d.ndim == 3:
        d = d[:, 0, 0] + d[:, 1, 1]
    d = np.abs(d)
    if d[0] == 0.0 or d[1] == 0.0:
        return np.inf
    return float(np.log(d[1] / d[0]) / np.log(4.0))


def classify_endpoint(piece: ACPiece, end: str = "left") -> Endpoint:
    p = endpoint_exponent(piece, end)
    if p > 0.25:
        return Endpoint.SQRT_VANISHING
    if p < -0.25:
        return Endpoint.INVERSE_SQRT
    return Endpoint.REGULAR


def discretize(measure: _Measure, config: QuadratureConfig | None = None):
    """Nodes and weights representing the whole measure as a finite sum.

    Returns ``(x, w)`` with ``w`` of shape ``(N,)`` or ``(N, 2, 2)``; atoms are
    appended as single nodes carrying their weight.
    """
    config = config or default_config()
    xs, ws = [], []
    for piece in measure.pieces:
        x, jac = piece_nodes(piece.a, piece.b, config.nodes_per_piece)
        dens = np.asarray(piece.density(x), dtype=float)
        if measure.is_matrix:
            ws.append(dens * jac[:, None, None])
        else:
            ws.append(dens * jac)
        xs.append(x)
    for atom in measure.atoms:
        xs.append(np.array([atom.location]))
        w = np.asarray(atom.weight, dtype=float)
        ws.append(w[None, ...])
    shape = (0, 2, 2) if measure.is_matrix else (0,)
    x = np.concatenate(xs) if xs else np.zeros(0)
    w = np.concatenate(ws) if ws else np.zeros(shape)
    return x, w


def _component(measure: _Measure, w: np.ndarray, component: str | None) -> np.ndarray:
    if not measure.is_matrix:
        return w
    if component is None:
        return w
    try:
        i, j = _COMPONENTS[str(component)]
    except KeyError:
        raise ValueError(f"component must be one of 11, 12, 22; got {component!r}") from None
    return w[:, i, j]


def total_mass(measure: _Measure, component: str | None = None, config: QuadratureConfig | None = None):
    """Total mass; for matrices without a component, the 2x2 mass matrix."""
    _, w = discretize(measure, config)
    return _component(measure, w, component).sum(axis=0)


def stieltjes_quadrature(
    measure: _Measure,
    component: str | None,
    z: float,
    config: QuadratureConfig | None = None,
) -> float:
    """``B(z) = int dpsi(x) / (x - z)`` for real ``z`` below the support."""
    if not z < measure.support_min() - 1e-9:
        raise ZInSupport(f"z={z} is not below the support minimum {measure.support_min()}")
    x, w = discretize(measure, config)
    wc = _component(measure, w, component)
    if wc.ndim > 1:
        return (wc / (x - z)[:, None, None]).sum(axis=0)
    return float(np.sum(wc / (x - z)))


def to_json_dict(measure: _Measure, grid: int = 33) -> dict:
    """Serializable view: each piece sampled on ``grid`` interior points."""
    pieces = []
    for p in measure.pieces:
        k = np.arange(1, grid + 1)
        # Chebyshev points of the piece, endpoints excluded
        x = 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * np.cos(np.pi * (k - 0.5) / grid)[::-1]
        d = np.asarray(p.density(x), dtype=float)
        entry = {"a": p.a, "b": p.b, "left": p.left.value, "right": p.right.value, "x": x.tolist()}
        if measure.is_matrix:
            entry["density"] = {"11": d[:, 0, 0].tolist(), "12": d[:, 0, 1].tolist(), "22": d[:, 1, 1].tolist()}
        else:
            entry["density"] = d.tolist()
        pieces.append(entry)
    atoms = []
    for a in measure.atoms:
        w = np.asarray(a.weight, dtype=float)
        if measure.is_matrix:
            atoms.append({"location": a.location, "weight": {"11": w[0, 0], "12": w[0, 1], "22": w[1, 1]}})
        else:
            atoms.append({"location": a.location, "weight": float(w)})
    out = {"label": measure.label, "kind": "matrix" if measure.is_matrix else "scalar", "pieces": pieces, "atoms": atoms}
    if isinstance(measure, SpectralMatrix):
        out["pi_minus1"] = measure.pi_minus1
        if measure.arrangement:
            out["arrangement"] = measure.arrangement
    return out
