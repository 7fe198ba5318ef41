"""Rate rules, potential coefficients and the catalog of exactly solvable families.

Every family is described by a handful of positive rates.  Rates are stored as
rules evaluated on demand because the state space is unbounded.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .errors import DegenerateParameters, NonPositiveParameter, OutOfDomain

__all__ = [
    "Family",
    "Kind",
    "RateRule",
    "CatalogModel",
    "PARAM_NAMES",
    "FIGURE_PARAMS",
    "build_model",
    "rates_at",
    "potential_coefficient",
    "half_line",
    "figure_models",
]

#: relative tolerance used to decide whether a user literal hits a degenerate set
DEGENERACY_RTOL = 1e-12


class Family(str, enum.Enum):
    MM1 = "mm1"
    CONSTANT = "constant-bilateral"
    SYMMETRIC = "symmetric-bilateral"
    ALTERNATING1 = "alternating-case1"
    ALTERNATING2 = "alternating-case2"
    DEFECT1 = "defect-case1"
    DEFECT2 = "defect-case2"
    SPLIT = "split-queues"

    def __str__(self) -> str:
        return self.value


class Kind(str, enum.Enum):
    HALF_LINE = "half-line"
    BILATERAL = "bilateral"


PARAM_NAMES: dict[Family, tuple[str, ...]] = {
    Family.MM1: ("lam", "mu"),
    Family.CONSTANT: ("lam", "mu"),
    Family.SYMMETRIC: ("lam", "mu"),
    Family.ALTERNATING1: ("lam", "mu"),
    Family.ALTERNATING2: ("lam", "mu"),
    Family.DEFECT1: ("lam", "mu", "lam0", "mu0"),
    Family.DEFECT2: ("lam", "mu", "lam0", "mu0"),
    Family.SPLIT: ("lam", "mu", "alpha", "beta"),
}

FAMILY_DOC: dict[Family, str] = {
    Family.MM1: "absorbing M/M/1 queue on {0,1,...}: lam_n=lam, mu_n=mu (state 0 leaks at rate mu)",
    Family.CONSTANT: "bilateral, constant rates: lam_n=lam, mu_n=mu for all n",
    Family.SYMMETRIC: "bilateral, mirrored constant rates: lam_n=lam, mu_n=mu (n>=0); lam_-n=mu, mu_-n=lam (n>=1)",
    Family.ALTERNATING1: "bilateral, alternating: lam_2n=mu_2n=lam, lam_2n+1=mu_2n+1=mu",
    Family.ALTERNATING2: "bilateral, alternating: lam_2n=lam, lam_2n+1=mu, mu_2n=mu, mu_2n+1=lam",
    Family.DEFECT1: "constant rates lam, mu with a defect (lam0, mu0) at state 0",
    Family.DEFECT2: "mirrored constant rates with a defect (lam0, mu0) at state 0",
    Family.SPLIT: "two absorbing M/M/1 queues: (lam, mu) towards +inf, (alpha, beta) towards -inf",
}

#: parameter sets of the published figures; families without a figure get a small grid
FIGURE_PARAMS: dict[Family, tuple[tuple[float, ...], ...]] = {
    Family.MM1: ((1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (2.0, 2.0)),
    Family.CONSTANT: ((1.0, 1.0), (1.0, 2.0), (2.0, 1.0)),
    Family.SYMMETRIC: ((1.0, 2.0), (2.0, 1.0)),
    Family.ALTERNATING1: ((1.0, 2.0), (2.0, 1.0)),
    Family.ALTERNATING2: ((1.0, 2.0), (2.0, 1.0)),
    Family.DEFECT1: ((1.0, 2.0, 1.0, 5.0), (1.0, 2.0, 5.0, 1.0), (2.0, 1.0, 1.0, 5.0), (2.0, 1.0, 5.0, 1.0)),
    Family.DEFECT2: ((1.0, 2.0, 1.0, 5.0), (2.0, 1.0, 5.0, 1.0)),
    Family.SPLIT: (
        (1.0, 2.0, 3.0, 4.0),
        (0.5, 1.0 / 3.0, 2.6, 0.1),
        (1.0, 2.5, 1.0, 2.0),
        (1.0, 1.0, 2.0, 2.0),
    ),
}

#: figure number -> family, for the CLI help text
FIGURE_FAMILY: dict[int, Family] = {
    1: Family.MM1,
    2: Family.SYMMETRIC,
    3: Family.ALTERNATING1,
    4: Family.DEFECT1,
    6: Family.DEFECT2,
    7: Family.SPLIT,
}


@dataclass(frozen=True)
class RateRule:
    """Birth and death rates as a rule ``n -> (lambda_n, mu_n)``.

    For ``Kind.HALF_LINE`` the domain is ``n >= 0`` and ``mu_0`` is the rate of
    leaking out of the state space (absorption).
    """

    kind: Kind
    rate_at: Callable[[int], tuple[float, float]]
    label: str = ""

    def __call__(self, n: int) -> tuple[float, float]:
        if self.kind is Kind.HALF_LINE and n < 0:
            raise OutOfDomain(f"state {n} is outside the half line")
        return self.rate_at(n)


@dataclass(frozen=True)
class CatalogModel:
    family: Family
    lam: float
    mu: float
    lam0: float | None = None
    mu0: float | None = None
    alpha: float | None = None
    beta: float | None = None

    @property
    def kind(self) -> Kind:
        return Kind.HALF_LINE if self.family is Family.MM1 else Kind.BILATERAL

    @property
    def params(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in PARAM_NAMES[self.family]}

    @property
    def rule(self) -> RateRule:
        return RateRule(self.kind, _rate_function(self), label=str(self.family))

    def rates(self, n: int) -> tuple[float, float]:
        return rates_at(self, n)

    def describe(self) -> str:
        args = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.family.value}({args})"


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= DEGENERACY_RTOL * max(abs(a), abs(b))


def build_model(family: Family | str, *args: float, **kwargs: float) -> CatalogModel:
    """Validate parameters and construct a catalog model.

    Parameters may be given positionally in the order of ``PARAM_NAMES`` or by
    keyword (``lam``, ``mu``, ``lam0``, ``mu0``, ``alpha``, ``beta``).

    Raises
    ------
    NonPositiveParameter
        A rate is zero, negative or not finite.
    DegenerateParameters
        A pole formula of the family has a vanishing denominator.  When the
        parameters collapse onto a simpler family the message says which.
    """
    family = Family(family)
    names = PARAM_NAMES[family]
    if len(args) > len(names):
        raise TypeError(f"{family} takes {len(names)} parameters {names}, got {len(args)}")
    values = dict(zip(names, args))
    for key, val in kwargs.items():
        if key not in names:
            raise TypeError(f"unknown parameter {key!r} for {family}; expected {names}")
        if key in values:
            raise TypeError(f"parameter {key!r} given twice")
        values[key] = val
    missing = [n for n in names if n not in values]
    if missing:
        raise TypeError(f"missing parameters {missing} for {family}")
    for key in names:
        val = float(values[key])
        if not math.isfinite(val) or val <= 0.0:
            raise NonPositiveParameter(f"{family}: parameter {key}={values[key]!r} must be > 0")
        values[key] = val

    if family is Family.SPLIT:
        lam, mu, alpha, beta = (values[k] for k in names)
        if _close(alpha, mu) and _close(beta, lam):
            raise DegenerateParameters(
                "split-queues with alpha=mu and beta=lam is the constant-rate bilateral "
                "process; use family 'constant-bilateral'",
                expression="(lam-beta)*(alpha-mu)",
                reduces_to=Family.CONSTANT.value,
            )
        if _close(lam, beta) or _close(alpha, mu):
            raise DegenerateParameters(
                "split-queues: (lam-beta)*(alpha-mu) vanishes, the pole zeta is undefined",
                expression="(lam-beta)*(alpha-mu)",
            )
    elif family is Family.DEFECT1:
        lam, mu, lam0, mu0 = (values[k] for k in names)
        if _close(lam0 * mu + mu0 * lam, lam * mu):
            raise DegenerateParameters(
                "defect-case1: lam0*mu + mu0*lam - lam*mu vanishes, the poles gamma_+- are undefined",
                expression="lam0*mu + mu0*lam - lam*mu",
            )
    elif family is Family.DEFECT2:
        lam, mu, lam0, mu0 = (values[k] for k in names)
        if _close(lam0 + mu0, lam):
            raise DegenerateParameters(
                "defect-case2: lam0 + mu0 - lam vanishes, the pole eta is undefined",
                expression="lam0 + mu0 - lam",
            )
    return CatalogModel(family, **values)


def _rate_function(model: CatalogModel) -> Callable[[int], tuple[float, float]]:
    fam = model.family
    lam, mu = model.lam, model.mu
    if fam in (Family.MM1, Family.CONSTANT):
        return lambda n: (lam, mu)
    if fam is Family.SYMMETRIC:
        return lambda n: (lam, mu) if n >= 0 else (mu, lam)
    if fam is Family.ALTERNATING1:
        return lambda n: (lam, lam) if n % 2 == 0 else (mu, mu)
    if fam is Family.ALTERNATING2:
        return lambda n: (lam, mu) if n % 2 == 0 else (mu, lam)
    if fam is Family.DEFECT1:
        lam0, mu0 = model.lam0, model.mu0
        return lambda n: (lam0, mu0) if n == 0 else (lam, mu)
    if fam is Family.DEFECT2:
        lam0, mu0 = model.lam0, model.mu0
        return lambda n: (lam0, mu0) if n == 0 else ((lam, mu) if n > 0 else (mu, lam))
    if fam is Family.SPLIT:
        alpha, beta = model.alpha, model.beta
        return lambda n: (lam, mu) if n >= 0 else (beta, alpha)
    raise AssertionError(fam)


def rates_at(model: CatalogModel, n: int) -> tuple[float, float]:
    """Return ``(lambda_n, mu_n)``."""
    n = int(n)
    if model.kind is Kind.HALF_LINE and n < 0:
        raise OutOfDomain(f"{model.family}: state {n} is outside the half line")
    return _rate_function(model)(n)


def potential_coefficient(model: CatalogModel | RateRule, n: int) -> float:
    """Potential coefficient ``pi_n`` with ``pi_0 = 1``, built outward from 0."""
    rule = model.rule if isinstance(model, CatalogModel) else model
    n = int(n)
    if rule.kind is Kind.HALF_LINE and n < 0:
        raise OutOfDomain(f"state {n} is outside the half line")
    pi = 1.0
    if n > 0:
        for k in range(1, n + 1):
            pi *= rule.rate_at(k - 1)[0] / rule.rate_at(k)[1]
    else:
        for k in range(0, n, -1):
            # pi_{k-1} = pi_k * mu_k / lambda_{k-1}
            pi *= rule.rate_at(k)[1] / rule.rate_at(k - 1)[0]
    return pi


def half_line(model: CatalogModel, side: str = "+") -> RateRule:
    """The half-line process obtained by cutting a model at the 0|-1 edge.

    ``side="+"`` keeps states ``0, 1, ...``; ``side="-"`` keeps ``-1, -2, ...``
    relabelled as ``0, 1, ...`` so that moving away from the cut is a birth.
    For the M/M/1 model the only admissible side is ``"+"`` and the rule is the
    model's own.
    """
    fn = _rate_function(model)
    if side == "+":
        return RateRule(Kind.HALF_LINE, fn, label=f"{model.family}[+]")
    if side == "-":
        if model.kind is Kind.HALF_LINE:
            raise OutOfDomain("the M/M/1 model has no negative half line")
        return RateRule(
            Kind.HALF_LINE,
            lambda n: (fn(-n - 1)[1], fn(-n - 1)[0]),
            label=f"{model.family}[-]",
        )
    raise ValueError(f"side must be '+' or '-', got {side!r}")


def figure_models(family: Family | str) -> list[CatalogModel]:
    family = Family(family)
    return [build_model(family, *p) for p in FIGURE_PARAMS[family]]
