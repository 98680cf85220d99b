"""Innovation distributions and their analytic capabilities.

The driving noise Y_1, Y_2, ... is drawn from a closed catalog of five
distributions.  Each kind carries exact analytic metadata (mean, variance,
bound, exponential-moment exponent, characteristic-function decay,
sign masses, cdf and closed-interval probabilities), so every theorem
hypothesis in the catalog below can be decided without sampling.

    kind                    parameters      support
    --------------------    -----------     -----------------------
    gaussian                mu, sigma       R
    rademacher              (none)          {-1, +1} each w.p. 1/2
    two_point               y > 0           {-y, +y} each w.p. 1/2
    uniform                 lo < hi         [lo, hi]
    exponential_centered    rate > 0        [-1/rate, inf)

Sampling is inverse-cdf over counter-based uniform streams, so a sample is
a pure function of (spec, seed, stream index, draw index).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import ndtr, ndtri

from .rng import RNGStream

__all__ = [
    "Kind",
    "InnovationSpec",
    "gaussian",
    "rademacher",
    "two_point",
    "uniform",
    "exponential_centered",
    "sample",
    "TheoremId",
    "HypothesisReport",
    "hypothesis_check",
    "spec_from_json",
]


class Kind(Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"
    TWO_POINT = "two_point"
    UNIFORM = "uniform"
    EXPONENTIAL_CENTERED = "exponential_centered"


@dataclass(frozen=True)
class InnovationSpec:
    """One member of the innovation catalog; build via the factory functions."""

    kind: Kind
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(v) for v in self.params))
        k, q = self.kind, self.params
        if k is Kind.GAUSSIAN:
            if len(q) != 2 or q[1] <= 0:
                raise ValueError("gaussian needs (mu, sigma) with sigma > 0")
        elif k is Kind.RADEMACHER:
            if q:
                raise ValueError("rademacher takes no parameters")
        elif k is Kind.TWO_POINT:
            if len(q) != 1 or q[0] <= 0:
                raise ValueError("two_point needs y > 0")
        elif k is Kind.UNIFORM:
            if len(q) != 2 or not q[0] < q[1]:
                raise ValueError("uniform needs lo < hi")
        elif k is Kind.EXPONENTIAL_CENTERED:
            if len(q) != 1 or q[0] <= 0:
                raise ValueError("exponential_centered needs rate > 0")

    # ---- moments and capability flags -------------------------------------

    @property
    def mean(self) -> float:
        k, q = self.kind, self.params
        if k is Kind.GAUSSIAN:
            return q[0]
        if k is Kind.UNIFORM:
            return (q[0] + q[1]) / 2.0
        return 0.0

    @property
    def variance(self) -> float:
        k, q = self.kind, self.params
        if k is Kind.GAUSSIAN:
            return q[1] ** 2
        if k is Kind.RADEMACHER:
            return 1.0
        if k is Kind.TWO_POINT:
            return q[0] ** 2
        if k is Kind.UNIFORM:
            return (q[1] - q[0]) ** 2 / 12.0
        return 1.0 / self.params[0] ** 2

    @property
    def bounded_by(self) -> float | None:
        """Almost-sure bound M on |Y|, or None when unbounded."""
        k, q = self.kind, self.params
        if k is Kind.RADEMACHER:
            return 1.0
        if k is Kind.TWO_POINT:
            return q[0]
        if k is Kind.UNIFORM:
            return max(abs(q[0]), abs(q[1]))
        return None

    @property
    def exp_moment_alpha(self) -> float:
        """Largest guaranteed alpha with E exp(|Y|^alpha) finite.

        Reported as 2 for gaussian, inf for bounded kinds, and 1 for
        exponential tails (the supremum of valid exponents).
        """
        if self.kind is Kind.GAUSSIAN:
            return 2.0
        if self.kind is Kind.EXPONENTIAL_CENTERED:
            return 1.0
        return math.inf

    @property
    def cf_decays(self) -> bool:
        """Whether the characteristic function vanishes at infinity.

        Declared per kind: the absolutely continuous laws decay, the lattice
        ones keep |cf| = 1 along a subsequence.
        """
        return self.kind in (Kind.GAUSSIAN, Kind.UNIFORM, Kind.EXPONENTIAL_CENTERED)

    @property
    def pos_mass(self) -> bool:
        return self.kind is not Kind.UNIFORM or self.params[1] > 0.0

    @property
    def neg_mass(self) -> bool:
        return self.kind is not Kind.UNIFORM or self.params[0] < 0.0

    # ---- distribution functions -------------------------------------------

    def atoms(self) -> tuple[tuple[float, float], ...] | None:
        """(value, probability) atoms for discrete kinds, else None."""
        if self.kind is Kind.RADEMACHER:
            return ((-1.0, 0.5), (1.0, 0.5))
        if self.kind is Kind.TWO_POINT:
            y = self.params[0]
            return ((-y, 0.5), (y, 0.5))
        return None

    def cdf(self, y):
        """P(Y <= y), vectorized."""
        y = np.asarray(y, dtype=float)
        k, q = self.kind, self.params
        if k is Kind.GAUSSIAN:
            return ndtr((y - q[0]) / q[1])
        if k is Kind.UNIFORM:
            return np.clip((y - q[0]) / (q[1] - q[0]), 0.0, 1.0)
        if k is Kind.EXPONENTIAL_CENTERED:
            rate = q[0]
            z = rate * y + 1.0
            return np.where(z > 0.0, -np.expm1(-np.maximum(z, 0.0)), 0.0)
        out = np.zeros_like(y)
        for v, p in self.atoms():
            out = out + p * (y >= v)
        return out

    def prob_nonpositive(self) -> float:
        return float(self.cdf(0.0))

    def interval_prob(self, lo: float, hi: float) -> float:
        """P(Y in [lo, hi]) with closed endpoints."""
        if hi < lo:
            return 0.0
        atoms = self.atoms()
        if atoms is not None:
            return float(sum(p for v, p in atoms if lo <= v <= hi))
        return float(max(0.0, self.cdf(hi) - self.cdf(lo)))

    def transform(self, u: np.ndarray) -> np.ndarray:
        """Map (0,1) uniforms to Y samples by the inverse cdf."""
        k, q = self.kind, self.params
        if k is Kind.GAUSSIAN:
            return q[0] + q[1] * ndtri(u)
        if k is Kind.RADEMACHER:
            return np.where(u < 0.5, -1.0, 1.0)
        if k is Kind.TWO_POINT:
            return np.where(u < 0.5, -q[0], q[0])
        if k is Kind.UNIFORM:
            return q[0] + (q[1] - q[0]) * u
        rate = q[0]
        return -np.log(u) / rate - 1.0 / rate

    # ---- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        names = _PARAM_NAMES[self.kind]
        return {"kind": self.kind.value,
                "params": dict(zip(names, self.params))}

    def __str__(self) -> str:
        if not self.params:
            return self.kind.value
        inner = ", ".join(f"{v:g}" for v in self.params)
        return f"{self.kind.value}({inner})"


_PARAM_NAMES = {
    Kind.GAUSSIAN: ("mu", "sigma"),
    Kind.RADEMACHER: (),
    Kind.TWO_POINT: ("y",),
    Kind.UNIFORM: ("lo", "hi"),
    Kind.EXPONENTIAL_CENTERED: ("rate",),
}


def gaussian(mu: float = 0.0, sigma: float = 1.0) -> InnovationSpec:
    return InnovationSpec(Kind.GAUSSIAN, (mu, sigma))


def rademacher() -> InnovationSpec:
    return InnovationSpec(Kind.RADEMACHER)


def two_point(y: float) -> InnovationSpec:
    return InnovationSpec(Kind.TWO_POINT, (y,))


def uniform(lo: float, hi: float) -> InnovationSpec:
    return InnovationSpec(Kind.UNIFORM, (lo, hi))


def exponential_centered(rate: float = 1.0) -> InnovationSpec:
    return InnovationSpec(Kind.EXPONENTIAL_CENTERED, (rate,))


def spec_from_json(obj: dict) -> InnovationSpec:
    """Parse {"kind": ..., "params": {...}}; unknown kinds or params fail."""
    if not isinstance(obj, dict) or set(obj) - {"kind", "params"}:
        raise ValueError(f"bad innovation object: {obj!r}")
    try:
        kind = Kind(obj["kind"])
    except (KeyError, ValueError):
        raise ValueError(f"unknown innovation kind: {obj.get('kind')!r}") from None
    names = _PARAM_NAMES[kind]
    given = obj.get("params", {}) or {}
    if set(given) != set(names):
        raise ValueError(f"{kind.value} needs params {list(names)}, got {sorted(given)}")
    return InnovationSpec(kind, tuple(given[n] for n in names))


def sample(spec: InnovationSpec, stream: RNGStream, count: int) -> np.ndarray:
    """``count`` i.i.d. draws from ``spec``, deterministic in the stream state."""
    return spec.transform(stream.uniforms(count))


# ---- theorem hypothesis catalog ---------------------------------------------


class TheoremId(Enum):
    """Classification results whose innovation-side hypotheses can be checked."""

    POLYNOMIAL_DECAY = "polynomial-decay"          # P-region polynomial law
    SUPERPOLYNOMIAL_DECAY = "superpolynomial-decay"  # E-region upper bound
    POSITIVE_LIMIT = "positive-limit"              # C-region positive limit
    SUMMABLE_ENVELOPE = "summable-envelope"        # vanishing-weights upper bounds
    EXP_LOWER_BOUND = "exponential-lower-bound"    # small-coefficient lower bound
    ALTERNATING_RATE = "alternating-rate-bound"    # oscillating-divergence rate
    PAIR_SUM_AR1 = "pair-sum-ar1"                  # Z_n = X_n + X_{n-1} reduction
    ROOT_SHIFT_AR1 = "root-shift-ar1"              # Z_n = X_n - s2 X_{n-1} reduction
    WALK_REDUCTION = "walk-reduction"              # S_n = X_n + a2 X_{n-1} reduction


@dataclass(frozen=True)
class HypothesisReport:
    theorem: TheoremId
    satisfied: bool
    violated: tuple[str, ...]
    notes: tuple[str, ...] = ()


def _mean_zero(spec):
    return spec.mean == 0.0, "mean zero"


def _exp_moment(spec):
    return spec.exp_moment_alpha > 0.0, "finite exponential moment E exp(|Y|^a)"


def _cf_decays(spec):
    return spec.cf_decays, "characteristic function -> 0 at infinity"


def _pos_mass(spec):
    return spec.pos_mass, "P(Y > 0) > 0"


def _neg_mass(spec):
    return spec.neg_mass, "P(Y < 0) > 0"


def _not_as_positive(spec):
    return spec.prob_nonpositive() > 0.0, "P(Y <= 0) > 0"


def _two_sided_mass(spec):
    ok = spec.pos_mass and spec.neg_mass
    return ok, "P(Y > d) > 0 and P(Y < -d) > 0 for some d > 0"


def _finite_variance(spec):
    return math.isfinite(spec.variance), "finite variance"


def _nondegenerate_variance(spec):
    return spec.variance > 0.0, "nondegenerate variance"


def _log_power_tail(spec):
    # all catalog members have at worst exponential upper tails
    return True, "P(Y >= t) eventually below (log t)^(-a) for some a > 1"


_X_LEVEL_NOTE = ("the full hypothesis also needs upward mass at a level scaling "
                 "with the barrier x; bounded innovations satisfy it only for "
                 "small enough x")

_CF_BOUND_NOTE = ("the stated |cf| <= delta < |root| condition is checked only "
                  "as characteristic-function decay; the delta/|root| "
                  "comparison is ill-posed for |root| > 1 and is not resolved "
                  "here")

_HYPOTHESES = {
    TheoremId.POLYNOMIAL_DECAY: ((_mean_zero, _exp_moment), ()),
    TheoremId.SUPERPOLYNOMIAL_DECAY: (
        (_pos_mass, _not_as_positive, _exp_moment, _cf_decays), ()),
    TheoremId.POSITIVE_LIMIT: ((_neg_mass, _log_power_tail), ()),
    TheoremId.SUMMABLE_ENVELOPE: ((_two_sided_mass, _finite_variance), ()),
    TheoremId.EXP_LOWER_BOUND: ((_nondegenerate_variance,), ()),
    TheoremId.ALTERNATING_RATE: ((_cf_decays, _exp_moment), (_CF_BOUND_NOTE,)),
    TheoremId.PAIR_SUM_AR1: ((_pos_mass,), (_X_LEVEL_NOTE,)),
    TheoremId.ROOT_SHIFT_AR1: ((_pos_mass,), (_X_LEVEL_NOTE,)),
    TheoremId.WALK_REDUCTION: ((_mean_zero, _nondegenerate_variance), ()),
}


def hypothesis_check(spec: InnovationSpec, theorem: TheoremId | str) -> HypothesisReport:
    """Decide each innovation-side hypothesis of ``theorem`` from the flags.

    Purely analytic: no sampling.  Raises on unknown theorem ids.
    """
    if not isinstance(theorem, TheoremId):
        try:
            theorem = TheoremId(theorem)
        except ValueError:
            raise ValueError(f"unknown theorem id: {theorem!r}") from None
    checks, notes = _HYPOTHESES[theorem]
    violated = []
    for check in checks:
        ok, name = check(spec)
        if not ok:
            violated.append(name)
    return HypothesisReport(theorem, not violated, tuple(violated), notes)
