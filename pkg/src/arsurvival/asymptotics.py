"""Decay-class fitting and theory-side predictions for survival curves.

A survival curve is matched to one of three limiting classes:

    polynomial      p_N ~ c N^-theta      (log p linear in log N)
    exponential     p_N ~ c e^(-lambda N) (log p linear in N)
    positive limit  p_N -> p_inf > 0      (curve plateaus)

``fit_decay`` estimates the class and its parameter from the Monte Carlo
curve; ``predict`` derives the class the parameter region and innovation
hypotheses imply, so the two can be compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bounds import e1_rate_bound, exp_lower_bound, PreconditionError, DegenerateBoundError
from .coeffs import ar_params
from .innovations import (HypothesisReport, InnovationSpec, Kind, TheoremId,
                          hypothesis_check)
from .mc import SurvivalCurve
from .regions import Major, RegionLabel, Sub, classify_ar2

__all__ = [
    "DecayClass",
    "DecayFit",
    "Prediction",
    "fit_decay",
    "predict",
]


class DecayClass(Enum):
    POLYNOMIAL = "polynomial"
    EXPONENTIAL = "exponential"
    POSITIVE_LIMIT = "positive_limit"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DecayFit:
    """Fitted decay class with diagnostics.

    Exactly one class is reported; the value/ci fields of the other classes
    stay None.  r2 values are weighted coefficients of determination over all
    uncensored points, the parameter estimates come from the asymptotic
    window only.
    """

    decay_class: DecayClass
    theta: float | None = None
    theta_ci: float | None = None
    lam: float | None = None
    lam_ci: float | None = None
    p_inf: float | None = None
    p_inf_ci: float | None = None
    r2_loglog: float | None = None
    r2_semilog: float | None = None
    plateau_stat: float | None = None
    window: tuple[int, int] | None = None
    n_usable: int = 0
    n_censored: int = 0

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "type": "decay_fit",
            "class": self.decay_class.value,
            "theta": self.theta, "theta_ci": self.theta_ci,
            "lambda": self.lam, "lambda_ci": self.lam_ci,
            "p_inf": self.p_inf, "p_inf_ci": self.p_inf_ci,
            "r2_loglog": self.r2_loglog, "r2_semilog": self.r2_semilog,
            "plateau_stat": self.plateau_stat,
            "window": list(self.window) if self.window else None,
            "n_usable": self.n_usable, "n_censored": self.n_censored,
        }


_MIN_USABLE = 6
_R2_BAND = 0.02
_PLATEAU_Z = 2.0
_CI_Z = 1.96


def _wls_line(xv: np.ndarray, yv: np.ndarray, w: np.ndarray):
    """Weighted least-squares line fit; returns (slope, intercept, slope_se)."""
    sw = w.sum()
    xb = (w * xv).sum() / sw
    yb = (w * yv).sum() / sw
    sxx = (w * (xv - xb) ** 2).sum()
    slope = (w * (xv - xb) * (yv - yb)).sum() / sxx
    intercept = yb - slope * xb
    return slope, intercept, 1.0 / math.sqrt(sxx)


def _weighted_r2(xv, yv, w):
    slope, intercept, _ = _wls_line(xv, yv, w)
    resid = yv - (intercept + slope * xv)
    yb = (w * yv).sum() / w.sum()
    ss_tot = (w * (yv - yb) ** 2).sum()
    ss_res = (w * resid ** 2).sum()
    if ss_tot == 0.0:
        return 1.0
    return float(1.0 - ss_res / ss_tot)


def fit_decay(curve: SurvivalCurve) -> DecayFit:
    """Fit the decay class of a survival curve.

    Censored (zero-survivor) entries never enter any regression.  With fewer
    than 6 uncensored points the fit is INCONCLUSIVE.  The plateau test runs
    first: if the last quarter of the uncensored entries agree pairwise
    within 2 combined standard errors, the curve is a POSITIVE_LIMIT.  The
    flatness claim needs a resolved level, so the plateau additionally
    requires the pooled tail estimate to carry at most 25% relative standard
    error; a near-censored tail of single-digit counts is flat only for lack
    of power and must not pass.  Otherwise log p is regressed on log N and
    on N (weighted by inverse squared relative standard error) over the
    upper half of the uncensored grid, and the class follows the
    better-explaining model: POLYNOMIAL when the log-log R^2 (over all
    uncensored points) beats the semilog R^2 by at least 0.02, EXPONENTIAL
    in the mirror case, INCONCLUSIVE inside the band.
    """
    usable = ~curve.zero_flag
    n_censored = int(curve.zero_flag.sum())
    n_usable = int(usable.sum())
    if n_usable < _MIN_USABLE:
        return DecayFit(DecayClass.INCONCLUSIVE, n_usable=n_usable,
                        n_censored=n_censored)
    nn = curve.grid[usable].astype(float)
    p = curve.p_hat[usable]
    se = curve.stderr[usable]
    # inverse squared relative stderr; exact-1 entries get their neighbour scale
    rel = np.where(se > 0.0, se / p, 1.0 / curve.paths)
    w = 1.0 / rel ** 2

    # plateau test on the last quarter
    q = max(2, -(-n_usable // 4))
    tail_p, tail_se = p[-q:], se[-q:]
    stats = []
    for i in range(q):
        for j in range(i + 1, q):
            comb = math.hypot(tail_se[i], tail_se[j])
            stats.append(abs(tail_p[i] - tail_p[j]) / comb if comb > 0.0 else 0.0)
    plateau_stat = float(max(stats))

    # asymptotic window: upper half of the usable grid
    m = -(-n_usable // 2)
    wn, wp, ww = nn[-m:], p[-m:], w[-m:]
    window = (int(wn[0]), int(wn[-1]))
    logp = np.log(wp)
    slope_ll, _, se_ll = _wls_line(np.log(wn), logp, ww)
    slope_sl, _, se_sl = _wls_line(wn, logp, ww)
    r2_ll = _weighted_r2(np.log(nn), np.log(p), w)
    r2_sl = _weighted_r2(nn, np.log(p), w)

    common = dict(r2_loglog=r2_ll, r2_semilog=r2_sl, plateau_stat=plateau_stat,
                  window=window, n_usable=n_usable, n_censored=n_censored)
    wq = 1.0 / se[-q:] ** 2
    p_pool = float((wq * tail_p).sum() / wq.sum())
    se_pool = 1.0 / math.sqrt(wq.sum())
    if plateau_stat <= _PLATEAU_Z and se_pool <= 0.25 * p_pool:
        return DecayFit(DecayClass.POSITIVE_LIMIT, p_inf=p_pool,
                        p_inf_ci=_CI_Z * se_pool, **common)
    if r2_ll - r2_sl >= _R2_BAND:
        return DecayFit(DecayClass.POLYNOMIAL, theta=max(0.0, -slope_ll),
                        theta_ci=_CI_Z * se_ll, **common)
    if r2_sl - r2_ll >= _R2_BAND:
        return DecayFit(DecayClass.EXPONENTIAL, lam=max(0.0, -slope_sl),
                        lam_ci=_CI_Z * se_sl, **common)
    return DecayFit(DecayClass.INCONCLUSIVE, **common)


@dataclass(frozen=True)
class Prediction:
    """Decay class implied by the parameter region and innovation hypotheses."""

    region: RegionLabel
    decay_class: DecayClass
    theta: float | None = None
    rate_lower_bound: float | None = None
    rate_upper_bound: float | None = None
    log_corrected_plausible: bool = False
    hypotheses: HypothesisReport | None = None
    notes: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        hyp = None
        if self.hypotheses is not None:
            hyp = {"theorem": self.hypotheses.theorem.value,
                   "satisfied": self.hypotheses.satisfied,
                   "violated": list(self.hypotheses.violated),
                   "notes": list(self.hypotheses.notes)}
        return {
            "region": self.region.major.value,
            "sub": self.region.sub.value if self.region.sub else None,
            "predicted": self.decay_class.value,
            "theta": self.theta,
            "rate_lower_bound": self.rate_lower_bound,
            "rate_upper_bound": self.rate_upper_bound,
            "log_corrected_plausible": self.log_corrected_plausible,
            "hypotheses": hyp,
            "notes": list(self.notes),
        }


def _rate_upper(a1: float, a2: float, spec: InnovationSpec) -> float | None:
    """-log c from the exponential lower bound, when it applies."""
    try:
        res = exp_lower_bound(ar_params([a1, a2]), spec)
    except (PreconditionError, DegenerateBoundError):
        return None
    return -math.log(res.c)


def predict(a1: float, a2: float, spec: InnovationSpec, x: float) -> Prediction:
    """Predicted decay class for the AR(2) process (a1, a2) at barrier x.

    A pure function of the region label and the innovation's analytic flags.
    When the innovation violates the hypotheses of every applicable result
    the prediction is INCONCLUSIVE and carries the violated list.  The
    comparison with fitted curves is only claimed for x >= 0.
    """
    region = classify_ar2(a1, a2)
    notes: list[str] = []
    if x < 0.0:
        notes.append("predictions are stated for barriers x >= 0")
    if region.major is Major.P:
        hyp = hypothesis_check(spec, TheoremId.POLYNOMIAL_DECAY)
        if a2 == 1.0:
            theta = 1.0       # two interleaved walks
        elif a2 == -1.0:
            theta = 0.25      # integrated walk
        else:
            theta = 0.5
        if not hyp.satisfied:
            return Prediction(region, DecayClass.INCONCLUSIVE, hypotheses=hyp,
                              notes=tuple(notes))
        return Prediction(region, DecayClass.POLYNOMIAL, theta=theta,
                          hypotheses=hyp, notes=tuple(notes))
    if region.major is Major.C:
        hyp = hypothesis_check(spec, TheoremId.POSITIVE_LIMIT)
        cls = DecayClass.POSITIVE_LIMIT if hyp.satisfied else DecayClass.INCONCLUSIVE
        return Prediction(region, cls, hypotheses=hyp, notes=tuple(notes))

    # region E: some exponential-type upper bound, depending on the sub-region
    rate_up = _rate_upper(a1, a2, spec)
    gaussian_centered = spec.kind is Kind.GAUSSIAN and spec.params[0] == 0.0
    rate_low = None
    log_corrected = False
    if region.sub is Sub.E2:
        hyp = hypothesis_check(spec, TheoremId.SUPERPOLYNOMIAL_DECAY)
        # all-nonpositive coefficients force Y_k <= 0 along a surviving path,
        # so p_N <= P(Y <= 0)^N needs only upward mass
        if spec.pos_mass:
            pnp = spec.prob_nonpositive()
            rate_low = -math.log(pnp) if pnp > 0.0 else math.inf
            return Prediction(region, DecayClass.EXPONENTIAL,
                              rate_lower_bound=rate_low, rate_upper_bound=rate_up,
                              hypotheses=hyp, notes=tuple(notes))
        return Prediction(region, DecayClass.INCONCLUSIVE, hypotheses=hyp,
                          notes=tuple(notes) + ("no upward mass",))
    if region.sub is Sub.E3:
        hyp = hypothesis_check(spec, TheoremId.SUPERPOLYNOMIAL_DECAY)
        if spec.pos_mass:
            return Prediction(region, DecayClass.EXPONENTIAL,
                              rate_upper_bound=rate_up, hypotheses=hyp,
                              notes=tuple(notes))
        return Prediction(region, DecayClass.INCONCLUSIVE, hypotheses=hyp,
                          notes=tuple(notes) + ("no upward mass",))
    if region.sub is Sub.E1:
        hyp = hypothesis_check(spec, TheoremId.ALTERNATING_RATE)
        if hyp.satisfied or gaussian_centered:
            rate_low = e1_rate_bound(a1, a2)
            return Prediction(region, DecayClass.EXPONENTIAL,
                              rate_lower_bound=rate_low, rate_upper_bound=rate_up,
                              hypotheses=hyp, notes=tuple(notes))
        return Prediction(region, DecayClass.INCONCLUSIVE, hypotheses=hyp,
                          notes=tuple(notes))
    # remaining E: vanishing weights or the a2 = 1 + a1 strip
    hyp = hypothesis_check(spec, TheoremId.SUPERPOLYNOMIAL_DECAY)
    if gaussian_centered:
        return Prediction(region, DecayClass.EXPONENTIAL, rate_upper_bound=rate_up,
                          hypotheses=hyp, notes=tuple(notes))
    if hyp.satisfied or (spec.bounded_by is not None and spec.pos_mass
                         and spec.neg_mass):
        # general laws only guarantee exp(-c N / log N); flagged, not resolved
        log_corrected = True
        return Prediction(region, DecayClass.EXPONENTIAL, rate_upper_bound=rate_up,
                          log_corrected_plausible=log_corrected,
                          hypotheses=hyp, notes=tuple(notes))
    return Prediction(region, DecayClass.INCONCLUSIVE, hypotheses=hyp,
                      notes=tuple(notes))
