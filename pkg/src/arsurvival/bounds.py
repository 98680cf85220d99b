"""Explicit bounds and coefficient transforms.

Covers the constructive results that come with computable constants:

* an exponential lower bound p_N >= c^N valid whenever sum |a_k| < 1, with
  c = sup_{alpha < 0} P(Y in [alpha (1 - a_+), alpha |a_-|]) where a_+ / a_-
  sum the positive / negative coefficients (empty sums are 0); for centered
  Gaussian innovations the maximizer has a closed form,

* a lower bound on the exponential decay rate on the oscillating-divergence
  region E1, from the characteristic roots,

* the first sign-change index q = inf{k >= 1 : c_k <= 0} on E3 together with
  its proven cap ceil(pi / phi),

* the order-raising coefficient map T_p of running sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import ndtr

from .coeffs import ARParams, ar_params
from .innovations import Kind
from .regions import Major, Sub, classify_ar2

__all__ = [
    "BoundMethod",
    "LowerBoundResult",
    "PreconditionError",
    "DegenerateBoundError",
    "exp_lower_bound",
    "e1_rate_bound",
    "e3_sign_change_index",
    "integrate_params",
]


class PreconditionError(ValueError):
    """The parameters are outside the result's region of validity."""


class DegenerateBoundError(ArithmeticError):
    """The innovation law puts no mass on the certifying intervals."""


class BoundMethod(Enum):
    GAUSSIAN_CLOSED_FORM = "gaussian_closed_form"
    NUMERIC_SCAN = "numeric_scan"


@dataclass(frozen=True)
class LowerBoundResult:
    """Certified constant c in (0, 1] with p_N >= c^N, and its maximizer."""

    c: float
    alpha_star: float
    a_plus: float
    a_minus: float
    A: float
    method: BoundMethod


_SCAN_POINTS = 1000
_SCAN_LO, _SCAN_HI = 1e-6, 1e6   # |alpha| bracket, log-spaced
_GOLDEN_TOL = 1e-8
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _split_coefficients(params: ARParams) -> tuple[float, float]:
    a = np.asarray(params.a)
    return float(a[a > 0].sum()), float(a[a < 0].sum())


def _interval_prob_at(spec, alpha: float, a_plus: float, abs_minus: float) -> float:
    return spec.interval_prob(alpha * (1.0 - a_plus), alpha * abs_minus)


def _golden_max(f, lo: float, hi: float):
    """Golden-section maximum of f on [lo, hi]; returns the best point seen."""
    best_x, best_f = lo, f(lo)
    fhi = f(hi)
    if fhi > best_f:
        best_x, best_f = hi, fhi
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > _GOLDEN_TOL * max(1.0, abs(lo)):
        if fc > best_f:
            best_x, best_f = c, fc
        if fd > best_f:
            best_x, best_f = d, fd
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    return best_x, best_f


def exp_lower_bound(params: ARParams, spec, method: str = "auto") -> LowerBoundResult:
    """Constant c with p_N >= c^N for all N, for processes with sum |a_k| < 1.

    Maximizes P(Y in [alpha (1 - a_+), alpha |a_-|]) over alpha < 0.  Centered
    Gaussian innovations use the closed-form maximizer

        alpha* = -sigma * sqrt((log(1-a_+)^2 - log|a_-|^2) / ((1-a_+)^2 - |a_-|^2))

    (requires a_- != 0); everything else is a log-spaced scan of 1000 seed
    points on |alpha| in [1e-6, 1e6] followed by golden-section refinement.
    For purely discrete innovations the interval endpoints generated by each
    negative atom are added as extra seeds.  The reported c is the best value
    actually evaluated, hence always a certified lower bound even when the
    supremum is only attained in a limit (flat tails are reported at the
    bracket edge).

    ``method`` may be "auto", "scan" or "closed_form" (the latter only for
    centered Gaussians with a_- != 0).
    """
    total = float(np.abs(np.asarray(params.a)).sum())
    if not total < 1.0:
        raise PreconditionError(f"needs sum |a_k| < 1, got {total}")
    a_plus, a_minus = _split_coefficients(params)
    abs_minus = -a_minus
    cap_a = abs_minus / (1.0 - a_plus)
    gaussian_centered = spec.kind is Kind.GAUSSIAN and spec.params[0] == 0.0
    closed_ok = gaussian_centered and abs_minus > 0.0
    if method == "closed_form" and not closed_ok:
        raise PreconditionError("closed form needs centered Gaussian innovations "
                                "and at least one negative coefficient")
    if method not in ("auto", "scan", "closed_form"):
        raise ValueError(f"unknown method {method!r}")

    if closed_ok and method in ("auto", "closed_form"):
        sigma = spec.params[1]
        width = 1.0 - a_plus
        t_star = -math.sqrt((math.log(width ** 2) - math.log(abs_minus ** 2))
                            / (width ** 2 - abs_minus ** 2))
        c = float(ndtr(t_star * abs_minus) - ndtr(t_star * width))
        return LowerBoundResult(c=c, alpha_star=sigma * t_star, a_plus=a_plus,
                                a_minus=a_minus, A=cap_a,
                                method=BoundMethod.GAUSSIAN_CLOSED_FORM)

    def objective(alpha: float) -> float:
        return _interval_prob_at(spec, alpha, a_plus, abs_minus)

    seeds = list(-np.logspace(math.log10(_SCAN_LO), math.log10(_SCAN_HI), _SCAN_POINTS))
    atoms = spec.atoms()
    if atoms is not None and abs_minus > 0.0:
        for v, _ in atoms:
            if v < 0.0:
                lo_a, hi_a = v / abs_minus, v / (1.0 - a_plus)
                seeds += [lo_a, hi_a, -math.sqrt(lo_a * hi_a)]
    seeds.sort()
    values = [objective(s) for s in seeds]
    i = int(np.argmax(values))
    best_alpha, best_c = seeds[i], values[i]
    lo = seeds[max(0, i - 1)]
    hi = seeds[min(len(seeds) - 1, i + 1)]
    if hi > lo:
        x, fx = _golden_max(objective, lo, hi)
        if fx > best_c:
            best_alpha, best_c = x, fx
    if best_c <= 0.0:
        raise DegenerateBoundError(
            "no negative interval carries innovation mass; the certified "
            "constant would be 0")
    return LowerBoundResult(c=best_c, alpha_star=best_alpha, a_plus=a_plus,
                            a_minus=a_minus, A=cap_a, method=BoundMethod.NUMERIC_SCAN)


def e1_rate_bound(a1: float, a2: float) -> float:
    """Lower bound on the exponential decay rate of p_N on region E1.

    With real roots s1 > 0 > s2 and |s2| > max(s1, 1), the rate is at least
    log(|s2| / s1) when a1 + a2 > 1 and log |s2| otherwise.
    """
    label = classify_ar2(a1, a2)
    if label.major is not Major.E or label.sub is not Sub.E1:
        raise PreconditionError(f"({a1}, {a2}) is not in region E1 (got {label})")
    h = math.sqrt(a1 * a1 + 4.0 * a2)
    s1 = (a1 + h) / 2.0
    s2 = (a1 - h) / 2.0
    if a1 + a2 > 1.0:
        return math.log(abs(s2) / s1)
    return math.log(abs(s2))


def e3_sign_change_index(a1: float, a2: float) -> int:
    """First k >= 1 with c_k <= 0 on region E3 (c_k <= 0 is non-strict).

    The oscillation angle phi = atan2(sqrt(-(a1^2+4a2)), a1) caps the index at
    ceil(pi / phi); exceeding the cap indicates a bug and raises RuntimeError.
    """
    label = classify_ar2(a1, a2)
    if label.major is not Major.E or label.sub is not Sub.E3:
        raise PreconditionError(f"({a1}, {a2}) is not in region E3 (got {label})")
    phi = math.atan2(math.sqrt(-(a1 * a1 + 4.0 * a2)), a1)
    cap = math.ceil(math.pi / phi)
    c_prev, c_cur = 1.0, a1     # c_0, c_1
    k = 1
    while k <= cap:
        if c_cur <= 0.0:
            return k
        c_prev, c_cur = c_cur, a1 * c_cur + a2 * c_prev
        k += 1
    raise RuntimeError(
        f"no sign change up to the proven cap {cap} for ({a1}, {a2}); "
        "this is an internal error")


def integrate_params(params: ARParams) -> ARParams:
    """Coefficients of the running sum: T_p(a) = (a1+1, a2-a1, ..., -a_p).

    The AR(p+1) process with these coefficients equals, pathwise, the running
    sum of the AR(p) process with coefficients ``a`` driven by the same
    innovations.
    """
    a = params.a
    lifted = [a[0] + 1.0]
    lifted += [a[k] - a[k - 1] for k in range(1, params.p)]
    lifted.append(-a[-1])
    return ar_params(lifted)
