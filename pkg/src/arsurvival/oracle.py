"""Exact small-instance survival probabilities.

Two independent routes to p_N(x) that never touch the simulator:

* exhaustive enumeration over all innovation sequences when Y has finite
  support (the ground truth every Monte Carlo estimate is tested against),
* the bivariate-normal orthant formula for the consecutive-pair bound
  P(X_{n-1} <= 0, X_n <= 0) under centered Gaussian innovations.
"""

from __future__ import annotations

import math

import numpy as np

from .coeffs import ARParams, coeff_recursion

__all__ = [
    "BudgetExceededError",
    "enumerate_survival",
    "pair_orthant_probability",
    "gaussian_pair_probability",
]

# at most 2^22 innovation sequences per call
_BUDGET = 1 << 22


class BudgetExceededError(ValueError):
    """The enumeration would visit too many sequences."""


def enumerate_survival(params: ARParams, support, x: float, n: int) -> float:
    """Exact p_n(x) = P(X_k <= x, k = 1..n) for finite-support innovations.

    ``support`` is a sequence of (value, probability) pairs whose
    probabilities must sum to 1 within 1e-12.  Sums P(sequence) over every
    innovation sequence whose path survives, by depth-first search that
    prunes a subtree at the first crossing.  Leaf probabilities are
    accumulated smallest-first through math.fsum, so the result is exact to
    the last few ulps.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    values = [float(v) for v, _ in support]
    probs = [float(q) for _, q in support]
    if any(q < 0.0 for q in probs) or abs(math.fsum(probs) - 1.0) > 1e-12:
        raise ValueError("support probabilities must be >= 0 and sum to 1")
    if len(values) ** n > _BUDGET:
        raise BudgetExceededError(
            f"|support|^n = {len(values)}^{n} exceeds the {_BUDGET} budget")
    if n == 0:
        return 1.0
    a = params.a
    p = params.p
    x = float(x)
    branches = list(zip(values, probs))
    leaves: list[float] = []

    def descend(depth: int, state: tuple[float, ...], prob: float) -> None:
        for value, q in branches:
            xval = value
            for k in range(p):
                xval += a[k] * state[k]
            if xval > x:
                continue
            if depth == n:
                leaves.append(prob * q)
            else:
                descend(depth + 1, (xval,) + state[:-1], prob * q)

    descend(1, (0.0,) * p, 1.0)
    leaves.sort()
    return math.fsum(leaves)


def pair_orthant_probability(rho: float) -> float:
    """P(Z1 <= 0, Z2 <= 0) for centered jointly Gaussian Z with correlation rho."""
    if not -1.0 <= rho <= 1.0:
        raise ValueError(f"correlation must be in [-1, 1], got {rho}")
    return (math.pi / 2.0 + math.asin(rho)) / (2.0 * math.pi)


def gaussian_pair_probability(params: ARParams, n: int) -> float:
    """Exact P(X_{n-1} <= 0, X_n <= 0) under centered Gaussian innovations.

    The lag-one correlation comes from the moving-average weights,

        rho_n = sum_{i<n-1} c_i c_{i+1} / sqrt(sum_{i<n-1} c_i^2 * sum_{i<n} c_i^2),

    (the innovation variance cancels), and the probability is
    (pi/2 + arcsin rho_n) / (2 pi).  Since the pair event contains survival
    to n, this is an upper bound on p_n(0).  A correlation outside [-1, 1]
    by more than 1e-10 signals numerical failure and raises.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    c = coeff_recursion(params, n - 1)
    num = float(np.dot(c[:-1], c[1:]))
    den = math.sqrt(float(np.dot(c[:-1], c[:-1])) * float(np.dot(c, c)))
    rho = num / den
    if abs(rho) > 1.0 + 1e-10:
        raise ArithmeticError(f"correlation {rho} escapes [-1, 1]")
    rho = min(1.0, max(-1.0, rho))
    return pair_orthant_probability(rho)
