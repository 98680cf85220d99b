"""Moving-average coefficients of AR(p) processes.

An AR(p) process X_n = a_1 X_{n-1} + ... + a_p X_{n-p} + Y_n (with X_n = 0
for n <= 0) expands as X_n = sum_{k=1..n} c_{n-k} Y_k, where the weights
solve the linear difference equation

    c_0 = 1,   c_n = 0 (n < 0),   c_n = a_1 c_{n-1} + ... + a_p c_{n-p}.

This module computes (c_n) by direct recursion for any order, provides the
closed forms for p = 2 in terms of the characteristic roots

    s_1 = (a_1 + h)/2,   s_2 = (a_1 - h)/2,   h = sqrt(a_1^2 + 4 a_2),

and classifies the limiting behaviour of (c_n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import mpmath
import numpy as np

__all__ = [
    "ARParams",
    "ar_params",
    "Branch",
    "CoeffSolution",
    "LimitKind",
    "CoeffLimit",
    "CoeffOverflowError",
    "RootSolveError",
    "coeff_recursion",
    "ar2_closed_form",
    "ar2_coeff_at",
    "charpoly_roots",
    "coeff_limit_class",
]

# relative threshold on the discriminant below which the double-root form is
# used; nearer than this the two-root form is numerically meaningless
_DOUBLE_ROOT_RTOL = 1e-12

_ROOT_RESIDUAL_TOL = 1e-10


class CoeffOverflowError(ArithmeticError):
    """A coefficient value exceeds the double-precision range."""


class RootSolveError(RuntimeError):
    """The polynomial root finder failed or returned inaccurate roots."""


@dataclass(frozen=True)
class ARParams:
    """Order and coefficient vector (a_1, ..., a_p) of an AR(p) process."""

    a: tuple[float, ...]

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        object.__setattr__(self, "a", a)
        if len(a) < 1:
            raise ValueError("need at least one coefficient")
        if not all(math.isfinite(v) for v in a):
            raise ValueError(f"coefficients must be finite, got {a}")
        if len(a) > 1 and a[-1] == 0.0:
            raise ValueError("a_p must be nonzero for p > 1 (drop trailing zeros)")

    @property
    def p(self) -> int:
        return len(self.a)


def ar_params(coeffs) -> ARParams:
    """Build ARParams, dropping trailing zero coefficients.

    Lets callers write a random walk as (1, 0): trailing zero lags do not
    change the process, so (1, 0) and (1,) are the same model.
    """
    a = [float(v) for v in coeffs]
    while len(a) > 1 and a[-1] == 0.0:
        a.pop()
    return ARParams(tuple(a))


class Branch(Enum):
    DISTINCT_REAL = "distinct_real"
    DOUBLE_ROOT = "double_root"
    COMPLEX_PAIR = "complex_pair"


@dataclass(frozen=True)
class CoeffSolution:
    """Closed-form description of (c_n) for an AR(2) process.

    For DISTINCT_REAL / COMPLEX_PAIR, c_n = (s1^(n+1) - s2^(n+1)) / h.
    For DOUBLE_ROOT, c_n = (a1/2)^n (n + 1).
    On the COMPLEX_PAIR branch the equivalent real form is

        c_n = |a2|^(n/2) ( cos(n*phi) + (a1/h_tilde) sin(n*phi) )

    with h_tilde = sqrt(-(a1^2 + 4 a2)) and phi in (0, pi) depending on the
    sign of a1; the common root modulus is sqrt(|a2|).
    """

    a1: float
    a2: float
    branch: Branch
    s1: complex
    s2: complex
    h: complex
    h_tilde: float | None = None
    phi: float | None = None
    modulus: float | None = None


def coeff_recursion(params: ARParams, n_max: int) -> np.ndarray:
    """c_0 .. c_{n_max} by direct recursion in double precision."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    a = params.a
    p = params.p
    c = np.zeros(n_max + 1)
    c[0] = 1.0
    for n in range(1, n_max + 1):
        acc = 0.0
        for k in range(1, min(p, n) + 1):
            acc += a[k - 1] * c[n - k]
        c[n] = acc
    return c


def ar2_closed_form(a1: float, a2: float) -> CoeffSolution:
    """Solve the order-2 difference equation for (c_n).

    The branch is picked from the discriminant a1^2 + 4 a2: positive gives
    two real roots, negative a conjugate pair, and anything within
    1e-12 * max(1, a1^2) of zero is treated as a double root.
    """
    a1 = float(a1)
    a2 = float(a2)
    disc = a1 * a1 + 4.0 * a2
    if abs(disc) <= _DOUBLE_ROOT_RTOL * max(1.0, a1 * a1):
        s = a1 / 2.0
        return CoeffSolution(a1, a2, Branch.DOUBLE_ROOT,
                             complex(s), complex(s), complex(0.0))
    if disc > 0.0:
        h = math.sqrt(disc)
        return CoeffSolution(a1, a2, Branch.DISTINCT_REAL,
                             complex((a1 + h) / 2.0), complex((a1 - h) / 2.0),
                             complex(h))
    h_tilde = math.sqrt(-disc)
    if a1 > 0.0:
        phi = math.atan(h_tilde / a1)
    elif a1 == 0.0:
        phi = math.pi / 2.0
    else:
        phi = math.pi + math.atan(h_tilde / a1)
    s1 = complex(a1 / 2.0, h_tilde / 2.0)
    return CoeffSolution(a1, a2, Branch.COMPLEX_PAIR, s1, s1.conjugate(),
                         complex(0.0, h_tilde), h_tilde=h_tilde, phi=phi,
                         modulus=math.sqrt(abs(a2)))


def _oscillatory_dps(modulus: float, n: int) -> int:
    """Working digits that keep the absolute error of c_n below ~1e-15.

    The sine/cosine combination can sit arbitrarily deep inside the envelope
    modulus^n (it is exactly 0 whenever the angle is a rational multiple of
    pi), so the phase must carry enough digits to resolve that cancellation.
    """
    growth = max(0.0, n * math.log10(modulus)) if modulus > 0.0 else 0.0
    return 25 + int(growth)


def ar2_coeff_at(sol: CoeffSolution, n: int) -> float:
    """Evaluate c_n from the closed form.

    Raises CoeffOverflowError instead of returning an IEEE infinity when the
    value leaves the double range, so callers never see non-finite numbers.
    The oscillatory branch is evaluated in extended precision: double
    precision trig cannot reproduce the resonance zeros (angle a rational
    multiple of pi) that the recursion keeps exactly.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    try:
        if sol.branch is Branch.DOUBLE_ROOT:
            val = (sol.a1 / 2.0) ** n * (n + 1)
        elif sol.branch is Branch.DISTINCT_REAL:
            s1 = sol.s1.real
            s2 = sol.s2.real
            val = (s1 ** (n + 1) - s2 ** (n + 1)) / sol.h.real
        else:
            with mpmath.workdps(_oscillatory_dps(sol.modulus, n)):
                a1 = mpmath.mpf(sol.a1)
                a2 = mpmath.mpf(sol.a2)
                h_tilde = mpmath.sqrt(-(a1 * a1 + 4 * a2))
                phi = mpmath.atan2(h_tilde, a1)
                amp = mpmath.sqrt(abs(a2)) ** n
                osc = mpmath.cos(n * phi) + (a1 / h_tilde) * mpmath.sin(n * phi)
                val = float(amp * osc)
    except OverflowError as exc:
        raise CoeffOverflowError(f"c_{n} overflows double precision") from exc
    if not math.isfinite(val):
        raise CoeffOverflowError(f"c_{n} overflows double precision")
    return val


def ar2_coeff_via_roots(sol: CoeffSolution, n: int) -> tuple[float, float]:
    """Evaluate c_n as (s1^(n+1) - s2^(n+1)) / h in complex arithmetic.

    Returns (value, |imaginary residue|).  The residue is analytically zero;
    it is reported so tests can assert the evaluation stays real.  Uses the
    same extended precision as the oscillatory closed form.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if sol.branch is Branch.DOUBLE_ROOT:
        return ar2_coeff_at(sol, n), 0.0
    with mpmath.workdps(_oscillatory_dps(max(abs(sol.s1), abs(sol.s2)), n)):
        a1 = mpmath.mpf(sol.a1)
        a2 = mpmath.mpf(sol.a2)
        h = mpmath.sqrt(mpmath.mpc(a1 * a1 + 4 * a2))
        s1 = (a1 + h) / 2
        s2 = (a1 - h) / 2
        c = (s1 ** (n + 1) - s2 ** (n + 1)) / h
        val = float(mpmath.re(c))
        residue = float(abs(mpmath.im(c)))
    if not math.isfinite(val):
        raise CoeffOverflowError(f"c_{n} overflows double precision")
    return val, residue


def charpoly_roots(params: ARParams) -> np.ndarray:
    """Roots (with multiplicity) of f_p(x) = x^p - sum a_k x^{p-k}.

    Computed as companion-matrix eigenvalues; each root is checked to leave
    a residual |f_p(root)| below 1e-10 at the polynomial's scale.  Roots are
    returned sorted by (real, imag) so equal inputs give equal outputs.
    """
    coeffs = np.concatenate(([1.0], -np.asarray(params.a)))
    try:
        roots = np.roots(coeffs)
    except np.linalg.LinAlgError as exc:
        raise RootSolveError(f"eigenvalue iteration failed for a={params.a}") from exc
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    for r in roots:
        residual = abs(np.polyval(coeffs, r))
        bound = _ROOT_RESIDUAL_TOL * scale * max(1.0, abs(r)) ** params.p
        if residual > bound:
            raise RootSolveError(
                f"root {r} of a={params.a} has residual {residual:.3e} > {bound:.3e}")
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


class LimitKind(Enum):
    TO_ZERO = "to_zero"
    CONVERGES_NONZERO = "converges_nonzero"
    DIVERGES = "diverges"


@dataclass(frozen=True)
class CoeffLimit:
    kind: LimitKind
    limit: float | None = None


def coeff_limit_class(a1: float, a2: float) -> CoeffLimit:
    """Limiting behaviour of (c_n) for an AR(2) process.

    c_n -> 0 exactly when a1 + a2 < 1, a2 < 1 + a1 and a2 > -1 (all strict);
    c_n -> 1/(1 + a2) != 0 exactly when a1 + a2 = 1 with |a2| < 1.  Everything
    else neither vanishes nor converges to a nonzero constant and is reported
    as DIVERGES (this includes bounded oscillation, e.g. a1 = 0, a2 = 1).

    Comparisons are exact: the convergent-to-nonzero case lives on a line,
    and fuzzing would misclassify it everywhere.
    """
    a1 = float(a1)
    a2 = float(a2)
    if a1 + a2 < 1.0 and a2 < 1.0 + a1 and a2 > -1.0:
        return CoeffLimit(LimitKind.TO_ZERO)
    if a1 + a2 == 1.0 and abs(a2) < 1.0:
        return CoeffLimit(LimitKind.CONVERGES_NONZERO, 1.0 / (1.0 + a2))
    return CoeffLimit(LimitKind.DIVERGES)
