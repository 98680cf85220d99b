import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from arsurvival.coeffs import (ARParams, Branch, CoeffOverflowError, LimitKind,
                               ar2_closed_form, ar2_coeff_at,
                               ar2_coeff_via_roots, ar_params, charpoly_roots,
                               coeff_limit_class, coeff_recursion)


def test_recursion_hand_unrolled_cases():
    # integrated walk: weights count up
    assert coeff_recursion(ar_params([2, -1]), 4).tolist() == [1, 2, 3, 4, 5]
    # random walk: constant weights
    assert coeff_recursion(ar_params([1, 0]), 3).tolist() == [1, 1, 1, 1]
    # pure alternation c_n = -c_{n-2}
    assert coeff_recursion(ar_params([0, -1]), 4).tolist() == [1, 0, -1, 0, 1]


def test_recursion_matches_manual_order3():
    a = (0.3, -0.2, 0.5)
    c = coeff_recursion(ARParams(a), 6)
    manual = [1.0]
    for n in range(1, 7):
        manual.append(sum(a[k - 1] * manual[n - k] for k in range(1, 4) if n - k >= 0))
    assert np.allclose(c, manual, rtol=0, atol=0)


def test_ar_params_validation():
    with pytest.raises(ValueError):
        ARParams((1.0, 0.0))        # trailing zero not allowed directly
    with pytest.raises(ValueError):
        ARParams(())
    with pytest.raises(ValueError):
        ARParams((math.inf,))
    assert ar_params([1, 0]).a == (1.0,)
    assert ar_params([0]).a == (0.0,)
    assert ar_params([0.5, 0.25]).p == 2


def test_closed_form_branches():
    double = ar2_closed_form(2, -1)
    assert double.branch is Branch.DOUBLE_ROOT
    assert double.s1 == double.s2 == 1.0

    osc = ar2_closed_form(0, -1)
    assert osc.branch is Branch.COMPLEX_PAIR
    assert osc.phi == math.pi / 2
    assert osc.modulus == 1.0
    assert osc.s1 == complex(0, 0.5 * math.sqrt(4.0))  # roots +-i
    assert osc.s1.conjugate() == osc.s2

    real = ar2_closed_form(1, 0)
    assert real.branch is Branch.DISTINCT_REAL
    assert (real.s1, real.s2, real.h) == (1.0, 0.0, 1.0)


def test_phi_three_case_rule():
    pos = ar2_closed_form(1, -1)        # a1 > 0
    assert 0 < pos.phi < math.pi / 2
    assert pos.phi == pytest.approx(math.atan(math.sqrt(3.0)))
    neg = ar2_closed_form(-1, -1)       # a1 < 0
    assert math.pi / 2 < neg.phi < math.pi
    assert neg.phi == pytest.approx(math.pi - math.atan(math.sqrt(3.0)))


def test_complex_pair_modulus_is_root_modulus():
    sol = ar2_closed_form(0.8, -0.9)
    assert abs(sol.s1) == pytest.approx(math.sqrt(0.9), rel=1e-14)
    assert sol.modulus == pytest.approx(math.sqrt(0.9), rel=1e-14)


def test_coeff_at_examples():
    assert ar2_coeff_at(ar2_closed_form(2, -1), 10) == pytest.approx(11.0, rel=1e-12)
    assert ar2_coeff_at(ar2_closed_form(0, -1), 2) == pytest.approx(-1.0, rel=1e-12)
    assert ar2_coeff_at(ar2_closed_form(1, 0), 50) == pytest.approx(1.0, rel=1e-12)


def test_coeff_at_overflow_reported():
    with pytest.raises(CoeffOverflowError):
        ar2_coeff_at(ar2_closed_form(3.0, 1.0), 3000)
    with pytest.raises(CoeffOverflowError):
        ar2_coeff_at(ar2_closed_form(4.0, -4.0), 2000)   # double root at 2
    with pytest.raises(ValueError):
        ar2_coeff_at(ar2_closed_form(1.0, 0.0), -1)


def test_charpoly_roots_examples():
    assert np.allclose(charpoly_roots(ar_params([2, -1])), [1.0, 1.0], atol=1e-7)
    r = charpoly_roots(ar_params([0, -1]))
    assert np.allclose(sorted(r, key=lambda z: z.imag), [-1j, 1j], atol=1e-10)
    # x^3 - x^2 - x + 1 = (x-1)^2 (x+1)
    r3 = charpoly_roots(ARParams((1.0, 1.0, -1.0)))
    assert np.allclose(r3, [-1.0, 1.0, 1.0], atol=1e-6)
    assert charpoly_roots(ar_params([0.9])).tolist() == [0.9]


def test_roots_match_closed_form_on_grid():
    for a1 in np.linspace(-3, 3, 41):
        for a2 in np.linspace(-3, 3, 41):
            if a2 == 0.0:
                continue
            sol = ar2_closed_form(a1, a2)
            expect = sorted([sol.s1, sol.s2], key=lambda z: (z.real, z.imag))
            got = charpoly_roots(ARParams((float(a1), float(a2))))
            assert max(abs(got[0] - expect[0]), abs(got[1] - expect[1])) <= 1e-10


def test_limit_class_examples():
    assert coeff_limit_class(0.5, 0.25).kind is LimitKind.TO_ZERO
    lim = coeff_limit_class(0.5, 0.5)
    assert lim.kind is LimitKind.CONVERGES_NONZERO
    assert lim.limit == pytest.approx(2.0 / 3.0)
    assert coeff_limit_class(2, -1).kind is LimitKind.DIVERGES
    assert coeff_limit_class(0, 1).kind is LimitKind.DIVERGES    # bounded oscillation
    assert coeff_limit_class(1, 0).limit == pytest.approx(1.0)


def test_limit_class_matches_root_moduli_on_grid():
    for a1 in np.linspace(-3, 3, 41):
        for a2 in np.linspace(-3, 3, 41):
            sol = ar2_closed_form(a1, a2)
            top = max(abs(sol.s1), abs(sol.s2))
            if abs(top - 1.0) <= 1e-9:
                continue
            to_zero = coeff_limit_class(a1, a2).kind is LimitKind.TO_ZERO
            assert to_zero == (top < 1.0), (a1, a2, top)


def test_limit_class_limit_is_actual_limit():
    for a1, a2 in [(0.5, 0.5), (1.2, -0.2), (0.1, 0.9)]:
        lim = coeff_limit_class(a1, a2)
        assert lim.kind is LimitKind.CONVERGES_NONZERO
        c = coeff_recursion(ar_params([a1, a2]), 400)
        assert c[-1] == pytest.approx(lim.limit, rel=1e-6)


def test_complex_route_real_and_matching():
    for a1, a2 in [(0.5, -0.5), (-1.0, -0.75), (0.0, -3.0), (1.5, -2.25)]:
        sol = ar2_closed_form(a1, a2)
        c = coeff_recursion(ar_params([a1, a2]), 60)
        for n in range(61):
            val, residue = ar2_coeff_via_roots(sol, n)
            assert residue <= 1e-9 * max(1.0, abs(val))
            assert abs(val - ar2_coeff_at(sol, n)) <= 1e-9 * max(1.0, abs(c[n]))


@settings(max_examples=150, deadline=None)
@given(a1=st.floats(-2.5, 2.5), a2=st.floats(-1.5, 1.5), n=st.integers(0, 40))
def test_closed_form_matches_recursion_random(a1, a2, n):
    c = coeff_recursion(ar_params([a1, a2]), n)
    val = ar2_coeff_at(ar2_closed_form(a1, a2), n)
    assert abs(val - c[n]) <= 1e-9 * max(1.0, abs(c[n]))
