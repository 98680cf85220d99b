import numpy as np
import pytest

from arsurvival.coeffs import LimitKind, ar_params, coeff_limit_class
from arsurvival.regions import (Major, RegionLabel, Sub, ar3_integrated_region,
                                classify_ar2, in_delta_p,
                                integrated_ar3_preimage)

GRID = np.linspace(-3.0, 3.0, 201)


def _in_c(a1, a2):
    # restated from the set definitions, as an independent oracle
    d = a1 * a1 + 4 * a2
    return ((a1 >= 2 and d > 0) or (0 < a1 < 2 and a1 + a2 > 1)
            or (d == 0 and a1 > 2) or (a1 == 0 and a2 > 1))


def _in_p(a1, a2):
    return a1 + a2 == 1 and -1 <= a2 <= 1


def test_classification_examples():
    assert classify_ar2(2, -1) == RegionLabel(Major.P)
    assert classify_ar2(1, 1) == RegionLabel(Major.C)
    assert classify_ar2(-1, 2) == RegionLabel(Major.E, Sub.E1)
    assert classify_ar2(-0.4, -0.4) == RegionLabel(Major.E, Sub.E2)
    assert classify_ar2(0, 1) == RegionLabel(Major.P)
    assert classify_ar2(0.5, -0.5) == RegionLabel(Major.E, Sub.E3)
    assert classify_ar2(3, -1) == RegionLabel(Major.C)
    assert classify_ar2(0, 2) == RegionLabel(Major.C)
    assert str(classify_ar2(-0.4, -0.4)) == "E/E2"


def test_boundary_semantics_are_exact():
    # the P line is sharp
    assert classify_ar2(0.5, 0.5).major is Major.P
    assert classify_ar2(0.5, 0.5 + 1e-12).major is Major.C
    assert classify_ar2(0.5, 0.5 - 1e-12).major is Major.E
    # a1 >= 2 boundary of C
    assert classify_ar2(2.0, 0.1).major is Major.C
    # origin is E2 (closed quadrant)
    assert classify_ar2(0.0, 0.0) == RegionLabel(Major.E, Sub.E2)


def test_classify_rejects_non_finite():
    with pytest.raises(ValueError):
        classify_ar2(float("nan"), 0.0)


def test_partition_single_label_on_grid():
    counts = {Major.C: 0, Major.P: 0, Major.E: 0}
    for a1 in GRID:
        for a2 in GRID:
            label = classify_ar2(a1, a2)
            counts[label.major] += 1
            assert (label.sub is not None) == (label.major is Major.E)
            # C and P oracles must agree with the label (so no point could
            # carry two labels)
            assert _in_p(a1, a2) == (label.major is Major.P)
            assert _in_c(a1, a2) == (label.major is Major.C)
    assert sum(counts.values()) == len(GRID) ** 2
    assert counts[Major.C] > 0 and counts[Major.E] > 0
    # the P line is measure zero; this grid's float sums never hit 1 exactly,
    # so P membership is checked at exactly-representable points instead
    for a1, a2 in [(2.0, -1.0), (0.0, 1.0), (1.0, 0.0), (0.5, 0.5),
                   (1.5, -0.5), (0.25, 0.75)]:
        assert classify_ar2(a1, a2).major is Major.P


def test_sub_regions_inside_e_on_grid():
    for a1 in GRID:
        for a2 in GRID:
            e1 = a1 < 0 and a2 > 0 and a2 > 1 + a1
            e2 = a1 <= 0 and a2 <= 0
            e3 = a1 > 0 and a1 * a1 + 4 * a2 < 0
            if e1 or e2 or e3:
                assert not _in_c(a1, a2) and not _in_p(a1, a2)
                label = classify_ar2(a1, a2)
                assert label.major is Major.E
                if e1:
                    assert label.sub is Sub.E1


def test_p_with_small_a2_iff_nonzero_limit():
    for a1 in GRID:
        for a2 in GRID:
            label = classify_ar2(a1, a2)
            lhs = label.major is Major.P and abs(a2) < 1
            rhs = coeff_limit_class(a1, a2).kind is LimitKind.CONVERGES_NONZERO
            assert lhs == rhs, (a1, a2)


def test_delta_p_examples():
    assert in_delta_p(ar_params([0.5, 0.25]))
    assert not in_delta_p(ar_params([2, -1]))
    assert in_delta_p(ar_params([0.9]))
    assert not in_delta_p(ar_params([1.0]))


def test_delta_2_equals_triangle_inequalities():
    for a1 in np.linspace(-3, 3, 41):
        for a2 in np.linspace(-3, 3, 41):
            margins = (1.0 - (a1 + a2), (1.0 + a1) - a2, a2 + 1.0)
            if min(abs(m) for m in margins) <= 1e-9:
                continue
            expect = all(m > 0 for m in margins)
            assert in_delta_p(ar_params([a1, a2])) == expect, (a1, a2)


def test_ar3_integrated_region_examples():
    assert not ar3_integrated_region(1.5, 0.25, -0.75)   # a2 < 3-2*a1 fails
    assert ar3_integrated_region(1, 0.5, -0.5)
    assert ar3_integrated_region(1, 0, 0)
    assert not ar3_integrated_region(2, -1, 0)           # a2 < min(1,-1) fails
    assert not ar3_integrated_region(1, 0.5, -0.4)       # sum != 1


def test_ar3_region_agrees_with_preimage_stability():
    rng = np.random.default_rng(1234)
    for _ in range(300):
        a1, a2 = rng.uniform(-2.0, 2.5, size=2)
        a3 = 1.0 - a1 - a2
        pre = integrated_ar3_preimage(a1, a2, a3)
        # stay away from the region boundary, where the root margin and the
        # exact inequalities may legitimately straddle the 1e-9 buffer
        b1, b2 = a1 - 1.0, a1 + a2 - 1.0
        edge = min(abs(1.0 - (b1 + b2)), abs((1.0 + b1) - b2), abs(b2 + 1.0))
        if edge <= 1e-6:
            continue
        assert ar3_integrated_region(a1, a2, a3) == in_delta_p(pre), (a1, a2, a3)
