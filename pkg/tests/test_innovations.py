import math

import numpy as np
import pytest

from arsurvival.innovations import (InnovationSpec, Kind, TheoremId,
                                    exponential_centered, gaussian,
                                    hypothesis_check, rademacher, sample,
                                    spec_from_json, two_point, uniform)
from arsurvival.rng import RNGStream

ALL_SPECS = [gaussian(), gaussian(0.3, 2.0), rademacher(), two_point(2.0),
             uniform(-1.0, 1.0), uniform(0.0, 1.0), exponential_centered(1.0),
             exponential_centered(2.5)]


def test_factory_validation():
    with pytest.raises(ValueError):
        gaussian(0.0, 0.0)
    with pytest.raises(ValueError):
        two_point(-1.0)
    with pytest.raises(ValueError):
        uniform(1.0, 1.0)
    with pytest.raises(ValueError):
        exponential_centered(0.0)
    with pytest.raises(ValueError):
        InnovationSpec(Kind.RADEMACHER, (1.0,))


def test_sample_support():
    s = RNGStream(11, 0)
    r = sample(rademacher(), s, 1000)
    assert set(np.unique(r)) == {-1.0, 1.0}
    t = sample(two_point(2.0), RNGStream(11, 1), 1000)
    assert (np.abs(t) == 2.0).all()
    u = sample(uniform(-0.5, 0.25), RNGStream(11, 2), 1000)
    assert (u >= -0.5).all() and (u <= 0.25).all()
    e = sample(exponential_centered(2.0), RNGStream(11, 3), 1000)
    assert (e >= -0.5).all()


def test_gaussian_big_sample_mean():
    g = sample(gaussian(), RNGStream(123, 0), 1_000_000)
    assert abs(g.mean()) < 4e-3
    assert abs(g.std() - 1.0) < 3e-3


def test_sample_determinism():
    for spec in ALL_SPECS:
        a = sample(spec, RNGStream(5, 9), 64)
        b = sample(spec, RNGStream(5, 9), 64)
        assert (a == b).all()


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_sample_moments_match_flags(spec):
    vals = sample(spec, RNGStream(2024, 7), 200_000)
    tol = 5.0 * math.sqrt(spec.variance / vals.size)
    assert abs(vals.mean() - spec.mean) < tol + 1e-3
    assert abs(vals.var() - spec.variance) / max(1.0, spec.variance) < 0.03
    if spec.bounded_by is not None:
        assert (np.abs(vals) <= spec.bounded_by + 1e-12).all()


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_flags_are_total(spec):
    assert math.isfinite(spec.mean)
    assert math.isfinite(spec.variance) and spec.variance > 0
    assert spec.exp_moment_alpha > 0
    assert isinstance(spec.cf_decays, bool)
    assert isinstance(spec.pos_mass, bool)
    assert isinstance(spec.neg_mass, bool)


def test_cdf_and_interval_probabilities():
    assert gaussian().prob_nonpositive() == pytest.approx(0.5)
    assert uniform(-1, 1).prob_nonpositive() == pytest.approx(0.5)
    assert uniform(0, 1).prob_nonpositive() == pytest.approx(0.0)
    assert exponential_centered(1.0).prob_nonpositive() == pytest.approx(1 - math.exp(-1))
    assert rademacher().prob_nonpositive() == pytest.approx(0.5)
    # closed endpoints count atoms
    assert rademacher().interval_prob(-1.0, -1.0) == pytest.approx(0.5)
    assert rademacher().interval_prob(-0.5, 0.5) == 0.0
    assert two_point(2.0).interval_prob(-3.0, 2.0) == pytest.approx(1.0)
    assert gaussian().interval_prob(0.5, -0.5) == 0.0
    assert uniform(-1, 1).interval_prob(-0.5, 0.5) == pytest.approx(0.5)


def test_cdf_against_sample_frequencies():
    for spec in [gaussian(0.3, 2.0), uniform(-0.5, 0.25), exponential_centered(2.0)]:
        vals = sample(spec, RNGStream(3, 3), 100_000)
        for q in (-0.4, 0.0, 0.3):
            freq = float((vals <= q).mean())
            assert abs(freq - float(spec.cdf(q))) < 0.006


def test_hypothesis_check_examples():
    rep = hypothesis_check(rademacher(), TheoremId.SUPERPOLYNOMIAL_DECAY)
    assert not rep.satisfied
    assert rep.violated == ("characteristic function -> 0 at infinity",)

    assert hypothesis_check(gaussian(), TheoremId.POLYNOMIAL_DECAY).satisfied

    rep = hypothesis_check(uniform(0, 1), TheoremId.POLYNOMIAL_DECAY)
    assert not rep.satisfied
    assert "mean zero" in rep.violated


def test_hypothesis_check_by_string_and_unknown():
    rep = hypothesis_check(gaussian(), "positive-limit")
    assert rep.theorem is TheoremId.POSITIVE_LIMIT and rep.satisfied
    with pytest.raises(ValueError):
        hypothesis_check(gaussian(), "no-such-result")


def test_hypothesis_check_covers_catalog():
    for theorem in TheoremId:
        for spec in ALL_SPECS:
            rep = hypothesis_check(spec, theorem)
            assert rep.satisfied == (not rep.violated)


def test_uniform_positive_only_violates_sign_hypotheses():
    rep = hypothesis_check(uniform(0.5, 1.0), TheoremId.POSITIVE_LIMIT)
    assert not rep.satisfied and "P(Y < 0) > 0" in rep.violated
    rep = hypothesis_check(uniform(0.5, 1.0), TheoremId.SUPERPOLYNOMIAL_DECAY)
    assert "P(Y <= 0) > 0" in rep.violated


def test_json_round_trip():
    for spec in ALL_SPECS:
        assert spec_from_json(spec.to_json_dict()) == spec
    with pytest.raises(ValueError):
        spec_from_json({"kind": "cauchy", "params": {}})
    with pytest.raises(ValueError):
        spec_from_json({"kind": "gaussian", "params": {"mu": 0}})
    with pytest.raises(ValueError):
        spec_from_json({"kind": "gaussian", "params": {"mu": 0, "sigma": 1},
                        "extra": 1})


def test_str_forms():
    assert str(rademacher()) == "rademacher"
    assert str(gaussian()) == "gaussian(0, 1)"
