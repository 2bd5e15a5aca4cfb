import math

import pytest

from conftest import random_triple
from infoscale import (
    DiscreteDistribution,
    Observable,
    ParameterError,
    classical_qoi_bounds,
    dashti_stuart_half_width,
    iid_scaled_divergences,
    relative_entropy,
)


def test_identical_measures_all_zero_except_scheffe():
    p = DiscreteDistribution([0.3, 0.7])
    f = Observable([2.0, -1.5])
    b = classical_qoi_bounds(p, p, f)
    assert b.ckp == 0.0
    assert b.pinsker == 0.0
    assert b.chapman_robbins == 0.0
    assert b.le_cam == 0.0
    assert b.hellinger_improved == 0.0
    # Scheffe degenerates to sup|f| at R = 0 and is reported unclamped.
    assert b.scheffe == pytest.approx(f.sup_norm)


def test_all_bounds_dominate_gap(rng):
    for _ in range(300):
        p, q, f = random_triple(rng)
        gap = abs(f.expectation(q) - f.expectation(p))
        b = classical_qoi_bounds(p, q, f, alpha=float(rng.uniform(0.2, 1.0)))
        for name, value in b.as_dict().items():
            if name == "pinsker_alpha":
                continue
            assert value + 1e-12 >= gap, f"{name} fails: {value} < {gap}"


def test_improved_hellinger_beats_second_moment_form(rng):
    # The optimal centering shift can only tighten the bound.
    for _ in range(300):
        p, q, f = random_triple(rng)
        improved = classical_qoi_bounds(p, q, f).hellinger_improved
        assert improved <= dashti_stuart_half_width(p, q, f) + 1e-12


def test_ckp_growth_for_sample_mean(rng):
    # For the sample mean over N iid sites, sup|f_N| is constant and the
    # product relative entropy is N R, so the CKP half-width is exactly
    # sqrt(N) times the single-site one while the true gap stays fixed.
    p, q, f = random_triple(rng, n=3)
    r1 = relative_entropy(q, p)
    base = f.sup_norm * math.sqrt(2.0 * r1)
    for n in (2, 5, 10, 100):
        rn = iid_scaled_divergences(p, q, n).kl
        bound_n = f.sup_norm * math.sqrt(2.0 * rn)
        assert bound_n / base == pytest.approx(math.sqrt(n), rel=1e-12)


def test_pinsker_order_validation():
    p = DiscreteDistribution([0.5, 0.5])
    f = Observable([0.0, 1.0])
    with pytest.raises(ParameterError):
        classical_qoi_bounds(p, p, f, alpha=1.5)
    with pytest.raises(ParameterError):
        classical_qoi_bounds(p, p, f, alpha=0.0)


def test_pinsker_at_order_one_is_ckp(rng):
    p, q, f = random_triple(rng)
    b = classical_qoi_bounds(p, q, f, alpha=1.0)
    assert b.pinsker == pytest.approx(b.ckp, rel=1e-12)
