import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_distribution
from infoscale import (
    AbsoluteContinuityError,
    DimensionError,
    DiscreteDistribution,
    NormalizationError,
    ParameterError,
    chi_squared,
    divergence_report,
    hellinger,
    relative_entropy,
    renyi_divergence,
    total_variation,
)


class TestConstruction:
    def test_negative_weights_rejected(self):
        with pytest.raises(NormalizationError):
            DiscreteDistribution([0.5, -0.1, 0.6])

    def test_bad_sum_rejected(self):
        with pytest.raises(NormalizationError):
            DiscreteDistribution([0.5, 0.6])

    def test_renormalize_flag(self):
        d = DiscreteDistribution([2.0, 6.0], renormalize=True)
        assert np.allclose(d.weights, [0.25, 0.75])

    def test_weights_immutable(self):
        d = DiscreteDistribution([0.5, 0.5])
        with pytest.raises(ValueError):
            d.weights[0] = 0.9

    def test_tolerance_boundary(self):
        # Within 1e-12 of one is accepted without rescaling.
        DiscreteDistribution([0.5, 0.5 + 5e-13])

    def test_mutual_ac_check(self):
        a = DiscreteDistribution([0.5, 0.5, 0.0])
        b = DiscreteDistribution([0.2, 0.8, 0.0])
        c = DiscreteDistribution([0.2, 0.3, 0.5])
        assert a.mutually_absolutely_continuous_with(b)
        assert not a.mutually_absolutely_continuous_with(c)


class TestTotalVariation:
    def test_identical(self):
        p = DiscreteDistribution([0.3, 0.7])
        assert total_variation(p, p) == 0.0

    def test_disjoint_supports_maximal(self):
        assert total_variation(
            DiscreteDistribution([1.0, 0.0]), DiscreteDistribution([0.0, 1.0])
        ) == 1.0

    def test_direct_summation_value(self):
        p = DiscreteDistribution([0.5, 0.5])
        q = DiscreteDistribution([0.25, 0.75])
        assert total_variation(p, q) == pytest.approx(0.25, abs=1e-15)

    def test_dimension_error(self):
        with pytest.raises(DimensionError):
            total_variation(DiscreteDistribution([1.0]), DiscreteDistribution([0.5, 0.5]))


class TestRelativeEntropy:
    def test_identical(self):
        q = DiscreteDistribution([0.4, 0.6])
        assert relative_entropy(q, q) == 0.0

    def test_direct_summation_value(self):
        q = DiscreteDistribution([0.5, 0.5])
        p = DiscreteDistribution([0.25, 0.75])
        expected = 0.5 * math.log(2.0) + 0.5 * math.log(2.0 / 3.0)
        assert relative_entropy(q, p) == pytest.approx(expected, abs=1e-14)

    def test_product_additivity(self, rng):
        # R(Q x Q || P x P) = 2 R(Q || P)
        p = random_distribution(rng, 3)
        q = random_distribution(rng, 3)
        pp = DiscreteDistribution(np.kron(p.weights, p.weights))
        qq = DiscreteDistribution(np.kron(q.weights, q.weights))
        assert relative_entropy(qq, pp) == pytest.approx(
            2.0 * relative_entropy(q, p), abs=1e-12
        )

    def test_ac_violation_raises(self):
        q = DiscreteDistribution([0.5, 0.5])
        p = DiscreteDistribution([1.0, 0.0])
        with pytest.raises(AbsoluteContinuityError):
            relative_entropy(q, p)

    def test_extended_mode_returns_inf(self):
        q = DiscreteDistribution([0.5, 0.5])
        p = DiscreteDistribution([1.0, 0.0])
        assert relative_entropy(q, p, extended=True) == math.inf

    def test_zero_q_terms_contribute_nothing(self):
        q = DiscreteDistribution([0.0, 1.0])
        p = DiscreteDistribution([0.5, 0.5])
        assert relative_entropy(q, p) == pytest.approx(math.log(2.0))


class TestChiSquared:
    def test_direct_summation_value(self):
        q = DiscreteDistribution([0.5, 0.5])
        p = DiscreteDistribution([0.25, 0.75])
        assert chi_squared(q, p) == pytest.approx(1.0 / 3.0, abs=1e-14)

    def test_two_forms_agree(self, rng):
        q = random_distribution(rng, 4)
        p = random_distribution(rng, 4)
        direct = float(np.sum(p.weights * (q.weights / p.weights - 1.0) ** 2))
        assert chi_squared(q, p) == pytest.approx(direct, abs=1e-13)

    def test_extended_mode(self):
        q = DiscreteDistribution([0.5, 0.5])
        p = DiscreteDistribution([1.0, 0.0])
        assert chi_squared(q, p, extended=True) == math.inf


class TestHellinger:
    def test_identical(self):
        q = DiscreteDistribution([0.2, 0.8])
        assert hellinger(q, q) == 0.0

    def test_disjoint_supports(self):
        h = hellinger(DiscreteDistribution([0.0, 1.0]), DiscreteDistribution([1.0, 0.0]))
        assert h == pytest.approx(math.sqrt(2.0), abs=1e-15)

    def test_symmetric(self, rng):
        q = random_distribution(rng, 5)
        p = random_distribution(rng, 5)
        assert hellinger(q, p) == pytest.approx(hellinger(p, q), abs=1e-15)


class TestRenyi:
    def test_identical_any_order(self, rng):
        q = random_distribution(rng, 4)
        for alpha in (0.3, 0.5, 2.0, 5.0):
            assert renyi_divergence(q, q, alpha) == pytest.approx(0.0, abs=1e-13)

    def test_order_two_is_log_one_plus_chi2(self, rng):
        for _ in range(20):
            q = random_distribution(rng, 4)
            p = random_distribution(rng, 4)
            assert renyi_divergence(q, p, 2.0) == pytest.approx(
                math.log1p(chi_squared(q, p)), abs=1e-12
            )

    def test_order_half_is_hellinger_transform(self, rng):
        for _ in range(20):
            q = random_distribution(rng, 3)
            p = random_distribution(rng, 3)
            h2 = hellinger(q, p) ** 2
            assert renyi_divergence(q, p, 0.5) == pytest.approx(
                -2.0 * math.log1p(-0.5 * h2), abs=1e-12
            )

    def test_nondecreasing_in_order(self, rng):
        q = random_distribution(rng, 4)
        p = random_distribution(rng, 4)
        orders = [0.2, 0.5, 0.9, 1.5, 2.0, 4.0]
        values = [renyi_divergence(q, p, a) for a in orders]
        assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))

    def test_limit_at_one_matches_kl(self, rng):
        q = random_distribution(rng, 4)
        p = random_distribution(rng, 4)
        kl = relative_entropy(q, p)
        for alpha in (1.0 - 1e-6, 1.0 + 1e-6):
            assert renyi_divergence(q, p, alpha) == pytest.approx(kl, abs=1e-5)

    def test_bad_orders(self):
        q = DiscreteDistribution([0.5, 0.5])
        with pytest.raises(ParameterError):
            renyi_divergence(q, q, -1.0)
        with pytest.raises(ParameterError):
            renyi_divergence(q, q, 1.0)


@settings(max_examples=150, deadline=None)
@given(
    pw=st.lists(st.floats(0.05, 1.0), min_size=2, max_size=6),
    qw=st.lists(st.floats(0.05, 1.0), min_size=2, max_size=6),
)
def test_chain_of_inequalities(pw, qw):
    # H^2 <= D_1/2 <= KL <= D_2 <= chi^2 on every mutually AC pair.
    n = min(len(pw), len(qw))
    p = DiscreteDistribution(np.array(pw[:n]) / np.sum(pw[:n]))
    q = DiscreteDistribution(np.array(qw[:n]) / np.sum(qw[:n]))
    report = divergence_report(p, q)
    h2, d_half, kl, d_two, chi2 = report.chain_values()
    tol = 1e-10
    assert h2 <= d_half + tol
    assert d_half <= kl + tol
    assert kl <= d_two + tol
    assert d_two <= chi2 + tol


def test_positivity_for_distinct_measures(rng):
    # Identity of indiscernibles: strictly positive for P != Q.
    p = DiscreteDistribution([0.3, 0.7])
    q = DiscreteDistribution([0.5, 0.5])
    assert total_variation(p, q) > 0
    assert relative_entropy(q, p) > 0
    assert chi_squared(q, p) > 0
    assert hellinger(q, p) > 0
    assert renyi_divergence(q, p, 2.0) > 0
