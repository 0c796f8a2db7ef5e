"""Closed-form operations against the high-precision oracle.

Expected values come from tests/oracle.py (mpmath at 50 digits) or its
frozen constants; nothing here is derived from the implementation under
test.  CHECK_REL is the band for value-level comparisons against the
oracle; identity checks between two double-precision expressions use
absolute ulp-scale bounds stated inline.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from ctxcalc.errors import ConfigError, MathDomainError
from ctxcalc.model import (
    CorrelationMatrix,
    LatencyParams,
    MemoryConfig,
    SystemConfig,
    TopicRates,
    noise_after_correct,
    noise_impact,
    rci_ratio,
    rci_separate,
    rci_shared,
    response_time_ratio,
    retention_probability,
    simplified_rci_ratio,
    simplified_rci_separate,
    simplified_rci_shared,
    t_separate,
    t_shared,
    total_rate,
)

CHECK_REL = 1e-12

E_MINUS_1 = math.e - 1.0


def symmetric_config(lambda_total=1.0, noise_ratio=0.5, rho=0.3, window=2.0):
    noise = lambda_total * noise_ratio
    correct = lambda_total - noise
    topic = TopicRates(correct, noise)
    return SystemConfig(
        (topic, topic),
        CorrelationMatrix.uniform(2, rho),
        MemoryConfig(window),
        LatencyParams(1.0, 0.5, 2),
    )


def single_topic_config(lambda_correct, lambda_noise, window):
    return SystemConfig(
        (TopicRates(lambda_correct, lambda_noise),),
        CorrelationMatrix.uniform(1, 0.0),
        MemoryConfig(window),
        LatencyParams(1.0, 0.5, 2),
    )


rates_st = st.floats(min_value=0.05, max_value=4.0)
windows_st = st.floats(min_value=0.05, max_value=8.0)
unit_st = st.floats(min_value=0.0, max_value=1.0)


class TestRetention:
    def test_reference_values(self):
        assert retention_probability(1.0, 1.0) == pytest.approx(
            oracle.EXP_NEG_1, rel=CHECK_REL
        )
        assert retention_probability(1.0, 2.0) == pytest.approx(
            oracle.EXP_NEG_2, rel=CHECK_REL
        )
        assert retention_probability(2.0, 2.0) == pytest.approx(
            oracle.EXP_NEG_4, rel=CHECK_REL
        )

    def test_zero_window_gives_one(self):
        assert retention_probability(3.7, 0.0) == 1.0

    def test_domain_errors(self):
        with pytest.raises(MathDomainError):
            retention_probability(0.0, 1.0)
        with pytest.raises(MathDomainError):
            retention_probability(-1.0, 1.0)
        with pytest.raises(MathDomainError):
            retention_probability(1.0, -0.1)

    @given(rate=rates_st, window=windows_st, growth=st.floats(0.1, 4.0))
    @settings(max_examples=100, deadline=None)
    def test_monotone_decreasing_in_window(self, rate, window, growth):
        assert retention_probability(rate, window + growth) <= retention_probability(
            rate, window
        )

    @given(rate=rates_st, window=st.floats(min_value=0.0, max_value=8.0))
    @settings(max_examples=100, deadline=None)
    def test_stays_in_unit_interval(self, rate, window):
        value = retention_probability(rate, window)
        assert 0.0 < value <= 1.0


class TestNoiseAfterCorrect:
    def test_reference_value(self):
        rates = TopicRates(0.5, 0.5)
        assert noise_after_correct(rates, 2.0) == pytest.approx(
            oracle.NOISE_AFTER_CORRECT_HALF_HALF_M2, rel=CHECK_REL
        )

    def test_total_rate(self):
        assert total_rate(TopicRates(0.3, 0.1)) == pytest.approx(0.4, rel=1e-15)

    @given(correct=rates_st, noise=rates_st, window=st.floats(0.0, 8.0))
    @settings(max_examples=100, deadline=None)
    def test_bounded_by_retention(self, correct, noise, window):
        rates = TopicRates(correct, noise)
        term = noise_after_correct(rates, window)
        retention = retention_probability(rates.total, window)
        assert 0.0 <= term <= retention <= 1.0

    def test_pure_correct_topic_has_no_noise_term(self):
        assert noise_after_correct(TopicRates(1.0, 0.0), 2.0) == 0.0


class TestNoiseImpact:
    def test_separate_reference_value(self):
        config = symmetric_config()
        assert noise_impact(config, 0, "separate") == pytest.approx(
            oracle.NOISE_IMPACT_TWO_TOPIC_SEPARATE, rel=CHECK_REL
        )

    def test_shared_uses_pooled_rate(self):
        config = symmetric_config()
        expected = float(oracle.hp_retention(2, 2) * oracle.mpf("0.25") * oracle.mpf("1.3"))
        assert noise_impact(config, 0, "shared") == pytest.approx(expected, rel=CHECK_REL)

    def test_symmetric_topics_have_equal_impact(self):
        config = symmetric_config()
        for mode in ("shared", "separate"):
            assert noise_impact(config, 0, mode) == noise_impact(config, 1, mode)

    def test_bad_mode_and_index(self):
        config = symmetric_config()
        with pytest.raises(ConfigError):
            noise_impact(config, 0, "pooled")
        with pytest.raises(ConfigError):
            noise_impact(config, 2, "shared")

    def test_uncorrelated_equals_own_term(self):
        config = symmetric_config(rho=0.0)
        topic = config.topics[0]
        assert noise_impact(config, 0, "separate") == pytest.approx(
            noise_after_correct(topic, 2.0), rel=1e-15
        )


class TestRciShared:
    def test_reference_value(self):
        report = rci_shared(symmetric_config())
        assert report.value == pytest.approx(oracle.RCI_SHARED_SYMMETRIC, rel=CHECK_REL)
        assert report.in_probability_domain

    def test_retention_factor_is_one_minus_decay(self):
        report = rci_shared(symmetric_config())
        assert report.retention_factor == pytest.approx(
            1.0 - oracle.EXP_NEG_4, rel=CHECK_REL
        )

    def test_zero_window_gives_zero(self):
        report = rci_shared(symmetric_config(window=0.0))
        assert report.value == 0.0

    def test_zero_noise_reduces_to_retention(self):
        config = symmetric_config(noise_ratio=0.0)
        report = rci_shared(config)
        assert report.noise_impact_total == 0.0
        assert report.value == report.retention_factor

    @given(
        lambda_total=rates_st,
        noise_ratio=unit_st,
        rho=unit_st,
        window=windows_st,
    )
    @settings(max_examples=150, deadline=None)
    def test_matches_oracle(self, lambda_total, noise_ratio, rho, window):
        config = symmetric_config(lambda_total, noise_ratio, rho, window)
        topics = [(t.lambda_correct, t.lambda_noise) for t in config.topics]
        matrix = [[0, rho], [rho, 0]]
        expected = float(oracle.hp_rci_shared(topics, matrix, window))
        assert rci_shared(config).value == pytest.approx(
            expected, rel=CHECK_REL, abs=1e-15
        )

    def test_large_window_saturates_to_one(self):
        report = rci_shared(symmetric_config(window=50.0))
        assert report.value > 1.0 - 1e-12
        assert report.in_probability_domain


class TestRciSeparate:
    def test_reference_value(self):
        report = rci_separate(symmetric_config())
        assert report.value == pytest.approx(oracle.RCI_SEPARATE_SYMMETRIC, rel=CHECK_REL)
        assert report.in_probability_domain

    def test_single_topic_equals_shared(self):
        config = single_topic_config(0.7, 0.3, 1.5)
        shared = rci_shared(config)
        separate = rci_separate(config)
        assert separate.value == pytest.approx(shared.value, rel=CHECK_REL)
        assert separate.retention_factor == pytest.approx(
            shared.retention_factor, rel=CHECK_REL
        )

    @given(correct=rates_st, noise=rates_st, window=windows_st)
    @settings(max_examples=150, deadline=None)
    def test_single_topic_equivalence_property(self, correct, noise, window):
        config = single_topic_config(correct, noise, window)
        assert rci_separate(config).value == pytest.approx(
            rci_shared(config).value, rel=CHECK_REL, abs=1e-15
        )

    def test_per_topic_windows_respected(self):
        asymmetric = SystemConfig(
            (TopicRates(0.5, 0.5), TopicRates(0.5, 0.5)),
            CorrelationMatrix.uniform(2, 0.3),
            MemoryConfig(2.0, (1.0, 3.0)),
            LatencyParams(1.0, 0.5, 2),
        )
        expected = float(
            oracle.hp_rci_separate(
                [(0.5, 0.5), (0.5, 0.5)], [[0, 0.3], [0.3, 0]], [1.0, 3.0]
            )
        )
        assert rci_separate(asymmetric).value == pytest.approx(expected, rel=CHECK_REL)

    @given(
        lambda_total=rates_st,
        noise_ratio=unit_st,
        rho=unit_st,
        window=windows_st,
    )
    @settings(max_examples=150, deadline=None)
    def test_matches_oracle(self, lambda_total, noise_ratio, rho, window):
        config = symmetric_config(lambda_total, noise_ratio, rho, window)
        topics = [(t.lambda_correct, t.lambda_noise) for t in config.topics]
        matrix = [[0, rho], [rho, 0]]
        expected = float(oracle.hp_rci_separate(topics, matrix, [window, window]))
        assert rci_separate(config).value == pytest.approx(
            expected, rel=CHECK_REL, abs=1e-15
        )

    def test_never_clamped_when_noise_dominates(self):
        # three pure-noise topics at full coupling push every impact past 1
        topic = TopicRates(0.0, 1.0)
        config = SystemConfig(
            (topic, topic, topic),
            CorrelationMatrix.uniform(3, 1.0),
            MemoryConfig(0.01),
            LatencyParams(1.0, 0.5, 2),
        )
        report = rci_separate(config)
        assert report.value < 0.0
        assert not report.in_probability_domain


class TestRciRatio:
    def test_reference_value(self):
        assert rci_ratio(symmetric_config()) == pytest.approx(
            oracle.RCI_RATIO_SYMMETRIC, rel=CHECK_REL
        )

    def test_consistent_with_components(self):
        config = symmetric_config(2.0, 0.3, 0.6, 1.25)
        expected = rci_separate(config).value / rci_shared(config).value
        assert rci_ratio(config) == expected

    def test_zero_shared_window_is_domain_error(self):
        with pytest.raises(MathDomainError):
            rci_ratio(symmetric_config(window=0.0))


class TestSimplifiedForms:
    def test_reference_values(self):
        assert simplified_rci_shared(1.0, 0.5, 2.0, 0.3) == pytest.approx(
            oracle.SIMPLIFIED_SHARED_SYMMETRIC, rel=CHECK_REL
        )
        assert simplified_rci_separate(1.0, 0.5, 2.0, 0.3) == pytest.approx(
            oracle.SIMPLIFIED_SEPARATE_SYMMETRIC, rel=CHECK_REL
        )
        assert simplified_rci_ratio(1.0, 0.5, 2.0, 0.3) == pytest.approx(
            oracle.SIMPLIFIED_RATIO_SYMMETRIC, rel=CHECK_REL
        )

    def test_domain_errors(self):
        with pytest.raises(MathDomainError):
            simplified_rci_shared(0.0, 0.5, 2.0, 0.3)
        with pytest.raises(MathDomainError):
            simplified_rci_shared(1.0, 1.5, 2.0, 0.3)
        with pytest.raises(MathDomainError):
            simplified_rci_shared(1.0, 0.5, -1.0, 0.3)
        with pytest.raises(MathDomainError):
            simplified_rci_shared(1.0, 0.5, 2.0, 1.5)
        with pytest.raises(MathDomainError):
            simplified_rci_ratio(1.0, 0.5, 0.0, 0.3)

    @given(
        lambda_total=rates_st,
        noise_ratio=unit_st,
        rho=unit_st,
        window=windows_st,
    )
    @settings(max_examples=150, deadline=None)
    def test_separate_form_matches_general(self, lambda_total, noise_ratio, rho, window):
        """On the symmetric pair the separate shorthand is exact."""
        config = symmetric_config(lambda_total, noise_ratio, rho, window)
        topic = config.topics[0]
        shorthand = simplified_rci_separate(topic.total, topic.noise_ratio, window, rho)
        assert rci_separate(config).value == pytest.approx(
            shorthand, rel=CHECK_REL, abs=1e-15
        )

    @given(
        lambda_total=rates_st,
        noise_ratio=unit_st,
        rho=unit_st,
        window=windows_st,
    )
    @settings(max_examples=150, deadline=None)
    def test_shared_form_gap(self, lambda_total, noise_ratio, rho, window):
        """The shared shorthand exceeds the general form by exactly the
        documented cross-coupling gap; 1e-13 covers the float subtraction
        of two order-one quantities."""
        config = symmetric_config(lambda_total, noise_ratio, rho, window)
        topic = config.topics[0]
        shorthand = simplified_rci_shared(topic.total, topic.noise_ratio, window, rho)
        diff = shorthand - rci_shared(config).value
        gap = float(
            oracle.hp_shared_gap(topic.total, topic.noise_ratio, window, rho)
        )
        assert diff == pytest.approx(gap, abs=1e-13)
        assert diff >= -1e-15

    def test_gap_reference_value(self):
        diff = simplified_rci_shared(1.0, 0.5, 2.0, 0.3) - rci_shared(
            symmetric_config()
        ).value
        assert diff == pytest.approx(oracle.SHARED_GAP_SYMMETRIC, abs=2e-15)


class TestSearchTimes:
    def test_t_shared_reference_values(self):
        latency = LatencyParams(1.0, 0.5, 2)
        assert t_shared(latency, 1.0) == pytest.approx(oracle.LN_2, rel=CHECK_REL)
        assert t_shared(latency, 2.0) == pytest.approx(oracle.LN_3, rel=CHECK_REL)
        assert t_shared(LatencyParams(2.0, 0.0, 0), E_MINUS_1) == pytest.approx(
            2.0, abs=1e-12
        )

    def test_t_shared_zero_window(self):
        assert t_shared(LatencyParams(1.0, 0.5, 2), 0.0) == 0.0

    def test_t_separate_adds_query_cost(self):
        latency = LatencyParams(1.0, 0.5, 2)
        assert t_separate(latency, E_MINUS_1) == pytest.approx(2.0, abs=1e-12)
        assert t_separate(LatencyParams(1.0, 0.5, 0), 1.0) == t_shared(
            LatencyParams(1.0, 0.5, 0), 1.0
        )

    def test_ratio_reference_value(self):
        latency = LatencyParams(1.0, 0.5, 2)
        assert response_time_ratio(latency, E_MINUS_1, E_MINUS_1) == pytest.approx(
            2.0, abs=1e-12
        )

    def test_ratio_is_exactly_one_without_query_cost(self):
        latency = LatencyParams(1.3, 0.0, 7)
        assert response_time_ratio(latency, 2.5, 2.5) == 1.0

    def test_zero_shared_window_is_domain_error(self):
        latency = LatencyParams(1.0, 0.5, 2)
        with pytest.raises(MathDomainError):
            response_time_ratio(latency, 0.0, 1.0)
        with pytest.raises(MathDomainError):
            t_shared(latency, -1.0)

    @given(
        alpha=st.floats(0.1, 5.0),
        beta=st.floats(0.0, 3.0),
        n_agents=st.integers(0, 12),
        window=windows_st,
    )
    @settings(max_examples=100, deadline=None)
    def test_ratio_never_below_one_with_equal_windows(
        self, alpha, beta, n_agents, window
    ):
        latency = LatencyParams(alpha, beta, n_agents)
        assert response_time_ratio(latency, window, window) >= 1.0
