import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duopoly_lab.errors import DegenerateBenchmarkError
from duopoly_lab.markets import market_preset
from duopoly_lab.metrics import (
    WindowStats,
    consumer_surplus_change_pct,
    delta_change,
    delta_index,
    efficiency_ratio,
    logit_consumer_surplus,
    rpdi,
)
from duopoly_lab.shocks import regime_params

LOGIT = market_preset("logit")
NONE = regime_params("none")


class TestWindowStats:
    def test_terminal_window_means(self):
        prices = np.column_stack([np.arange(10.0), np.arange(10.0) * 2])
        profits = prices / 10.0
        stats = WindowStats.from_series(prices, profits, window=4)
        assert stats.mean_price == pytest.approx((7.5, 15.0), abs=1e-12)
        assert stats.mean_profit == pytest.approx((0.75, 1.5), abs=1e-12)

    def test_window_equal_to_horizon_is_whole_run_mean(self):
        rng = np.random.default_rng(0)
        prices = rng.uniform(0, 2, (50, 2))
        profits = rng.uniform(0, 1, (50, 2))
        stats = WindowStats.from_series(prices, profits, window=50)
        assert stats.mean_price == pytest.approx(tuple(prices.mean(axis=0)), abs=1e-12)
        assert stats.mean_profit == pytest.approx(tuple(profits.mean(axis=0)), abs=1e-12)

    def test_window_longer_than_series_rejected(self):
        with pytest.raises(ValueError):
            WindowStats.from_series(np.zeros((5, 2)), np.zeros((5, 2)), window=6)


class TestIndices:
    def test_delta_anchors(self):
        assert delta_index(0.22, 0.22, 0.34) == 0.0
        assert delta_index(0.34, 0.22, 0.34) == 1.0

    def test_rpdi_anchors_and_midpoint(self):
        assert rpdi(1.473, 1.473, 1.925) == 0.0
        assert rpdi(1.925, 1.473, 1.925) == 1.0
        assert rpdi(1.699, 1.473, 1.925) == pytest.approx(0.5, abs=1e-12)

    @given(lam=st.floats(-2.0, 3.0))
    @settings(max_examples=200, deadline=None)
    def test_interpolation_property(self, lam):
        p_n, p_m = 1.473, 1.925
        p = p_n + lam * (p_m - p_n)
        assert rpdi(p, p_n, p_m) == pytest.approx(lam, abs=1e-12)
        pi_n, pi_m = 0.223, 0.337
        pi = pi_n + lam * (pi_m - pi_n)
        assert delta_index(pi, pi_n, pi_m) == pytest.approx(lam, abs=1e-12)

    def test_degenerate_benchmarks_rejected(self):
        with pytest.raises(DegenerateBenchmarkError):
            delta_index(0.3, 0.25, 0.25)
        with pytest.raises(DegenerateBenchmarkError):
            rpdi(1.0, 1.5, 1.5)


class TestEfficiencyRatio:
    def test_published_spot_values(self):
        assert efficiency_ratio(0.33, 0.22) == pytest.approx(1.50, abs=1e-12)
        assert efficiency_ratio(0.04, 0.49) == pytest.approx(0.0816, abs=5e-4)

    def test_equal_indices_give_one(self):
        assert efficiency_ratio(0.37, 0.37) == pytest.approx(1.0, abs=1e-12)

    def test_zero_rpdi_is_undefined(self):
        assert math.isnan(efficiency_ratio(0.2, 0.0))

    def test_delta_change(self):
        assert delta_change(0.36, 0.36) == 0.0
        assert delta_change(-1.68, 0.36) == pytest.approx(-2.04, abs=1e-12)


class TestConsumerSurplus:
    def test_only_defined_for_logit(self):
        with pytest.raises(ValueError):
            logit_consumer_surplus((1.0, 1.0), market_preset("hotelling"), NONE)

    def test_no_change_at_nash_prices(self):
        change = consumer_surplus_change_pct((1.473, 1.473), 1.473, LOGIT, NONE)
        assert change == pytest.approx(0.0, abs=1e-12)

    def test_lower_prices_raise_surplus(self):
        low = logit_consumer_surplus((1.3, 1.3), LOGIT, NONE)
        high = logit_consumer_surplus((1.9, 1.9), LOGIT, NONE)
        assert low > high
        change = consumer_surplus_change_pct((1.9, 1.9), 1.473, LOGIT, NONE)
        assert change < 0.0

    def test_shocked_expectation_is_deterministic_in_seed(self):
        regime = regime_params("scheme_a")
        a = logit_consumer_surplus((1.6, 1.6), LOGIT, regime, samples=5000, seed=3)
        b = logit_consumer_surplus((1.6, 1.6), LOGIT, regime, samples=5000, seed=3)
        assert a == b
