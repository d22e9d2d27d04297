import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diskinspect.continuum import integrate
from diskinspect.cost import (
    full_cost_from_partial,
    inspection_integral,
    log_term,
    partial_cost,
    total_cost,
)
from diskinspect.feasibility import deployment_parameter

from conftest import PUBLISHED_COST, PUBLISHED_TAU0

PI = math.pi


class TestInspectionIntegral:
    def test_empty_interval(self, sol_star):
        assert inspection_integral(sol_star, 0.0) == 0.0
        assert inspection_integral(sol_star, sol_star.x0) == 0.0

    def test_derivative_matches_integrand(self, sol_star):
        # d/dxi of the integral is 2*pi*xi*tau(xi)/sin(psi(xi))
        xi, _ = deployment_parameter(sol_star)
        h = 1e-5
        fd = (
            inspection_integral(sol_star, xi + h)
            - inspection_integral(sol_star, xi - h)
        ) / (2.0 * h)
        psi, tau = sol_star.values(xi)
        exact = 2.0 * PI * xi * tau / math.sin(psi)
        assert abs(fd - exact) / abs(exact) <= 1e-6

    def test_tolerance_halving_drift(self, sol_star):
        xi, _ = deployment_parameter(sol_star)
        a = inspection_integral(sol_star, xi)
        b = inspection_integral(sol_star, xi, rtol=5e-13, atol=5e-15)
        assert abs(a - b) <= 1e-10

    def test_increasing_in_xi(self, sol_star):
        xis = np.linspace(0.2, 0.81, 12)
        vals = [inspection_integral(sol_star, float(x)) for x in xis]
        assert all(a < b for a, b in zip(vals, vals[1:]))


class TestTotalCost:
    def test_published_value_at_published_tau0(self, sol_star):
        xi, _ = deployment_parameter(sol_star)
        breakdown = total_cost(sol_star, xi)
        assert breakdown.total == pytest.approx(PUBLISHED_COST, abs=1e-6)

    def test_terms_sum_exactly(self, sol_star):
        xi, _ = deployment_parameter(sol_star)
        b = total_cost(sol_star, xi)
        assert b.total == b.log_term + b.deployment_term + b.inspection_integral
        assert all(
            v >= 0.0 for v in (b.log_term, b.deployment_term, b.inspection_integral)
        )

    def test_away_from_optimum_costs_more(self):
        sol = integrate(1.6525)
        xi, _ = deployment_parameter(sol)
        assert total_cost(sol, xi).total > 3.5493

    def test_log_term_formula(self):
        xi = 0.9
        s = math.sin(0.9 * PI)
        assert log_term(xi) == pytest.approx(
            math.log((1.0 + s) / (1.0 - s)) / (2.0 * PI), abs=1e-15
        )

    def test_xi_domain_guard(self, sol_star):
        with pytest.raises(ValueError):
            total_cost(sol_star, 0.4)

    def test_json_dump(self, sol_star, tmp_path):
        import json

        xi, _ = deployment_parameter(sol_star)
        b = total_cost(sol_star, xi)
        b.to_json(tmp_path / "cost.json", tau0=PUBLISHED_TAU0)
        data = json.loads((tmp_path / "cost.json").read_text())
        assert set(data) == {
            "tau0", "xi", "theta", "log_term", "deployment_term", "integral", "total",
        }


class TestPartialCost:
    def test_equals_scaled_integral(self, sol_star):
        xi, _ = deployment_parameter(sol_star)
        assert partial_cost(sol_star, xi) == inspection_integral(sol_star, xi) / xi

    def test_composes_to_published_value(self, sol_star):
        xi, _ = deployment_parameter(sol_star)
        s = partial_cost(sol_star, xi)
        assert full_cost_from_partial((1.0 - xi) * PI, s) == pytest.approx(
            PUBLISHED_COST, abs=1e-6
        )


class TestFullFromPartial:
    def test_zero_angle(self):
        assert full_cost_from_partial(0.0, 2.5) == pytest.approx(3.5, abs=1e-15)

    @given(st.floats(0.0, 1.4), st.floats(0.0, 4.0), st.floats(0.01, 0.5))
    def test_monotone_in_partial_cost(self, theta, s, ds):
        assert full_cost_from_partial(theta, s + ds) > full_cost_from_partial(theta, s)

    def test_domain_guard(self):
        with pytest.raises(ValueError):
            full_cost_from_partial(PI / 2, 1.0)

    def test_composition_identity_across_window(self):
        # the three-term form and the angle-composed form agree
        rng = np.random.default_rng(13)
        for tau0 in rng.uniform(1.64697, 1.6525, 10):
            sol = integrate(float(tau0))
            xi, _ = deployment_parameter(sol)
            b = total_cost(sol, xi)
            composed = full_cost_from_partial(
                (1.0 - xi) * PI, b.inspection_integral / xi
            )
            assert abs(composed - b.total) <= 1e-10
