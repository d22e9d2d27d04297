import math

import numpy as np
import pytest

from diskinspect.errors import NotUnimodal
from diskinspect.optimizer import (
    _check_unimodal,
    cost_at,
    refine_minimum,
    sweep_cost,
    sweep_to_csv,
)

from conftest import PUBLISHED_COST, PUBLISHED_TAU0


class TestSweep:
    def test_two_point_sweep(self):
        rows = sweep_cost(1.6469768, 1.6469770, 2)
        assert len(rows) == 2
        assert rows[0][0] < rows[1][0]
        assert all(e is None for _, _, e in rows)

    def test_error_rows_recorded(self):
        rows = sweep_cost(1.63, 1.64, 2)
        assert all(e == "NoCrossing" for _, _, e in rows)
        assert all(math.isnan(c) for _, c, _ in rows)

    def test_refined_window_minimum_in_published_band(self):
        # the grid over the final refinement interval brackets the true
        # minimum to ~2.5e-10, so its min matches the published sandwich
        rows = sweep_cost(1.6469764, 1.6469774, 200)
        costs = [c for _, c, e in rows if e is None]
        assert 3.5492590 <= min(costs) <= 3.5492599
        # the curvature ~1.8e8 lifts the interval edges visibly above the
        # bottom: the published reference band only holds near the minimum
        assert max(costs) > 3.5492599

    @pytest.mark.slow
    def test_window_sweep_minimum(self, cost_rows):
        costs = [c for _, c, e in cost_rows if e is None]
        assert len(costs) == len(cost_rows)
        # nearest window-grid point sits ~1.3e-6 from the optimum, which the
        # curvature turns into ~1.5e-4 of cost excess
        assert min(costs) == pytest.approx(PUBLISHED_COST, abs=5e-4)
        assert min(costs) > PUBLISHED_COST

    def test_csv(self, tmp_path):
        rows = sweep_cost(1.6469768, 1.6469770, 2)
        sweep_to_csv(rows, tmp_path / "cost.csv")
        lines = (tmp_path / "cost.csv").read_text().splitlines()
        assert lines[0] == "tau0,cost,error"
        assert len(lines) == 3


class TestUnimodalCheck:
    def test_accepts_noisy_flat_bottom(self):
        costs = np.array([3.0, 2.0, 1.0 + 1e-12, 1.0, 1.0 + 2e-12, 2.0, 3.0])
        assert _check_unimodal(costs, 1e-8) == 3

    def test_rejects_double_dip(self):
        costs = np.array([3.0, 1.0, 2.0, 1.0, 3.0])
        with pytest.raises(NotUnimodal):
            _check_unimodal(costs, 1e-8)


class TestRefine:
    @pytest.mark.slow
    def test_headline_reproduction(self, optimum):
        assert optimum.tau0_star == pytest.approx(PUBLISHED_TAU0, abs=1e-6)
        assert optimum.cost_star == pytest.approx(PUBLISHED_COST, abs=1e-6)
        assert optimum.clearance_star == pytest.approx(0.0302318, abs=1e-4)
        assert optimum.bracket[0] <= optimum.tau0_star <= optimum.bracket[1]
        assert optimum.certificate.feasible

    @pytest.mark.slow
    def test_optimality_against_endpoints_and_sweep(self, optimum, cost_rows):
        for endpoint in optimum.bracket:
            assert optimum.cost_star <= cost_at(endpoint)[0]
        sweep_min = min(c for _, c, e in cost_rows if e is None)
        assert optimum.cost_star <= sweep_min

    @pytest.mark.slow
    def test_theta_star_inside_angle_window(self, optimum):
        assert 0.52 < optimum.theta_star < 1.148

    @pytest.mark.slow
    def test_near_stationarity(self, optimum):
        # the landscape has |f'''| ~ 5e13 from the feasibility cliff, so a
        # central difference at h=1e-6 measures the cubic term (~8), not the
        # gradient; optimality is certified by the dominance checks above
        h = 1e-6
        fd = (
            cost_at(optimum.tau0_star + h)[0] - cost_at(optimum.tau0_star - h)[0]
        ) / (2.0 * h)
        assert abs(fd) <= 10.0
        # at h=1e-8 the cubic term fades but per-evaluation noise (~1e-10 of
        # cost, amplified by 1/h) dominates; this is a sanity band only
        h = 1e-8
        fd_small = (
            cost_at(optimum.tau0_star + h)[0] - cost_at(optimum.tau0_star - h)[0]
        ) / (2.0 * h)
        assert abs(fd_small) <= 5e-2

    def test_not_unimodal_raises(self):
        fake = [(1.0, 3.0, None), (1.1, 1.0, None), (1.2, 2.0, None),
                (1.3, 1.0, None), (1.4, 3.0, None)]
        with pytest.raises(NotUnimodal):
            refine_minimum(1.0, 1.4, sweep=fake)
