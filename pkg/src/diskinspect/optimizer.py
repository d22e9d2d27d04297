"""One-parameter minimization of the average inspection cost over tau0.

The cost is evaluated per start value through the full pipeline
(integrate -> deployment parameter -> three-term cost) and minimized over
the certified feasible window.  The landscape near the optimum is a steep
parabola (curvature ~ 2e8 in tau0) riding on a feasibility cliff just left
of the window, so the grid sweep only brackets the minimum; golden-section
refinement inside the bracketing cell does the real work.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from . import cost as cost_mod
from .continuum import ODE_ATOL, ODE_RTOL, X0_REF, integrate
from .errors import DiskInspectError, NotUnimodal
from .feasibility import (
    WINDOW_HI,
    WINDOW_LO,
    FeasibilityReport,
    assess,
    deployment_parameter,
)

#: Abscissa tolerance of the golden-section refinement.  Far below the
#: nominal 1e-9 requirement because theta moves ~8e3 times faster than
#: tau0 near the optimum; the cost curve is smooth at this scale.
REFINE_XATOL = 2e-11
#: Cost differences below this are treated as noise by the unimodality scan.
SWEEP_NOISE_TOL = 1e-8

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class OptimalSolution:
    """Minimizer of the window cost with its feasibility certificate."""

    tau0_star: float
    xi_star: float
    theta_star: float
    cost_star: float
    clearance_star: float
    bracket: tuple[float, float]
    grid_resolution: int
    certificate: FeasibilityReport
    breakdown: cost_mod.CostBreakdown

    def to_dict(self) -> dict:
        return {
            "tau0_star": self.tau0_star,
            "xi_star": self.xi_star,
            "theta_star": self.theta_star,
            "cost_star": self.cost_star,
            "clearance_star": self.clearance_star,
            "bracket": list(self.bracket),
            "grid_resolution": self.grid_resolution,
            "certificate": self.certificate.to_dict(),
            "breakdown": self.breakdown.to_dict(),
        }

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def cost_at(
    tau0: float,
    x0: float = X0_REF,
    rtol: float = ODE_RTOL,
    atol: float = ODE_ATOL,
    quad_rtol: float = cost_mod.QUAD_RTOL,
    quad_atol: float = cost_mod.QUAD_ATOL,
) -> tuple[float, float]:
    """(total cost, xi) of the trajectory labeled tau0."""
    sol = integrate(tau0, x0=x0, rtol=rtol, atol=atol)
    xi, _ = deployment_parameter(sol)
    breakdown = cost_mod.total_cost(sol, xi, rtol=quad_rtol, atol=quad_atol)
    return breakdown.total, xi


def _cost_worker(args):
    tau0, kwargs = args
    try:
        return tau0, cost_at(tau0, **kwargs)[0], None
    except DiskInspectError as exc:
        return tau0, math.nan, exc.kind


def sweep_cost(
    lo: float,
    hi: float,
    grid: int,
    processes: int = 1,
    **kwargs,
) -> list[tuple[float, float, str | None]]:
    """(tau0, cost, error) rows over a uniform grid, sorted by tau0."""
    if not (lo < hi and grid >= 2):
        raise ValueError("need lo < hi and grid >= 2")
    taus = np.linspace(lo, hi, grid)
    args = [(float(t), kwargs) for t in taus]
    if processes > 1:
        with Pool(processes) as pool:
            return pool.map(_cost_worker, args, chunksize=32)
    return [_cost_worker(a) for a in args]


def sweep_to_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("tau0,cost,error\n")
        for tau0, cost, err in rows:
            fh.write(f"{float(tau0)!r},{float(cost)!r},{err or ''}\n")


def _check_unimodal(costs: np.ndarray, noise_tol: float) -> int:
    """Index of the minimum after verifying a single descent/ascent pattern.

    Differences smaller than noise_tol in magnitude are ignored: adjacent
    grid costs near the flat bottom differ by less than the evaluation
    noise, and literal sign counting would see spurious minima there.
    """
    j = int(np.nanargmin(costs))
    diffs = np.diff(costs)
    before = diffs[:j]
    after = diffs[j:]
    if np.any(before > noise_tol) or np.any(after < -noise_tol):
        raise NotUnimodal(
            "sweep is not unimodal beyond noise level; refusing to refine"
        )
    return j


def _golden_min(f, a: float, b: float, xatol: float) -> float:
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xatol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def refine_minimum(
    lo: float,
    hi: float,
    grid: int = 2000,
    sweep: list | None = None,
    processes: int = 1,
    xatol: float = REFINE_XATOL,
    **kwargs,
) -> OptimalSolution:
    """Golden-section refinement of the sweep minimum over [lo, hi].

    The sweep (reused if passed in) must be unimodal up to evaluation
    noise; the minimum's grid cell provides the refinement bracket.
    """
    if sweep is None:
        sweep = sweep_cost(lo, hi, grid, processes=processes, **kwargs)
    taus = np.array([r[0] for r in sweep])
    costs = np.array([r[1] for r in sweep])
    j = _check_unimodal(costs, SWEEP_NOISE_TOL)
    a = taus[max(j - 1, 0)]
    b = taus[min(j + 1, len(taus) - 1)]

    def f(tau0):
        return cost_at(tau0, **kwargs)[0]

    tau_star = _golden_min(f, float(a), float(b), xatol)
    sol = integrate(
        tau_star,
        x0=kwargs.get("x0", X0_REF),
        rtol=kwargs.get("rtol", ODE_RTOL),
        atol=kwargs.get("atol", ODE_ATOL),
    )
    xi, gap = deployment_parameter(sol)
    breakdown = cost_mod.total_cost(
        sol,
        xi,
        rtol=kwargs.get("quad_rtol", cost_mod.QUAD_RTOL),
        atol=kwargs.get("quad_atol", cost_mod.QUAD_ATOL),
    )
    certificate = assess(tau_star, sol=sol)
    return OptimalSolution(
        tau0_star=tau_star,
        xi_star=xi,
        theta_star=(1.0 - xi) * math.pi,
        cost_star=breakdown.total,
        clearance_star=certificate.clearance,
        bracket=(float(a), float(b)),
        grid_resolution=len(taus),
        certificate=certificate,
        breakdown=breakdown,
    )


def optimize_window(
    grid: int = 2000,
    processes: int = 1,
    **kwargs,
) -> OptimalSolution:
    """Sweep and refine over the certified window [1.64697, 1.6525]."""
    return refine_minimum(WINDOW_LO, WINDOW_HI, grid=grid, processes=processes, **kwargs)
