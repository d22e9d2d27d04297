"""Deployment parameter, deployment angle, and disk-clearance certificates.

A start value tau0 is usable when its curve stays strictly outside the
unit disk and returns to the vertical line x=1: the smallest root xi > x0
of T1(x) = 1 is the deployment parameter, and theta = (1 - xi)*pi the
deployment angle of the straight segment that completes the trajectory.
Clearance is sqrt(1 + tau_min^2) - 1 with tau_min the minimum of tau on
[x0, xi], since ||T(x)|| = sqrt(1 + tau(x)^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np
from scipy.optimize import minimize_scalar

from .continuum import ODE_ATOL, ODE_RTOL, X0_REF, OdeSolution, integrate
from .errors import DiskInspectError, NoCrossing

PI = math.pi
TWO_PI = 2.0 * math.pi

#: Root scan and refinement tolerances.
SCAN_GRID = 10_000
BISECT_TOL = 1e-8
BISECT_TOL_CHECK = 5e-10
#: A start value counts as feasible when the curve clears the disk by at
#: least this much in tau; the certified window has margin >= 0.2.
FEASIBLE_TAU_MIN = 1e-6
#: Brent tolerance for the tau minimum.
BRENT_XATOL = 1e-10

#: Certified feasible window for the start value.
WINDOW_LO = 1.64697
WINDOW_HI = 1.6525


def _first_coord_minus_one(sol: OdeSolution, x: float) -> float:
    tau = sol.tau_at(x)
    return math.cos(TWO_PI * x) - tau * math.sin(TWO_PI * x) - 1.0


def _bisect_root(sol: OdeSolution, a: float, b: float, tol: float) -> float:
    fa = _first_coord_minus_one(sol, a)
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = _first_coord_minus_one(sol, mid)
        if (fa < 0.0) != (fm < 0.0):
            b = mid
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def deployment_parameter(
    sol: OdeSolution,
    ngrid: int = SCAN_GRID,
    tol: float = BISECT_TOL,
    tol_check: float = BISECT_TOL_CHECK,
) -> tuple[float, float]:
    """Smallest root xi > x0 of T1(x) = 1, plus the bisection self-check gap.

    Scan a uniform grid for the first sign change of g = T1 - 1 from
    strictly negative (g < -1e-9, which excludes the trivial near-root at
    x0 where g ~ -2*pi*tau0*x0) to nonnegative; bisect the bracket at 1e-8,
    re-bisect at 5e-10 and report the discrepancy; finish with Newton steps
    on the dense output so the returned root is smooth in tau0 (the
    optimizer differentiates through it; a bisection staircase of height
    5e-10 would contaminate the minimum through dT1/dxi ~ O(1)).
    """
    xs = np.linspace(sol.x0, sol.x_end, ngrid)
    vals = sol.values(xs)
    g = np.cos(TWO_PI * xs) - vals[1] * np.sin(TWO_PI * xs) - 1.0
    hits = np.where((g[:-1] < -1e-9) & (g[1:] >= 0.0))[0]
    if len(hits) == 0:
        raise NoCrossing(
            f"curve with tau0={sol.tau0!r} never returns to the line x=1"
        )
    a, b = xs[hits[0]], xs[hits[0] + 1]
    xi_coarse = _bisect_root(sol, a, b, tol)
    xi_check = _bisect_root(sol, a, b, tol_check)
    gap = abs(xi_coarse - xi_check)
    xi = xi_check
    for _ in range(3):
        psi, tau = sol.values(xi)
        dtau = TWO_PI * (tau * math.cos(psi) / math.sin(psi) - 1.0)
        s, c = math.sin(TWO_PI * xi), math.cos(TWO_PI * xi)
        gval = c - tau * s - 1.0
        gprime = -TWO_PI * s - dtau * s - TWO_PI * tau * c
        xi -= gval / gprime
    return float(xi), float(gap)


def clearance_certificate(
    sol: OdeSolution, xi: float, xatol: float = BRENT_XATOL
) -> tuple[float, float]:
    """Minimum of tau on [x0, xi] (bounded Brent) and the radial clearance.

    A coarse grid pre-scan brackets the interior minimum before Brent runs,
    guarding against endpoint traps.
    """
    xs = np.linspace(sol.x0, xi, 2001)
    tau = sol.values(xs)[1]
    j = int(np.argmin(tau))
    lo = xs[max(j - 1, 0)]
    hi = xs[min(j + 1, len(xs) - 1)]
    res = minimize_scalar(
        lambda x: sol.tau_at(x),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": xatol},
    )
    tau_min = float(res.fun)
    return tau_min, clearance_from_tau(tau_min)


def clearance_from_tau(tau_min: float) -> float:
    """Radial clearance sqrt(1 + tau_min^2) - 1 (exactly 0 at tau_min = 0)."""
    return math.sqrt(1.0 + tau_min * tau_min) - 1.0


@dataclass
class FeasibilityReport:
    """Per-start certificate: deployment parameter, angle, and clearance."""

    tau0: float
    xi: float
    theta: float
    tau_min: float
    clearance: float
    feasible: bool
    xi_selfcheck_gap: float
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "tau0": self.tau0,
            "xi": self.xi,
            "theta": self.theta,
            "tau_min": self.tau_min,
            "clearance": self.clearance,
            "feasible": self.feasible,
            "xi_selfcheck_gap": self.xi_selfcheck_gap,
            "error": self.error,
        }


def assess(
    tau0: float,
    x0: float = X0_REF,
    rtol: float = ODE_RTOL,
    atol: float = ODE_ATOL,
    sol: OdeSolution | None = None,
    bisect_tol: float = BISECT_TOL,
    brent_xatol: float = BRENT_XATOL,
) -> FeasibilityReport:
    """Full feasibility report for one start value."""
    if sol is None:
        sol = integrate(tau0, x0=x0, rtol=rtol, atol=atol)
    xi, gap = deployment_parameter(sol, tol=bisect_tol)
    tau_min, clearance = clearance_certificate(sol, xi, xatol=brent_xatol)
    return FeasibilityReport(
        tau0=tau0,
        xi=xi,
        theta=(1.0 - xi) * PI,
        tau_min=tau_min,
        clearance=clearance,
        feasible=tau_min > FEASIBLE_TAU_MIN,
        xi_selfcheck_gap=gap,
    )


def _assess_worker(args) -> FeasibilityReport:
    tau0, x0, rtol, atol = args
    try:
        return assess(tau0, x0=x0, rtol=rtol, atol=atol)
    except DiskInspectError as exc:
        return FeasibilityReport(
            tau0=tau0,
            xi=math.nan,
            theta=math.nan,
            tau_min=math.nan,
            clearance=math.nan,
            feasible=False,
            xi_selfcheck_gap=math.nan,
            error=exc.kind,
        )


def feasibility_sweep(
    tau0_lo: float,
    tau0_hi: float,
    grid: int,
    x0: float = X0_REF,
    rtol: float = ODE_RTOL,
    atol: float = ODE_ATOL,
    processes: int = 1,
) -> list[FeasibilityReport]:
    """Reports over a uniform tau0 grid; per-point errors recorded inline."""
    if not (tau0_lo < tau0_hi and grid >= 2):
        raise ValueError("need tau0_lo < tau0_hi and grid >= 2")
    taus = np.linspace(tau0_lo, tau0_hi, grid)
    args = [(float(t), x0, rtol, atol) for t in taus]
    if processes > 1:
        with Pool(processes) as pool:
            return pool.map(_assess_worker, args, chunksize=32)
    return [_assess_worker(a) for a in args]


def sweep_to_csv(reports: list[FeasibilityReport], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("tau0,xi,theta,tau_min,clearance,feasible,selfcheck_gap\n")
        for r in reports:
            fh.write(
                f"{float(r.tau0)!r},{float(r.xi)!r},{float(r.theta)!r},"
                f"{float(r.tau_min)!r},{float(r.clearance)!r},"
                f"{str(r.feasible).lower()},{float(r.xi_selfcheck_gap)!r}\n"
            )
