"""Structured errors raised by the numerical pipeline.

Every failure mode that a caller can act on gets its own class; generic
ValueError/RuntimeError are reserved for programming mistakes.
"""

from __future__ import annotations


class DiskInspectError(Exception):
    """Base class for all pipeline failures."""

    kind = "DiskInspectError"

    def payload(self) -> dict:
        return {"kind": self.kind, "message": str(self)}


class TriangleDegenerate(DiskInspectError):
    """Chain step hit t_{i-1} <= tan(alpha/2): the optics triangle collapses.

    Carries the first offending step index rather than clamping, so
    convergence studies see the violation instead of corrupted data.
    """

    kind = "TriangleDegenerate"

    def __init__(self, index: int, value: float, bound: float):
        super().__init__(
            f"tangent parameter t[{index - 1}]={value:.6g} is not above "
            f"tan(alpha/2)={bound:.6g}; chain would touch the disk"
        )
        self.index = index
        self.value = value
        self.bound = bound


class AngleDomain(DiskInspectError):
    """Chain step produced a non-positive incidence angle x_i."""

    kind = "AngleDomain"

    def __init__(self, index: int, value: float):
        super().__init__(
            f"incidence angle x[{index}]={value:.6g} is not positive; "
            f"angular step too coarse for this chain"
        )
        self.index = index
        self.value = value


class NoBracket(DiskInspectError):
    """Shooting endpoint map has no sign change on the search bracket."""

    kind = "NoBracket"


class StepFailure(DiskInspectError):
    """Adaptive integrator could not proceed under its error control."""

    kind = "StepFailure"


class OutOfRange(DiskInspectError):
    """Evaluation abscissa outside the stored solution range."""

    kind = "OutOfRange"


class NoCrossing(DiskInspectError):
    """Curve never returns to the vertical line x=1: infeasible start value."""

    kind = "NoCrossing"


class QuadratureNoConverge(DiskInspectError):
    """Adaptive quadrature error estimate exceeds the requested tolerance."""

    kind = "QuadratureNoConverge"


class NotUnimodal(DiskInspectError):
    """Sweep data shows multiple local minima inside the refinement bracket."""

    kind = "NotUnimodal"


class WindowViolated(DiskInspectError):
    """Angle-window margin came out non-positive; indicates an implementation bug."""

    kind = "WindowViolated"


class MaxIterations(DiskInspectError):
    """Solver hit its iteration cap; best iterate and residual are attached."""

    kind = "MaxIterations"

    def __init__(self, message: str, iterate=None, residual: float | None = None):
        super().__init__(message)
        self.iterate = iterate
        self.residual = residual
