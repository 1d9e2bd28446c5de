"""Opinion dynamics of mitigators vs non-mitigators and its equilibrium structure."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _kernel as _k
from .config import ModelParams, SocialParams
from .earth_system import packed

STABLE = "stable"
UNSTABLE = "unstable"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SocialState:
    x: float

    def __post_init__(self):
        if not 0.0 <= self.x <= 1.0:
            raise ValueError(f"mitigator fraction {self.x} outside [0, 1]")


@dataclass(frozen=True)
class Equilibrium:
    x: float
    stability: str


@dataclass(frozen=True)
class EquilibriumReport:
    psi: float
    delta: float
    points: list[Equilibrium] = field(default_factory=list)

    def stability_of(self, x: float, tol: float = 1e-12) -> str | None:
        for pt in self.points:
            if abs(pt.x - x) <= tol:
                return pt.stability
        return None

    def stable_points(self) -> list[float]:
        return [pt.x for pt in self.points if pt.stability == STABLE]

    def to_dict(self) -> dict:
        return {
            "psi": self.psi,
            "delta": self.delta,
            "points": [{"x": pt.x, "stability": pt.stability} for pt in self.points],
        }


def _packed(social: SocialParams):
    return packed(ModelParams(social=social))


def warming_cost(T: float, social: SocialParams) -> float:
    """Perceived cost of a temperature anomaly ``T``; logistic in T, saturating at f_max."""
    return _k.warming_cost(float(T), _packed(social))


def social_derivative(x: float, T: float, social: SocialParams) -> float:
    """dx/dt in 1/yr."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"mitigator fraction {x} outside [0, 1]")
    return _k.social_rate(float(x), float(T), _packed(social))


def psi(beta: float, T: float, social: SocialParams) -> float:
    return -beta + warming_cost(T, social)


def equilibria(psi: float, delta: float) -> EquilibriumReport:
    """Fixed points of ``x(1-x)(psi + delta(2x-1))`` and their linear stability.

    The derivative of the right-hand side is ``psi - delta`` at x=0 and
    ``-(psi + delta)`` at x=1; when either vanishes the point is tagged
    degenerate.  The interior root exists only for ``-delta < psi < delta``
    and is always repelling there.
    """
    if delta < 0:
        raise ValueError("delta must be >= 0")

    def tag(slope: float) -> str:
        if slope < 0:
            return STABLE
        if slope > 0:
            return UNSTABLE
        return DEGENERATE

    points = [Equilibrium(0.0, tag(psi - delta))]
    if delta > 0 and -delta < psi < delta:
        points.append(Equilibrium((delta - psi) / (2.0 * delta), UNSTABLE))
    points.append(Equilibrium(1.0, tag(-(psi + delta))))
    return EquilibriumReport(psi=float(psi), delta=float(delta), points=points)
