"""Climate tipping triggering the social model's own tipping element under strong social norms."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .config import ModelParams
from .emissions import EmissionSeries
from .metrics import auc_difference
from .simulation import run_pair, simulate
from .sweeps import _map

SOCIAL_TIP_CUTOFF = 0.5


class BracketError(ValueError):
    pass


@dataclass(frozen=True)
class TriggerRecord:
    beta: float
    final_x: float
    auc_diff: float
    tipped_social: bool

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "final_x": self.final_x,
            "auc_diff": self.auc_diff,
            "tipped_social": self.tipped_social,
        }


@dataclass(frozen=True)
class BetaThreshold:
    beta: float
    lo: float
    hi: float
    evaluations: int
    tipped_below: bool

    def to_dict(self) -> dict:
        return {"beta": self.beta, "lo": self.lo, "hi": self.hi,
                "evaluations": self.evaluations, "tipped_below": self.tipped_below}


def strong_norm_params(params: ModelParams) -> ModelParams:
    """Strong norms (delta=3), high-risk tipping with R_max=5."""
    return params.with_values({"social.delta": 3.0, "tipping.R_max": 5.0, "tipping.T_c": 2.0})


def _with_beta(params: ModelParams, beta: float) -> ModelParams:
    return replace(params, social=replace(params.social, beta=float(beta)))


def _trigger_point(task) -> TriggerRecord:
    params, series, beta = task
    base, mod = run_pair(_with_beta(params, beta), series)
    final_x = float(mod.x[-1])
    return TriggerRecord(float(beta), final_x, auc_difference(mod, base), final_x > SOCIAL_TIP_CUTOFF)


def social_trigger_experiment(
    params: ModelParams, series: EmissionSeries, beta_values, workers: int = 1
) -> list[TriggerRecord]:
    tasks = [(params, series, float(b)) for b in beta_values]
    return _map(_trigger_point, tasks, workers)


def monotonicity_violations(records: list[TriggerRecord]) -> list[float]:
    """Betas that tip socially although some smaller beta did not."""
    out = []
    seen_untipped = False
    for r in sorted(records, key=lambda r: r.beta):
        if not r.tipped_social:
            seen_untipped = True
        elif seen_untipped:
            out.append(r.beta)
    return out


def tipped_social(params: ModelParams, series: EmissionSeries, beta: float) -> bool:
    traj = simulate(_with_beta(params, beta), series, "modified")
    return bool(traj.x[-1] > SOCIAL_TIP_CUTOFF)


def beta_threshold(
    params: ModelParams, series: EmissionSeries, lo: float, hi: float, tol: float = 1e-3
) -> BetaThreshold:
    """Bisect the social-tipping boundary in beta; at least one midpoint is evaluated."""
    if not lo < hi:
        raise ValueError("need lo < hi")
    if not tol > 0:
        raise ValueError("tol must be positive")
    at_lo = tipped_social(params, series, lo)
    at_hi = tipped_social(params, series, hi)
    if at_lo == at_hi:
        raise BracketError(f"beta={lo} and beta={hi} classify the same ({at_lo})")
    evaluations = 0
    while True:
        mid = 0.5 * (lo + hi)
        evaluations += 1
        if tipped_social(params, series, mid) == at_lo:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return BetaThreshold(0.5 * (lo + hi), lo, hi, evaluations, at_lo)
