"""Median-of-means combination of independent estimator copies.

Partition t*k estimates into t contiguous groups of k, average within
groups, take the median of the group means (mean of the central two for
even t). Sizing per_group = ceil(3 * Var[X] / (eps^2 E[X]^2)) and groups =
ceil(C * ln(1/delta)) yields an (eps, delta) estimator; C = 8 here, the
standard Chernoff-derived choice for that group size.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Sequence

from .errors import LengthMismatchError

GROUP_CONSTANT = 8.0


@dataclass(frozen=True)
class MoMPlan:
    """t groups of k estimates each; epsilon/delta record the sizing target."""

    groups: int
    per_group: int
    epsilon: float | None = None
    delta: float | None = None

    def __post_init__(self):
        if self.groups < 1 or self.per_group < 1:
            raise ValueError("groups and per_group must both be >= 1")

    @property
    def size(self) -> int:
        return self.groups * self.per_group


def median_of_means(estimates: Sequence[float], plan: MoMPlan) -> float:
    """Median of the t contiguous group means, in input order."""
    if len(estimates) != plan.size:
        raise LengthMismatchError(
            f"need exactly {plan.groups} x {plan.per_group} = {plan.size} "
            f"estimates, got {len(estimates)}"
        )
    k = plan.per_group
    means = [
        math.fsum(estimates[g * k : (g + 1) * k]) / k for g in range(plan.groups)
    ]
    return float(statistics.median(means))


def plan_from_guarantee(epsilon: float, delta: float, var_over_mean_sq: float) -> MoMPlan:
    """Size a plan for an (epsilon, delta) guarantee.

    var_over_mean_sq is Var[X] / E[X]^2 of the single-copy estimator; 0 means
    a deterministic estimator and gives per_group = 1.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if var_over_mean_sq < 0:
        raise ValueError("var_over_mean_sq must be >= 0")
    per_group = max(1, math.ceil(3 * var_over_mean_sq / epsilon**2))
    groups = max(1, math.ceil(GROUP_CONSTANT * math.log(1 / delta)))
    return MoMPlan(groups=groups, per_group=per_group, epsilon=epsilon, delta=delta)
