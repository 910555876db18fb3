"""Control-variate corrections for the tug-of-war estimators.

Given an estimator X and an auxiliary variable Z with known mean, the
corrected estimator X + c (Z - E[Z]) stays unbiased for any constant c and,
at c = -Cov[X, Z] / Var[Z], sheds Cov[X, Z]^2 / Var[Z] of X's variance.

For F2 the control variate is Z = (sum_i sign(i))^2 - n, computed from the
sketch's own hash in one pass over the universe, with E[Z] = 0,
Var[Z] = 2 n (n-1) and Cov[X, Z] = 2 (F1^2 - F2); the optimal coefficient
is -(F1^2 - F2) / (n (n-1)).

For inner products the control variate is Z = cf^2 + cg^2 (the two counters
squared), with E[Z] = F2 + G2. Its moments come in two flavours: the
closed-form "gaussian" limit, cheap and stream-free, and the "exact"
finite-n forms, which require both ground-truth vectors and exist for
validation rather than streaming.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from . import kernels
from .errors import InvalidMomentsError, MissingVectorsError
from .hashing import SignHash
from .tug_of_war import TugOfWarSketch, estimate_ip


@dataclass(frozen=True)
class CvEstimate:
    """A raw estimate bundled with its control-variate correction.

    corrected == raw + coefficient * (cv_value - cv_mean) holds exactly, and
    coefficient == 0 implies corrected == raw.
    """

    raw: float
    cv_value: float
    cv_mean: float
    coefficient: float
    corrected: float


@dataclass(frozen=True)
class CvMomentSpec:
    """The three moments that determine a correction: Cov[X,Z], Var[Z], E[Z]."""

    cov_xz: float
    var_z: float
    mean_z: float


class IpMomentMode(enum.Enum):
    """Moment formulas for the inner-product control variate."""

    EXACT = "exact"
    GAUSSIAN = "gaussian"


def cv_correct(x: float, spec: CvMomentSpec, z: float) -> CvEstimate:
    """Apply the correction x + c(z - E[Z]) with c = -Cov/Var.

    Var[Z] = 0 is accepted only with Cov = 0 (the correction degenerates to
    the identity); otherwise the moments are contradictory.
    """
    if spec.var_z < 0:
        raise InvalidMomentsError(f"Var[Z] must be >= 0, got {spec.var_z}")
    if spec.var_z == 0:
        if spec.cov_xz != 0:
            raise InvalidMomentsError("Var[Z] == 0 with nonzero Cov[X, Z]")
        coefficient = 0.0
    else:
        coefficient = -spec.cov_xz / spec.var_z
    corrected = x + coefficient * (z - spec.mean_z)
    return CvEstimate(
        raw=x,
        cv_value=z,
        cv_mean=spec.mean_z,
        coefficient=coefficient,
        corrected=corrected,
    )


def f2_control_variate(sign_provider, universe: int) -> int:
    """Z = (sum of signs over the universe)^2 - n; independent of the stream."""
    if isinstance(sign_provider, SignHash):
        inner = sign_provider.inner
        total = kernels.sign_sum(inner.coefficients, inner.prime, universe)
    else:
        total = sum(sign_provider.sign(i) for i in range(universe))
    return total * total - universe


def f2_cv_moments(f1: float, f2_proxy: float, f0: int) -> CvMomentSpec:
    """Cov = 2 (F1^2 - F2), Var = 2 F0 (F0 - 1), E[Z] = 0.

    Z sums signs over ordered index pairs, so every unordered pair enters
    both second moments twice; enumeration confirms Var[Z] = 2 n (n - 1)
    (e.g. E[S^4] = 3n^2 - 2n for n independent signs). The factor cancels in
    the coefficient -(F1^2 - F2) / (F0 (F0 - 1)) but not in the achievable
    reduction. F2 may be a proxy (typically the raw sketch estimate); F1 and
    F0 are assumed known. Raises ValueError for f0 < 2, where Var[Z]
    vanishes.
    """
    if f0 < 2:
        raise ValueError(f"f0 must be >= 2 for a usable control variate, got {f0}")
    return CvMomentSpec(
        cov_xz=2 * (f1 * f1 - f2_proxy), var_z=2 * f0 * (f0 - 1), mean_z=0.0
    )


def cv_estimate_f2(
    sketch: TugOfWarSketch,
    f1: float,
    f0: int,
    f2_proxy: Optional[float] = None,
) -> CvEstimate:
    """Corrected F2 estimate from a sketch.

    f2_proxy None means the paper-recipe proxy: the sketch's own raw
    estimate stands in for F2 inside the coefficient. Passing the true F2
    gives the ground-truth coefficient used for validation. With f0 < 2 the
    correction is skipped (Var[Z] = 0 there) and the raw estimate returned
    with coefficient 0.
    """
    x = sketch.estimate_f2()
    z = f2_control_variate(sketch.hash, sketch.universe)
    if f0 < 2:
        return CvEstimate(raw=x, cv_value=z, cv_mean=0.0, coefficient=0.0, corrected=x)
    spec = f2_cv_moments(f1, x if f2_proxy is None else f2_proxy, f0)
    return cv_correct(x, spec, z)


def ip_control_variate(sf: TugOfWarSketch, sg: TugOfWarSketch) -> int:
    """Z = cf^2 + cg^2 for two sketches sharing a hash."""
    estimate_ip(sf, sg)  # reuses the shared-hash validation
    return sf.counter * sf.counter + sg.counter * sg.counter


def _ordered_pair_sums(f: Sequence[int], g: Sequence[int]) -> tuple[int, int]:
    """Exact Cov[X, Z] and Var[Z] for the inner-product control variate.

    Computed in O(n) integer arithmetic:
      Cov = 2 sum_{i != j} (f_i^2 f_j g_j + f_i g_i g_j^2)
      Var = 2 [ sum_{i != j} f_i^2 f_j^2 + sum_{i != j} g_i^2 g_j^2
                + 2 sum_{i != j} f_i g_i f_j g_j ]
    The leading 2 counts the swapped copy of each index pair (products of
    signs are symmetric in their indices); enumeration over all sign vectors
    reproduces these values exactly, and the large-n limits match the
    gaussian-mode formulas.
    """
    if len(f) != len(g):
        raise ValueError("vectors must share a universe")
    f2 = g2 = f4 = g4 = ip = 0
    f3g = fg3 = f2g2 = 0
    for fi, gi in zip(f, g):
        fi, gi = int(fi), int(gi)
        fi2, gi2 = fi * fi, gi * gi
        f2 += fi2
        g2 += gi2
        f4 += fi2 * fi2
        g4 += gi2 * gi2
        ip += fi * gi
        f3g += fi2 * fi * gi
        fg3 += fi * gi * gi2
        f2g2 += fi2 * gi2
    cov = 2 * ((f2 * ip - f3g) + (ip * g2 - fg3))
    var = 2 * ((f2 * f2 - f4) + (g2 * g2 - g4) + 2 * (ip * ip - f2g2))
    return cov, var


def ip_cv_moments(
    f2: float,
    g2: float,
    ip_proxy: float,
    mode: IpMomentMode = IpMomentMode.GAUSSIAN,
    fvec: Optional[Sequence[int]] = None,
    gvec: Optional[Sequence[int]] = None,
) -> CvMomentSpec:
    """Moments of the inner-product control variate; E[Z] = F2 + G2 always.

    Gaussian mode needs only (f2, g2, ip_proxy):
      Cov = 2 ip (F2 + G2),  Var = 2 (2 ip^2 + F2^2 + G2^2).
    Exact mode ignores the proxy and computes the finite-n ordered-pair sums
    from both full vectors.
    """
    mean_z = f2 + g2
    if mode is IpMomentMode.GAUSSIAN:
        cov = 2.0 * ip_proxy * (f2 + g2)
        var = 2.0 * (2.0 * ip_proxy * ip_proxy + f2 * f2 + g2 * g2)
        return CvMomentSpec(cov_xz=cov, var_z=var, mean_z=mean_z)
    if fvec is None or gvec is None:
        raise MissingVectorsError("exact-mode moments need both frequency vectors")
    cov, var = _ordered_pair_sums(fvec, gvec)
    return CvMomentSpec(cov_xz=cov, var_z=var, mean_z=mean_z)


def cv_estimate_ip(
    sf: TugOfWarSketch,
    sg: TugOfWarSketch,
    f2: float,
    g2: float,
    ip_proxy: Optional[float] = None,
    mode: IpMomentMode = IpMomentMode.GAUSSIAN,
    fvec: Optional[Sequence[int]] = None,
    gvec: Optional[Sequence[int]] = None,
) -> CvEstimate:
    """Corrected inner-product estimate for two sketches sharing a hash.

    ip_proxy None applies the paper recipe: the raw estimate cf * cg stands
    in for <f, g> inside the coefficient. F2 and G2 are assumed known.
    """
    x = estimate_ip(sf, sg)
    z = ip_control_variate(sf, sg)
    spec = ip_cv_moments(f2, g2, x if ip_proxy is None else ip_proxy, mode, fvec, gvec)
    return cv_correct(x, spec, z)
