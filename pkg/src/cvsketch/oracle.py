"""Exhaustive moment oracle for small universes.

Enumerates every sign assignment (tug-of-war) or every hash/sign assignment
(count-min, count-sketch) with uniform probability and accumulates exact
rational moments. Fully independent assignments are a superset of the 4-wise
(resp. 2-wise) independence the estimators assume, and every moment identity
in scope involves at most 4th-order mixed moments, where the two coincide;
that makes this the independent ground truth for the closed-form formulas.

Enumeration walks sign vectors in Gray-code order so each step is O(1), and
keeps integer accumulators, converting to Fraction only at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .errors import BudgetExceededError

TOW_BUDGET_ITEMS = 20
POINT_QUERY_BUDGET = 10**6


@dataclass(frozen=True)
class OracleMoments:
    """Exact moments of an estimator X and (optionally) its control variate Z."""

    mean: Fraction
    variance: Fraction
    covariance_with_cv: Optional[Fraction] = None
    cv_variance: Optional[Fraction] = None
    cv_mean: Optional[Fraction] = None


def _sign_states(f: Sequence[int], g: Optional[Sequence[int]]):
    """Yield (f_counter, g_counter, sign_total) for all 2^n sign vectors."""
    n = len(f)
    signs = [-1] * n
    cf = -sum(f)
    cg = -sum(g) if g is not None else 0
    ssum = -n
    yield cf, cg, ssum
    for i in range(1, 1 << n):
        b = (i & -i).bit_length() - 1
        signs[b] = -signs[b]
        step = 2 * signs[b]
        cf += step * f[b]
        if g is not None:
            cg += step * g[b]
        ssum += step
        yield cf, cg, ssum


def _check_tow_args(f, g, estimator):
    n = len(f)
    if n > TOW_BUDGET_ITEMS:
        raise BudgetExceededError(f"universe {n} exceeds the 2^{TOW_BUDGET_ITEMS} budget")
    if estimator not in ("f2", "ip"):
        raise ValueError(f"estimator must be 'f2' or 'ip', got {estimator!r}")
    if estimator == "ip":
        if g is None:
            raise ValueError("inner-product enumeration needs a second vector")
        if len(g) != n:
            raise ValueError("vectors must share a universe")
    return n


def enumerate_tow(
    f: Sequence[int],
    g: Optional[Sequence[int]] = None,
    estimator: str = "f2",
    with_cv: bool = True,
) -> OracleMoments:
    """Exact moments of X (and Z) over all 2^n sign vectors.

    estimator 'f2': X = counter^2, Z = (sum of signs)^2 - n.
    estimator 'ip': X = cf * cg,  Z = cf^2 + cg^2.
    """
    f = [int(c) for c in f]
    g = [int(c) for c in g] if g is not None else None
    n = _check_tow_args(f, g, estimator)
    total = 1 << n
    sx = sxx = sz = szz = sxz = 0
    for cf, cg, ssum in _sign_states(f, g if estimator == "ip" else None):
        if estimator == "f2":
            x = cf * cf
            z = ssum * ssum - n
        else:
            x = cf * cg
            z = cf * cf + cg * cg
        sx += x
        sxx += x * x
        if with_cv:
            sz += z
            szz += z * z
            sxz += x * z
    mean = Fraction(sx, total)
    variance = Fraction(sxx, total) - mean * mean
    if not with_cv:
        return OracleMoments(mean=mean, variance=variance)
    zmean = Fraction(sz, total)
    return OracleMoments(
        mean=mean,
        variance=variance,
        covariance_with_cv=Fraction(sxz, total) - mean * zmean,
        cv_variance=Fraction(szz, total) - zmean * zmean,
        cv_mean=zmean,
    )


def enumerate_tow_corrected(
    f: Sequence[int],
    g: Optional[Sequence[int]],
    estimator: str,
    coefficient: Fraction,
) -> tuple[Fraction, Fraction]:
    """Exact (mean, variance) of X + c (Z - E[Z]) for a fixed coefficient.

    E[Z] is the exact control-variate mean: 0 for F2, F2 + G2 for the inner
    product. The correction is accumulated as q-scaled integers, so the
    result is exact for any rational c = p/q.
    """
    f = [int(c) for c in f]
    g = [int(c) for c in g] if g is not None else None
    n = _check_tow_args(f, g, estimator)
    c = Fraction(coefficient)
    p, q = c.numerator, c.denominator
    if estimator == "f2":
        ez = 0
    else:
        ez = sum(v * v for v in f) + sum(v * v for v in g)
    total = 1 << n
    s = s2 = 0
    for cf, cg, ssum in _sign_states(f, g if estimator == "ip" else None):
        if estimator == "f2":
            x = cf * cf
            z = ssum * ssum - n
        else:
            x = cf * cg
            z = cf * cf + cg * cg
        scaled = q * x + p * (z - ez)  # == q * corrected
        s += scaled
        s2 += scaled * scaled
    mean = Fraction(s, total * q)
    variance = Fraction(s2, total * q * q) - mean * mean
    return mean, variance


def _check_point_query_args(f, a, sketch, k):
    n = len(f)
    if sketch not in ("cms", "cs"):
        raise ValueError(f"sketch must be 'cms' or 'cs', got {sketch!r}")
    if not 0 <= a < n:
        raise ValueError(f"query item {a} outside universe [0, {n})")
    if k < 1:
        raise ValueError("need at least one bucket")
    states = k**n if sketch == "cms" else (2 * k) ** n
    if states > POINT_QUERY_BUDGET:
        raise BudgetExceededError(f"{states} assignments exceed the {POINT_QUERY_BUDGET} budget")
    return n


def enumerate_point_query(
    f: Sequence[int], a: int, sketch: str, k: int, with_cv: bool = True
) -> OracleMoments:
    """Exact single-row moments over all uniform hash (and sign) assignments.

    'cms': X = sum of f_j over j colliding with a; Z = collision count.
    'cs':  X = g(a) * signed collision sum of f_j; Z = g(a) * signed count.
    """
    f = [int(c) for c in f]
    _check_point_query_args(f, a, sketch, k)
    sx = sxx = sz = szz = sxz = 0
    total = 0
    for x, z in _point_query_states(f, a, sketch, k):
        total += 1
        sx += x
        sxx += x * x
        sz += z
        szz += z * z
        sxz += x * z
    mean = Fraction(sx, total)
    variance = Fraction(sxx, total) - mean * mean
    if not with_cv:
        return OracleMoments(mean=mean, variance=variance)
    zmean = Fraction(sz, total)
    return OracleMoments(
        mean=mean,
        variance=variance,
        covariance_with_cv=Fraction(sxz, total) - mean * zmean,
        cv_variance=Fraction(szz, total) - zmean * zmean,
        cv_mean=zmean,
    )


def _point_query_states(f: Sequence[int], a: int, sketch: str, k: int):
    """Yield (X, Z) for every uniform assignment of the single-row sketch."""
    n = len(f)
    if sketch == "cms":
        for buckets in product(range(k), repeat=n):
            ba = buckets[a]
            x = z = 0
            for j in range(n):
                if buckets[j] == ba:
                    x += f[j]
                    z += 1
            yield x, z
    else:
        for buckets in product(range(k), repeat=n):
            ba = buckets[a]
            colliding = [j for j in range(n) if buckets[j] == ba]
            for signs in product((-1, 1), repeat=n):
                ga = signs[a]
                yield (
                    ga * sum(f[j] * signs[j] for j in colliding),
                    ga * sum(signs[j] for j in colliding),
                )


def enumerate_point_query_corrected(
    f: Sequence[int], a: int, sketch: str, k: int, coefficient: Fraction
) -> tuple[Fraction, Fraction]:
    """Exact (mean, variance) of the corrected single-row estimate
    X + c (Z - E[Z]), enumerated directly, with E[Z] = 1 + (n-1)/k for
    count-min and 1 for count-sketch."""
    f = [int(c) for c in f]
    n = _check_point_query_args(f, a, sketch, k)
    c = Fraction(coefficient)
    p, q = c.numerator, c.denominator
    # corrected * (q k) stays integral: scale X by qk and (Z - EZ) by pk
    if sketch == "cms":
        ez_num, ez_den = k + n - 1, k
    else:
        ez_num, ez_den = 1, 1
    denom = q * ez_den
    s = s2 = total = 0
    for x, z in _point_query_states(f, a, sketch, k):
        scaled = denom * x + p * (ez_den * z - ez_num)
        s += scaled
        s2 += scaled * scaled
        total += 1
    mean = Fraction(s, total * denom)
    variance = Fraction(s2, total * denom * denom) - mean * mean
    return mean, variance
