"""The two kernel backends must be behaviourally identical."""

import random

import numpy as np
import pytest

from cvsketch import _pykernels as pk
from cvsketch import kernels

P = (1 << 61) - 1

try:
    from cvsketch import _ckernels as ck

    BACKENDS = [pk, ck]
except ImportError:
    ck = None
    BACKENDS = [pk]

needs_compiled = pytest.mark.skipif(ck is None, reason="compiled kernels not built")


@needs_compiled
def test_backends_agree_on_random_inputs():
    rng = random.Random(1234)
    for _ in range(300):
        deg = rng.choice([2, 3, 4])
        coeffs = tuple(rng.randrange(P) for _ in range(deg))
        n = rng.randrange(1, 80)
        counts = np.array([rng.randrange(-100, 101) for _ in range(n)], dtype=np.int64)
        other = np.array([rng.randrange(0, 20) for _ in range(n)], dtype=np.int64)
        k = rng.randrange(2, 8)
        a = rng.randrange(n)
        gco = tuple(rng.randrange(P) for _ in range(2))
        items = np.arange(n, dtype=np.int64)
        assert ck.sign_sum(coeffs, P, n) == pk.sign_sum(coeffs, P, n)
        assert ck.tow_counter_dense(coeffs, P, counts) == pk.tow_counter_dense(coeffs, P, counts)
        assert ck.ip_trial(coeffs, P, counts, other) == pk.ip_trial(coeffs, P, counts, other)
        assert ck.tow_counter(coeffs, P, items, counts) == pk.tow_counter(coeffs, P, items, counts)
        assert ck.bucket_collision_count(coeffs, P, k, n, a) == pk.bucket_collision_count(
            coeffs, P, k, n, a
        )
        assert ck.signed_collision_sum(coeffs, gco, P, k, n, a) == pk.signed_collision_sum(
            coeffs, gco, P, k, n, a
        )


@pytest.mark.parametrize("impl", BACKENDS)
def test_poly_mod_extremes(impl):
    # all-max coefficients at the top of the 2^40 universe: no overflow
    coeffs = (P - 1,) * 4
    x = (1 << 40) - 1
    expected = sum((P - 1) * pow(x, i, P) for i in range(4)) % P
    assert impl.poly_mod(coeffs, P, x) == expected


@pytest.mark.parametrize("impl", BACKENDS)
def test_checked_overflow(impl):
    coeffs = (1, 2)
    big = np.array([1 << 62, 1 << 62], dtype=np.int64)
    with pytest.raises(OverflowError):
        impl.tow_counter_dense(coeffs, P, big)
    with pytest.raises(OverflowError):
        impl.tow_counter(coeffs, P, np.array([0, 1], dtype=np.int64), big)


@pytest.mark.parametrize("impl", BACKENDS)
def test_coefficient_count_limits(impl):
    with pytest.raises(ValueError):
        impl.poly_mod((), P, 3)
    with pytest.raises(ValueError):
        impl.poly_mod((1,) * 9, P, 3)


@pytest.mark.parametrize("impl", BACKENDS)
def test_sign_sum_matches_pointwise(impl):
    coeffs = (12345, 67890, 13579, 24680)
    n = 257
    signs = [2 * (impl.poly_mod(coeffs, P, x) % 2) - 1 for x in range(n)]
    assert impl.sign_sum(coeffs, P, n) == sum(signs)


def test_selected_backend_exports():
    assert kernels.BACKEND in ("compiled", "pure")
    for name in (
        "poly_mod",
        "sign_sum",
        "tow_counter_dense",
        "tow_counter",
        "ip_trial",
        "bucket_collision_count",
        "signed_collision_sum",
    ):
        assert callable(getattr(kernels, name))
