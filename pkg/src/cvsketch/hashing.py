"""k-universal polynomial hash families on [n] -> [l].

A family evaluates h(x) = ((sum_{i<k} a_i x^i) mod p) mod l with p fixed to
the Mersenne prime 2^61 - 1 and coefficients drawn uniformly from [0, p) by a
seeded RNG. Degree k gives k-universality. The sign hash maps the range-2
family through 0 -> -1, 1 -> +1.

Instances are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import kernels

MERSENNE_PRIME_61 = (1 << 61) - 1

TOW_SIGN_DEGREE = 4  # tug-of-war sign hashes are 4-universal
BUCKET_DEGREE = 2  # count-min / count-sketch bucket and sign hashes

_M64 = (1 << 64) - 1


def derive_seed(master: int, index: int) -> int:
    """Splitmix64-style mix of (master seed, index) into a fresh 64-bit seed.

    Fixed for all time: experiment trial i uses derive_seed(master, i), and
    multi-row sketches derive per-row seeds the same way, which makes every
    run reproducible from one master seed.
    """
    z = (master + 0x9E3779B97F4A7C15 * (index + 1)) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class PolyHashFamily:
    """One sampled member of a degree-k polynomial family mod a large prime.

    Attributes
    ----------
    degree : k of k-universality; also the number of coefficients.
    prime : modulus p, larger than both the universe and the output range.
    range : output cardinality l; evaluations land in [0, l).
    universe : declared input domain [0, universe).
    seed : RNG seed the coefficients were drawn from (kept for serialization).
    coefficients : the a_i, each in [0, p); a_0 first.
    """

    degree: int
    prime: int
    range: int
    universe: int
    seed: int
    coefficients: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return evaluate(self, x)


@dataclass(frozen=True)
class SignHash:
    """Range-2 polynomial hash mapped onto {-1, +1} (0 -> -1, 1 -> +1)."""

    inner: PolyHashFamily

    def sign(self, x: int) -> int:
        return 2 * evaluate(self.inner, x) - 1

    @property
    def universe(self) -> int:
        return self.inner.universe

    @property
    def seed(self) -> int:
        return self.inner.seed

    @property
    def degree(self) -> int:
        return self.inner.degree


def new_family(degree: int, range_: int, universe: int, seed: int) -> PolyHashFamily:
    """Draw one family member; deterministic for a fixed argument tuple.

    Coefficients are sampled uniformly on [0, p) including 0, which preserves
    k-universality. Raises ValueError when degree < 2, range_ < 2 or
    universe < 1.
    """
    if degree < 2:
        raise ValueError(f"degree must be >= 2, got {degree}")
    if range_ < 2:
        raise ValueError(f"range must be >= 2, got {range_}")
    if universe < 1:
        raise ValueError(f"universe must be >= 1, got {universe}")
    p = MERSENNE_PRIME_61
    if universe > p or range_ > p:
        raise ValueError("universe and range must not exceed the prime modulus")
    rng = random.Random(seed)
    coefficients = tuple(rng.randrange(p) for _ in range(degree))
    return PolyHashFamily(
        degree=degree,
        prime=p,
        range=range_,
        universe=universe,
        seed=seed,
        coefficients=coefficients,
    )


def sign_hash(universe: int, seed: int, degree: int = TOW_SIGN_DEGREE) -> SignHash:
    """A fresh +-1 hash over [0, universe), 4-universal by default."""
    return SignHash(new_family(degree, 2, universe, seed))


def evaluate(family: PolyHashFamily, x: int) -> int:
    """((sum a_i x^i) mod p) mod l, via modular Horner evaluation.

    The caller guarantees 0 <= x < universe; evaluation itself is total.
    """
    return kernels.poly_mod(family.coefficients, family.prime, x) % family.range
