"""Pure-Python kernels, the fallback for cvsketch._ckernels.

Same functions, same semantics, same checked-overflow behaviour; Python
integers make the arithmetic trivially exact, so the explicit 64-bit mass
check exists only to keep the two backends behaviourally identical.
"""

_I64_MAX = (1 << 63) - 1
_MAX_DEGREE = 8


def _check_coeffs(coeffs):
    if not 1 <= len(coeffs) <= _MAX_DEGREE:
        raise ValueError(f"coefficient count must be in [1, {_MAX_DEGREE}], got {len(coeffs)}")
    return [int(c) for c in coeffs]


def _check_mass(values):
    if sum(abs(int(v)) for v in values) > _I64_MAX:
        raise OverflowError("total update mass exceeds the 64-bit counter range")


def _horner(coeffs, p, x):
    acc = coeffs[-1] % p
    for c in reversed(coeffs[:-1]):
        acc = (acc * x + c) % p
    return acc


def poly_mod(coeffs, p, x):
    """Evaluate sum a_i x^i mod p (before the final mod-range step)."""
    return _horner(_check_coeffs(coeffs), int(p), int(x))


def sign_sum(coeffs, p, n):
    """Sum of the +-1 sign hash over the whole universe [0, n)."""
    cs = _check_coeffs(coeffs)
    p = int(p)
    return sum(2 * (_horner(cs, p, i) & 1) - 1 for i in range(int(n)))


def tow_counter_dense(coeffs, p, counts):
    """Tug-of-war counter sum(counts[i] * sign(i)) over a dense count vector."""
    cs = _check_coeffs(coeffs)
    p = int(p)
    _check_mass(counts)
    counter = 0
    for i, c in enumerate(counts):
        c = int(c)
        if c:
            counter += c * (2 * (_horner(cs, p, i) & 1) - 1)
    return counter


def ip_trial(coeffs, p, f_counts, g_counts):
    """Counters for two streams sharing one sign hash; one hash pass for both."""
    cs = _check_coeffs(coeffs)
    p = int(p)
    if len(f_counts) != len(g_counts):
        raise ValueError("count vectors must share a universe")
    _check_mass(f_counts)
    _check_mass(g_counts)
    cf = cg = 0
    for i in range(len(f_counts)):
        s = 2 * (_horner(cs, p, i) & 1) - 1
        cf += int(f_counts[i]) * s
        cg += int(g_counts[i]) * s
    return cf, cg


def tow_counter(coeffs, p, items, deltas):
    """Tug-of-war counter from a sparse update stream (item ids + deltas)."""
    cs = _check_coeffs(coeffs)
    p = int(p)
    if len(items) != len(deltas):
        raise ValueError("items and deltas must have equal length")
    _check_mass(deltas)
    return sum(
        int(d) * (2 * (_horner(cs, p, int(j)) & 1) - 1) for j, d in zip(items, deltas)
    )


def bucket_collision_count(coeffs, p, k, n, a):
    """Number of j in [0, n) whose bucket hash collides with item a (a included)."""
    cs = _check_coeffs(coeffs)
    p, k = int(p), int(k)
    target = _horner(cs, p, int(a)) % k
    return sum(1 for i in range(int(n)) if _horner(cs, p, i) % k == target)


def signed_collision_sum(h_coeffs, g_coeffs, p, k, n, a):
    """g(a) * sum of g(j) over j in [0, n) colliding with item a's bucket."""
    hc = _check_coeffs(h_coeffs)
    gc = _check_coeffs(g_coeffs)
    p, k, a = int(p), int(k), int(a)
    target = _horner(hc, p, a) % k
    ga = 2 * (_horner(gc, p, a) & 1) - 1
    total = sum(
        2 * (_horner(gc, p, i) & 1) - 1 for i in range(int(n)) if _horner(hc, p, i) % k == target
    )
    return ga * total
