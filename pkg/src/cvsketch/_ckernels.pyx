# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: polynomial hashing and whole-universe sketch passes.

Mirrors cvsketch._pykernels function-for-function; cvsketch.kernels selects
one backend at import time. All functions are pure and GIL-released in their
inner loops, so trials can run on real threads.
"""

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef unsigned long long u64
ctypedef long long i64

cdef u64 _I64_MAX = <u64>0x7FFFFFFFFFFFFFFF

DEF MAX_DEGREE = 8


cdef inline u64 _horner(const u64* coeffs, int degree, u64 p, u64 x) noexcept nogil:
    # sum a_i x^i mod p with a 128-bit intermediate, so no overflow for p < 2^64
    cdef u64 acc = coeffs[degree - 1] % p
    cdef int i
    for i in range(degree - 2, -1, -1):
        acc = <u64>((<u128>acc * x + coeffs[i]) % p)
    return acc


cdef int _load_coeffs(object coeffs, u64* out) except -1:
    cdef int n = len(coeffs)
    if n < 1 or n > MAX_DEGREE:
        raise ValueError(f"coefficient count must be in [1, {MAX_DEGREE}], got {n}")
    cdef int i
    for i in range(n):
        out[i] = coeffs[i]
    return n


cdef i64 _checked_mass(const i64[::1] values) except? -1:
    # |counter| never exceeds the absolute delta mass, so bounding the mass
    # keeps every intermediate inside a signed 64-bit counter
    cdef u128 mass = 0
    cdef Py_ssize_t i
    for i in range(values.shape[0]):
        mass += <u64>(values[i] if values[i] >= 0 else -values[i])
    if mass > <u128>_I64_MAX:
        raise OverflowError("total update mass exceeds the 64-bit counter range")
    return <i64>mass


def poly_mod(coeffs, p, x):
    """Evaluate sum a_i x^i mod p (before the final mod-range step)."""
    cdef u64 cs[MAX_DEGREE]
    cdef int deg = _load_coeffs(coeffs, cs)
    return _horner(cs, deg, <u64>p, <u64>x)


def sign_sum(coeffs, p, n):
    """Sum of the +-1 sign hash over the whole universe [0, n)."""
    cdef u64 cs[MAX_DEGREE]
    cdef int deg = _load_coeffs(coeffs, cs)
    cdef u64 pp = p
    cdef u64 nn = n
    cdef i64 total = 0
    cdef u64 i
    with nogil:
        for i in range(nn):
            total += 2 * <i64>(_horner(cs, deg, pp, i) & 1) - 1
    return total


def tow_counter_dense(coeffs, p, counts):
    """Tug-of-war counter sum(counts[i] * sign(i)) over a dense count vector."""
    cdef u64 cs[MAX_DEGREE]
    cdef int deg = _load_coeffs(coeffs, cs)
    cdef const i64[::1] c = counts
    cdef u64 pp = p
    cdef Py_ssize_t n = c.shape[0], i
    cdef i64 counter = 0
    _checked_mass(c)
    with nogil:
        for i in range(n):
            if c[i] != 0:
                counter += c[i] * (2 * <i64>(_horner(cs, deg, pp, <u64>i) & 1) - 1)
    return counter


def ip_trial(coeffs, p, f_counts, g_counts):
    """Counters for two streams sharing one sign hash; one hash pass for both."""
    cdef u64 cs[MAX_DEGREE]
    cdef int deg = _load_coeffs(coeffs, cs)
    cdef const i64[::1] f = f_counts
    cdef const i64[::1] g = g_counts
    if f.shape[0] != g.shape[0]:
        raise ValueError("count vectors must share a universe")
    cdef u64 pp = p
    cdef Py_ssize_t n = f.shape[0], i
    cdef i64 cf = 0, cg = 0, s
    _checked_mass(f)
    _checked_mass(g)
    with nogil:
        for i in range(n):
            s = 2 * <i64>(_horner(cs, deg, pp, <u64>i) & 1) - 1
            cf += f[i] * s
            cg += g[i] * s
    return cf, cg


def tow_counter(coeffs, p, items, deltas):
    """Tug-of-war counter from a sparse update stream (item ids + deltas)."""
    cdef u64 cs[MAX_DEGREE]
    cdef int deg = _load_coeffs(coeffs, cs)
    cdef const i64[::1] ids = items
    cdef const i64[::1] ds = deltas
    if ids.shape[0] != ds.shape[0]:
        raise ValueError("items and deltas must have equal length")
    cdef u64 pp = p
    cdef Py_ssize_t n = ids.shape[0], i
    cdef i64 counter = 0
    _checked_mass(ds)
    with nogil:
        for i in range(n):
            counter += ds[i] * (2 * <i64>(_horner(cs, deg, pp, <u64>ids[i]) & 1) - 1)
    return counter


def bucket_collision_count(coeffs, p, k, n, a):
    """Number of j in [0, n) whose bucket hash collides with item a (a included)."""
    cdef u64 cs[MAX_DEGREE]
    cdef int deg = _load_coeffs(coeffs, cs)
    cdef u64 pp = p
    cdef u64 kk = k
    cdef u64 nn = n
    cdef u64 target = _horner(cs, deg, pp, <u64>a) % kk
    cdef i64 total = 0
    cdef u64 i
    with nogil:
        for i in range(nn):
            if _horner(cs, deg, pp, i) % kk == target:
                total += 1
    return total


def signed_collision_sum(h_coeffs, g_coeffs, p, k, n, a):
    """g(a) * sum of g(j) over j in [0, n) colliding with item a's bucket."""
    cdef u64 hc[MAX_DEGREE]
    cdef u64 gc[MAX_DEGREE]
    cdef int hdeg = _load_coeffs(h_coeffs, hc)
    cdef int gdeg = _load_coeffs(g_coeffs, gc)
    cdef u64 pp = p
    cdef u64 kk = k
    cdef u64 nn = n
    cdef u64 target = _horner(hc, hdeg, pp, <u64>a) % kk
    cdef i64 ga = 2 * <i64>(_horner(gc, gdeg, pp, <u64>a) & 1) - 1
    cdef i64 total = 0
    cdef u64 i
    with nogil:
        for i in range(nn):
            if _horner(hc, hdeg, pp, i) % kk == target:
                total += 2 * <i64>(_horner(gc, gdeg, pp, i) & 1) - 1
    return ga * total
