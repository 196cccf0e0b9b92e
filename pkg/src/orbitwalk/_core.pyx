# cython: language_level=3
"""Compiled Bessel core: hot-path twin of `orbitwalk._core_py`.

Same algorithms and same four entry points as the pure-Python module —
ascending series where they are cancellation-free, backward (Miller)
recurrence with J-sum / e^z normalization elsewhere.  Kept in lockstep with
`_core_py`; the parity test suite compares the two backends directly.
"""

from libc.math cimport exp, fabs, lgamma, log
from libc.stdlib cimport free, malloc

cdef double _BIG = 1e10
cdef double _BIG_INV = 1e-10
cdef double _SERIES_Z_CUT = 6.5
cdef int _SERIES_KMAX = 800


cdef double _series_j(int n, double z):
    cdef double half = 0.5 * z
    if half == 0.0:  # zero or subnormal z: series degenerates to its limit
        return 1.0 if n == 0 else 0.0
    cdef double log_t0 = n * log(half) - lgamma(n + 1.0)
    if log_t0 < -745.0:
        return 0.0
    cdef double term = exp(log_t0)
    cdef double total = term
    cdef double peak = fabs(term)
    cdef double zz = half * half
    cdef double mag
    cdef int k
    for k in range(1, _SERIES_KMAX):
        term *= -zz / (k * (n + <double> k))
        total += term
        mag = fabs(term)
        if mag > peak:
            peak = mag
        elif mag < 1e-17 * peak:
            break
    return total


cdef double _series_i_checked(int n, double z) except? -1e999:
    cdef double half = 0.5 * z
    if half == 0.0:  # zero or subnormal z: series degenerates to its limit
        return 1.0 if n == 0 else 0.0
    cdef double log_t0 = n * log(half) - lgamma(n + 1.0)
    if log_t0 < -745.0:
        return 0.0
    cdef double term = exp(log_t0)
    cdef double total = term
    cdef double zz = half * half
    cdef int k
    for k in range(1, _SERIES_KMAX):
        term *= zz / (k * (n + <double> k))
        total += term
        if total > 1e307:
            raise OverflowError(f"I_{n}({z}) exceeds double-precision range")
        if term < 1e-17 * total:
            break
    return total


cdef list _miller_j_row(int nmax, double z):
    cdef int m0 = nmax if nmax > <int> z + 1 else <int> z + 1
    cdef int m = m0 + <int> (12.0 * m0 ** (1.0 / 3.0)) + 42
    cdef double* buf = <double*> malloc((nmax + 1) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double jp = 0.0
    cdef double j = 1e-30
    cdef double norm = 0.0
    cdef double jm
    cdef int k, i
    try:
        for i in range(nmax + 1):
            buf[i] = 0.0
        for k in range(m, -1, -1):
            if k <= nmax:
                buf[k] = j
            if k == 0:
                norm += j
            elif k % 2 == 0:
                norm += 2.0 * j
            jm = (2.0 * k / z) * j - jp
            jp = j
            j = jm
            if fabs(j) > _BIG:
                j *= _BIG_INV
                jp *= _BIG_INV
                norm *= _BIG_INV
                for i in range(k, nmax + 1):
                    buf[i] *= _BIG_INV
        return [buf[i] / norm for i in range(nmax + 1)]
    finally:
        free(buf)


def bessel_j(int n, double z):
    """J_n(z), n >= 0, z >= 0; series in the safe regimes, Miller otherwise."""
    if z == 0.0:
        return 1.0 if n == 0 else 0.0
    if z <= _SERIES_Z_CUT or n + 1 >= 0.5 * z * z:
        return _series_j(n, z)
    return _miller_j_row(n, z)[n]


def bessel_i(int n, double z):
    """I_n(z), n >= 0, z >= 0, by ascending series (cancellation-free)."""
    if z == 0.0:
        return 1.0 if n == 0 else 0.0
    return _series_i_checked(n, z)


def j_row(int nmax, double z):
    """[J_0(z), ..., J_nmax(z)] in one pass."""
    if z == 0.0:
        return [1.0] + [0.0] * nmax
    if z <= _SERIES_Z_CUT:
        return [_series_j(n, z) for n in range(nmax + 1)]
    return _miller_j_row(nmax, z)


def i_row(int nmax, double z):
    """[I_0(z), ..., I_nmax(z)] by backward recurrence, e^z normalized."""
    if z == 0.0:
        return [1.0] + [0.0] * nmax
    if z > 700.0:
        raise OverflowError(f"I_n({z}) normalization e^z exceeds double range")
    if z <= 2.0:
        return [_series_i_checked(n, z) for n in range(nmax + 1)]

    cdef int m0 = nmax if nmax > <int> z + 1 else <int> z + 1
    cdef int m = m0 + <int> (12.0 * m0 ** (1.0 / 3.0)) + 42
    cdef double* buf = <double*> malloc((nmax + 1) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double ip = 0.0
    cdef double cur = 1e-30
    cdef double norm = 0.0
    cdef double nxt, scale
    cdef int k, i
    try:
        for i in range(nmax + 1):
            buf[i] = 0.0
        for k in range(m, -1, -1):
            if k <= nmax:
                buf[k] = cur
            if k == 0:
                norm += cur
            else:
                norm += 2.0 * cur
            nxt = ip + (2.0 * k / z) * cur
            ip = cur
            cur = nxt
            if fabs(cur) > _BIG:
                cur *= _BIG_INV
                ip *= _BIG_INV
                norm *= _BIG_INV
                for i in range(k, nmax + 1):
                    buf[i] *= _BIG_INV
        scale = exp(z) / norm
        return [buf[i] * scale for i in range(nmax + 1)]
    finally:
        free(buf)
