# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled double-precision kernels.

Same signatures and results as :mod:`jts.kernels._pykernels` for float input.
"""

from libc.math cimport fabs, sqrt, log, exp, fmax
from cpython.mem cimport PyMem_Malloc, PyMem_Free

cdef double DBL_EPS_HALF = 1.1102230246251565e-16
cdef double DBL_TINY = 2.2250738585072014e-308
cdef int MAXITER = 4096


cdef double* _alloc(Py_ssize_t n) except NULL:
    cdef double* p = <double*> PyMem_Malloc((n if n > 0 else 1) * sizeof(double))
    if p == NULL:
        raise MemoryError()
    return p


cdef double* _copy(seq, Py_ssize_t n) except NULL:
    cdef double* p = _alloc(n)
    cdef Py_ssize_t i
    for i in range(n):
        p[i] = seq[i]
    return p


cdef double _pivmin(double* b2, Py_ssize_t m) noexcept nogil:
    cdef double big = 1.0
    cdef Py_ssize_t i
    for i in range(m):
        if b2[i] > big:
            big = b2[i]
    return DBL_TINY * big


cdef Py_ssize_t _count(double* q, double* b2, Py_ssize_t n, double x,
                       double pivmin) noexcept nogil:
    cdef Py_ssize_t count = 0, k
    cdef double d = q[0] - x
    if fabs(d) < pivmin:
        d = -pivmin
    if d < 0:
        count += 1
    for k in range(1, n):
        d = (q[k] - x) - b2[k - 1] / d
        if fabs(d) < pivmin:
            d = -pivmin
        if d < 0:
            count += 1
    return count


def sturm_count(q, b, double x):
    cdef Py_ssize_t n = len(q), i
    cdef double* qq = _copy(q, n)
    cdef double* b2 = _alloc(n - 1)
    try:
        for i in range(n - 1):
            b2[i] = b[i] * b[i]
        return _count(qq, b2, n, x, _pivmin(b2, n - 1))
    finally:
        PyMem_Free(qq)
        PyMem_Free(b2)


def eigvalsh(q, b, double reltol=1e-14):
    cdef Py_ssize_t n = len(q), k, i, it
    if n == 1:
        return [float(q[0])]
    cdef double* qq = _copy(q, n)
    cdef double* bb = _copy(b, n - 1)
    cdef double* b2 = _alloc(n - 1)
    cdef double* out = _alloc(n)
    cdef double gl, gu, r, bnorm, pad, abstol, pivmin, lo, hi, lo0, mid
    cdef bint failed = False
    try:
        for i in range(n - 1):
            b2[i] = bb[i] * bb[i]
        pivmin = _pivmin(b2, n - 1)
        gl = qq[0] - fabs(bb[0])
        gu = qq[0] + fabs(bb[0])
        for k in range(1, n):
            r = fabs(bb[k - 1]) + (fabs(bb[k]) if k < n - 1 else 0.0)
            if qq[k] - r < gl:
                gl = qq[k] - r
            if qq[k] + r > gu:
                gu = qq[k] + r
        bnorm = fmax(fabs(gl), fabs(gu))
        pad = 2 * DBL_EPS_HALF * bnorm * n + 2 * pivmin
        gl -= pad
        gu += pad
        abstol = DBL_EPS_HALF * bnorm
        with nogil:
            lo0 = gl
            for k in range(1, n + 1):
                lo = lo0
                hi = gu
                for it in range(MAXITER):
                    if hi - lo <= fmax(abstol, reltol * fmax(fabs(lo), fabs(hi))):
                        break
                    mid = 0.5 * (lo + hi)
                    if mid <= lo or mid >= hi:
                        break
                    if _count(qq, b2, n, mid, pivmin) >= k:
                        hi = mid
                    else:
                        lo = mid
                else:
                    failed = True
                    break
                out[k - 1] = 0.5 * (lo + hi)
                lo0 = lo
        if failed:
            raise ArithmeticError("bisection iteration cap exceeded")
        return [out[i] for i in range(n)]
    finally:
        PyMem_Free(qq)
        PyMem_Free(bb)
        PyMem_Free(b2)
        PyMem_Free(out)


def first_weights(q, b, lambdas):
    cdef Py_ssize_t n = len(q), m = len(lambdas), i, k, r
    if n == 1:
        return [1.0] * m
    cdef double* qq = _copy(q, n)
    cdef double* bb = _copy(b, n - 1)
    cdef double* lam = _copy(lambdas, m)
    cdef double* b2 = _alloc(n - 1)
    cdef double* dp = _alloc(n)
    cdef double* dm = _alloc(n)
    cdef double* v = _alloc(n)
    cdef double* out = _alloc(m)
    cdef double pivmin, d, g, best, big, tot, l
    try:
        for k in range(n - 1):
            b2[k] = bb[k] * bb[k]
        pivmin = _pivmin(b2, n - 1)
        with nogil:
            for i in range(m):
                l = lam[i]
                d = qq[0] - l
                dp[0] = d if fabs(d) >= pivmin else pivmin
                for k in range(1, n):
                    d = (qq[k] - l) - b2[k - 1] / dp[k - 1]
                    dp[k] = d if fabs(d) >= pivmin else pivmin
                d = qq[n - 1] - l
                dm[n - 1] = d if fabs(d) >= pivmin else pivmin
                for k in range(n - 2, -1, -1):
                    d = (qq[k] - l) - b2[k] / dm[k + 1]
                    dm[k] = d if fabs(d) >= pivmin else pivmin
                r = 0
                best = -1.0
                for k in range(n):
                    g = fabs(dp[k] + dm[k] - (qq[k] - l))
                    if best < 0 or g < best:
                        best = g
                        r = k
                v[r] = 1.0
                for k in range(r - 1, -1, -1):
                    v[k] = -bb[k] * v[k + 1] / dp[k]
                for k in range(r + 1, n):
                    v[k] = -bb[k - 1] * v[k - 1] / dm[k]
                big = 0.0
                for k in range(n):
                    if fabs(v[k]) > big:
                        big = fabs(v[k])
                tot = 0.0
                for k in range(n):
                    v[k] /= big
                    tot += v[k] * v[k]
                out[i] = v[0] * v[0] / tot
        return [out[i] for i in range(m)]
    finally:
        PyMem_Free(qq)
        PyMem_Free(bb)
        PyMem_Free(lam)
        PyMem_Free(b2)
        PyMem_Free(dp)
        PyMem_Free(dm)
        PyMem_Free(v)
        PyMem_Free(out)


def rank_one_weights(lambdas, mus, double delta):
    cdef Py_ssize_t n = len(lambdas), i, k
    cdef double* lam = _copy(lambdas, n)
    cdef double* mu = _copy(mus, n)
    cdef double* out = _alloc(n)
    cdef double li, a, c, acc
    cdef int sign
    try:
        with nogil:
            for i in range(n):
                li = lam[i]
                a = mu[i] - li
                sign = -1 if a < 0 else 1
                if delta < 0:
                    sign = -sign
                acc = log(fabs(a)) - log(fabs(delta))
                for k in range(n):
                    if k == i:
                        continue
                    a = mu[k] - li
                    c = lam[k] - li
                    if a < 0:
                        sign = -sign
                    if c < 0:
                        sign = -sign
                    acc += log(fabs(a)) - log(fabs(c))
                out[i] = sign * exp(acc)
        return [out[i] for i in range(n)]
    finally:
        PyMem_Free(lam)
        PyMem_Free(mu)
        PyMem_Free(out)


def dn_weights(lambdas, mus):
    cdef Py_ssize_t n = len(lambdas), i, k, j
    cdef double* lam = _copy(lambdas, n)
    cdef double* mu = _copy(mus, n - 1)
    cdef double* out = _alloc(n)
    cdef double li, a, c, acc
    cdef int sign
    try:
        with nogil:
            for i in range(n):
                li = lam[i]
                sign = 1
                acc = 0.0
                for k in range(n - 1):
                    j = k if k < i else k + 1
                    a = mu[k] - li
                    c = lam[j] - li
                    if a < 0:
                        sign = -sign
                    if c < 0:
                        sign = -sign
                    acc += log(fabs(a)) - log(fabs(c))
                out[i] = sign * exp(acc)
        return [out[i] for i in range(n)]
    finally:
        PyMem_Free(lam)
        PyMem_Free(mu)
        PyMem_Free(out)


def stieltjes(x, w, double breakdown):
    cdef Py_ssize_t n = len(x), k, i, j, p, steps = 0
    cdef double* xx = _copy(x, n)
    cdef double* basis = _alloc(n * n)
    cdef double* u = _alloc(n)
    cdef double* qo = _alloc(n)
    cdef double* bo = _alloc(n)
    cdef double s, a, c, nsq, b_prev = 0.0
    try:
        s = 0.0
        for i in range(n):
            basis[i] = sqrt(<double> w[i])
            s += basis[i] * basis[i]
        s = sqrt(s)
        for i in range(n):
            basis[i] /= s
        with nogil:
            for k in range(n):
                a = 0.0
                for i in range(n):
                    u[i] = xx[i] * basis[k * n + i]
                    a += u[i] * basis[k * n + i]
                qo[k] = a
                steps = k + 1
                if k == n - 1:
                    break
                for i in range(n):
                    u[i] -= a * basis[k * n + i]
                if k > 0:
                    for i in range(n):
                        u[i] -= b_prev * basis[(k - 1) * n + i]
                for p in range(2):
                    for j in range(k + 1):
                        c = 0.0
                        for i in range(n):
                            c += u[i] * basis[j * n + i]
                        for i in range(n):
                            u[i] -= c * basis[j * n + i]
                nsq = 0.0
                for i in range(n):
                    nsq += u[i] * u[i]
                bo[k] = nsq
                if nsq <= breakdown:
                    break
                b_prev = sqrt(nsq)
                for i in range(n):
                    basis[(k + 1) * n + i] = u[i] / b_prev
        nb = steps if steps < n else n - 1
        return [qo[i] for i in range(steps)], [bo[i] for i in range(nb)]
    finally:
        PyMem_Free(xx)
        PyMem_Free(basis)
        PyMem_Free(u)
        PyMem_Free(qo)
        PyMem_Free(bo)
