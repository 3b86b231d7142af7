"""Pure-Python kernels.

Every routine here is generic over the scalar type. Python floats give the
double-precision fallback for the compiled kernels; ``gmpy2.mpfr`` values run
at the precision of the active gmpy2 context, which is how the package does
extended-precision work.
"""

import math
import sys

import gmpy2

MPFR = type(gmpy2.mpfr(0))

MAXITER = 4096


class _FloatOps:
    sqrt = staticmethod(math.sqrt)
    log = staticmethod(math.log)
    exp = staticmethod(math.exp)

    @staticmethod
    def eps():
        return sys.float_info.epsilon / 2

    @staticmethod
    def tiny():
        return sys.float_info.min

    @staticmethod
    def zero():
        return 0.0

    @staticmethod
    def total(values):
        return math.fsum(values)


class _MpfrOps:
    sqrt = staticmethod(gmpy2.sqrt)
    log = staticmethod(gmpy2.log)
    exp = staticmethod(gmpy2.exp)

    @staticmethod
    def eps():
        return gmpy2.mpfr(2) ** (-gmpy2.get_context().precision)

    @staticmethod
    def tiny():
        return gmpy2.mpfr(2) ** (-4 * gmpy2.get_context().precision)

    @staticmethod
    def zero():
        return gmpy2.mpfr(0)

    @staticmethod
    def total(values):
        return sum(values, gmpy2.mpfr(0))


def ops_for(*seqs):
    for seq in seqs:
        for v in seq:
            if isinstance(v, MPFR):
                return _MpfrOps
    return _FloatOps


def _pivmin(ops, b2):
    return ops.tiny() * max([1] + list(b2))


def sturm_count(q, b, x):
    """Number of eigenvalues of the tridiagonal matrix strictly below ``x``."""
    ops = ops_for(q, b, (x,))
    b2 = [bk * bk for bk in b]
    return _count(q, b2, x, _pivmin(ops, b2))


def _count(q, b2, x, pivmin):
    count = 0
    d = q[0] - x
    if abs(d) < pivmin:
        d = -pivmin
    if d < 0:
        count += 1
    for k in range(1, len(q)):
        d = (q[k] - x) - b2[k - 1] / d
        if abs(d) < pivmin:
            d = -pivmin
        if d < 0:
            count += 1
    return count


def _gershgorin(q, b):
    n = len(q)
    lo = hi = None
    for k in range(n):
        r = (abs(b[k - 1]) if k > 0 else 0) + (abs(b[k]) if k < n - 1 else 0)
        a, c = q[k] - r, q[k] + r
        lo = a if lo is None or a < lo else lo
        hi = c if hi is None or c > hi else hi
    return lo, hi


def eigvalsh(q, b, reltol=1e-14):
    """Ascending eigenvalues of the symmetric tridiagonal matrix (q, b).

    Floats use plain bisection on Sturm counts. mpfr input adds a safeguarded
    Newton step once an eigenvalue is isolated in its bracket, since bisection
    to 256 bits is too slow in pure Python.
    """
    ops = ops_for(q, b)
    n = len(q)
    if n == 1:
        return [q[0]]
    b2 = [bk * bk for bk in b]
    pivmin = _pivmin(ops, b2)
    gl, gu = _gershgorin(q, b)
    bnorm = max(abs(gl), abs(gu))
    eps = ops.eps()
    pad = 2 * eps * bnorm * n + 2 * pivmin
    gl, gu = gl - pad, gu + pad
    abstol = eps * bnorm
    if ops is _MpfrOps:
        # Newton steps stall at the rounding noise of the pivot recurrence,
        # which grows with n
        return _eigvalsh_extended(q, b, b2, gl, gu, 4 * eps, 16 * n * abstol, pivmin)
    out = []
    lo0 = gl
    for k in range(1, n + 1):
        lo, hi = lo0, gu
        for _ in range(MAXITER):
            if hi - lo <= max(abstol, reltol * max(abs(lo), abs(hi))):
                break
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _count(q, b2, mid, pivmin) >= k:
                hi = mid
            else:
                lo = mid
        else:
            raise ArithmeticError("bisection iteration cap exceeded")
        out.append(0.5 * (lo + hi))
        lo0 = lo
    return out


def _eigvalsh_extended(q, b, b2, gl, gu, reltol, abstol, pivmin):
    # double-precision eigenvalues seed small brackets; each is widened until
    # it holds eigenvalue k, then refined by Newton with bisection safeguard
    seeds = eigvalsh([float(x) for x in q], [float(x) for x in b])
    scale = max(1.0, float(max(abs(gl), abs(gu))))
    out = []
    for k, seed in enumerate(seeds, 1):
        r = 1e-12 * scale
        while True:
            lo, hi = seed - r, seed + r
            if lo <= gl or hi >= gu:
                lo, hi = gl, gu
                break
            lo, hi = gmpy2.mpfr(lo), gmpy2.mpfr(hi)
            if _count(q, b2, lo, pivmin) <= k - 1 and _count(q, b2, hi, pivmin) >= k:
                break
            r *= 1e3
        out.append(_refine(q, b2, k, lo, hi, reltol, abstol, pivmin, x0=gmpy2.mpfr(seed)))
    return out


def _newton_step(q, b2, x, pivmin):
    # p'/p for p(x) = det(T - x) via the pivot recurrence and its derivative
    d = q[0] - x
    e = -1
    if abs(d) < pivmin:
        d = -pivmin
    s = e / d
    for k in range(1, len(q)):
        t = b2[k - 1] / d
        e = -1 + t * e / d
        d = (q[k] - x) - t
        if abs(d) < pivmin:
            d = -pivmin
        s += e / d
    if s == 0:
        return None
    return -1 / s


def _refine(q, b2, k, lo, hi, reltol, abstol, pivmin, x0=None):
    # Newton from x0 while the steps at least halve; bisection otherwise
    clo = _count(q, b2, lo, pivmin)
    chi = _count(q, b2, hi, pivmin)
    x = x0 if x0 is not None and lo < x0 < hi else (lo + hi) / 2
    prev = None
    for _ in range(MAXITER):
        if hi - lo <= max(abstol, reltol * max(abs(lo), abs(hi))):
            return (lo + hi) / 2
        if clo == k - 1 and chi == k:
            step = _newton_step(q, b2, x, pivmin)
            if step is not None:
                xn = x + step
                if lo <= xn <= hi and abs(step) <= max(abstol, reltol * abs(xn)):
                    return xn
                if lo < xn < hi and (prev is None or abs(step) <= abs(prev) / 2):
                    c = _count(q, b2, xn, pivmin)
                    if c >= k:
                        hi, chi = xn, c
                    else:
                        lo, clo = xn, c
                    x, prev = xn, step
                    continue
        mid = (lo + hi) / 2
        c = _count(q, b2, mid, pivmin)
        if c >= k:
            hi, chi = mid, c
        else:
            lo, clo = mid, c
        x, prev = mid, None
    raise ArithmeticError("eigenvalue refinement iteration cap exceeded")


def first_weights(q, b, lambdas):
    """Squared first eigenvector components v_1^2 / |v|^2 at each eigenvalue.

    The eigenvector comes from a twisted factorization of T - lambda: the
    top-down and bottom-up pivot sequences meet at the index where the
    twist element is smallest, which keeps the component ratios accurate even
    when the vector is localized away from the first site.
    """
    ops = ops_for(q, b, lambdas)
    n = len(q)
    if n == 1:
        return [ops.zero() + 1 for _ in lambdas]
    b2 = [bk * bk for bk in b]
    pivmin = _pivmin(ops, b2)
    out = []
    for lam in lambdas:
        dp = [None] * n
        dm = [None] * n
        d = q[0] - lam
        dp[0] = d if abs(d) >= pivmin else pivmin
        for k in range(1, n):
            d = (q[k] - lam) - b2[k - 1] / dp[k - 1]
            dp[k] = d if abs(d) >= pivmin else pivmin
        d = q[n - 1] - lam
        dm[n - 1] = d if abs(d) >= pivmin else pivmin
        for k in range(n - 2, -1, -1):
            d = (q[k] - lam) - b2[k] / dm[k + 1]
            dm[k] = d if abs(d) >= pivmin else pivmin
        r = 0
        best = None
        for k in range(n):
            g = abs(dp[k] + dm[k] - (q[k] - lam))
            if best is None or g < best:
                best, r = g, k
        v = [None] * n
        v[r] = ops.zero() + 1
        for k in range(r - 1, -1, -1):
            v[k] = -b[k] * v[k + 1] / dp[k]
        for k in range(r + 1, n):
            v[k] = -b[k - 1] * v[k - 1] / dm[k]
        big = max(abs(x) for x in v)
        v = [x / big for x in v]
        out.append(v[0] * v[0] / ops.total(x * x for x in v))
    return out


def _signed_log_product(ops, num, den):
    sign = 1
    acc = ops.zero()
    for a, c in zip(num, den):
        if a == 0:
            # a coincident zero and pole: the weight underflows to zero
            return 0, acc
        if a < 0:
            sign = -sign
        if c < 0:
            sign = -sign
        acc += ops.log(abs(a)) - ops.log(abs(c))
    return sign, acc


def rank_one_weights(lambdas, mus, delta):
    """Signed 1/tau_n = (mu_n - lam_n)/delta * prod_{k!=n} (mu_k - lam_n)/(lam_k - lam_n).

    Factor k of the numerator is paired with factor k of the denominator and
    the product is accumulated as log-magnitude plus sign.
    """
    ops = ops_for(lambdas, mus, (delta,))
    n = len(lambdas)
    out = []
    for i in range(n):
        li = lambdas[i]
        num = [mus[i] - li]
        den = [delta]
        for k in range(n):
            if k != i:
                num.append(mus[k] - li)
                den.append(lambdas[k] - li)
        sign, acc = _signed_log_product(ops, num, den)
        out.append(sign * ops.exp(acc))
    return out


def dn_weights(lambdas, mus):
    """Signed 1/tau_n = prod_k (mu_k - lam_n) / prod_{k!=n} (lam_k - lam_n).

    mu_k is paired with lam_k below n and with lam_{k+1} from n on, so each
    ratio compares neighbouring points.
    """
    ops = ops_for(lambdas, mus)
    n = len(lambdas)
    out = []
    for i in range(n):
        li = lambdas[i]
        num = []
        den = []
        for k in range(n - 1):
            j = k if k < i else k + 1
            num.append(mus[k] - li)
            den.append(lambdas[j] - li)
        sign, acc = _signed_log_product(ops, num, den)
        out.append(sign * ops.exp(acc))
    return out


def stieltjes(x, w, breakdown):
    """Discrete Stieltjes procedure with full reorthogonalization.

    Runs Lanczos on diag(x) from the start vector sqrt(w). Returns the
    diagonal ``q`` and the squared off-diagonal ``bsq``; when some squared
    norm falls to ``breakdown`` or below the procedure stops there, so the
    caller sees ``len(q) < len(x)``.
    """
    ops = ops_for(x, w)
    n = len(x)
    v = [ops.sqrt(wi) for wi in w]
    s = ops.sqrt(ops.total(vi * vi for vi in v))
    v = [vi / s for vi in v]
    basis = [v]
    q = []
    bsq = []
    b_prev = None
    for k in range(n):
        vk = basis[k]
        u = [xi * vi for xi, vi in zip(x, vk)]
        a = ops.total(ui * vi for ui, vi in zip(u, vk))
        q.append(a)
        if k == n - 1:
            break
        u = [ui - a * vi for ui, vi in zip(u, vk)]
        if k > 0:
            u = [ui - b_prev * pi for ui, pi in zip(u, basis[k - 1])]
        for _ in range(2):
            for p in basis:
                c = ops.total(ui * pi for ui, pi in zip(u, p))
                u = [ui - c * pi for ui, pi in zip(u, p)]
        nsq = ops.total(ui * ui for ui in u)
        bsq.append(nsq)
        if nsq <= breakdown:
            break
        b_prev = ops.sqrt(nsq)
        basis.append([ui / b_prev for ui in u])
    return q, bsq
