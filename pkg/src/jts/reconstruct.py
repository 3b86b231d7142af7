"""From a spectral measure back to the Jacobi matrix.

Two engines: the discrete Stieltjes procedure (Lanczos on the diagonal
matrix of atom locations, with full reorthogonalization), which is the one
used for inversion, and coefficient stripping by the Ricatti recursion on the
moment series, kept as an independent cross-check for short prefixes.
"""

import warnings
from dataclasses import dataclass

from . import kernels, precision
from .core import BreakdownBelowTolerance, JacobiMatrix, NumericalBlowup

BREAKDOWN = 1e-24
BREAKDOWN_WARN = 1e-16
DEPTH_CAP = 10
MOMENT_LIMIT = 1e15


class NearBreakdownWarning(RuntimeWarning):
    pass


def stieltjes_lanczos(measure, breakdown=BREAKDOWN):
    """The N x N Jacobi matrix whose spectral measure is ``measure``."""
    xs = list(measure.locations)
    ws = list(measure.weights)
    q, bsq = kernels.stieltjes(xs, ws, breakdown)
    if len(q) < len(xs):
        k = len(bsq)
        raise BreakdownBelowTolerance(
            f"b_{k}^2 = {float(bsq[-1]):.3g} is at or below {breakdown:g}; atoms nearly coincide")
    for k, v in enumerate(bsq, 1):
        if v <= BREAKDOWN_WARN:
            warnings.warn(f"b_{k}^2 = {float(v):.3g} is close to breakdown", NearBreakdownWarning)
    sqrt = kernels.python.ops_for(bsq).sqrt
    return JacobiMatrix(q, [sqrt(v) for v in bsq])


def moments(measure, m_max):
    """s_m = sum w_k x_k^m for m = 0..m_max."""
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    out = []
    powers = [w * 0 + 1 for w in measure.weights]
    for _ in range(m_max + 1):
        out.append(precision.fsum(p * w for p, w in zip(powers, measure.weights)))
        powers = [p * x for p, x in zip(powers, measure.locations)]
    return out


def _series_reciprocal(s):
    # t = 1/s for a power series with s[0] = 1
    t = [s[0] * 0 + 1]
    for j in range(1, len(s)):
        t.append(-precision.fsum(s[i] * t[j - i] for i in range(1, j + 1)))
    return t


def ricatti_reconstruct(measure, depth, depth_cap=DEPTH_CAP):
    """First ``depth`` rows of the Jacobi matrix by stripping the m-function.

    Write m(z) = -x S(x) with x = 1/z and S the moment series. The Ricatti
    step b_n^2 m_n = q_n - z - 1/m_{n-1} turns into: T = 1/S, q_n = -T_1,
    b_n^2 = -T_2, and the next moment series is T_{j+2} / T_2. The measure
    is first mapped affinely onto [-1, 1] so the moments stay of order one;
    even so the recursion loses roughly a constant factor of digits per
    step, which is why depth is capped.
    """
    n = len(measure)
    if not 1 <= depth <= min(n, depth_cap):
        raise ValueError(f"depth must lie in 1..{min(n, depth_cap)}")
    xs = measure.locations
    lo, hi = xs[0], xs[-1]
    center = (lo + hi) / 2
    half = (hi - lo) / 2
    if half == 0:
        half = half + 1
    scaled = type(measure)([((x - center) / half, w) for x, w in measure.atoms])
    s = moments(scaled, 2 * depth - 1)
    s0 = s[0]
    s = [v / s0 for v in s]
    q, b = [], []
    for step in range(depth):
        if any(abs(v) > MOMENT_LIMIT for v in s):
            raise NumericalBlowup(f"moment magnitude above {MOMENT_LIMIT:g} at step {step + 1}")
        t = _series_reciprocal(s)
        q.append(-t[1])
        if step == depth - 1:
            break
        b2 = -t[2]
        if not b2 > 0:
            raise NumericalBlowup(f"b_{step + 1}^2 = {float(b2):.3g} is not positive")
        b.append(kernels.python.ops_for([b2]).sqrt(b2))
        s = [v / t[2] for v in t[2:]]
    return JacobiMatrix([center + half * v for v in q], [half * v for v in b])


@dataclass(frozen=True)
class CrossValidation:
    deviation: float
    tol: float
    prefix: int

    @property
    def passed(self):
        return self.deviation <= self.tol


def cross_validate(full, prefix, tol):
    """Largest entrywise difference over the rows ``prefix`` covers."""
    d = prefix.n
    if d > full.n:
        raise ValueError("prefix is longer than the matrix it is compared with")
    diffs = [abs(float(a) - float(c)) for a, c in zip(full.q[:d], prefix.q)]
    diffs += [abs(float(a) - float(c)) for a, c in zip(full.b[:d - 1], prefix.b)]
    return CrossValidation(max(diffs, default=0.0), tol, d)
