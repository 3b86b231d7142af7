"""Forward spectral data of a Jacobi matrix.

Eigenvalues, orthogonal polynomials, normalizing constants and Weyl
m-functions. Everything here is generic over float and mpfr entries except
the complex-valued m-function routines, which work in double precision.
"""

import sys
from dataclasses import dataclass
from enum import Enum

from . import kernels, precision
from .core import (
    ConvergenceFailure,
    DimensionTooSmall,
    DivisionByZero,
    InterlacedSpectra,
    JacobiMatrix,
    Mode,
    PoleProximity,
    SpectralMeasure,
)
from .precision import TOL_EIG

DEFAULT_RADII = (1e3, 1e4)
FD_STEP = 1e-6
EPS = sys.float_info.epsilon


class PolyKind(str, Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class PolynomialTable:
    """``[P_0(z), ..., P_{n-1}(z)]`` (first kind) or the same for Q (second kind)."""

    values: tuple
    kind: PolyKind


def perturb(J, h):
    """J_h: the matrix with q_1 replaced by q_1 - h."""
    return JacobiMatrix((J.q[0] - h,) + J.q[1:], J.b)


def truncate_first(J):
    """Drop the first row and column."""
    if J.n < 2:
        raise DimensionTooSmall("cannot remove the first row of a 1x1 matrix")
    return JacobiMatrix(J.q[1:], J.b[1:])


def eigenvalues(J):
    """Ascending eigenvalues by Sturm-count bisection."""
    try:
        return tuple(kernels.eigvalsh(list(J.q), list(J.b), min(TOL_EIG, 4 * EPS)))
    except ArithmeticError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def eval_polys(J, z, kind=PolyKind.FIRST):
    """Evaluate P_0..P_{n-1} (or Q_0..Q_{n-1}) at ``z`` by the three-term recurrence.

    With P_{-1} = 0 the recurrence reads
    b_k P_k = (z - q_k) P_{k-1} - b_{k-1} P_{k-2}, 1-based q and b.
    Values grow like |z|^k / prod b, so for large |z| and n they can overflow;
    on the spectrum they stay bounded by the square root of the normalizing constant.
    """
    kind = PolyKind(kind)
    n = J.n
    q, b = J.q, J.b
    if kind is PolyKind.FIRST:
        vals = [z * 0 + 1]
        start = 1
    else:
        vals = [z * 0]
        if n == 1:
            return PolynomialTable(tuple(vals), kind)
        vals.append(z * 0 + 1 / b[0])
        start = 2
    for k in range(start, n):
        prev2 = vals[k - 2] if k >= 2 else 0
        bprev = b[k - 2] if k >= 2 else 0
        vals.append(((z - q[k - 1]) * vals[k - 1] - bprev * prev2) / b[k - 1])
    return PolynomialTable(tuple(vals), kind)


def normalizing_constants(J):
    """Spectral measure of J at the first basis vector.

    Atoms sit at the eigenvalues with weights 1/alpha_n, where alpha_n is the
    sum of P_k(lambda_n)^2. The weights are taken from first eigenvector
    components (a twisted factorization), which is the same quantity but does
    not suffer the growth of the raw polynomial recurrence.
    """
    lams = eigenvalues(J)
    ws = kernels.first_weights(list(J.q), list(J.b), list(lams))
    return SpectralMeasure(list(zip(lams, ws)))


def _check_pole(measure, z):
    xs = measure.locations
    sep = float(precision.eps_sep(xs))
    for x in xs:
        if abs(complex(z) - float(x)) < sep:
            raise PoleProximity(f"z = {z} is within {sep:.3g} of the atom at {float(x):.17g}")


def weyl_m(measure, z):
    """m(z) = sum w_k / (lambda_k - z), evaluated in double precision."""
    z = complex(z)
    _check_pole(measure, z)
    return sum(float(w) / (float(x) - z) for x, w in measure.atoms)


def m_transform(m, h):
    """m_h = m / (1 - h m)."""
    den = 1 - h * m
    if den == 0:
        raise DivisionByZero("1 - h m vanishes: z is an eigenvalue of J_h")
    return m / den


def m_infinity(m, z, q1, b1):
    """m-function of the matrix without its first row and column, from m of the full one."""
    if m == 0:
        raise DivisionByZero("m vanishes: z is an eigenvalue of the truncated matrix")
    return -((z - q1) + 1 / m) / (b1 * b1)


def asymptotic_coeffs(J, h=0.0):
    """(c1, c2, c3) with m_h(z) = c1/z + c2/z^2 + c3/z^3 + O(z^-4)."""
    if J.n < 2:
        raise DimensionTooSmall("the z^-3 coefficient needs b_1, so n >= 2")
    a = J.q[0] - h
    return (-1.0, -a, -(J.b[0] ** 2 + a * a))


def fit_asymptotic_coeffs(measure, radii=DEFAULT_RADII):
    """Estimate (c1, c2, c3) from m(iR) at two radii.

    At z = iR the expansion splits into
    -R Im m = c1 - c3/R^2 + O(R^-4) and -R^2 Re m = c2 - c4/R^2 + O(R^-4),
    so each pair of samples is solved for the leading two terms, which
    removes the next-order term.
    """
    r1, r2 = (float(r) for r in radii)
    if not 0 < r1 < r2:
        raise ValueError("radii must be positive and ascending")
    m1 = weyl_m(measure, 1j * r1)
    m2 = weyl_m(measure, 1j * r2)
    g1, g2 = -r1 * m1.imag, -r2 * m2.imag
    u1, u2 = 1 / r1 ** 2, 1 / r2 ** 2
    c3 = (g1 - g2) / (u2 - u1)
    c1 = g2 + c3 * u2
    f1, f2 = -r1 * r1 * m1.real, -r2 * r2 * m2.real
    c4 = (f1 - f2) / (u2 - u1)
    c2 = f2 + c4 * u2
    return (c1, c2, c3)


def eigen_sensitivity(J, h, k):
    """d lambda_k(h) / dh = -1/alpha_k(h), k 1-based."""
    if not 1 <= k <= J.n:
        raise ValueError(f"k = {k} outside 1..{J.n}")
    return -normalizing_constants(perturb(J, h)).weights[k - 1]


def eigen_sensitivity_fd(J, h, k, step=FD_STEP):
    """Central finite difference of lambda_k(h)."""
    up = eigenvalues(perturb(J, h + step))[k - 1]
    down = eigenvalues(perturb(J, h - step))[k - 1]
    return (up - down) / (2 * step)


def local_residue(measure, n, offset=1e-7):
    """Limit of (lambda_n - z) m(z) as z -> lambda_n, which is w_n.

    Sampled at z = lambda_n + i*offset and offset/2; one Richardson step
    cancels the O(offset) term, leaving O(offset^2 / gap^2).
    """
    lam = float(measure.locations[n - 1])

    def probe(d):
        z = complex(lam, d)
        return (lam - z) * weyl_m(measure, z)

    return 2 * probe(offset / 2) - probe(offset)


def rank_one_spectra(J, h1, h2):
    """Spectra of J_{h2} (``lambdas``) and J_{h1} (``mus``), requiring h1 < h2."""
    if not h1 < h2:
        raise ValueError("rank-one spectra need h1 < h2; swap the couplings")
    lams = eigenvalues(perturb(J, h2))
    mus = eigenvalues(perturb(J, h1))
    return InterlacedSpectra(lams, mus, Mode.RANK_ONE)


def dirichlet_neumann_spectra(J):
    """Spectra of J and of J without its first row and column (empty for n = 1)."""
    lams = eigenvalues(J)
    mus = eigenvalues(truncate_first(J)) if J.n > 1 else ()
    return InterlacedSpectra(lams, mus, Mode.DIRICHLET_NEUMANN)
