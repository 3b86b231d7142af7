"""Working-precision helpers.

Values are either Python floats (double precision) or ``gmpy2.mpfr``
(extended precision, at the bit count of the active gmpy2 context). The
tolerances the package uses are stated for doubles and scale with the unit
roundoff of whichever arithmetic is in play.
"""

import math
from contextlib import contextmanager

import gmpy2

MPFR = type(gmpy2.mpfr(0))
DOUBLE_BITS = 53

EPS_SEP = 1e-12
TOL_NORM = 1e-10
TOL_EIG = 1e-14


def is_extended(*seqs):
    return any(isinstance(v, MPFR) for seq in seqs for v in seq)


@contextmanager
def extended_precision(bits=256):
    """Run the enclosed block with gmpy2 arithmetic at ``bits`` of mantissa."""
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        yield


def current_bits():
    return gmpy2.get_context().precision


def to_extended(values):
    """Convert a number or a sequence of numbers to mpfr at the current precision."""
    if isinstance(values, (list, tuple)):
        return tuple(gmpy2.mpfr(v) for v in values)
    return gmpy2.mpfr(values)


def to_float(values):
    if isinstance(values, (list, tuple)):
        return tuple(float(v) for v in values)
    return float(values)


def roundoff_ratio(extended):
    """Unit roundoff of the working arithmetic relative to double precision."""
    if not extended:
        return 1.0
    return gmpy2.mpfr(2) ** (DOUBLE_BITS - current_bits())


def spread(values):
    values = list(values)
    if not values:
        return 0.0
    return max(values) - min(values)


def eps_sep(values, extended=None):
    """Smallest gap two spectral points may have before interlacing is indeterminate."""
    values = list(values)
    if extended is None:
        extended = is_extended(values)
    return EPS_SEP * roundoff_ratio(extended) * max(1, spread(values))


def tol_norm(extended):
    return TOL_NORM * roundoff_ratio(extended)


def is_finite(x):
    if isinstance(x, MPFR):
        return gmpy2.is_finite(x)
    try:
        x = float(x)
    except (TypeError, ValueError):
        return False
    return x == x and abs(x) != float("inf")


def fsum(values):
    values = list(values)
    if is_extended(values):
        return sum(values, gmpy2.mpfr(0))
    return math.fsum(values)


def format_number(x):
    """Decimal text for JSON: 17 significant digits for floats, full precision for mpfr."""
    if isinstance(x, MPFR):
        return str(x)
    return format(float(x), ".16e")
