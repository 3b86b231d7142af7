"""Hot inner loops, with a compiled backend and a pure-Python fallback.

The compiled module ``_ckernels`` is used for float input when it was built
and ``JTS_PURE_PYTHON`` is unset. Extended-precision (``gmpy2.mpfr``) input
always goes to the pure-Python kernels, which are generic over the scalar type.
"""

import os

from . import _pykernels as python

try:
    from . import _ckernels as compiled
except ImportError:  # extension not built
    compiled = None

BACKEND = "c" if compiled is not None and not os.environ.get("JTS_PURE_PYTHON") else "python"

__all__ = [
    "BACKEND",
    "backend",
    "sturm_count",
    "eigvalsh",
    "first_weights",
    "rank_one_weights",
    "dn_weights",
    "stieltjes",
]


def backend(name=None):
    """Return a kernel module by name (``"c"`` or ``"python"``); default is the active one."""
    name = name or BACKEND
    if name == "python":
        return python
    if name == "c":
        if compiled is None:
            raise ImportError("compiled kernels are not available")
        return compiled
    raise ValueError(f"unknown kernel backend {name!r}")


def _pick(*seqs):
    if BACKEND == "python" or python.ops_for(*seqs) is not python._FloatOps:
        return python
    return compiled


def sturm_count(q, b, x):
    return _pick(q, b, (x,)).sturm_count(q, b, x)


def eigvalsh(q, b, reltol=1e-14):
    return _pick(q, b).eigvalsh(q, b, reltol)


def first_weights(q, b, lambdas):
    return _pick(q, b, lambdas).first_weights(q, b, lambdas)


def rank_one_weights(lambdas, mus, delta):
    return _pick(lambdas, mus, (delta,)).rank_one_weights(lambdas, mus, delta)


def dn_weights(lambdas, mus):
    return _pick(lambdas, mus).dn_weights(lambdas, mus)


def stieltjes(x, w, breakdown):
    return _pick(x, w).stieltjes(x, w, breakdown)
