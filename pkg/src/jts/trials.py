"""Random round-trip trials shared by the CLI and the test-suite.

Instances are drawn from numpy's PCG64 generator (``default_rng(seed)``) in
a fixed order per trial: ``n`` (only when not fixed, uniform on 1..30), then
q ~ U[-2, 2]^n, b ~ U[0.5, 2]^(n-1), then two values from U[-3, 3], sorted
into h1 < h2. The couplings are drawn in both modes so a seed gives the
same matrices whatever the mode.
"""

from dataclasses import dataclass

import numpy as np

from . import forward, inverse, precision
from .core import JacobiMatrix, JTSError, Mode

MATRIX_TOL = 1e-8
H2_TOL = 1e-10
TRACE_TOL = 1e-10
N_MAX = 30
EXTENDED_BITS = 256


@dataclass(frozen=True)
class Instance:
    index: int
    q: tuple
    b: tuple
    h1: float
    h2: float

    @property
    def n(self):
        return len(self.q)


def draw_instances(seed, trials, n=None, n_max=N_MAX):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(trials):
        dim = int(rng.integers(1, n_max + 1)) if n is None else int(n)
        q = tuple(float(x) for x in rng.uniform(-2.0, 2.0, dim))
        b = tuple(float(x) for x in rng.uniform(0.5, 2.0, dim - 1))
        h1, h2 = sorted(float(x) for x in rng.uniform(-3.0, 3.0, 2))
        out.append(Instance(i, q, b, h1, h2))
    return out


def instance_matrix(inst):
    """The instance as a JacobiMatrix in the working precision (mpfr under an extended context)."""
    if precision.current_bits() > precision.DOUBLE_BITS:
        return JacobiMatrix(precision.to_extended(inst.q), precision.to_extended(inst.b))
    return JacobiMatrix(inst.q, inst.b)


def _residual(matrix, inst):
    diffs = [abs(float(x) - y) for x, y in zip(matrix.q, inst.q)]
    diffs += [abs(float(x) - y) for x, y in zip(matrix.b, inst.b)]
    return max(diffs)


def _run(inst, mode):
    J = instance_matrix(inst)
    row = {"trial": inst.index, "n": inst.n, "h1": inst.h1, "h2": inst.h2,
           "matrix_residual": None, "h2_residual": None, "trace_residual": None}
    if mode is Mode.RANK_ONE:
        h1 = J.q[0] * 0 + inst.h1
        h2 = J.q[0] * 0 + inst.h2
        s = forward.rank_one_spectra(J, h1, h2)
        shift = precision.fsum(s.mus) - precision.fsum(s.lambdas)
        row["trace_residual"] = abs(float(shift - (h2 - h1))) / max(1.0, J.norm())
        res = inverse.recover(s, h1)
        row["h2_residual"] = abs(float(res.h2) - inst.h2)
    else:
        res = inverse.recover(forward.dirichlet_neumann_spectra(J))
    row["matrix_residual"] = _residual(res.matrix, inst)
    return row


def run_trial(inst, mode, bits=EXTENDED_BITS):
    """Round trip one instance; returns a row with residuals and a status."""
    mode = Mode(mode)
    try:
        if bits > precision.DOUBLE_BITS:
            with precision.extended_precision(bits):
                row = _run(inst, mode)
        else:
            row = _run(inst, mode)
    except (JTSError, ArithmeticError, ValueError) as exc:
        return {"trial": inst.index, "n": inst.n, "h1": inst.h1, "h2": inst.h2,
                "matrix_residual": None, "h2_residual": None, "trace_residual": None,
                "status": f"error:{type(exc).__name__}"}
    ok = row["matrix_residual"] <= MATRIX_TOL
    if row["h2_residual"] is not None:
        ok = ok and row["h2_residual"] <= H2_TOL
    row["status"] = "ok" if ok else "fail"
    return row
