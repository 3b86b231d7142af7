"""Domain types, invariant checks and the JSON file formats.

Indexing convention: every list is stored sorted ascending and indices in
messages are 1-based, so ``lambda_1`` is the smallest eigenvalue. For finite
spectra this is equivalent to any of the sign-anchored integer enumerations
used for infinite sequences (where index 0 sits next to the origin); only a
shift of labels separates them.
"""

import cmath
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Any, Mapping, Optional, Sequence

from . import precision
from .precision import MPFR, eps_sep, format_number, is_finite, tol_norm


class JTSError(Exception):
    """Base class for errors raised by this package."""


class InvalidInstance(JTSError, ValueError):
    """A value would violate the invariants of the type being constructed."""

    SHOWN = 5

    def __init__(self, violations):
        self.violations = list(violations)
        text = "; ".join(self.violations[:self.SHOWN])
        if len(self.violations) > self.SHOWN:
            text += f"; and {len(self.violations) - self.SHOWN} more"
        super().__init__(text)


class DimensionTooSmall(JTSError, ValueError):
    pass


class ConvergenceFailure(JTSError, ArithmeticError):
    pass


class PoleProximity(JTSError, ValueError):
    pass


class DivisionByZero(JTSError, ZeroDivisionError):
    pass


class WrongMode(JTSError, ValueError):
    pass


class IndeterminateInterlacing(JTSError, ValueError):
    """Two spectral points are closer than the separation threshold."""

    condition = "a"


class NonPositiveTau(JTSError, ArithmeticError):
    pass


class NormalizationFailure(JTSError, ArithmeticError):
    pass


class IllConditionedFit(JTSError, ValueError):
    pass


class SpectrumMismatch(JTSError, ArithmeticError):
    pass


class BreakdownBelowTolerance(JTSError, ArithmeticError):
    pass


class NumericalBlowup(JTSError, ArithmeticError):
    pass


class ConditionFailure(JTSError, ValueError):
    """The input spectra fail one of the characterization conditions."""

    def __init__(self, condition, report=None, message=None):
        self.condition = condition
        self.report = report
        super().__init__(message or f"condition {condition}) failed")


class Mode(str, Enum):
    RANK_ONE = "rank_one"
    DIRICHLET_NEUMANN = "dirichlet_neumann"


def _num(x):
    if isinstance(x, MPFR):
        return x
    return float(x)


def _nums(xs):
    return tuple(_num(x) for x in xs)


# -- invariant checks -------------------------------------------------------

def _jacobi_violations(q, b):
    out = []
    n = len(q)
    if n < 1:
        return ["n must be at least 1"]
    if len(b) != n - 1:
        out.append(f"b has length {len(b)}, expected n-1 = {n - 1}")
    for k, x in enumerate(q, 1):
        if not is_finite(x):
            out.append(f"q_{k} not finite")
    for k, x in enumerate(b, 1):
        if not is_finite(x):
            out.append(f"b_{k} not finite")
        elif not x > 0:
            out.append(f"b_{k} not positive")
    return out


def _ascending_violations(name, xs):
    out = []
    for k, x in enumerate(xs, 1):
        if not is_finite(x):
            out.append(f"{name}_{k} not finite")
    if not out:
        for k in range(1, len(xs)):
            if not xs[k - 1] < xs[k]:
                out.append(f"{name} not strictly ascending at index {k + 1}")
                break
    return out


def _length_violations(lambdas, mus, mode):
    n = len(lambdas)
    if n < 1:
        return ["lambdas must be non-empty"]
    want = n if mode is Mode.RANK_ONE else n - 1
    if len(mus) != want:
        return [f"mus has length {len(mus)}, expected {want} for mode {mode.value}"]
    return []


def min_gap(lambdas, mus):
    """Smallest distance between two points of the merged list, with its location."""
    pts = sorted(list(lambdas) + list(mus))
    best = None
    where = None
    for k in range(1, len(pts)):
        g = pts[k] - pts[k - 1]
        if best is None or g < best:
            best, where = g, pts[k - 1]
    return best, where


def gap_violations(lambdas, mus):
    g, where = min_gap(lambdas, mus)
    if g is None:
        return []
    sep = eps_sep(list(lambdas) + list(mus))
    if g < sep:
        return [f"a) indeterminate: points near {float(where):.6g} are {float(g):.3g} apart, "
                f"below eps_sep {float(sep):.3g}"]
    return []


def interlacing_violations(lambdas, mus, mode):
    """Violations of condition a) for sorted, correctly sized lists."""
    out = []
    n = len(lambdas)
    if mode is Mode.RANK_ONE:
        for k in range(n):
            if k < n - 1:
                if not lambdas[k] < mus[k] < lambdas[k + 1]:
                    out.append(f"a) mu_{k + 1} not in (lambda_{k + 1}, lambda_{k + 2})")
            elif not lambdas[k] < mus[k]:
                out.append(f"a) mu_{n} not above lambda_{n}")
    else:
        for k in range(n - 1):
            if not lambdas[k] < mus[k] < lambdas[k + 1]:
                out.append(f"a) mu_{k + 1} not in (lambda_{k + 1}, lambda_{k + 2})")
    return out


def _spectra_violations(lambdas, mus, mode):
    out = _length_violations(lambdas, mus, mode)
    out += _ascending_violations("lambdas", lambdas)
    out += _ascending_violations("mus", mus)
    if out:
        return out
    return gap_violations(lambdas, mus) + interlacing_violations(lambdas, mus, mode)


def _measure_violations(xs, ws):
    out = []
    if not xs:
        return ["measure must have at least one atom"]
    out += _ascending_violations("locations", xs)
    for k, w in enumerate(ws, 1):
        if not is_finite(w):
            out.append(f"w_{k} not finite")
        elif not w > 0:
            out.append(f"w_{k} not positive")
    if not out:
        s = precision.fsum(ws)
        if abs(s - 1) > tol_norm(precision.is_extended(ws)):
            out.append(f"weights sum {float(s):.12g} ≠ 1")
    return out


# -- types ------------------------------------------------------------------

@dataclass(frozen=True)
class JacobiMatrix:
    """Finite Jacobi matrix with diagonal ``q`` (length n) and off-diagonal ``b`` (length n-1)."""

    q: Sequence
    b: Sequence = ()

    def __post_init__(self):
        object.__setattr__(self, "q", _nums(self.q))
        object.__setattr__(self, "b", _nums(self.b))
        bad = _jacobi_violations(self.q, self.b)
        if bad:
            raise InvalidInstance(bad)

    @property
    def n(self):
        return len(self.q)

    @property
    def extended(self):
        return precision.is_extended(self.q, self.b)

    def norm(self):
        """Infinity norm (maximum absolute row sum)."""
        n = self.n
        rows = []
        for k in range(n):
            r = abs(self.q[k])
            if k > 0:
                r += self.b[k - 1]
            if k < n - 1:
                r += self.b[k]
            rows.append(float(r))
        return max(rows)

    def to_dense(self):
        import numpy as np
        a = np.diag(np.array(self.q, dtype=float))
        if self.n > 1:
            b = np.array(self.b, dtype=float)
            a += np.diag(b, 1) + np.diag(b, -1)
        return a


@dataclass(frozen=True)
class BoundaryParam:
    """Boundary coupling at the origin: a finite ``h`` or the Neumann case (``h is None``)."""

    h: Optional[Any] = None

    @classmethod
    def finite(cls, h):
        h = _num(h)
        if not is_finite(h):
            raise InvalidInstance(["finite boundary parameter must be a finite real"])
        return cls(h)

    @classmethod
    def neumann(cls):
        return cls(None)

    @property
    def is_neumann(self):
        return self.h is None


@dataclass(frozen=True)
class InterlacedSpectra:
    """Two spectra: ``lambdas`` (poles) and ``mus`` (zeros), sorted ascending.

    Rank-one mode: ``lambdas`` is the spectrum for the larger coupling h2 and
    every ``mu_k`` lies in ``(lambda_k, lambda_{k+1})`` with ``mu_N`` above
    ``lambda_N``. Callers holding spectra with h2 < h1 swap the two lists.
    Dirichlet-Neumann mode: ``lambdas`` is the spectrum of J, ``mus`` that of J
    with the first row and column removed (one fewer point).
    """

    lambdas: Sequence
    mus: Sequence
    mode: Mode = Mode.RANK_ONE

    def __post_init__(self):
        object.__setattr__(self, "lambdas", _nums(self.lambdas))
        object.__setattr__(self, "mus", _nums(self.mus))
        object.__setattr__(self, "mode", Mode(self.mode))
        bad = _spectra_violations(self.lambdas, self.mus, self.mode)
        if bad:
            raise InvalidInstance(bad)

    @classmethod
    def unchecked(cls, lambdas, mus, mode=Mode.RANK_ONE):
        """Build without the interlacing invariants, for input that still has to be checked.

        Values must be finite and the lengths must fit the mode; the lists are sorted.
        """
        mode = Mode(mode)
        lambdas = tuple(sorted(_nums(lambdas)))
        mus = tuple(sorted(_nums(mus)))
        bad = _length_violations(lambdas, mus, mode)
        bad += [v for v in _ascending_violations("lambdas", lambdas) if "finite" in v]
        bad += [v for v in _ascending_violations("mus", mus) if "finite" in v]
        if bad:
            raise InvalidInstance(bad)
        obj = object.__new__(cls)
        object.__setattr__(obj, "lambdas", lambdas)
        object.__setattr__(obj, "mus", mus)
        object.__setattr__(obj, "mode", mode)
        return obj

    @property
    def n(self):
        return len(self.lambdas)

    @property
    def extended(self):
        return precision.is_extended(self.lambdas, self.mus)

    def spread(self):
        return precision.spread(self.lambdas + self.mus)

    def eps_sep(self):
        return eps_sep(self.lambdas + self.mus)


@dataclass(frozen=True)
class SpectralMeasure:
    """Finitely supported probability measure: atoms ``(location, weight)`` ascending.

    The weight of an atom is the reciprocal of its normalizing constant.
    """

    atoms: Sequence

    def __post_init__(self):
        atoms = tuple((_num(x), _num(w)) for x, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        bad = _measure_violations([a[0] for a in atoms], [a[1] for a in atoms])
        if bad:
            raise InvalidInstance(bad)

    @classmethod
    def from_atoms(cls, atoms):
        """Build from atoms in any order."""
        return cls(sorted(((_num(x), _num(w)) for x, w in atoms), key=lambda a: a[0]))

    @property
    def locations(self):
        return tuple(a[0] for a in self.atoms)

    @property
    def weights(self):
        return tuple(a[1] for a in self.atoms)

    @property
    def normalizing_constants(self):
        return tuple(1 / w for w in self.weights)

    @property
    def extended(self):
        return precision.is_extended(self.locations, self.weights)

    def __len__(self):
        return len(self.atoms)

    def rho(self, t):
        """Right-continuous distribution function: total weight of atoms at or below ``t``."""
        return precision.fsum(w for x, w in self.atoms if x <= t)


@dataclass(frozen=True)
class MFunctionProduct:
    """``front * prod (mu_k - z) / prod (lambda_k - z)`` with zeros ``mu`` and poles ``lambda``."""

    zeros: Sequence
    poles: Sequence
    front: Any = 1.0

    def __post_init__(self):
        object.__setattr__(self, "zeros", _nums(self.zeros))
        object.__setattr__(self, "poles", _nums(self.poles))
        object.__setattr__(self, "front", _num(self.front))
        bad = _ascending_violations("poles", self.poles)
        if set(self.zeros) & set(self.poles):
            bad.append("zeros and poles are not disjoint")
        if bad:
            raise InvalidInstance(bad)

    def __call__(self, z):
        """Evaluate at complex ``z`` (double precision).

        Zero k is paired with pole k; the product is accumulated as a log
        modulus and a phase.
        """
        z = complex(z)
        zeros = [float(m) for m in self.zeros]
        poles = [float(p) for p in self.poles]
        logmod = 0.0
        phase = 0.0
        for k in range(max(len(zeros), len(poles))):
            r = complex(1.0)
            if k < len(zeros):
                r *= zeros[k] - z
            if k < len(poles):
                r /= poles[k] - z
            logmod += math.log(abs(r))
            phase += cmath.phase(r)
        return float(self.front) * cmath.rect(math.exp(logmod), phase)


@dataclass(frozen=True)
class ReconstructionResult:
    matrix: JacobiMatrix
    recovered_param: Optional[BoundaryParam]
    delta: Optional[Any]
    diagnostics: Mapping[str, float] = field(default_factory=dict)
    mode: Mode = Mode.RANK_ONE

    def __post_init__(self):
        object.__setattr__(self, "diagnostics", MappingProxyType(dict(self.diagnostics)))
        if Mode(self.mode) is Mode.RANK_ONE and not (self.delta is not None and self.delta > 0):
            raise InvalidInstance(["delta must be positive in rank-one mode"])

    @property
    def h2(self):
        return None if self.recovered_param is None else self.recovered_param.h


def validate(obj):
    """List the invariants ``obj`` violates; an empty list means valid.

    Accepts instances of the domain types or plain mappings in the JSON
    layout (``{"q", "b"}``, ``{"lambdas", "mus", "mode"}``, ``{"atoms"}``).
    """
    if isinstance(obj, JacobiMatrix):
        return _jacobi_violations(obj.q, obj.b)
    if isinstance(obj, InterlacedSpectra):
        return _spectra_violations(obj.lambdas, obj.mus, obj.mode)
    if isinstance(obj, SpectralMeasure):
        return _measure_violations(obj.locations, obj.weights)
    if isinstance(obj, Mapping):
        if "q" in obj:
            return _jacobi_violations(list(obj["q"]), list(obj.get("b", [])))
        if "lambdas" in obj:
            mode = Mode(obj.get("mode", Mode.RANK_ONE))
            return _spectra_violations(list(obj["lambdas"]), list(obj["mus"]), mode)
        if "atoms" in obj:
            atoms = obj["atoms"]
            xs = [a["x"] if isinstance(a, Mapping) else a[0] for a in atoms]
            ws = [a["w"] if isinstance(a, Mapping) else a[1] for a in atoms]
            return _measure_violations(xs, ws)
    raise TypeError(f"cannot validate {type(obj).__name__}")


# -- JSON -------------------------------------------------------------------

def to_dict(obj):
    if isinstance(obj, JacobiMatrix):
        return {"n": obj.n, "q": list(obj.q), "b": list(obj.b)}
    if isinstance(obj, InterlacedSpectra):
        return {"mode": obj.mode.value, "lambdas": list(obj.lambdas), "mus": list(obj.mus)}
    if isinstance(obj, SpectralMeasure):
        return {"atoms": [{"x": x, "w": w} for x, w in obj.atoms]}
    if isinstance(obj, BoundaryParam):
        if obj.is_neumann:
            return {"kind": "neumann_infinity"}
        return {"kind": "finite", "h": obj.h}
    if isinstance(obj, ReconstructionResult):
        return {
            "mode": Mode(obj.mode).value,
            "matrix": to_dict(obj.matrix),
            "recovered_param": None if obj.recovered_param is None else to_dict(obj.recovered_param),
            "h2": obj.h2,
            "delta": obj.delta,
            "diagnostics": dict(obj.diagnostics),
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(data, indent=2):
    """JSON text with every real number written by :func:`precision.format_number`."""

    def emit(x, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if x is None or isinstance(x, (bool, str)):
            return json.dumps(x, ensure_ascii=False)
        if isinstance(x, int):
            return str(x)
        if isinstance(x, Enum):
            return json.dumps(x.value)
        if isinstance(x, (float, MPFR)) or hasattr(x, "__float__"):
            return format_number(x) if is_finite(x) else "null"
        if isinstance(x, Mapping):
            if not x:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {emit(v, level + 1)}" for k, v in x.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(x, (list, tuple)):
            if not x:
                return "[]"
            if all(not isinstance(v, (Mapping, list, tuple)) for v in x):
                return "[" + ", ".join(emit(v, level + 1) for v in x) + "]"
            return "[\n" + ",\n".join(pad + emit(v, level + 1) for v in x) + "\n" + end + "]"
        raise TypeError(f"cannot encode {type(x).__name__}")

    return emit(data, 0) + "\n"


def loads(text, extended=False):
    """Parse JSON; with ``extended`` every non-integer number becomes an mpfr."""
    if extended:
        return json.loads(text, parse_float=precision.to_extended)
    return json.loads(text)


def matrix_from_dict(d):
    q = list(d["q"])
    b = list(d.get("b", []))
    if "n" in d and int(d["n"]) != len(q):
        raise InvalidInstance([f"n = {d['n']} but q has {len(q)} entries"])
    return JacobiMatrix(q, b)


def spectra_from_dict(d, checked=True):
    mode = Mode(d.get("mode", Mode.RANK_ONE))
    if checked:
        return InterlacedSpectra(d["lambdas"], d["mus"], mode)
    return InterlacedSpectra.unchecked(d["lambdas"], d["mus"], mode)


def measure_from_dict(d):
    return SpectralMeasure.from_atoms((a["x"], a["w"]) for a in d["atoms"])
