import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from jts import forward as F, precision
from jts import reconstruct as R
from jts.core import BreakdownBelowTolerance, JacobiMatrix, NumericalBlowup, SpectralMeasure

from conftest import PHI_HI, PHI_LO, random_jacobi

SYM = SpectralMeasure([(-1.0, 0.5), (1.0, 0.5)])
GOLDEN = SpectralMeasure([(PHI_LO, (5 + math.sqrt(5)) / 10), (PHI_HI, (5 - math.sqrt(5)) / 10)])


def test_stieltjes_examples():
    J = R.stieltjes_lanczos(SYM)
    assert np.allclose(J.q, [0, 0], atol=1e-15) and np.allclose(J.b, [1], atol=1e-15)
    assert R.stieltjes_lanczos(SpectralMeasure([(1.7, 1.0)])) == JacobiMatrix([1.7])
    J = R.stieltjes_lanczos(GOLDEN)
    assert np.allclose(J.q, [-1, 0], atol=1e-14) and np.allclose(J.b, [1], atol=1e-14)


def test_stieltjes_breakdown():
    m = SpectralMeasure([(0.0, 0.5), (1e-14, 0.5)])
    with pytest.raises(BreakdownBelowTolerance):
        R.stieltjes_lanczos(m)


def test_stieltjes_near_breakdown_warns():
    m = SpectralMeasure([(0.0, 0.5), (1e-9, 0.5)])
    with pytest.warns(R.NearBreakdownWarning):
        J = R.stieltjes_lanczos(m)
    assert J.b[0] > 0


def test_moments_examples():
    assert np.allclose(R.moments(SYM, 5), [1, 0, 1, 0, 1, 0], atol=1e-15)
    assert np.allclose(R.moments(SpectralMeasure([(1.5, 1.0)]), 4), [1.5 ** k for k in range(5)])
    assert abs(R.moments(GOLDEN, 1)[1] + 1) < 1e-14
    with pytest.raises(ValueError):
        R.moments(SYM, -1)


def test_ricatti_examples():
    J = R.ricatti_reconstruct(GOLDEN, 2)
    assert np.allclose(J.q, [-1, 0], atol=1e-6) and np.allclose(J.b, [1], atol=1e-6)
    assert R.ricatti_reconstruct(SpectralMeasure([(0.4, 1.0)]), 1).q == (0.4,)
    J = R.ricatti_reconstruct(SYM, 2)
    assert np.allclose(J.q, [0, 0], atol=1e-12) and np.allclose(J.b, [1], atol=1e-12)


def test_ricatti_depth_limits():
    with pytest.raises(ValueError):
        R.ricatti_reconstruct(SYM, 3)
    with pytest.raises(ValueError):
        R.ricatti_reconstruct(SYM, 0)
    m = F.normalizing_constants(random_jacobi(np.random.default_rng(0), 12))
    with pytest.raises(ValueError):
        R.ricatti_reconstruct(m, 11)


def test_ricatti_blowup_on_clustered_atoms():
    xs = [-1 + 1e-4 * k for k in range(5)] + [1 + 1e-4 * k for k in range(5)]
    m = SpectralMeasure([(x, 0.1) for x in xs])
    with pytest.raises(NumericalBlowup):
        R.ricatti_reconstruct(m, 10)


def test_ricatti_extended_precision_reaches_the_cap():
    J = random_jacobi(np.random.default_rng(4), 12)
    with precision.extended_precision(256):
        Je = JacobiMatrix(precision.to_extended(J.q), precision.to_extended(J.b))
        m = F.normalizing_constants(Je)
        cv = R.cross_validate(Je, R.ricatti_reconstruct(m, 10), 1e-30)
    assert cv.passed


def test_cross_validate():
    A = JacobiMatrix([0.0, 1.0, 2.0], [1.0, 1.0])
    assert R.cross_validate(A, A, 0).deviation == 0
    B = JacobiMatrix([1e-7, 1.0], [1.0])
    cv = R.cross_validate(A, B, 1e-6)
    assert cv.passed and abs(cv.deviation - 1e-7) < 1e-20 and cv.prefix == 2
    with pytest.raises(ValueError):
        R.cross_validate(B, A, 1.0)
    g = R.cross_validate(R.stieltjes_lanczos(GOLDEN), R.ricatti_reconstruct(GOLDEN, 2), 1e-6)
    assert g.passed


@pytest.mark.parametrize("seed", range(5))
def test_favard_round_trip(seed):
    rng = np.random.default_rng(seed)
    J = random_jacobi(rng, int(rng.integers(1, 31)))
    back = R.stieltjes_lanczos(F.normalizing_constants(J))
    assert np.allclose(back.q, J.q, atol=1e-9) and np.allclose(back.b, J.b, atol=1e-9)


def test_reconstructed_measure_matches():
    rng = np.random.default_rng(8)
    xs = np.sort(rng.uniform(-3, 3, 9))
    ws = rng.uniform(0.1, 1, 9)
    ws /= ws.sum()
    m = SpectralMeasure(list(zip(xs, ws)))
    back = F.normalizing_constants(R.stieltjes_lanczos(m))
    tol = 1e-9 * (1 + float(precision.spread(xs)))
    assert np.allclose(back.locations, xs, atol=tol) and np.allclose(back.weights, ws, atol=tol)


@given(st.integers(0, 10 ** 6), st.randoms(use_true_random=False))
def test_permuting_atoms_leaves_matrix_unchanged(seed, rnd):
    rng = np.random.default_rng(seed)
    m = F.normalizing_constants(random_jacobi(rng, int(rng.integers(1, 10))))
    atoms = list(m.atoms)
    rnd.shuffle(atoms)
    assert R.stieltjes_lanczos(SpectralMeasure.from_atoms(atoms)) == R.stieltjes_lanczos(m)


@given(st.integers(0, 10 ** 6))
def test_engines_agree(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 15))
    m = F.normalizing_constants(random_jacobi(rng, n))
    A = R.stieltjes_lanczos(m)
    assert all(b > 0 for b in A.b)
    depth = min(n, 8)
    assert R.cross_validate(A, R.ricatti_reconstruct(m, depth), 1e-6).passed


@given(st.integers(0, 10 ** 6))
def test_positivity_or_error(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 12))
    xs = np.sort(rng.uniform(-1, 1, n))
    ws = rng.uniform(0, 1, n) ** 6 + 1e-300
    ws /= ws.sum()
    try:
        m = SpectralMeasure(list(zip(xs, ws)))
    except Exception:
        return
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            J = R.stieltjes_lanczos(m)
    except BreakdownBelowTolerance:
        return
    assert all(b > 0 for b in J.b)
