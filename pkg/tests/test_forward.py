import math

import numpy as np
import pytest
from hypothesis import example, given, strategies as st

from jts import forward as F
from jts.core import DimensionTooSmall, DivisionByZero, JacobiMatrix, PoleProximity, SpectralMeasure

from conftest import PHI_HI, PHI_LO, SQRT5, dense, random_jacobi

GOLDEN_W = (0.7236067977499790, 0.2763932022500210)  # (5 + sqrt5)/10, (5 - sqrt5)/10


def test_perturb(golden):
    assert F.perturb(golden, 1).q == (-1.0, 0.0)
    assert F.perturb(golden, 1).b == (1.0,)
    assert F.perturb(golden, 0) == golden
    assert F.perturb(JacobiMatrix([2.0]), 2).q == (0.0,)


def test_truncate_first(golden):
    assert F.truncate_first(golden) == JacobiMatrix([0.0])
    assert F.truncate_first(JacobiMatrix([1, 2, 3], [4, 5])) == JacobiMatrix([2, 3], [5])
    with pytest.raises(DimensionTooSmall):
        F.truncate_first(JacobiMatrix([1.0]))


def test_eigenvalues_examples(golden):
    assert np.allclose(F.eigenvalues(golden), [-1, 1], atol=1e-15)
    lo, hi = F.eigenvalues(JacobiMatrix([-1.0, 0.0], [1.0]))
    assert abs(lo - PHI_LO) < 1e-15 and abs(hi - PHI_HI) < 1e-15
    assert F.eigenvalues(JacobiMatrix([0.37])) == (0.37,)


@pytest.mark.parametrize("n", [3, 17, 60])
def test_eigenvalue_residuals(n):
    J = random_jacobi(np.random.default_rng(n), n)
    a = dense(J.q, J.b)
    lams = F.eigenvalues(J)
    assert all(x < y for x, y in zip(lams, lams[1:]))
    _, vecs = np.linalg.eigh(a)
    norm = np.abs(a).sum(axis=1).max()
    for lam, v in zip(lams, vecs.T):
        assert np.linalg.norm(a @ v - lam * v) <= 1e-14 * norm * 10


def test_eval_polys_examples(golden):
    t = F.eval_polys(golden, 1.0)
    assert t.values == (1.0, 1.0) and t.kind is F.PolyKind.FIRST
    s = F.eval_polys(JacobiMatrix([1.0, 2.0, 3.0], [2.0, 4.0]), 0.5, F.PolyKind.SECOND)
    assert s.values[:2] == (0.0, 0.5)
    t = F.eval_polys(JacobiMatrix([-1.0, 0.0], [1.0]), PHI_HI)
    assert t.values[0] == 1 and abs(t.values[1] - (PHI_HI + 1)) < 1e-15


def test_first_kind_polynomials_are_eigenvector_ratios():
    J = random_jacobi(np.random.default_rng(1), 6)
    lams, vecs = np.linalg.eigh(dense(J.q, J.b))
    for lam, v in zip(lams, vecs.T):
        assert np.allclose(F.eval_polys(J, lam).values, v / v[0], rtol=1e-9)


def test_second_kind_satisfies_recurrence_with_complex_argument():
    J = random_jacobi(np.random.default_rng(2), 5)
    z = 0.3 + 0.7j
    Q = F.eval_polys(J, z, F.PolyKind.SECOND).values
    q, b = J.q, J.b
    for k in range(2, 5):
        assert abs(b[k - 2] * Q[k - 2] + q[k - 1] * Q[k - 1] + b[k - 1] * Q[k] - z * Q[k - 1]) < 1e-12


def test_normalizing_constants_examples(golden):
    m = F.normalizing_constants(golden)
    assert np.allclose(m.locations, [-1, 1]) and np.allclose(m.weights, [0.5, 0.5], atol=1e-15)
    assert F.normalizing_constants(JacobiMatrix([4.0])).atoms == ((4.0, 1.0),)
    m = F.normalizing_constants(JacobiMatrix([-1.0, 0.0], [1.0]))
    assert np.allclose(m.weights, GOLDEN_W, atol=1e-15)
    # alpha_1 = 1 + ((1 - sqrt5)/2)^2 = (5 - sqrt5)/2
    assert abs(m.normalizing_constants[0] - (5 - SQRT5) / 2) < 1e-14


def test_alpha_equals_polynomial_sum():
    J = random_jacobi(np.random.default_rng(7), 9)
    m = F.normalizing_constants(J)
    for x, w in m.atoms:
        alpha = math.fsum(p * p for p in F.eval_polys(J, x).values)
        assert abs(alpha * w - 1) < 1e-10


def test_weyl_m_examples():
    one = SpectralMeasure([(2.0, 1.0)])
    assert F.weyl_m(one, 2 + 1j) == pytest.approx(1j)
    sym = SpectralMeasure([(-1.0, 0.5), (1.0, 0.5)])
    assert F.weyl_m(sym, 0) == 0
    # 0.5/(-1 - 2i) + 0.5/(1 - 2i) = 0.5 ((-1 + 2i) + (1 + 2i)) / 5 = 0.4i
    assert abs(F.weyl_m(sym, 2j) - 0.4j) < 1e-16
    with pytest.raises(PoleProximity):
        F.weyl_m(sym, 1 + 1e-14j)


def test_m_transform():
    assert F.m_transform(0.3 + 0.2j, 0) == 0.3 + 0.2j
    assert F.m_transform(1j, 1) == pytest.approx((-1 + 1j) / 2)
    with pytest.raises(DivisionByZero):
        F.m_transform(0.5, 2.0)


def test_m_transform_matches_perturbed_measure():
    J = JacobiMatrix([-1.0, 0.0], [1.0])
    for h in (1.0, -0.7, 2.5):
        for z in (3j, 0.5 + 1j, -2 - 0.1j):
            lhs = F.m_transform(F.weyl_m(F.normalizing_constants(J), z), h)
            rhs = F.weyl_m(F.normalizing_constants(F.perturb(J, h)), z)
            assert abs(lhs - rhs) < 1e-14


def test_m_infinity(golden):
    z = 2j
    m = F.weyl_m(F.normalizing_constants(golden), z)
    assert abs(F.m_infinity(m, z, 0.0, 1.0) - 1 / (0 - z)) < 1e-15
    z = 0.4 + 1j
    assert F.m_infinity(-1 / (z - 0.3), z, 0.3, 1.0) == 0
    m = 0.2 - 0.5j
    assert F.m_infinity(m, z, 0.3, 2.0) == pytest.approx(F.m_infinity(m, z, 0.3, 1.0) / 4)
    with pytest.raises(DivisionByZero):
        F.m_infinity(0, z, 0, 1)


def test_m_infinity_random():
    J = random_jacobi(np.random.default_rng(3), 7)
    for z in (1j, 2 - 0.5j, -3 + 4j):
        m = F.weyl_m(F.normalizing_constants(J), z)
        want = F.weyl_m(F.normalizing_constants(F.truncate_first(J)), z)
        assert abs(F.m_infinity(m, z, J.q[0], J.b[0]) - want) < 1e-12


def test_asymptotic_coeffs(golden):
    J = JacobiMatrix([2.0, 0.0], [3.0])
    assert F.asymptotic_coeffs(J, 1.0) == (-1.0, -1.0, -10.0)
    assert F.asymptotic_coeffs(J, 2.0)[1] == 0
    assert F.asymptotic_coeffs(golden, 0.0) == (-1.0, 0.0, -1.0)
    with pytest.raises(DimensionTooSmall):
        F.asymptotic_coeffs(JacobiMatrix([1.0]), 0.0)


def test_asymptotic_fit_by_sampling():
    J = JacobiMatrix([2.0, 0.0], [3.0])
    fit = F.fit_asymptotic_coeffs(F.normalizing_constants(F.perturb(J, 1.0)))
    assert fit == pytest.approx((-1, -1, -10), rel=1e-4)
    m = F.normalizing_constants(JacobiMatrix([0.0, 0.0], [1.0]))
    c1, c2, c3 = F.fit_asymptotic_coeffs(m)
    assert abs(c1 + 1) < 1e-4 and abs(c2) < 1e-4 and abs(c3 + 1) < 1e-4
    # the m-function sampled far out matches the three-term expansion
    z = 1e4j
    approx = -1 / z - 1 / z ** 3
    assert abs(F.weyl_m(m, z) - approx) < 1e-15


def test_eigen_sensitivity_examples():
    assert F.eigen_sensitivity(JacobiMatrix([1.5]), 0.3, 1) == -1.0
    g = JacobiMatrix([0.0, 0.0], [1.0])
    assert abs(F.eigen_sensitivity(g, 1.0, 1) + GOLDEN_W[0]) < 1e-12
    J = random_jacobi(np.random.default_rng(4), 6)
    assert math.fsum(F.eigen_sensitivity(J, 0.4, k) for k in range(1, 7)) == pytest.approx(-1, abs=1e-12)
    with pytest.raises(ValueError):
        F.eigen_sensitivity(J, 0.0, 7)


def test_eigen_sensitivity_against_finite_difference():
    J = random_jacobi(np.random.default_rng(5), 8)
    for k in range(1, 9):
        assert abs(F.eigen_sensitivity(J, -0.5, k) - F.eigen_sensitivity_fd(J, -0.5, k)) < 1e-5


def test_spectra_helpers(golden):
    s = F.rank_one_spectra(golden, 0.0, 1.0)
    assert np.allclose(s.lambdas, [PHI_LO, PHI_HI], atol=1e-15)
    assert np.allclose(s.mus, [-1, 1], atol=1e-15)
    d = F.dirichlet_neumann_spectra(golden)
    assert np.allclose(d.lambdas, [-1, 1]) and d.mus == (0.0,)
    assert F.dirichlet_neumann_spectra(JacobiMatrix([2.0])).mus == ()
    with pytest.raises(ValueError):
        F.rank_one_spectra(golden, 1.0, 0.0)


matrices = st.integers(1, 14).flatmap(lambda n: st.tuples(
    st.lists(st.floats(-2, 2), min_size=n, max_size=n),
    st.lists(st.floats(0.5, 2), min_size=n - 1, max_size=n - 1)))
couplings = st.tuples(st.floats(-3, 3), st.floats(-3, 3)).filter(lambda h: abs(h[0] - h[1]) > 1e-3)


@given(matrices, couplings)
def test_rank_one_interlacing_and_trace(qb, hs):
    J = JacobiMatrix(*qb)
    h1, h2 = sorted(hs)
    lams = F.eigenvalues(F.perturb(J, h2))
    mus = F.eigenvalues(F.perturb(J, h1))
    # strict in exact arithmetic; a weight near zero can pin lambda to mu in double
    for k in range(J.n):
        assert lams[k] <= mus[k]
        if k + 1 < J.n:
            assert mus[k] <= lams[k + 1]
    assert abs(math.fsum(mus) - math.fsum(lams) - (h2 - h1)) <= 1e-10 * max(1.0, J.norm())


@given(matrices)
def test_cauchy_interlacing(qb):
    J = JacobiMatrix(*qb)
    if J.n < 2:
        return
    lams = F.eigenvalues(J)
    mus = F.eigenvalues(F.truncate_first(J))
    assert all(lams[k] <= mus[k] <= lams[k + 1] for k in range(J.n - 1))


@given(matrices, st.floats(-5, 5), st.floats(1e-3, 1e3), st.booleans())
def test_herglotz(qb, x, y, lower):
    m = F.normalizing_constants(JacobiMatrix(*qb))
    z = complex(x, -y if lower else y)
    assert F.weyl_m(m, z).imag * z.imag > 0


@given(matrices)
@example(([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, -2.0], [1.0, 1.25, 0.5, 0.5, 1.0, 0.5, 1.75]))
def test_normalization_and_residues(qb):
    m = F.normalizing_constants(JacobiMatrix(*qb))
    assert abs(math.fsum(m.weights) - 1) <= 1e-10
    for n in range(1, len(m) + 1):
        # the offset must stay well inside the gap to the nearest other atom
        xs = m.locations
        gap = min([abs(xs[n - 1] - x) for k, x in enumerate(xs) if k != n - 1], default=1.0)
        if gap < 1e-3:
            continue
        assert abs(F.local_residue(m, n, offset=1e-9) - m.weights[n - 1]) < 1e-8
