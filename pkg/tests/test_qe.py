import numpy as np
import pytest
from scipy.special import eval_legendre

from randzeros.qe import (
    SymbolFunction, cosphere_grid, diagonal_elements, even_test_symbol, expected_s2,
    geodesic_symbol_average, multiplication_matrix, odd_test_symbol, off_diagonal_profile,
    predicted_constant, random_test_symbol, s2_draws, s2_statistic, variance_report,
)
from randzeros.ensembles import sample_random_onb
from randzeros.sphere import quadrature_s2, random_rotation


def funk_hecke_constant(f):
    # great-circle average of Y_l^k with normal n is P_l(0) Y_l^k(n), and the
    # normals of great circles are uniform under the Liouville measure
    return sum(eval_legendre(l, 0.0) ** 2 * np.sum(f.degree_block(l) ** 2) for l in range(1, f.degree + 1)) / (4 * np.pi)


def test_even_symbol_is_x3_squared(rng):
    f = even_test_symbol()
    x = rng.standard_normal((10, 3))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    assert np.allclose(f.evaluate(x), x[:, 2] ** 2)
    assert f.mean == pytest.approx(1 / 3)


def test_from_function_projection():
    f = SymbolFunction.from_function(lambda x: x[:, 2] ** 2, 2)
    g = even_test_symbol()
    assert set(f.coeffs) == set(g.coeffs)
    assert all(f.coeffs[k] == pytest.approx(g.coeffs[k], abs=1e-13) for k in g.coeffs)


def test_json_round_trip():
    f = random_test_symbol(3, seed=4)
    g = SymbolFunction.from_json(f.to_json())
    assert g.coeffs == pytest.approx(f.coeffs)
    h = SymbolFunction.from_json('[{"l": 1, "k": 0, "coeff": 2.0}]')
    assert h.coeffs == {(1, 0): 2.0}
    with pytest.raises(ValueError):
        SymbolFunction({(1, 2): 1.0})
    with pytest.raises(ValueError):
        SymbolFunction({(1, 0): np.nan})


def test_constant_symbol_gives_zero():
    f = SymbolFunction.constant(2.5)
    assert s2_statistic(6, f, 5, seed=0)[0] < 1e-28
    assert predicted_constant(f) == pytest.approx(0.0, abs=1e-28)


def test_s2_invariant_under_constant_shift():
    f = random_test_symbol(3, seed=1)
    a = s2_draws(8, f, 20, seed=2)
    b = s2_draws(8, f + 3.0, 20, seed=2)
    assert np.allclose(a, b, rtol=1e-9)


def test_odd_symbol():
    f = odd_test_symbol()
    assert predicted_constant(f) < 1e-28
    # by parity every matrix element of an odd multiplier vanishes on one eigenspace
    for N in (5, 20):
        assert np.abs(multiplication_matrix(N, f)).max() < 1e-13


def test_exact_expectation_matches_monte_carlo():
    f = random_test_symbol(3, seed=5)
    m, se = s2_statistic(12, f, 500, seed=6)
    assert abs(m - expected_s2(12, f)) < 4 * se


def test_funk_hecke_oracle():
    assert predicted_constant(even_test_symbol()) == pytest.approx(1 / 45, abs=1e-14)
    for seed in (0, 1):
        f = random_test_symbol(5, seed=seed)
        assert predicted_constant(f) == pytest.approx(funk_hecke_constant(f), rel=1e-12)


def test_predicted_constant_refinement():
    f = even_test_symbol()
    assert abs(predicted_constant(f) - predicted_constant(f, order=10, n_dir=32)) < 1e-4


def test_geodesic_average_examples():
    f = even_test_symbol()
    eq = geodesic_symbol_average(f, [[1, 0, 0]], [[0, 1, 0]])
    polar = geodesic_symbol_average(f, [[1, 0, 0]], [[0, 0, 1]])
    assert eq[0] == pytest.approx(0.0, abs=1e-14) and polar[0] == pytest.approx(0.5)
    X, V, _ = cosphere_grid(3, 6)
    assert np.allclose(geodesic_symbol_average(SymbolFunction.constant(1.7), X, V), 1.7)
    assert np.allclose(geodesic_symbol_average(odd_test_symbol(), X, V), 0.0, atol=1e-14)


def test_cosphere_grid_is_unit_tangent():
    X, V, W = cosphere_grid(4, 6)
    assert np.allclose(np.linalg.norm(V, axis=1), 1) and np.allclose(np.sum(X * V, axis=1), 0, atol=1e-14)
    assert W.sum() == pytest.approx(1.0)


def test_aliasing_guard():
    f = even_test_symbol()
    with pytest.raises(ValueError):
        multiplication_matrix(10, f, order=12)
    multiplication_matrix(10, f, order=13)


def test_multiplication_matrix_trace():
    # trace = sum_k int f Y_k^2 = (2N+1) fbar by the addition theorem
    f = random_test_symbol(4, seed=2)
    assert np.trace(multiplication_matrix(9, f)) == pytest.approx(19 * f.mean)


def test_rotation_invariance():
    f = random_test_symbol(3, seed=7)
    R = random_rotation(np.random.default_rng(8))
    g = f.rotated(R)
    pts, _ = quadrature_s2(4)
    assert np.allclose(g.evaluate(pts), f.evaluate(pts @ R))
    assert expected_s2(10, g) == pytest.approx(expected_s2(10, f), rel=1e-10)
    a, sa = s2_statistic(10, f, 300, seed=9)
    b, sb = s2_statistic(10, g, 300, seed=10)
    assert abs(a - b) < 2 * np.hypot(sa, sb)


def test_even_symbol_decreasing():
    rep = variance_report([20, 40, 80], even_test_symbol(), 100, seed=11)
    assert np.all(np.diff(rep.s2_mean) < 0) and np.all(rep.s2_mean > 0)
    assert np.all(rep.s2_stderr >= 0)


def test_threads_reproducible():
    f = even_test_symbol()
    assert np.array_equal(s2_draws(10, f, 16, seed=3), s2_draws(10, f, 16, seed=3, threads=4))


def test_off_diagonal_profile():
    Q = sample_random_onb(21, seed=1)
    prof = off_diagonal_profile(10, even_test_symbol(), Q)
    assert set(prof) == {1, 2, 4, 8} and all(v > 0 for v in prof.values())
    M = multiplication_matrix(10, even_test_symbol())
    assert np.allclose(diagonal_elements(M, Q), np.diag(Q.T @ M @ Q))
