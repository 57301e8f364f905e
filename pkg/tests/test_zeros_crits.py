import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from randzeros.ensembles import sample
from randzeros.projective import ProjectivePoint, apply_su2, chordal, random_su2, transform_polynomial
from randzeros.zeros_crits import (
    ZERO_RESIDUAL_TOL, DegenerateInputError, Kind, find_critical_points, find_zeros,
    find_zeros_batch, zero_residual,
)

from conftest import su2_spec


def test_monomial_zero_with_multiplicity():
    z = find_zeros([0, 0, 0, 1.0])
    assert len(z) == 1 and z.multiplicities[0] == 3
    assert np.allclose(z.points[0], [0, 1])


def test_simple_and_double_zeros():
    z = find_zeros([-1.0, 0, 1.0])
    assert sorted(np.round(z.affine().real, 12)) == [-1.0, 1.0]
    d = find_zeros([1.0, -2.0, 1.0])
    assert len(d) == 1 and d.multiplicities[0] == 2 and d.affine()[0] == pytest.approx(1.0, abs=1e-7)


def test_zero_at_infinity():
    z = find_zeros([1.0, 0, 0])
    assert z.multiplicities.tolist() == [2] and np.allclose(z.points[0], [1, 0])


def test_all_zero_rejected():
    with pytest.raises(DegenerateInputError):
        find_zeros([0, 0, 0])
    with pytest.raises(DegenerateInputError):
        find_critical_points([0.0, 0.0])


@pytest.mark.parametrize("N", [5, 40, 150])
def test_agrees_with_numpy_roots(N):
    for s in sample(su2_spec(N, seed=N), 10):
        got = find_zeros(s)
        assert got.total_multiplicity == N and got.kind is Kind.ZEROS
        ref = np.roots(s.polynomial()[::-1])
        from randzeros.projective import homogeneous_from_affine

        D = chordal(got.points[:, None], homogeneous_from_affine(ref)[None])
        i, j = linear_sum_assignment(D)
        assert D[i, j].max() < 1e-7
        assert np.all(got.residuals < ZERO_RESIDUAL_TOL)


def test_backward_error_tiny():
    s = sample(su2_spec(200, seed=3), 1)[0]
    z = find_zeros(s)
    assert zero_residual(s.polynomial(), z.points).max() < 1e-12


def test_wide_dynamic_range_no_spurious_deflation():
    # coefficients a_k sqrt(w_k) span ~60 decades at N=200; nothing is at 0 or infinity
    for s in sample(su2_spec(200, seed=4), 20):
        z = find_zeros(s)
        assert z.diagnostics["at_zero"] == 0 and z.diagnostics["at_infinity"] == 0
        assert len(z) == 200


def test_su2_equivariance(rng):
    s = sample(su2_spec(12, seed=8), 1)[0]
    a = s.polynomial()
    U = random_su2(rng)
    zb = find_zeros(transform_polynomial(a, U)).points
    mapped = apply_su2(U.conj().T, find_zeros(a).points)
    D = chordal(mapped[:, None], zb[None])
    assert D.min(axis=1).max() < 1e-9


def test_batch_matches_serial_and_threads():
    S = sample(su2_spec(30, seed=9), 12)
    serial = find_zeros_batch(S)
    threaded = find_zeros_batch(S, threads=3)
    assert all(np.array_equal(a.points, b.points) for a, b in zip(serial, threaded))


def test_bezout_count():
    bad = [s.index for s in sample(su2_spec(25, seed=10), 3000) if find_zeros(s).total_multiplicity != 25]
    assert bad == []


def test_crit_constant_section():
    c = find_critical_points([1.0, 0.0])
    # |s|_h = (1+|z|^2)^(-1/2): a single maximum at the origin
    assert len(c) == 1 and np.allclose(c.points[0], [0, 1])
    assert c.diagnostics["maxima"] == 1 and c.diagnostics["index_ok"]


def test_crit_monomial():
    c = find_critical_points([0, 0, 0, 1.0])
    # triple zero at 0 (degenerate critical point) and the maximum at infinity
    P = c.points
    assert len(c) == 2
    assert min(chordal(P, np.array([1, 0]))) < 1e-8 and min(chordal(P, np.array([0, 1]))) < 1e-12


def _chern_residual(a, N, z):
    p = np.polynomial.polynomial
    s = p.polyval(z, a)
    ds = p.polyval(z, p.polyder(a))
    scale = np.abs(p.polyval(np.abs(z), np.abs(p.polyder(a)))) * (1 + abs(z) ** 2) + N * abs(z) * np.abs(p.polyval(np.abs(z), np.abs(a)))
    return np.abs((1 + np.abs(z) ** 2) * ds - N * np.conj(z) * s) / scale


@pytest.mark.parametrize("N", [2, 7, 30])
def test_crits_solve_chern_equation_and_balance(N):
    for s in sample(su2_spec(N, seed=20 + N), 10):
        c = find_critical_points(s)
        assert c.kind is Kind.CRITS and c.diagnostics["index_ok"]
        assert c.diagnostics["maxima"] - c.diagnostics["saddles"] == 2 - N
        a = s.polynomial()
        z = c.affine()
        inner = np.abs(z) <= 1
        assert _chern_residual(a, N, z[inner]).max() < 1e-9
        # the outer half is checked in the reversed chart, where 1/z is the coordinate
        zo = 1 / z[~inner]
        assert _chern_residual(a[::-1], N, zo).max() < 1e-9 if zo.size else True


def test_crit_count_matches_known_mean():
    # expected number of critical points of |s|_h for the SU(2) ensemble:
    # (5N^2 - 8N + 4) / (3N - 2)
    N = 12
    counts = np.array([len(find_critical_points(s)) for s in sample(su2_spec(N, seed=31), 300)])
    expect = (5 * N * N - 8 * N + 4) / (3 * N - 2)
    assert abs(counts.mean() - expect) < 4 * counts.std() / np.sqrt(counts.size)


def test_crit_count_invariant_under_rotation(rng):
    s = sample(su2_spec(15, seed=40), 1)[0]
    a = s.polynomial()
    b = transform_polynomial(a, random_su2(rng))
    assert len(find_critical_points(a)) == len(find_critical_points(b))


def test_random_degree_50_residuals():
    for s in sample(su2_spec(50, seed=50), 50):
        z = find_zeros(s)
        assert z.total_multiplicity == 50 and z.residuals.max() < 1e-9


def test_coordinate_swap_correspondence():
    from randzeros.projective import fs_distance

    s = sample(su2_spec(15, seed=51), 1)[0]
    a = s.polynomial()
    z = find_zeros(a).points
    w = find_zeros(a[::-1]).points[:, ::-1]
    assert fs_distance(z[:, None], w[None]).min(axis=1).max() < 1e-10


def test_fs_distance_examples():
    from randzeros.projective import fs_distance

    p = ProjectivePoint.from_affine(0.3 + 0.2j)
    assert fs_distance(p, p) == 0.0
    assert fs_distance(ProjectivePoint(1, 0), ProjectivePoint(0, 1)) == pytest.approx(np.pi / 2)


def test_crit_count_stable_under_grid_doubling():
    same = 0
    S = sample(su2_spec(20, seed=52), 40)
    for s in S:
        same += len(find_critical_points(s, grid=40)) == len(find_critical_points(s, grid=80))
    assert same >= 0.95 * len(S)

