import numpy as np
import pytest

from randzeros.ensembles import sample, sample_sequence
from randzeros.kacrice import annulus_average, k2_finite_curve
from randzeros.projective import ProjectivePoint, random_su2
from randzeros.statistics import (
    EqualAreaCells, PairCounts, critical_count_fit, critical_count_fit_from_counts, empirical_density,
    hole_probability, hole_probability_from_distances, pair_correlation_from_counts,
    pair_correlation_mc, pair_counts, poisson_samples, rotate_sample, sequence_equidistribution,
)
from randzeros.zeros_crits import Kind, PointProcessSample, find_critical_points, find_zeros, find_zeros_batch

from conftest import su2_spec


@pytest.fixture(scope="module")
def zeros100():
    return find_zeros_batch(sample(su2_spec(100, seed=77), 2000))


def test_cells_equal_area(rng):
    cells = EqualAreaCells.of_size(100)
    assert cells.size == 100 and np.allclose(cells.areas(), 0.01, atol=1e-10)
    x = rng.standard_normal((400000, 3))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    frac = np.bincount(cells.index(x), minlength=100) / x.shape[0]
    assert np.abs(frac - 0.01).max() < 5 * np.sqrt(0.01 / x.shape[0])


def test_density_of_monomial():
    h = empirical_density([find_zeros([0, 0, 0, 0, 1.0])], 100)
    cell = h.cells.index(np.array([[0, 0, -1.0]]))[0]
    assert h.mass[cell] == 1.0 and h.mass.sum() == 1.0
    assert h.counts.sum() == h.total_mass == 4
    with pytest.raises(ValueError):
        empirical_density([])


def test_density_rotation_equivariance():
    # a rotation by one sector about the polar axis permutes cells exactly
    cells = EqualAreaCells(10, 10)
    Z = find_zeros_batch(sample(su2_spec(30, seed=5), 300))
    ang = np.pi / 10
    U = np.diag([np.exp(1j * ang), np.exp(-1j * ang)])
    h = empirical_density(Z, cells)
    hr = empirical_density([rotate_sample(z, U) for z in Z], cells)
    expect = np.roll(h.counts.reshape(10, 10), 1, axis=1).ravel()
    assert np.abs(hr.counts - expect).sum() <= 0.002 * h.counts.sum()


def test_density_histogram_merge():
    Z = find_zeros_batch(sample(su2_spec(10, seed=6), 40))
    a, b = empirical_density(Z[:15]), empirical_density(Z[15:])
    whole = empirical_density(Z)
    for m in (a + b, b + a):
        assert np.allclose(m.counts, whole.counts) and np.allclose(m.mass, whole.mass)
        assert m.sample_count == 40


def test_density_crits_accepted():
    C = [find_critical_points(s) for s in sample(su2_spec(8, seed=7), 5)]
    h = empirical_density(C, 16)
    assert h.total_mass == sum(len(c) for c in C)


def test_poisson_calibration_pair_correlation():
    rng = np.random.default_rng(8)
    c = pair_correlation_mc(poisson_samples(100, 3000, rng), N=100)
    assert np.all(np.abs(c.values - 1) < 3 * c.stderr)


def test_poisson_calibration_hole():
    rng = np.random.default_rng(9)
    rep = hole_probability(poisson_samples(80, 4000, rng), D_grid=np.linspace(0, 2.5, 11))
    p = np.exp(-rep.D**2)
    sd = np.sqrt(p * (1 - p) / rep.n)
    assert rep.p[0] == 1.0
    assert np.all(np.abs(rep.p[1:] - p[1:]) < 3 * sd[1:])
    assert rep.slope == pytest.approx(-1.0, abs=4 * rep.slope_stderr)


def test_pair_counts_merge_is_order_free(zeros100):
    a = pair_counts(zeros100[:700], 100)
    b = pair_counts(zeros100[700:], 100)
    k1 = pair_correlation_from_counts(a + b).values
    k2 = pair_correlation_from_counts(b + a).values
    assert np.allclose(k1, k2, rtol=1e-13)
    with pytest.raises(ValueError):
        a + PairCounts(np.array([0.0, 1.0]), np.zeros((1, 1)), np.ones(1))


def test_pair_correlation_matches_kac_rice(zeros100):
    c = pair_correlation_mc(zeros100)
    ref = annulus_average(lambda r: k2_finite_curve(100, r).values, c.meta["edges"])
    covered = np.mean((c.ci_lo <= ref) & (ref <= c.ci_hi))
    assert covered >= 0.9
    assert c.values[0] < 0.1


def test_pair_correlation_low_confidence_flag():
    Z = find_zeros_batch(sample(su2_spec(100, seed=1), 5))
    c = pair_correlation_mc(Z)
    assert c.meta["low_confidence"][0]


def test_pair_correlation_requires_one_degree():
    Z = [find_zeros(sample(su2_spec(N, seed=1), 1)[0]) for N in (10, 12)]
    with pytest.raises(ValueError):
        pair_correlation_mc(Z)


def test_pair_correlation_center_invariance(zeros100):
    a = pair_correlation_mc(zeros100)
    b = pair_correlation_mc(zeros100, center=ProjectivePoint.from_affine(0.8 - 1.5j))
    z = (a.values - b.values) / np.hypot(a.stderr, b.stderr)
    assert np.all(np.abs(z) < 4)


def test_hole_probability_basics(zeros100):
    rep = hole_probability(zeros100)
    assert rep.p[0] == 1.0
    assert np.all(np.diff(rep.p) <= 0)
    assert np.all((rep.ci_lo <= rep.p) & (rep.p <= rep.ci_hi))
    assert rep.slope < 0 and rep.fit_points >= 3


def test_hole_probability_rotation_invariant(zeros100):
    U = random_su2(np.random.default_rng(3))
    rot = [rotate_sample(z, U) for z in zeros100]
    a = hole_probability(zeros100, D_grid=[0.5, 1.0, 1.5])
    b = hole_probability(rot, D_grid=[0.5, 1.0, 1.5])
    assert np.all(np.abs(a.p - b.p) < 4 * np.sqrt(a.p * (1 - a.p) / a.n) + 1e-12)


def test_hole_probability_guards():
    with pytest.raises(ValueError):
        hole_probability_from_distances(np.ones(10), [0.0, 1.0])
    rep = hole_probability_from_distances(np.full(1000, 5.0), np.linspace(0, 1, 5))
    assert np.isnan(rep.slope) and "skipped" in rep.diagnostic


def test_critical_fit_exact_line():
    counts = {N: np.array([2.0 * N + 1, 2.0 * N + 1.5, 2.0 * N + 0.5]) for N in (5, 10, 20)}
    fit = critical_count_fit_from_counts(counts)
    assert fit.gamma == pytest.approx(2.0) and fit.intercept == pytest.approx(1.0) and fit.r2 == pytest.approx(1.0)
    with pytest.raises(ValueError):
        critical_count_fit_from_counts({5: counts[5]})


def test_critical_fit_small_run():
    fit = critical_count_fit([6, 12, 24], 60, seed=3)
    assert fit.gamma > 1 and fit.r2 > 0.98 and sum(fit.excluded.values()) == 0


def test_sequence_of_monomials_stays_far():
    seq = [find_zeros(np.eye(N + 1)[N]) for N in (10, 20, 40)]
    tr = sequence_equidistribution(seq, 12)
    assert np.allclose(tr.tv, 1 - 1 / 12) and np.allclose(tr.cesaro_tv, 1 - 1 / 12)


def test_random_sequence_equidistributes():
    degrees = [10, 20, 40, 80, 160, 320]
    tr = sequence_equidistribution(sample_sequence(degrees, su2_spec(1, seed=11)), 12)
    assert tr.degrees == degrees
    assert tr.tv[-1] < tr.tv[0] and tr.cesaro_tv[-1] < tr.cesaro_tv[0]
    assert np.polyfit(np.log(degrees), np.log(tr.tv), 1)[0] < 0


def test_tv_repetition_oracle():
    wins = 0
    for rep in range(100):
        tr = sequence_equidistribution(sample_sequence([10, 320], su2_spec(1, seed=1000 + rep)), 12)
        wins += tr.tv[1] < tr.tv[0]
    assert wins >= 95


def test_poisson_samples_kind():
    s = poisson_samples(5, 3, np.random.default_rng(0), kind=Kind.CRITS)
    assert all(isinstance(x, PointProcessSample) and x.kind is Kind.CRITS for x in s)
