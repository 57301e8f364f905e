"""Monte Carlo estimators over sampled zero and critical-point sets.

Distances are measured by the scaled chordal separation
r = sqrt(N) * sin(d_FS), which is |u1 - u2| in Heisenberg coordinates
u = sqrt(N) z near the center, and is exact on the whole sphere: a cap of
scaled radius r has Fubini-Study volume r**2 / N.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .ensembles import EnsembleSpec, Family, Measure, sample
from .kacrice import CorrelationCurve, Source
from .projective import ProjectivePoint, apply_su2, to_sphere
from .zeros_crits import Kind, PointProcessSample, find_critical_points, find_zeros

ORIGIN = ProjectivePoint(0.0, 1.0)


@dataclass(frozen=True)
class EqualAreaCells:
    """Partition of the sphere into bands of equal height times equal sectors.

    Equal height in x3 means equal area, so every cell has Fubini-Study
    volume 1 / (n_bands * n_sectors).
    """

    n_bands: int = 10
    n_sectors: int = 10

    @classmethod
    def of_size(cls, cells):
        if isinstance(cells, EqualAreaCells):
            return cells
        cells = int(cells)
        b = int(np.sqrt(cells))
        while cells % b:
            b -= 1
        return cls(b, cells // b)

    @property
    def size(self):
        return self.n_bands * self.n_sectors

    def index(self, x):
        x = np.atleast_2d(x)
        band = np.clip(((x[:, 2] + 1.0) / 2.0 * self.n_bands).astype(int), 0, self.n_bands - 1)
        phi = np.mod(np.arctan2(x[:, 1], x[:, 0]), 2 * np.pi)
        sector = np.clip((phi / (2 * np.pi) * self.n_sectors).astype(int), 0, self.n_sectors - 1)
        return band * self.n_sectors + sector

    def areas(self):
        return np.full(self.size, 1.0 / self.size)

    def centers(self):
        """(theta, phi) of each cell center, in cell-index order."""
        b = (np.arange(self.n_bands) + 0.5) / self.n_bands * 2.0 - 1.0
        p = (np.arange(self.n_sectors) + 0.5) / self.n_sectors * 2 * np.pi
        theta = np.repeat(np.arccos(b), self.n_sectors)
        phi = np.tile(p, self.n_bands)
        return theta, phi


@dataclass
class DensityHistogram:
    cells: EqualAreaCells
    counts: np.ndarray
    mass: np.ndarray
    total_mass: float
    sample_count: int

    def chi_square(self):
        """Chi-square test of the raw counts against the uniform measure."""
        expected = np.full(self.cells.size, self.counts.sum() / self.cells.size)
        res = stats.chisquare(self.counts, expected)
        return float(res.statistic), float(res.pvalue)

    def tv_from_uniform(self):
        return 0.5 * float(np.abs(self.mass - self.cells.areas()).sum())

    def __add__(self, other):
        if self.cells != other.cells:
            raise ValueError("histograms on different cells")
        n = self.sample_count + other.sample_count
        mass = (self.mass * self.sample_count + other.mass * other.sample_count) / n
        return DensityHistogram(self.cells, self.counts + other.counts, mass, self.total_mass + other.total_mass, n)


def _weighted_sphere(s):
    x = s.sphere()
    return x, s.multiplicities.astype(float)


def empirical_density(samples, cells=100):
    """Histogram of mass-normalized point measures over equal-area cells."""
    samples = list(samples)
    if not samples:
        raise ValueError("no samples")
    grid = EqualAreaCells.of_size(cells)
    counts = np.zeros(grid.size)
    mass = np.zeros(grid.size)
    for s in samples:
        x, m = _weighted_sphere(s)
        c = np.bincount(grid.index(x), weights=m, minlength=grid.size) if len(s) else np.zeros(grid.size)
        counts += c
        if c.sum() > 0:
            mass += c / c.sum()
    return DensityHistogram(grid, counts, mass / len(samples), float(counts.sum()), len(samples))


def rotate_sample(s, U):
    """Apply an SU(2) matrix to every point of a sample."""
    return PointProcessSample(s.kind, s.N, apply_su2(U, s.points), s.multiplicities, s.residuals, dict(s.diagnostics))


def _center_vector(center):
    if isinstance(center, ProjectivePoint):
        center = center.as_array()
    center = np.asarray(center)
    if center.shape == (3,) and np.isrealobj(center):
        return center / np.linalg.norm(center)
    return to_sphere(np.asarray(center, dtype=complex).reshape(1, 2))[0]


def scaled_distances(N, x, y):
    """sqrt(N) * chordal distance between rows of x and rows of y (sphere points)."""
    d = np.linalg.norm(x[:, None, :] - y[None, :, :], axis=-1)
    return np.sqrt(N) * 0.5 * d


@dataclass
class PairCounts:
    """Per-sample pair counts; adding two accumulators merges their samples."""

    edges: np.ndarray
    counts: np.ndarray  # (samples, bins)
    refs: np.ndarray  # (samples,)

    def __add__(self, other):
        if not np.array_equal(self.edges, other.edges):
            raise ValueError("different radial bins")
        return PairCounts(self.edges, np.vstack([self.counts, other.counts]), np.concatenate([self.refs, other.refs]))


def pair_counts(samples, N, center=ORIGIN, edges=None, window=None):
    """Reference-to-partner pair counts in scaled annuli.

    References are points within scaled distance ``window`` of the center
    (default: the outer bin edge).  With an analysis region of twice the
    outer edge, every annulus around a reference lies inside the region, so
    no further edge correction is needed.
    """
    edges = np.linspace(0.0, 5.0, 21) if edges is None else np.asarray(edges, dtype=float)
    if edges[-1] >= np.sqrt(N):
        raise ValueError("outer bin edge must stay below sqrt(N)")
    window = edges[-1] if window is None else window
    c = _center_vector(center)
    rows, refs = [], []
    for s in samples:
        x, m = _weighted_sphere(s)
        x = np.repeat(x, m.astype(int), axis=0)
        rc = np.sqrt(N) * 0.5 * np.linalg.norm(x - c, axis=1)
        ref = rc <= window
        cnt = np.zeros(edges.size - 1)
        if ref.any():
            d = scaled_distances(N, x[ref], x)
            d = d[d > 0]
            cnt = np.histogram(d, bins=edges)[0].astype(float)
        rows.append(cnt)
        refs.append(float(ref.sum()))
    return PairCounts(edges, np.array(rows).reshape(-1, edges.size - 1), np.array(refs))


def pair_correlation_from_counts(pc, N=None, z=1.96, min_pairs=100):
    edges = pc.edges
    area = edges[1:] ** 2 - edges[:-1] ** 2
    n = pc.counts.shape[0]
    y = pc.counts / area[None, :]
    xref = pc.refs
    tot = xref.sum()
    kappa = y.sum(0) / tot if tot > 0 else np.full(area.size, np.nan)
    # delta-method standard error of the ratio estimator over samples
    resid = y - kappa[None, :] * xref[:, None]
    se = np.sqrt(n / max(n - 1, 1) * np.sum(resid**2, axis=0)) / tot if tot > 0 else np.full(area.size, np.nan)
    npairs = pc.counts.sum(0)
    radii = 0.5 * (edges[1:] + edges[:-1])
    return CorrelationCurve(
        radii, kappa, Source.MC, N=N, stderr=se, ci_lo=kappa - z * se, ci_hi=kappa + z * se,
        npairs=npairs,
        meta={"edges": edges.tolist(), "low_confidence": (npairs < min_pairs).tolist(), "samples": int(n), "references": float(tot)},
    )


def pair_correlation_mc(samples, center=ORIGIN, N=None, edges=None, window=None):
    """Monte Carlo pair correlation kappa-hat(r) in scaled coordinates.

    kappa-hat in each annulus is (partner count) / (references * expected
    count at intensity N), the expected count being r_b^2 - r_a^2 for an
    annulus of scaled radii [r_a, r_b].  Bins with fewer than 100 aggregate
    pairs are flagged in ``meta['low_confidence']``.
    """
    samples = list(samples)
    if N is None:
        Ns = {s.N for s in samples}
        if len(Ns) != 1:
            raise ValueError("all samples must share one degree")
        N = Ns.pop()
    return pair_correlation_from_counts(pair_counts(samples, N, center, edges, window), N)


@dataclass
class HoleProbabilityReport:
    D: np.ndarray
    p: np.ndarray
    ci_lo: np.ndarray
    ci_hi: np.ndarray
    empty: np.ndarray
    n: int
    slope: float = np.nan
    intercept: float = np.nan
    slope_stderr: float = np.nan
    r2: float = np.nan
    fit_range: tuple = (1e-3, 0.5)
    fit_points: int = 0
    diagnostic: str = ""


def nearest_scaled_distance(samples, N, center=ORIGIN):
    """Scaled chordal distance from the center to the nearest point, per sample."""
    c = _center_vector(center)
    out = np.empty(len(samples))
    for i, s in enumerate(samples):
        x = s.sphere()
        out[i] = np.sqrt(N) * 0.5 * np.linalg.norm(x - c, axis=1).min() if len(s) else np.inf
    return out


def _wilson(k, n, conf=0.95):
    ci = stats.binomtest(int(k), int(n)).proportion_ci(confidence_level=conf, method="wilson")
    return ci.low, ci.high


def hole_probability_from_distances(nearest, D_grid, fit_range=(1e-3, 0.5), min_samples=1000):
    nearest = np.asarray(nearest, dtype=float)
    n = nearest.size
    if n < min_samples:
        raise ValueError(f"hole probability needs at least {min_samples} samples, got {n}")
    D = np.asarray(D_grid, dtype=float)
    empty = np.array([(nearest >= d).sum() for d in D])
    p = empty / n
    ci = np.array([_wilson(k, n) for k in empty])
    rep = HoleProbabilityReport(D, p, ci[:, 0], ci[:, 1], empty, n, fit_range=tuple(fit_range))
    lo, hi = fit_range
    sel = (p >= lo) & (p <= hi) & (p > 0) & (p < 1)
    rep.fit_points = int(sel.sum())
    if sel.sum() < 3:
        rep.diagnostic = "fewer than 3 grid points inside the fit range; fit skipped"
        return rep
    x = D[sel] ** 2
    y = np.log(p[sel])
    w = n * p[sel] / (1.0 - p[sel])  # inverse variance of log p-hat
    X = np.stack([x, np.ones_like(x)], 1)
    W = np.diag(w)
    cov = np.linalg.inv(X.T @ W @ X)
    beta = cov @ X.T @ W @ y
    yhat = X @ beta
    ybar = np.sum(w * y) / w.sum()
    rep.slope, rep.intercept = float(beta[0]), float(beta[1])
    dof = max(sel.sum() - 2, 1)
    s2 = np.sum(w * (y - yhat) ** 2) / dof
    rep.slope_stderr = float(np.sqrt(cov[0, 0] * max(s2, 1.0)))
    rep.r2 = float(1.0 - np.sum(w * (y - yhat) ** 2) / np.sum(w * (y - ybar) ** 2))
    return rep


def hole_probability(samples, z0=ORIGIN, D_grid=None, N=None, fit_range=(1e-3, 0.5), min_samples=1000):
    """Empirical probability that the ball of scaled radius D around z0 has no zeros.

    Wilson 95% intervals per D, and a weighted least-squares fit of
    log P-hat against D^2 over the grid points with P-hat in ``fit_range``.
    """
    samples = list(samples)
    if N is None:
        N = samples[0].N
    D_grid = np.linspace(0.0, 3.0, 31) if D_grid is None else D_grid
    return hole_probability_from_distances(nearest_scaled_distance(samples, N, z0), D_grid, fit_range, min_samples)


@dataclass
class CriticalCountFit:
    gamma: float
    stderr: float
    intercept: float
    intercept_stderr: float
    r2: float
    degrees: list
    means: list
    sems: list
    excluded: dict = field(default_factory=dict)


def critical_counts(N, count, seed=0, start=0, grid=40):
    """Critical-point counts of ``count`` Gaussian SU(2) samples of degree N.

    Samples whose index certificate fails are reported separately and
    excluded from the returned counts.
    """
    spec = EnsembleSpec(Family.SU2_POLY, N, Measure.GAUSSIAN, seed)
    good, bad = [], 0
    for s in sample(spec, count, start):
        c = find_critical_points(s, grid=grid)
        if c.diagnostics["index_ok"]:
            good.append(len(c))
        else:
            bad += 1
    return np.array(good, dtype=float), bad


def critical_count_fit_from_counts(counts_by_degree, excluded=None):
    degrees = sorted(counts_by_degree)
    if len(degrees) < 2:
        raise ValueError("need at least two degrees")
    means = np.array([counts_by_degree[N].mean() for N in degrees])
    sems = np.array([counts_by_degree[N].std(ddof=1) / np.sqrt(counts_by_degree[N].size) for N in degrees])
    fit = stats.linregress(np.array(degrees, dtype=float), means)
    return CriticalCountFit(
        gamma=float(fit.slope), stderr=float(fit.stderr), intercept=float(fit.intercept),
        intercept_stderr=float(fit.intercept_stderr), r2=float(fit.rvalue**2),
        degrees=list(degrees), means=means.tolist(), sems=sems.tolist(), excluded=dict(excluded or {}),
    )


def critical_count_fit(degrees, samples_per_degree, seed=0, grid=40):
    """Slope of the mean critical-point count against N (volume-1 convention)."""
    counts, excluded = {}, {}
    for N in degrees:
        counts[N], excluded[N] = critical_counts(N, samples_per_degree, seed, grid=grid)
    return critical_count_fit_from_counts(counts, excluded)


@dataclass
class EquidistributionTrace:
    degrees: list
    tv: np.ndarray
    cesaro_tv: np.ndarray


def sequence_equidistribution(seq, cells=12):
    """Total-variation distance from uniform of each normalized zero measure
    in a sequence, and of their running (Cesaro) averages.

    ``seq`` is a list of ZEROS point samples (or a SequenceSample, whose
    zeros are computed here).
    """
    items = list(seq)
    if items and not isinstance(items[0], PointProcessSample):
        items = [find_zeros(s) for s in items]
    grid = EqualAreaCells.of_size(cells)
    tv, ces = [], []
    running = np.zeros(grid.size)
    for k, s in enumerate(items, 1):
        h = empirical_density([s], grid)
        running += h.mass
        tv.append(h.tv_from_uniform())
        ces.append(0.5 * np.abs(running / k - grid.areas()).sum())
    return EquidistributionTrace([s.N for s in items], np.array(tv), np.array(ces))


def poisson_samples(intensity, count, rng, kind=Kind.ZEROS):
    """Homogeneous Poisson points on the sphere with mean ``intensity`` per sample.

    Used to calibrate the estimators: kappa = 1 and P(D) = exp(-D^2) when the
    scaled radius uses N = intensity.
    """
    out = []
    for _ in range(count):
        n = rng.poisson(intensity)
        g = rng.standard_normal((n, 3))
        x = g / np.linalg.norm(g, axis=1, keepdims=True)
        from .projective import from_sphere

        h = from_sphere(x) if n else np.zeros((0, 2), dtype=complex)
        out.append(PointProcessSample(kind, int(intensity), h, np.ones(n, dtype=int), np.zeros(n)))
    return out
