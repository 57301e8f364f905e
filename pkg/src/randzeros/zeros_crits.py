"""Zero sets and Chern critical points of SU(2) polynomial samples.

A sample of degree N is the homogeneous polynomial
s(z0, z1) = sum_k a_k z0^k z1^(N-k); in the affine chart z = z0/z1 it is the
ordinary polynomial sum_k a_k z^k.  Roots at infinity show up as vanishing
leading coefficients and are reported as (1, 0).

Critical points solve the covariant equation for the Chern connection of the
Fubini-Study metric, s'(z) - N conj(z) s(z) / (1+|z|^2) = 0.  They are the
critical points of |s|_h away from the zeros: local maxima and saddles.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import ConvexHull, cKDTree

from . import _roots
from .ensembles import Family, SectionSample, monomial_weights
from .projective import chordal, homogeneous_from_affine, to_sphere, from_sphere

log = logging.getLogger(__name__)

DEFLATION_TOL = 1e-12
ZERO_RESIDUAL_TOL = 1e-9
CRIT_RESIDUAL_TOL = 1e-8
CLUSTER_RADIUS = 1e-7
DEDUP_RADIUS = 1e-6
SEED_GRID = 40


class Kind(str, Enum):
    ZEROS = "ZEROS"
    CRITS = "CRITS"


@dataclass
class PointProcessSample:
    """Points of one sample in normalized homogeneous coordinates."""

    kind: Kind
    N: int
    points: np.ndarray
    multiplicities: np.ndarray
    residuals: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.kind = Kind(self.kind)
        self.points = np.asarray(self.points, dtype=complex).reshape(-1, 2)
        self.multiplicities = np.asarray(self.multiplicities, dtype=int)
        self.residuals = np.asarray(self.residuals, dtype=float)

    def __len__(self):
        return self.points.shape[0]

    @property
    def total_multiplicity(self):
        return int(self.multiplicities.sum())

    def sphere(self):
        """Unit-sphere images of the points, shape (n, 3)."""
        return to_sphere(self.points) if len(self) else np.zeros((0, 3))

    def affine(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.points[:, 0] / self.points[:, 1]


class DegenerateInputError(ValueError):
    pass


def _coefficients(sample):
    if isinstance(sample, SectionSample):
        if sample.spec.family is not Family.SU2_POLY:
            raise ValueError("zeros are computed for SU(2) samples only")
        return np.asarray(sample.polynomial(), dtype=complex)
    return np.asarray(sample, dtype=complex)


def _spiral_start(n, r0):
    # roots of an SU(2) sample are uniform on the sphere; start from a
    # sphere-uniform spiral scaled to the geometric mean root modulus
    j = np.arange(n)
    t = (j + 0.5) / n
    rad = np.sqrt(t / (1.0 - t)) * r0
    ang = j * np.pi * (3.0 - np.sqrt(5.0)) + 0.3
    return rad * np.exp(1j * ang)


def _cluster(points_h, radius):
    """Group homogeneous points closer than ``radius`` in chordal distance."""
    n = points_h.shape[0]
    if n == 0:
        return np.zeros(0, dtype=int)
    x = to_sphere(points_h)
    # chordal distance is half the Euclidean distance on the sphere
    pairs = cKDTree(x).query_pairs(2.0 * radius, output_type="ndarray")
    if pairs.shape[0] == 0:
        return np.arange(n)
    graph = coo_matrix((np.ones(pairs.shape[0]), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    return connected_components(graph, directed=False)[1]


def find_zeros(sample, maxiter=500, polish_steps=3):
    """All N projective zeros of an SU(2) sample, counted with multiplicity.

    Parameters
    ----------
    sample : SectionSample or array_like
        Either a sample or the ascending monomial coefficients a_k.

    Returns
    -------
    PointProcessSample of kind ZEROS whose multiplicities sum to N.
    """
    a = _coefficients(sample)
    N = a.size - 1
    # compare coefficients on the invariant scale |a_k| / sqrt(w_k); the raw
    # monomial coefficients of a typical sample span many orders of magnitude
    scaled = np.abs(a) / np.sqrt(monomial_weights(N)) if a.size else a
    amax = np.max(scaled) if a.size else 0.0
    if amax == 0.0:
        raise DegenerateInputError("all coefficients vanish")
    small = scaled <= DEFLATION_TOL * amax
    lo = int(np.argmax(~small))
    hi = N - int(np.argmax(~small[::-1]))
    n_zero, n_inf = lo, N - hi
    core = np.ascontiguousarray(a[lo : hi + 1])
    n = core.size - 1
    roots = np.zeros(0, dtype=complex)
    resid = np.zeros(0)
    iters = 0
    if n > 0:
        r0 = abs(core[0] / core[-1]) ** (1.0 / n)
        roots, _, iters = _roots.aberth(core, _spiral_start(n, r0), maxiter, 1e-15)
        roots, resid = _roots.newton_polish(core, roots, polish_steps)
    h_parts = [homogeneous_from_affine(roots)]
    res_parts = [resid]
    if n_zero:
        h_parts.append(np.tile([0.0, 1.0], (n_zero, 1)).astype(complex))
        res_parts.append(np.zeros(n_zero))
    if n_inf:
        h_parts.append(np.tile([1.0, 0.0], (n_inf, 1)).astype(complex))
        res_parts.append(np.zeros(n_inf))
    h = np.concatenate(h_parts)
    res = np.concatenate(res_parts)
    labels = _cluster(h, CLUSTER_RADIUS)
    uniq, inverse, counts = np.unique(labels, return_inverse=True, return_counts=True)
    pts = np.empty((uniq.size, 2), dtype=complex)
    rmax = np.zeros(uniq.size)
    for g in range(uniq.size):
        members = inverse == g
        # representative: the cluster mean on the sphere
        pts[g] = from_sphere(to_sphere(h[members]).mean(0, keepdims=True))[0] if counts[g] > 1 else h[members][0]
        rmax[g] = res[members].max()
    return PointProcessSample(
        Kind.ZEROS, N, pts, counts, rmax,
        diagnostics={"iterations": int(iters), "at_zero": n_zero, "at_infinity": n_inf},
    )


def find_zeros_batch(samples, threads=1):
    """:func:`find_zeros` over many samples; result order matches input order."""
    samples = list(samples)
    if threads <= 1:
        return [find_zeros(s) for s in samples]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(find_zeros, samples))


def _seed_grid(n, radius=1.05):
    g = np.linspace(-radius, radius, n)
    Z = (g[:, None] + 1j * g[None, :]).ravel()
    return Z[np.abs(Z) <= radius]


def _hull_seeds(zero_sphere):
    """Triangle centroids and edge midpoints of the spherical Delaunay
    triangulation of the zeros: where maxima and saddles of |s|_h sit."""
    if zero_sphere.shape[0] < 4:
        return np.zeros((0, 3))
    try:
        T = ConvexHull(zero_sphere).simplices
    except Exception:  # coplanar or degenerate configurations
        return np.zeros((0, 3))
    X = zero_sphere
    pts = [X[T].mean(1)]
    for i, j in ((0, 1), (1, 2), (0, 2)):
        pts.append(0.5 * (X[T[:, i]] + X[T[:, j]]))
    P = np.concatenate(pts)
    nrm = np.linalg.norm(P, axis=1)
    P = P[nrm > 1e-12] / nrm[nrm > 1e-12, None]
    return P


def _solve_crits(a, N, grid, extra_sphere):
    found, dets, res = [], [], []
    n_seeds = n_conv = 0
    for chart in (0, 1):
        coef = np.ascontiguousarray(a if chart == 0 else a[::-1])
        seeds = _seed_grid(grid)
        if extra_sphere.shape[0]:
            ex = extra_sphere.copy()
            if chart == 1:
                ex[:, 1:] *= -1.0
            ex = ex[ex[:, 2] <= 0.05]
            h = from_sphere(ex)
            seeds = np.concatenate([seeds, h[:, 0] / h[:, 1]])
        p, r, d, ok = _roots.crit_newton(coef, N, seeds.astype(complex), 60, 0.25 / np.sqrt(N), CRIT_RESIDUAL_TOL)
        n_seeds += seeds.size
        n_conv += int(ok.sum())
        keep = ok & ((np.abs(p) <= 1.0) if chart == 0 else (np.abs(p) < 1.0))
        p, d, r = p[keep], d[keep], r[keep]
        hz = homogeneous_from_affine(p)
        if chart == 1:
            hz = hz[:, ::-1]
        found.append(hz)
        dets.append(d)
        res.append(r)
    h = np.concatenate(found)
    d = np.concatenate(dets)
    r = np.concatenate(res)
    if h.shape[0]:
        labels = _cluster(h, DEDUP_RADIUS)
        _, first = np.unique(labels, return_index=True)
        h, d, r = h[first], d[first], r[first]
    return h, d, r, n_seeds, n_conv


def find_critical_points(sample, grid=SEED_GRID, refine=2, zeros=None):
    """Critical points of |s|_h (solutions of the Chern equation nabla s = 0).

    Damped Newton from a ``grid`` x ``grid`` seed lattice in each of the two
    affine charts, plus seeds at the centroids and edge midpoints of the
    triangulated zero set.  Index bookkeeping certifies the result: on the
    sphere #maxima - #saddles = 2 - N.  When that fails the grid is doubled,
    at most ``refine`` times.

    The ``diagnostics`` dict reports the grid used, seed coverage, the index
    balance, and how many points have a near-degenerate Hessian.
    """
    a = _coefficients(sample)
    N = a.size - 1
    if N < 1:
        raise ValueError("critical points need N >= 1")
    if np.max(np.abs(a)) == 0.0:
        raise DegenerateInputError("all coefficients vanish")
    if zeros is None:
        zeros = find_zeros(a)
    extra = _hull_seeds(zeros.sphere())
    # zeros are minima of |s|_h, each of index +1
    target = 2 - len(zeros)
    g = grid
    for attempt in range(refine + 1):
        h, d, r, n_seeds, n_conv = _solve_crits(a, N, g, extra)
        balance = int((d < 0).sum() - (d > 0).sum())
        if balance == target or attempt == refine:
            break
        g *= 2
    scale = np.abs(d).max() if d.size else 1.0
    # a zero of multiplicity >= 2 has s = s' = 0 and solves nabla s = 0 exactly
    multiple = zeros.points[zeros.multiplicities >= 2]
    diag = {
        "grid": g,
        "seeds": n_seeds,
        "converged_seeds": n_conv,
        "maxima": int((d < 0).sum()),
        "saddles": int((d > 0).sum()),
        "degenerate_zeros": int(multiple.shape[0]),
        "index_ok": balance == target,
        "near_degenerate": int((np.abs(d) < 1e-8 * scale).sum()),
    }
    if not diag["index_ok"]:
        log.debug("critical point index balance off for N=%d: %s", N, diag)
    if multiple.shape[0]:
        h = np.concatenate([h, multiple])
        r = np.concatenate([r, np.zeros(multiple.shape[0])])
    return PointProcessSample(Kind.CRITS, N, h, np.ones(h.shape[0], dtype=int), r, diagnostics=diag)


def zero_residual(a, h):
    """Backward error |s(p)| / sum |a_k||z0|^k|z1|^(N-k) at homogeneous points."""
    a = np.asarray(a, dtype=complex)
    h = np.atleast_2d(h)
    N = a.size - 1
    k = np.arange(N + 1)
    z0 = h[:, 0:1]
    z1 = h[:, 1:2]
    terms = a[None, :] * z0 ** k[None, :] * z1 ** (N - k)[None, :]
    return np.abs(terms.sum(1)) / np.abs(terms).sum(1)


def fs_distance_matrix(p, q):
    return np.arcsin(chordal(p[:, None, :], q[None, :, :]))
