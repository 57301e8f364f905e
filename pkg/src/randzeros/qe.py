"""Matrix elements of multiplication operators in random bases of
spherical harmonics, and the variance statistic S2(N).

Symbols are band-limited real functions on S^2 stored as coefficients on
the real orthonormal harmonics of ``sphere.eval_harmonic_basis``.  For a
Haar-random orthonormal basis phi_j of the degree-N eigenspace (dimension
d = 2N+1),

    S2(N) = (1/d) sum_j ( <f phi_j, phi_j> - fbar )^2,

whose leading behaviour is c_f / N with c_f the Liouville mean of the
squared deviation of great-circle averages of f.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ensembles import Field, sample_random_onb
from .sphere import eval_harmonic_basis, exact_degree, quadrature_s2

_Y00 = 1.0 / np.sqrt(4.0 * np.pi)


@dataclass(frozen=True)
class SymbolFunction:
    """Real band-limited function sum_{l,k} c_{lk} Y_l^k on the unit sphere."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (l, k), c in dict(self.coeffs).items():
            l, k, c = int(l), int(k), float(c)
            if l < 0 or abs(k) > l:
                raise ValueError(f"invalid harmonic index (l={l}, k={k})")
            if not np.isfinite(c):
                raise ValueError(f"non-finite coefficient at (l={l}, k={k})")
            if c != 0.0:
                clean[(l, k)] = clean.get((l, k), 0.0) + c
        object.__setattr__(self, "coeffs", clean)

    @property
    def degree(self):
        return max((l for l, _ in self.coeffs), default=0)

    @property
    def mean(self):
        """(1/4pi) times the integral of f over the sphere."""
        return self.coeffs.get((0, 0), 0.0) * _Y00

    def degree_block(self, l):
        c = np.zeros(2 * l + 1)
        for (ll, k), v in self.coeffs.items():
            if ll == l:
                c[k + l] = v
        return c

    def evaluate(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(points.shape[0])
        for l in sorted({l for l, _ in self.coeffs}):
            out += eval_harmonic_basis(l, points) @ self.degree_block(l)
        return out

    def __add__(self, other):
        if np.isscalar(other):
            other = SymbolFunction.constant(other)
        c = dict(self.coeffs)
        for key, v in other.coeffs.items():
            c[key] = c.get(key, 0.0) + v
        return SymbolFunction(c)

    def scaled(self, a):
        return SymbolFunction({key: a * v for key, v in self.coeffs.items()})

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c / _Y00})

    @classmethod
    def from_function(cls, fn, L, tol=1e-13):
        """Project a vectorized function of unit vectors onto degrees <= L.

        Exact when ``fn`` is itself band-limited to degree L.
        """
        pts, w = quadrature_s2(L + 1)
        vals = fn(pts)
        c = {}
        for l in range(L + 1):
            proj = eval_harmonic_basis(l, pts).T @ (w * vals)
            for k in range(-l, l + 1):
                if abs(proj[k + l]) > tol:
                    c[(l, k)] = proj[k + l]
        return cls(c)

    def rotated(self, R):
        """The symbol x -> f(R^T x)."""
        R = np.asarray(R, dtype=float)
        return SymbolFunction.from_function(lambda x: self.evaluate(x @ R), self.degree)

    def to_json(self):
        return json.dumps([[l, k, c] for (l, k), c in sorted(self.coeffs.items())])

    @classmethod
    def from_json(cls, text):
        """Load ``[[l, k, coeff], ...]`` or ``[{"l":..,"k":..,"coeff":..}, ...]``."""
        data = json.loads(text)
        c = {}
        for item in data:
            if isinstance(item, dict):
                l, k, v = item["l"], item["k"], item["coeff"]
            else:
                l, k, v = item
            c[(int(l), int(k))] = c.get((int(l), int(k)), 0.0) + float(v)
        return cls(c)


def even_test_symbol():
    """x3^2 = 1/3 + (2/3) P_2(x3)."""
    return SymbolFunction({(0, 0): np.sqrt(4 * np.pi) / 3.0, (2, 0): 2.0 / 3.0 * np.sqrt(4 * np.pi / 5.0)})


def odd_test_symbol():
    """The degree-1 zonal harmonic Y_1^0, odd under the antipodal map."""
    return SymbolFunction({(1, 0): 1.0})


def random_test_symbol(L=4, seed=2024):
    """Band-limited symbol with independent N(0, 1/(1+l)^2) coefficients."""
    rng = np.random.default_rng(seed)
    return SymbolFunction({(l, k): rng.standard_normal() / (1.0 + l) for l in range(L + 1) for k in range(-l, l + 1)})


TEST_SYMBOLS = {"even": even_test_symbol, "odd": odd_test_symbol, "random": random_test_symbol}


def multiplication_matrix(N, f, order=None):
    """Matrix of multiplication by f on the degree-N harmonics, in the Y_N^k basis.

    The integrand has degree 2N + L, so ``order`` must be at least N + L + 1
    to avoid aliasing.
    """
    L = f.degree
    need = N + L + 1
    order = need if order is None else int(order)
    if order < need:
        raise ValueError(f"quadrature order {order} aliases: need >= N + L + 1 = {need}")
    pts, w = quadrature_s2(order)
    B = eval_harmonic_basis(N, pts)
    return B.T @ ((w * f.evaluate(pts))[:, None] * B)


def diagonal_elements(M, Q):
    """<f phi_j, phi_j> for the basis phi_j given by the columns of Q."""
    return np.einsum("aj,ab,bj->j", Q, M, Q)


def _s2_one(M, fbar, d, seed, index):
    Q = sample_random_onb(d, Field.REAL, seed, index)
    dev = diagonal_elements(M, Q) - fbar
    return float(np.mean(dev * dev))


def s2_draws(N, f, draws, seed, order=None, threads=1, start=0):
    """S2 for each of ``draws`` independent Haar bases."""
    if draws < 1:
        raise ValueError("draws must be >= 1")
    M = multiplication_matrix(N, f, order)
    d = 2 * N + 1
    fbar = f.mean
    idx = range(start, start + draws)
    if threads <= 1:
        return np.array([_s2_one(M, fbar, d, seed, i) for i in idx])
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return np.array(list(ex.map(lambda i: _s2_one(M, fbar, d, seed, i), idx)))


def s2_statistic(N, f, draws, seed, order=None, threads=1):
    """Mean of S2 over Haar basis draws and its standard error."""
    v = s2_draws(N, f, draws, seed, order, threads)
    se = v.std(ddof=1) / np.sqrt(v.size) if v.size > 1 else 0.0
    return float(v.mean()), float(se)


def expected_s2(N, f, order=None):
    """Exact Haar expectation of S2 for a real basis: 2 ||M - fbar I||_F^2 / (d (d+2))."""
    M = multiplication_matrix(N, f, order)
    d = M.shape[0]
    Mc = M - f.mean * np.eye(d)
    return 2.0 * np.sum(Mc * Mc) / (d * (d + 2))


def off_diagonal_profile(N, f, Q, gaps=(1, 2, 4, 8)):
    """Mean of |<f phi_i, phi_{i+g}>|^2 over i for each index gap g (diagnostic)."""
    A = Q.T @ multiplication_matrix(N, f) @ Q
    d = A.shape[0]
    return {int(g): float(np.mean(np.diagonal(A, offset=g) ** 2)) for g in gaps if 0 < g < d}


def _tangent_frame(x):
    a = np.where(np.abs(x[:, 2:3]) < 0.9, [[0.0, 0.0, 1.0]], [[1.0, 0.0, 0.0]])
    e1 = np.cross(x, a)
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(x, e1)
    return e1, e2


def geodesic_symbol_average(f, points, directions, M=None):
    """Mean of f along the great circle through x with unit tangent v.

    Uses an M-point trapezoid rule, exact for band-limited f when M > 2L.
    """
    x = np.atleast_2d(np.asarray(points, dtype=float))
    v = np.atleast_2d(np.asarray(directions, dtype=float))
    M = 2 * f.degree + 2 if M is None else int(M)
    t = 2 * np.pi * np.arange(M) / M
    circ = x[:, None, :] * np.cos(t)[None, :, None] + v[:, None, :] * np.sin(t)[None, :, None]
    vals = f.evaluate(circ.reshape(-1, 3)).reshape(x.shape[0], M)
    return vals.mean(axis=1)


def cosphere_grid(order, n_dir):
    """Base points from ``quadrature_s2(order)`` times ``n_dir`` uniform directions.

    Returns points, unit tangents and weights normalized to total mass 1.
    """
    pts, w = quadrature_s2(order)
    e1, e2 = _tangent_frame(pts)
    a = 2 * np.pi * np.arange(n_dir) / n_dir
    v = np.cos(a)[None, :, None] * e1[:, None, :] + np.sin(a)[None, :, None] * e2[:, None, :]
    X = np.repeat(pts, n_dir, axis=0)
    W = np.repeat(w / w.sum() / n_dir, n_dir)
    return X, v.reshape(-1, 3), W


def predicted_constant(f, order=None, n_dir=None):
    """Liouville mean of (sigma_ave - fbar)^2 over the unit cosphere bundle."""
    L = f.degree
    order = L + 1 if order is None else order
    n_dir = 2 * L + 2 if n_dir is None else n_dir
    X, V, W = cosphere_grid(order, n_dir)
    dev = geodesic_symbol_average(f, X, V) - f.mean
    return float(np.sum(W * dev * dev))


@dataclass
class VarianceReport:
    degrees: list
    draws: int
    s2_mean: np.ndarray
    s2_stderr: np.ndarray
    c_f: float
    n_times_s2: np.ndarray
    seed: int = 0


def variance_report(degrees, f, draws, seed, threads=1):
    means, ses = [], []
    for N in degrees:
        m, s = s2_statistic(N, f, draws, seed, threads=threads)
        means.append(m)
        ses.append(s)
    means = np.array(means)
    return VarianceReport(list(degrees), draws, means, np.array(ses), predicted_constant(f), np.array(degrees) * means, seed)
