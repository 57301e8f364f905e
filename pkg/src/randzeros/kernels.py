"""Reproducing kernels of the two ensembles and their universal scaling limits.

SU(2) side: with the volume-1 Fubini-Study normalization the Szego kernel of
degree N is (N+1)(1 + z conj(w))^N in the affine chart.  Its limit at scale
1/sqrt(N) is the Heisenberg kernel exp(u conj(v) - (|u|^2+|v|^2)/2).

Sphere side: the projector onto degree-N harmonics on S^2 is the zonal
function (2N+1)/(4 pi) P_N(cos theta); at scale 1/N it tends to J0.

All scaling comparisons divide by the geometric mean of the two diagonal
values, which removes every prefactor convention.
"""

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .ensembles import monomial_weights
from .special import j0, legendre_p


@dataclass
class ScalingReport:
    N: int
    grid: dict
    sup_error: float
    normalization: str = "DIAGONAL"
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps({"N": self.N, "grid": self.grid, "supError": self.sup_error}, sort_keys=True)


def _one_plus_z_wbar(z, w):
    # explicit real arithmetic: swapping z and w negates the imaginary part
    # exactly, so the kernel is Hermitian to the last bit
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    re = 1.0 + (z.real * w.real + z.imag * w.imag)
    im = z.imag * w.real - z.real * w.imag
    return re + 1j * im


def log_szego_su2(N, z, w):
    """Complex log of the degree-N SU(2) Szego kernel (principal branch of 1 + z conj(w))."""
    return np.log(N + 1.0) + N * np.log(_one_plus_z_wbar(z, w))


def szego_su2(N, z, w):
    """Szego kernel Pi_N(z, w) = (N+1)(1 + z conj(w))^N in the affine chart."""
    # exp(N log q) equals q**N for integer N on any branch
    return np.exp(log_szego_su2(N, z, w))


def szego_su2_basis_sum(N, z, w):
    """The same kernel as the orthonormal-basis sum sum_k w_k (z conj(w))^k."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    x = z * np.conj(w)
    wk = monomial_weights(N)
    out = np.zeros(np.broadcast(z, w).shape, dtype=complex)
    for k in range(N, -1, -1):
        out = out * x + wk[k]
    return out


def szego_su2_normalized(N, z, w):
    """Pi_N(z, w) / sqrt(Pi_N(z, z) Pi_N(w, w)), evaluated in the log domain."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    lg = N * (np.log(_one_plus_z_wbar(z, w)) - 0.5 * np.log1p(np.abs(z) ** 2) - 0.5 * np.log1p(np.abs(w) ** 2))
    return np.exp(lg)


def frame_phase(N, z, center):
    """Unit phase turning the chart frame into the frame adapted at ``center``.

    In the holomorphic frame (1 + z conj(center))^(-N) the hermitian metric
    has no pluriharmonic part at ``center``; values and covariant derivatives
    at z pick up the factor returned here.  Identically 1 when center = 0.
    """
    z = np.asarray(z, dtype=complex)
    return np.exp(-1j * N * np.angle(1.0 + z * np.conj(center)))


def local_to_chart(N, u, center=0j):
    """Chart point z = center + (1+|center|^2) u / sqrt(N).

    The factor 1+|center|^2 makes u an orthonormal coordinate for the
    Fubini-Study metric at ``center`` in the Heisenberg scaling.
    """
    u = np.asarray(u, dtype=complex)
    return center + (1.0 + abs(center) ** 2) * u / np.sqrt(N)


def heisenberg_kernel(u, v):
    """Normalized Heisenberg-group Szego kernel exp(u conj(v) - (|u|^2+|v|^2)/2)."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    return np.exp(u * np.conj(v) - 0.5 * (np.abs(u) ** 2 + np.abs(v) ** 2))


def _disk_grid(radius, step):
    if step <= 0 or radius < 0:
        raise ValueError("grid needs radius >= 0 and step > 0")
    n = int(np.floor(radius / step + 1e-9))
    g = step * np.arange(-n, n + 1)
    U = (g[:, None] + 1j * g[None, :]).ravel()
    U = U[np.abs(U) <= radius + 1e-12]
    if U.size == 0:
        raise ValueError("empty grid")
    return U


def complex_scaling_table(N, grid_radius=2.0, grid_step=0.5, center=0j):
    """All grid pairs (u, v) with exact and limiting normalized kernels.

    Returns arrays u, v, exact, limit, error (error = |exact - limit|).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    U = _disk_grid(grid_radius, grid_step)
    z = local_to_chart(N, U, center)
    ph = frame_phase(N, z, center)
    exact = szego_su2_normalized(N, z[:, None], z[None, :]) * ph[:, None] * np.conj(ph[None, :])
    limit = heisenberg_kernel(U[:, None], U[None, :])
    uu, vv = np.meshgrid(U, U, indexing="ij")
    err = np.abs(exact - limit)
    return uu.ravel(), vv.ravel(), exact.ravel(), limit.ravel(), err.ravel()


def complex_scaling_error(N, grid_radius=2.0, grid_step=0.5, center=0j):
    """Sup over grid pairs of |normalized Pi_N - normalized Heisenberg kernel|.

    Points are z = center + (1+|center|^2) u / sqrt(N).  At center = 0 the
    chart is a Kahler normal coordinate and the remainder is O(1/N); at a
    generic center the linear chart coordinates carry the O(1/sqrt(N))
    correction.
    """
    *_, err = complex_scaling_table(N, grid_radius, grid_step, center)
    grid = {"radius": grid_radius, "step": grid_step, "center": [float(np.real(center)), float(np.imag(center))]}
    return ScalingReport(N=int(N), grid=grid, sup_error=float(err.max()))


def sphere_projector(N, cos_theta):
    """Kernel of the projector onto degree-N harmonics on S^2 (zonal)."""
    c = np.asarray(cos_theta, dtype=float)
    if np.any(np.abs(c) > 1.0 + 1e-15):
        raise ValueError("cos_theta must lie in [-1, 1]")
    return (2 * N + 1) / (4 * np.pi) * legendre_p(N, np.clip(c, -1.0, 1.0))


def bessel_limit(m, r):
    """Euclidean-class limit kernel for S^m; only m = 2 (J0) is supported."""
    if m != 2:
        raise NotImplementedError("only the 2-sphere (J0 limit) is supported")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be nonnegative")
    return j0(r)


def real_scaling_table(N, r_max=10.0, step=0.05):
    """Grid r with normalized projector, J0 limit and pointwise error."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if step <= 0 or r_max < 0:
        raise ValueError("grid needs r_max >= 0 and step > 0")
    r = np.arange(0.0, r_max + step / 2, step)
    exact = sphere_projector(N, np.cos(r / N)) / sphere_projector(N, 1.0)
    limit = bessel_limit(2, r)
    return r, exact, limit, np.abs(exact - limit)


def real_scaling_error(N, r_max=10.0, step=0.05):
    """Sup over r in [0, r_max] of |Pi_N(cos(r/N))/Pi_N(1) - J0(r)| on S^2.

    The report also records N^{-1} Pi_N(x, x), the diagonal prefactor in
    this normalization (it tends to 1/(2 pi)).
    """
    r, exact, limit, err = real_scaling_table(N, r_max, step)
    return ScalingReport(
        N=int(N),
        grid={"r_max": r_max, "step": step},
        sup_error=float(err.max()),
        extra={"prefactor": float(sphere_projector(N, 1.0) / N)},
    )


def scaling_slope(reports):
    """Least-squares slope of log sup_error against log N."""
    Ns = np.array([r.N for r in reports], dtype=float)
    e = np.array([r.sup_error for r in reports])
    return float(np.polyfit(np.log(Ns), np.log(e), 1)[0])
