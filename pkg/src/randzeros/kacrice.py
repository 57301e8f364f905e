"""Kac-Rice zero correlations for the SU(2) ensemble and the Heisenberg limit.

The joint law of values and covariant derivatives (s(z^p), nabla s(z^p)) at
n points is a centered complex Gaussian with block covariance
(A, B; B^*, C).  For one complex dimension the Kac-Rice integrand
det(xi xi^*) is |xi|^2, so with the conditional covariance
Lambda = C - B^* A^{-1} B of the derivatives given vanishing values

    K_1 = Lambda / (pi A)                                   (n = 1)
    K_2 = (Lambda_11 Lambda_22 + |Lambda_12|^2) / (pi^2 det A)  (n = 2)

the second line being the complex Wick identity for E |xi^1|^2 |xi^2|^2.
Block conventions: A_pq = E s_p conj(s_q), B_pq = E s_p conj(xi_q),
C_pq = E xi_p conj(xi_q).
"""

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .kernels import frame_phase, local_to_chart

COINCIDENT_TOL = 1e-8
MAX_CONDITION = 1e12


class Source(str, Enum):
    MC = "MC"
    FINITE_N = "FINITE_N"
    LIMIT = "LIMIT"


@dataclass
class JPDCovariance:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    warnings: list = field(default_factory=list)

    @property
    def n(self):
        return self.A.shape[0]

    def full(self):
        return np.block([[self.A, self.B], [self.B.conj().T, self.C]])

    def min_eigenvalue(self):
        M = self.full()
        return float(np.linalg.eigvalsh(0.5 * (M + M.conj().T)).min())


# the Heisenberg-limit covariance has the same block layout
LimitCovariance = JPDCovariance


@dataclass
class CorrelationCurve:
    radii: np.ndarray
    values: np.ndarray
    source: Source
    N: int = None
    stderr: np.ndarray = None
    ci_lo: np.ndarray = None
    ci_hi: np.ndarray = None
    npairs: np.ndarray = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.source = Source(self.source)
        self.radii = np.asarray(self.radii, dtype=float)
        self.values = np.asarray(self.values, dtype=float)


def _kernel_jets(N, z, w):
    """Kernel k = (1 + z conj(w))^N and the three jet covariances, chart frame.

    Returns (k, E[s(z) conj(D s(w))], E[D s(z) conj(D s(w))]) where D is the
    Chern covariant derivative d/dz - N conj(z)/(1+|z|^2), all divided by the
    diagonal normalization (1+|z|^2)^{N/2} (1+|w|^2)^{N/2}.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    q = 1.0 + z * np.conj(w)
    rz = 1.0 + np.abs(z) ** 2
    rw = 1.0 + np.abs(w) ** 2
    k = np.exp(N * (np.log(q) - 0.5 * np.log(rz) - 0.5 * np.log(rw)))
    alpha = np.conj(z) / rz
    beta = w / rw
    kb = k * N * (z / q - beta)
    kc = k * (
        N / q
        + N * (N - 1) * z * np.conj(w) / q**2
        - N * N * alpha * z / q
        - N * N * beta * np.conj(w) / q
        + N * N * alpha * beta
    )
    return k, kb, kc


def build_jpd_covariance(N, z1, z2=None, center=0j):
    """Covariance of values and covariant derivatives at one or two chart points.

    Values are taken in the unitary frame adapted at ``center`` and
    derivatives with respect to the local coordinate
    u = sqrt(N) (z - center) / (1 + |center|^2), so that
    ``build_jpd_covariance(N, local_to_chart(N, u))`` tends to
    :func:`build_limit_covariance` (u) as N grows.  The 1/d_N factor of the
    Szego kernel is folded in, making A_pp = 1.
    """
    zs = np.array([z1] if z2 is None else [z1, z2], dtype=complex)
    notes = []
    if zs.size == 2 and abs(zs[0] - zs[1]) < COINCIDENT_TOL:
        notes.append("near-coincident points: covariance is ill-conditioned")
        warnings.warn(notes[-1], RuntimeWarning, stacklevel=2)
    c = (1.0 + abs(center) ** 2) / np.sqrt(N)
    k, kb, kc = _kernel_jets(N, zs[:, None], zs[None, :])
    ph = frame_phase(N, zs, center)
    P = ph[:, None] * np.conj(ph[None, :])
    A = k * P
    B = kb * P * c
    C = kc * P * c * c
    return JPDCovariance(A, B, C, notes)


def local_jpd_covariance(N, u1, u2=None, center=0j):
    """:func:`build_jpd_covariance` at the chart points of local coordinates u."""
    z1 = local_to_chart(N, u1, center)
    z2 = None if u2 is None else local_to_chart(N, u2, center)
    return build_jpd_covariance(N, complex(z1), None if z2 is None else complex(z2), center)


def build_limit_covariance(u1, u2=None):
    """Heisenberg-limit covariance of values and derivatives at u1 (and u2).

    A_pq = Pi(u_p, u_q), B_pq = (u_p - u_q) Pi(u_p, u_q),
    C_pq = (1 + (conj(u_q) - conj(u_p))(u_p - u_q)) Pi(u_p, u_q),
    with Pi the normalized Heisenberg kernel.
    """
    us = np.array([u1] if u2 is None else [u1, u2], dtype=complex)
    u = us[:, None]
    v = us[None, :]
    H = np.exp(u * np.conj(v) - 0.5 * (np.abs(u) ** 2 + np.abs(v) ** 2))
    d = u - v
    return JPDCovariance(H, d * H, (1.0 + np.conj(-d) * d) * H)


def conditional_covariance(cov):
    """Lambda = C - B^* A^{-1} B, the derivative covariance given zero values."""
    A = np.asarray(cov.A)
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise np.linalg.LinAlgError(
            f"value covariance A is singular (condition {cond:.3g}); the points coincide"
        )
    L = cov.C - cov.B.conj().T @ np.linalg.solve(A, cov.B)
    return 0.5 * (L + L.conj().T)


def wick_fourth_moment(L):
    """E |xi_1|^2 |xi_2|^2 for a centered complex Gaussian with covariance L."""
    return float((L[0, 0] * L[1, 1]).real + abs(L[0, 1]) ** 2)


def _k1_from_cov(cov):
    L = conditional_covariance(cov)
    return float(L[0, 0].real / (np.pi * cov.A[0, 0].real))


def _k2_from_cov(cov):
    L = conditional_covariance(cov)
    return wick_fourth_moment(L) / (np.pi**2 * float(np.linalg.det(cov.A).real))


def k1_density(N, z):
    """Expected zero density at z per unit Fubini-Study volume (total volume 1).

    Computed per unit chart area from the chart-derivative covariance and
    converted with the volume element dV = dA / (pi (1+|z|^2)^2).
    """
    cov = build_jpd_covariance(N, z, center=0j)
    # derivative w.r.t. u = sqrt(N) z: densities come out per unit u-area
    per_chart_area = _k1_from_cov(cov) * N
    return per_chart_area * np.pi * (1.0 + abs(z) ** 2) ** 2


def k2_density(N, z1, z2):
    """Two-point zero correlation at (z1, z2) per unit Fubini-Study volume squared."""
    if z1 == z2:
        raise ValueError("k2_density is undefined at coincident points")
    cov = build_jpd_covariance(N, z1, z2, center=0j)
    per_chart_area = _k2_from_cov(cov) * N * N
    return per_chart_area * np.pi**2 * (1.0 + abs(z1) ** 2) ** 2 * (1.0 + abs(z2) ** 2) ** 2


def pair_correlation(cov):
    """kappa = K_2 / (K_1 K_1) from a two-point covariance (scale free)."""
    one1 = JPDCovariance(cov.A[:1, :1], cov.B[:1, :1], cov.C[:1, :1])
    one2 = JPDCovariance(cov.A[1:, 1:], cov.B[1:, 1:], cov.C[1:, 1:])
    return _k2_from_cov(cov) / (_k1_from_cov(one1) * _k1_from_cov(one2))


def scaled_separation_to_chart(N, r):
    """Chart point at scaled chordal distance r from the origin.

    The scaled separation of two points is sqrt(N) times the sine of their
    Fubini-Study distance; for points near the origin it is |u1 - u2| in the
    Heisenberg coordinate u = sqrt(N) z.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r >= np.sqrt(N)):
        raise ValueError("scaled separation must be below sqrt(N)")
    return np.tan(np.arcsin(r / np.sqrt(N)))


def k2_finite_curve(N, radii):
    """Finite-N pair correlation kappa_N(r) at scaled chordal separation r."""
    radii = np.asarray(radii, dtype=float)
    z2 = scaled_separation_to_chart(N, radii)
    vals = np.array([pair_correlation(build_jpd_covariance(N, 0j, complex(z))) for z in z2])
    return CorrelationCurve(radii, vals, Source.FINITE_N, N=int(N))


def k2_limit_curve(radii):
    """Universal Heisenberg-limit pair correlation kappa(r)."""
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0):
        raise ValueError("radii must be positive")
    vals = np.array([pair_correlation(build_limit_covariance(0j, complex(r))) for r in radii])
    return CorrelationCurve(radii, vals, Source.LIMIT)


def annulus_average(curve_fn, edges, n_quad=64):
    """Area-weighted average of a radial curve over each annulus [e_i, e_{i+1}].

    ``curve_fn`` maps an array of radii to values; used to compare analytic
    curves with binned Monte Carlo estimates.
    """
    edges = np.asarray(edges, dtype=float)
    x, w = np.polynomial.legendre.leggauss(n_quad)
    out = np.empty(edges.size - 1)
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        # integrate kappa(r) * 2 r dr over the annulus, divide by b^2 - a^2
        r = 0.5 * (b - a) * x + 0.5 * (a + b)
        r = np.maximum(r, 1e-6)
        out[i] = np.sum(w * curve_fn(r) * 2 * r) * 0.5 * (b - a) / (b * b - a * a)
    return out
