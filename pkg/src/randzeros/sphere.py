"""Real spherical harmonics on S^2 and a product quadrature rule.

The basis of degree N is ordered k = -N..N, with k < 0 the sine family,
k = 0 the zonal harmonic and k > 0 the cosine family, all orthonormal for
the surface measure of the unit sphere (total area 4*pi).
"""

import numpy as np


def quadrature_s2(order):
    """Gauss-Legendre in cos(theta) times a uniform azimuthal rule.

    With ``order`` polar nodes and ``2*order`` azimuthal nodes the rule
    integrates every spherical polynomial of degree <= 2*order - 1 exactly.

    Returns
    -------
    points : (M, 3) array of unit vectors
    weights : (M,) array summing to 4*pi
    """
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    x, wx = np.polynomial.legendre.leggauss(order)
    nphi = 2 * order
    phi = 2 * np.pi * np.arange(nphi) / nphi
    st = np.sqrt(1.0 - x * x)
    pts = np.stack(
        [
            np.outer(st, np.cos(phi)),
            np.outer(st, np.sin(phi)),
            np.outer(x, np.ones(nphi)),
        ],
        axis=-1,
    ).reshape(-1, 3)
    w = np.outer(wx, np.full(nphi, 2 * np.pi / nphi)).ravel()
    return pts, w


def exact_degree(order):
    """Highest polynomial degree integrated exactly by ``quadrature_s2(order)``."""
    return 2 * order - 1


def _check_unit(points, tol=1e-12):
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[-1] != 3:
        raise ValueError("points must be 3-vectors")
    if np.any(np.abs(np.linalg.norm(points, axis=-1) - 1.0) > tol):
        raise ValueError("points must lie on the unit sphere")
    return points


def normalized_legendre(N, cos_theta, sin_theta):
    """Orthonormal associated Legendre functions for fixed degree N.

    Returns an array of shape (N+1, len(cos_theta)) holding
    Pbar_N^m for m = 0..N, normalized so that Pbar_N^m(cos t) e^{i m phi}
    has unit L2 norm on the sphere.  Uses the standard stable recurrences
    along the diagonal and then upward in degree.
    """
    c = np.asarray(cos_theta, dtype=float)
    s = np.asarray(sin_theta, dtype=float)
    out = np.zeros((N + 1,) + c.shape)
    pmm = np.full(c.shape, 1.0 / np.sqrt(4.0 * np.pi))
    for m in range(N + 1):
        if m > 0:
            pmm = np.sqrt((2 * m + 1) / (2.0 * m)) * s * pmm
        if m == N:
            out[m] = pmm
            continue
        p_lm2 = pmm
        p_lm1 = np.sqrt(2 * m + 3.0) * c * pmm
        for l in range(m + 2, N + 1):
            a = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = np.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            p_lm2, p_lm1 = p_lm1, a * (c * p_lm1 - b * p_lm2)
        out[m] = p_lm1
    return out


def eval_harmonic_basis(N, points):
    """Evaluate the real orthonormal basis {Y_N^k, k=-N..N} at unit vectors.

    Parameters
    ----------
    N : int
        Degree of the harmonics.
    points : (M, 3) array_like
        Points on the unit sphere.

    Returns
    -------
    (M, 2N+1) array; column ``k + N`` holds Y_N^k.
    """
    pts = _check_unit(points)
    ct = np.clip(pts[:, 2], -1.0, 1.0)
    rho = np.hypot(pts[:, 0], pts[:, 1])
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    P = normalized_legendre(N, ct, rho)
    out = np.empty((pts.shape[0], 2 * N + 1))
    out[:, N] = P[0]
    m = np.arange(1, N + 1)
    ang = np.outer(phi, m)
    out[:, N + 1:] = np.sqrt(2.0) * P[1:].T * np.cos(ang)
    out[:, :N] = (np.sqrt(2.0) * P[1:].T * np.sin(ang))[:, ::-1]
    return out


def to_unit(theta, phi):
    """Unit vectors from polar angle and azimuth."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def random_rotation(rng):
    """Haar-random element of SO(3)."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
