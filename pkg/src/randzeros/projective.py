"""Points of the projective line and its Fubini-Study geometry.

Points are homogeneous pairs (z0, z1) with affine coordinate z = z0/z1, so
(0, 1) is the origin of the chart and (1, 0) the point at infinity.  The
Fubini-Study volume is normalized to total mass 1; under stereographic
projection it is the uniform probability on the unit sphere, and a cap of
chordal radius c has volume exactly c**2.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ProjectivePoint:
    z0: complex
    z1: complex

    def __post_init__(self):
        z0, z1 = complex(self.z0), complex(self.z1)
        m = max(abs(z0), abs(z1))
        if m == 0:
            raise ValueError("(0, 0) is not a point of the projective line")
        object.__setattr__(self, "z0", z0 / m)
        object.__setattr__(self, "z1", z1 / m)

    @classmethod
    def from_affine(cls, z):
        z = complex(z)
        if abs(z) <= 1:
            return cls(z, 1.0)
        return cls(1.0, 1.0 / z)

    @property
    def affine(self):
        return self.z0 / self.z1 if self.z1 != 0 else complex("inf")

    def as_array(self):
        return np.array([self.z0, self.z1])


def normalize_homogeneous(h):
    """Scale rows of an (n, 2) complex array so max(|z0|, |z1|) = 1."""
    h = np.asarray(h, dtype=complex)
    m = np.max(np.abs(h), axis=-1, keepdims=True)
    if np.any(m == 0):
        raise ValueError("(0, 0) is not a point of the projective line")
    return h / m


def homogeneous_from_affine(z):
    """(n, 2) normalized homogeneous coordinates for affine points; inf allowed."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(z.shape + (2,), dtype=complex)
    inner = np.abs(z) <= 1
    out[inner, 0] = z[inner]
    out[inner, 1] = 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        w = 1.0 / z[~inner]
    w[~np.isfinite(w)] = 0.0
    out[~inner, 0] = 1.0
    out[~inner, 1] = w
    return out


def to_sphere(h):
    """Stereographic image on the unit sphere of homogeneous points (n, 2).

    (0, 1) maps to the south pole (0, 0, -1) and (1, 0) to the north pole.
    """
    h = np.atleast_2d(np.asarray(h, dtype=complex))
    z0, z1 = h[:, 0], h[:, 1]
    n0, n1 = np.abs(z0) ** 2, np.abs(z1) ** 2
    t = z0 * np.conj(z1)
    den = n0 + n1
    return np.stack([2 * t.real, 2 * t.imag, n0 - n1], axis=-1) / den[:, None]


def from_sphere(x):
    """Inverse of :func:`to_sphere`, returning normalized homogeneous pairs."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    # (z0, z1) proportional to (x + iy, 1 - x3) or (1 + x3, x - iy)
    north = x[:, 2] > 0
    h = np.empty((x.shape[0], 2), dtype=complex)
    h[~north, 0] = x[~north, 0] + 1j * x[~north, 1]
    h[~north, 1] = 1.0 - x[~north, 2]
    h[north, 0] = 1.0 + x[north, 2]
    h[north, 1] = x[north, 0] - 1j * x[north, 1]
    return normalize_homogeneous(h)


def chordal(p, q):
    """sin of the Fubini-Study distance; half the Euclidean distance on the sphere."""
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    cross = np.abs(p[..., 0] * q[..., 1] - p[..., 1] * q[..., 0])
    den = np.sqrt(np.sum(np.abs(p) ** 2, -1) * np.sum(np.abs(q) ** 2, -1))
    return np.clip(cross / den, 0.0, 1.0)


def fs_distance(p, q):
    """Fubini-Study geodesic distance, arccos |<p,q>| / (|p||q|), in [0, pi/2]."""
    if isinstance(p, ProjectivePoint):
        p = p.as_array()
    if isinstance(q, ProjectivePoint):
        q = q.as_array()
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    inner = np.abs(np.sum(p * np.conj(q), -1))
    den = np.sqrt(np.sum(np.abs(p) ** 2, -1) * np.sum(np.abs(q) ** 2, -1))
    # atan2 form keeps full precision for nearby points
    return np.arctan2(chordal(p, q), inner / den)


def random_su2(rng):
    """Haar-random element of SU(2)."""
    v = rng.standard_normal(4)
    v /= np.linalg.norm(v)
    a = v[0] + 1j * v[1]
    b = v[2] + 1j * v[3]
    return np.array([[a, -np.conj(b)], [b, np.conj(a)]])


def su2_to_origin(p):
    """An SU(2) matrix sending the homogeneous point ``p`` to (0, 1)."""
    p = np.asarray(p.as_array() if isinstance(p, ProjectivePoint) else p, dtype=complex)
    p = p / np.linalg.norm(p)
    a, b = p
    # first row annihilates p, second row sends it to 1
    return np.array([[b, -a], [np.conj(a), np.conj(b)]])


def apply_su2(U, h):
    """Act by the matrix U on homogeneous points (n, 2)."""
    h = np.atleast_2d(np.asarray(h, dtype=complex))
    return normalize_homogeneous(h @ np.asarray(U).T)


def transform_polynomial(a, M):
    """Coefficients of s(M(z0, z1)) for s = sum a_k z0^k z1^(N-k).

    If M is invertible the zeros of the result are M^{-1} applied to the
    zeros of s.
    """
    from numpy.polynomial import polynomial as P

    a = np.asarray(a, dtype=complex)
    N = a.size - 1
    (al, be), (ga, de) = np.asarray(M, dtype=complex)
    # affine t = z0/z1: sum a_k (al t + be)^k (ga t + de)^(N-k)
    out = np.zeros(N + 1, dtype=complex)
    num = [np.array([1.0 + 0j])]
    den = [np.array([1.0 + 0j])]
    for _ in range(N):
        num.append(P.polymul(num[-1], [be, al]))
        den.append(P.polymul(den[-1], [de, ga]))
    for k in range(N + 1):
        term = P.polymul(num[k], den[N - k])
        out[: term.size] += a[k] * term
    return out
