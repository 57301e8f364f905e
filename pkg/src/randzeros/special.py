"""Legendre polynomials and the Bessel function J0.

Both are evaluated with our own recurrences so that the scaling checks in
:mod:`randzeros.kernels` do not depend on the functions they are checked
against.
"""

import math

import numpy as np

# below this argument J0 is summed as a power series, above it the Hankel
# asymptotic expansion is used; both are accurate to ~1e-13 at the switch
J0_SWITCH = 14.0


def legendre_p(n, x):
    """Legendre polynomial P_n(x) by the Bonnet three-term recurrence."""
    x = np.asarray(x, dtype=float)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev
    p = x.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p


def _j0_series(r):
    x2 = -(r * r) / 4.0
    term = np.ones_like(r)
    total = np.ones_like(r)
    for k in range(1, 80):
        term = term * x2 / (k * k)
        total = total + term
        if np.all(np.abs(term) < 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _j0_hankel(r):
    # J0(r) = sqrt(2/(pi r)) (P cos(r - pi/4) - Q sin(r - pi/4)) with
    # b_k = prod_{j<=k} (2j-1)^2 / (k! (8r)^k),
    # P = b_0 - b_2 + b_4 - ...,  Q = -b_1 + b_3 - ...
    p = np.ones_like(r)
    q = np.zeros_like(r)
    b = np.ones_like(r)
    for k in range(1, 60):
        b_next = b * (2 * k - 1) ** 2 / (k * 8.0 * r)
        # asymptotic series: stop at the smallest term
        b = np.where(b_next < b, b_next, 0.0)
        if k % 2 == 0:
            p += (-1) ** (k // 2) * b
        else:
            q += (-1) ** ((k + 1) // 2) * b
        if np.all(b < 1e-17):
            break
    chi = r - math.pi / 4.0
    return np.sqrt(2.0 / (math.pi * r)) * (p * np.cos(chi) - q * np.sin(chi))


def j0(r):
    """Bessel function of the first kind of order zero for real r."""
    r = np.abs(np.asarray(r, dtype=float))
    out = np.empty_like(r)
    small = r < J0_SWITCH
    if np.any(small):
        out[small] = _j0_series(r[small])
    if np.any(~small):
        out[~small] = _j0_hankel(r[~small])
    return out if out.ndim else float(out)
