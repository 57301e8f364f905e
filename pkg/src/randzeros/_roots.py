"""Compiled inner loops for polynomial zeros and Chern critical points.

Coefficients are always given in ascending order, ``a[k]`` multiplying ``z**k``.
Points with ``|z| > 1`` are evaluated through the reversed polynomial in
``1/z`` so that nothing overflows for degrees in the hundreds.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _horner2(a, z):
    n = a.shape[0] - 1
    p = a[n]
    dp = 0.0 + 0.0j
    for k in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + a[k]
    return p, dp


@njit(cache=True, nogil=True)
def _newton_ratio(a, z):
    """Return p(z)/p'(z) and the backward error |p(z)| / sum |a_k||z|^k."""
    n = a.shape[0] - 1
    az = abs(z)
    if az <= 1.0:
        p = a[n]
        dp = 0.0 + 0.0j
        scale = abs(a[n])
        for k in range(n - 1, -1, -1):
            dp = dp * z + p
            p = p * z + a[k]
            scale = scale * az + abs(a[k])
        if dp == 0:
            return 0.0 + 0.0j, abs(p) / scale, True
        return p / dp, abs(p) / scale, False
    y = 1.0 / z
    ay = abs(y)
    q = a[0]
    dq = 0.0 + 0.0j
    scale = abs(a[0])
    for k in range(1, n + 1):
        dq = dq * y + q
        q = q * y + a[k]
        scale = scale * ay + abs(a[k])
    # p'/p = y * (n - y q'/q)
    if q == 0:
        return 0.0 + 0.0j, 0.0, False
    ratio = y * (n - y * dq / q)
    if ratio == 0:
        return 0.0 + 0.0j, abs(q) / scale, True
    return 1.0 / ratio, abs(q) / scale, False


@njit(cache=True, nogil=True)
def aberth(a, z0, maxiter, tol):
    """Aberth-Ehrlich simultaneous iteration on all roots of ``a``.

    ``z0`` holds the starting points (modified copy is returned together
    with the per-root backward errors and the iteration count used).
    """
    n = z0.shape[0]
    z = z0.copy()
    done = np.zeros(n, dtype=np.bool_)
    err = np.ones(n)
    it = 0
    for it in range(maxiter):
        nconv = 0
        for i in range(n):
            if done[i]:
                nconv += 1
                continue
            corr, be, flat = _newton_ratio(a, z[i])
            err[i] = be
            if be < tol:
                done[i] = True
                nconv += 1
                continue
            if flat:
                z[i] = z[i] * (1.0 + 1e-3j) + 1e-3
                continue
            s = 0.0 + 0.0j
            for j in range(n):
                if j != i:
                    s += 1.0 / (z[i] - z[j])
            w = corr / (1.0 - corr * s)
            z[i] -= w
            if abs(w) <= 4e-16 * abs(z[i]):
                done[i] = True
        if nconv == n:
            break
    for i in range(n):
        _, be, _ = _newton_ratio(a, z[i])
        err[i] = be
    return z, err, it + 1


@njit(cache=True, nogil=True)
def newton_polish(a, z, steps):
    out = z.copy()
    err = np.empty(z.shape[0])
    for i in range(z.shape[0]):
        zi = out[i]
        corr, be, flat = _newton_ratio(a, zi)
        for _ in range(steps):
            if flat or be == 0.0:
                break
            znew = zi - corr
            c2, b2, f2 = _newton_ratio(a, znew)
            if b2 >= be:
                break
            zi, corr, be, flat = znew, c2, b2, f2
        out[i] = zi
        err[i] = be
    return out, err


@njit(cache=True, nogil=True)
def _crit_eval(a, N, z):
    """Log-derivative form G(z) = s'/s - N conj(z)/(1+|z|^2) of the Chern
    critical-point equation, its Wirtinger derivatives, and the relative
    residual of F(z) = (1+|z|^2) s'(z) - N conj(z) s(z).
    """
    n = a.shape[0] - 1
    az = abs(z)
    s = a[n]
    ds = 0.0 + 0.0j
    d2s = 0.0 + 0.0j
    sc0 = abs(a[n])
    sc1 = 0.0
    for k in range(n - 1, -1, -1):
        d2s = d2s * z + 2.0 * ds
        ds = ds * z + s
        s = s * z + a[k]
        sc1 = sc1 * az + sc0
        sc0 = sc0 * az + abs(a[k])
    r = 1.0 + az * az
    zc = np.conj(z)
    F = r * ds - N * zc * s
    scale = r * sc1 + N * np.sqrt(r) * sc0
    relres = abs(F) / scale if scale > 0 else np.inf
    if s == 0:
        return np.inf + 0j, 0j, 0j, relres
    L = ds / s
    G = L - N * zc / r
    Gz = d2s / s - L * L + N * zc * zc / (r * r)
    Gzb = -N / (r * r) + 0j
    return G, Gz, Gzb, relres


@njit(cache=True, nogil=True)
def crit_newton(a, N, seeds, maxiter, step_cap, tol):
    """Damped Newton for the real 2D system G(z) = 0 from every seed.

    Returns final points, relative residuals of the polynomial form,
    Jacobian determinants |G_z|^2 - |G_zbar|^2 (negative at local maxima
    of |s|_h, positive at saddles) and a convergence flag per seed.
    """
    m = seeds.shape[0]
    pts = np.empty(m, dtype=np.complex128)
    res = np.empty(m)
    det = np.empty(m)
    ok = np.zeros(m, dtype=np.bool_)
    for i in range(m):
        z = seeds[i]
        conv = False
        for _ in range(maxiter):
            G, Gz, Gzb, rr = _crit_eval(a, N, z)
            if not np.isfinite(G.real):
                break
            d = abs(Gz) ** 2 - abs(Gzb) ** 2
            if d == 0.0:
                break
            dz = (-G * np.conj(Gz) + Gzb * np.conj(G)) / d
            lim = step_cap * (1.0 + abs(z) ** 2)
            adz = abs(dz)
            if adz > lim:
                dz = dz * (lim / adz)
            z = z + dz
            if abs(z) > 4.0:
                break
            if adz < 1e-14 * (1.0 + abs(z)):
                conv = True
                break
        G, Gz, Gzb, rr = _crit_eval(a, N, z)
        pts[i] = z
        res[i] = rr
        det[i] = abs(Gz) ** 2 - abs(Gzb) ** 2
        ok[i] = rr < tol and (conv or np.isfinite(G.real))
    return pts, res, det, ok
