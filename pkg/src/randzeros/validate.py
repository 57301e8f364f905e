"""Fast invariant suite behind the ``validate`` subcommand.

Each check compares a library computation with an independent oracle
(closed form, quadrature, finite differences, Monte Carlo, or numpy) and
returns a short detail string.  The whole suite runs in well under two
minutes on one core.
"""

import time

import numpy as np
from scipy import special as scipy_special

from . import ensembles, kacrice, kernels, qe, special, sphere, statistics
from .ensembles import EnsembleSpec, Family
from .zeros_crits import find_critical_points, find_zeros


def _quadrature():
    pts, w = sphere.quadrature_s2(12)
    e1 = abs(w.sum() - 4 * np.pi)
    e2 = abs(np.sum(w * pts[:, 2] ** 2) - 4 * np.pi / 3)
    return max(e1, e2) < 1e-12, f"area err {e1:.1e}, x3^2 err {e2:.1e}"


def _gram():
    pts, w = sphere.quadrature_s2(11)
    B = sphere.eval_harmonic_basis(10, pts)
    err = np.abs(B.T @ (w[:, None] * B) - np.eye(21)).max()
    return err < 1e-8, f"N=10 Gram error {err:.1e}"


def _szego():
    rng = np.random.default_rng(0)
    # keep |z conj(w)| < 1/2 so that 1 + z conj(w) cannot nearly cancel
    z, w = 0.4 * (rng.uniform(-1, 1, (2, 8)) + 1j * rng.uniform(-1, 1, (2, 8)))
    a = kernels.szego_su2(12, z, w)
    b = kernels.szego_su2_basis_sum(12, z, w)
    err = np.max(np.abs(a - b) / np.abs(b))
    return err < 1e-12, f"closed form vs basis sum rel err {err:.1e}"


def _jpd_fd():
    N, z, w = 7, 0.3 - 0.2j, -0.1 + 0.4j
    cov = kacrice.build_jpd_covariance(N, z, w)
    c = 1.0 / np.sqrt(N)
    norm = ((1 + abs(z) ** 2) * (1 + abs(w) ** 2)) ** (N / 2)
    K = lambda x, y: (1 + x * np.conj(y)) ** N

    def b_fd(h):
        # K is antiholomorphic in w, so a real step differentiates in conj(w)
        d = (K(z, w + h) - K(z, w - h)) / (2 * h)
        return c * (d - N * w / (1 + abs(w) ** 2) * K(z, w)) / norm

    e1 = abs(b_fd(1e-3) - cov.B[0, 1])
    e2 = abs(b_fd(5e-4) - cov.B[0, 1])
    ratio = e1 / e2
    return 3.5 < ratio < 4.5, f"central-difference error ratio {ratio:.2f} (expect 4)"


def _wick():
    L = np.array([[1.3, 0.4 - 0.5j], [0.4 + 0.5j, 0.9]])
    rng = np.random.default_rng(1)
    G = np.linalg.cholesky(L)
    n = 200_000
    xi = (rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))) / np.sqrt(2) @ G.T
    v = np.abs(xi[:, 0]) ** 2 * np.abs(xi[:, 1]) ** 2
    exact = kacrice.wick_fourth_moment(L)
    z = (v.mean() - exact) / (v.std() / np.sqrt(n))
    return abs(z) < 4, f"Monte Carlo vs Wick: {z:+.2f} sigma"


def _k1():
    vals = [kacrice.k1_density(25, z) for z in (0.0, 0.7 - 0.2j, 3.0j)]
    err = max(abs(v - 25) for v in vals)
    return err < 1e-9, f"K1 per FS volume = N, err {err:.1e}"


def _hannay():
    r = np.linspace(0.2, 4, 12)
    t = r**2 / 2
    ref = ((np.sinh(t) ** 2 + t**2) * np.cosh(t) - 2 * t * np.sinh(t)) / np.sinh(t) ** 3
    err = np.abs(kacrice.k2_limit_curve(r).values - ref).max()
    return err < 1e-10, f"limit curve vs closed form, err {err:.1e}"


def _bezout():
    spec = EnsembleSpec(Family.SU2_POLY, 50, seed=11)
    bad = sum(find_zeros(s).total_multiplicity != 50 for s in ensembles.sample(spec, 2000))
    return bad == 0, f"{bad} of 2000 samples with zero count != N"


def _roots_vs_numpy():
    spec = EnsembleSpec(Family.SU2_POLY, 30, seed=12)
    worst = 0.0
    for s in ensembles.sample(spec, 20):
        z = find_zeros(s).affine()
        ref = np.roots(s.polynomial()[::-1])
        d = np.abs(z[:, None] - ref[None, :]).min(1) / (1 + np.abs(z))
        worst = max(worst, d.max())
    return worst < 1e-6, f"max distance to numpy roots {worst:.1e}"


def _morse():
    spec = EnsembleSpec(Family.SU2_POLY, 20, seed=13)
    ok = [find_critical_points(s).diagnostics["index_ok"] for s in ensembles.sample(spec, 20)]
    return all(ok), f"index balance holds on {sum(ok)}/20 samples"


def _poisson_pc():
    rng = np.random.default_rng(14)
    c = statistics.pair_correlation_mc(statistics.poisson_samples(100, 1000, rng), N=100)
    z = np.abs(c.values - 1) / c.stderr
    return bool(np.all(z < 3)), f"Poisson kappa-hat: max deviation {z.max():.2f} sigma"


def _poisson_hole():
    rng = np.random.default_rng(15)
    rep = statistics.hole_probability(statistics.poisson_samples(50, 2000, rng), D_grid=np.linspace(0, 2, 9))
    p = np.exp(-rep.D**2)
    sd = np.sqrt(p * (1 - p) / rep.n) + 1e-12
    z = np.abs(rep.p - p) / sd
    return bool(np.all(z[1:] < 3)) and rep.p[0] == 1.0, f"Poisson hole probability: max deviation {z[1:].max():.2f} sigma"


def _j0():
    r = np.linspace(0.0, 40.0, 801)
    err = np.abs(special.j0(r) - scipy_special.j0(r)).max()
    return err < 1e-10, f"J0 vs scipy err {err:.1e}"


def _mehler_heine():
    e = kernels.real_scaling_error(200).sup_error
    return e < 0.02, f"N=200 sup error vs J0 {e:.4f}"


def _s2_exact():
    f = qe.even_test_symbol()
    m, se = qe.s2_statistic(10, f, 400, seed=16)
    ex = qe.expected_s2(10, f)
    z = (m - ex) / se
    return abs(z) < 4, f"S2 Monte Carlo vs exact mean: {z:+.2f} sigma"


CHECKS = [
    ("quadrature", _quadrature),
    ("harmonic_gram", _gram),
    ("szego_basis_sum", _szego),
    ("jpd_finite_difference", _jpd_fd),
    ("wick_fourth_moment", _wick),
    ("k1_density", _k1),
    ("limit_curve_closed_form", _hannay),
    ("bezout_count", _bezout),
    ("roots_vs_numpy", _roots_vs_numpy),
    ("critical_index_balance", _morse),
    ("poisson_pair_correlation", _poisson_pc),
    ("poisson_hole_probability", _poisson_hole),
    ("j0_reference", _j0),
    ("real_kernel_scaling", _mehler_heine),
    ("s2_exact_mean", _s2_exact),
]


def run_checks(names=None):
    """Run the suite; returns a list of {name, ok, detail, seconds}."""
    out = []
    for name, fn in CHECKS:
        if names is not None and name not in names:
            continue
        t = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append({"name": name, "ok": bool(ok), "detail": detail, "seconds": round(time.perf_counter() - t, 3)})
    return out
