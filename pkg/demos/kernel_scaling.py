"""
Universal scaling limits of reproducing kernels
===============================================

The SU(2) Szego kernel, zoomed in at scale 1/sqrt(N), converges to the
Heisenberg kernel.  The spectral projector of degree-N spherical harmonics,
zoomed in at scale 1/N, converges to J0.
"""

from randzeros.kernels import complex_scaling_error, real_scaling_error, scaling_slope

Ns = [16, 64, 256, 1024]

# at a generic base point the error decays like N^{-1/2}
generic = [complex_scaling_error(N, center=0.5 + 0.5j) for N in Ns]
for r in generic:
    print(f"N={r.N:5d}  sup error {r.sup_error:.4e}")
print("log-log slope at 0.5+0.5i:", round(scaling_slope(generic), 3))

# at the chart origin the coordinate is already normal and the rate is 1/N
origin = [complex_scaling_error(N) for N in Ns]
print("log-log slope at the origin:", round(scaling_slope(origin), 3))

# real case: Legendre P_N(cos(r/N)) against J0(r) on [0, 10]
for N in (50, 100, 200, 400):
    rep = real_scaling_error(N)
    print(f"N={N:4d}  sup |P_N - J0| = {rep.sup_error:.4f}   N^-1 Pi_N(x,x) = {rep.extra['prefactor']:.5f}")
