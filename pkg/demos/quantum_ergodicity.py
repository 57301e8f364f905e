"""
Random bases of spherical harmonics are quantum ergodic
=======================================================

For a Haar-random orthonormal basis of degree-N harmonics, the diagonal
matrix elements of multiplication by f cluster around the mean of f with
variance about c_f / N, where c_f is the Liouville mean of the squared
deviation of great-circle averages of f.
"""

from randzeros.qe import even_test_symbol, expected_s2, odd_test_symbol, predicted_constant, s2_statistic

f = even_test_symbol()  # x3^2
cf = predicted_constant(f)
print(f"c_f = {cf:.6f} (1/45 = {1 / 45:.6f})")
for N in (10, 20, 40, 80):
    m, se = s2_statistic(N, f, 200, seed=0)
    print(f"N={N:3d}  N*S2/c_f = {N * m / cf:.3f} +/- {N * se / cf:.3f}   exact mean {N * expected_s2(N, f) / cf:.3f}")

# an odd symbol has vanishing great-circle averages, and by parity every
# matrix element within one eigenspace is zero
g = odd_test_symbol()
print("odd symbol:", predicted_constant(g), s2_statistic(20, g, 10, seed=0)[0])
