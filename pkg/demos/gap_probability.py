"""Scaled Ginibre gas behind a wall at |z| = 1: partition function and gap probability.

The hard-wall partition function follows the closed-form expansion; the gap
probability is its ratio to the wall-free partition function.
"""

import math

from hardwall.exact import log_partition_hard, log_partition_soft_gauss
from hardwall.expansion import expansion_coefficients
from hardwall.expansion import gap_coefficients_gauss
from hardwall.potential import gauss_scaled

s = 0.8
pot = gauss_scaled(s)
c1, c2, c3, c4 = gap_coefficients_gauss(s)
c0 = expansion_coefficients(pot).c0
print(f"s = {s}: N^2 {c1:+.6f}, N log N {c2:+.6f}, N {c3:+.6f}, sqrt(N) {c4:+.6f}, "
      f"log N -1/3, constant {c0:+.6f}")
print(f"{'N':>5s} {'log Z exact':>14s} {'expansion':>14s} {'remainder':>10s} {'log P':>12s}")
for n in (50, 100, 200, 400, 800):
    exact = log_partition_hard(pot, n).log_z_over_2pi_pow_n
    approx = c1 * n * n + c2 * n * math.log(n) + c3 * n + c4 * math.sqrt(n) - math.log(n) / 3 + c0
    log_p = exact - log_partition_soft_gauss(s, n)
    print(f"{n:5d} {exact:14.6f} {approx:14.6f} {exact - approx:+10.5f} {log_p:12.4f}")
