"""Walk through j for one potential and show which asymptotic form handles each term."""

import math

from hardwall.exact import log_uj_oracle
from hardwall.potential import annulus_log
from hardwall.term_asym import log_uj_asymptotic

pot = annulus_log(0.5)
n = 400
print(pot.geometry.as_dict())
print(f"{'j':>5s} {'regime':>12s} {'x':>8s} {'rel. error':>11s}")
for j in range(0, n, 25):
    asym, regime = log_uj_asymptotic(pot, n, j)
    err = math.expm1(asym - log_uj_oracle(pot, n, j))
    x = "" if regime.x is None else f"{regime.x:8.3f}"
    print(f"{j:5d} {regime.tag.value:>12s} {x:>8s} {err:11.2e}")
