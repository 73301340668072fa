"""Exact log partition function minus the large-N prediction, for each wall regime."""

from hardwall.expansion import expansion_coefficients, remainder_sweep
from hardwall.potential import parse_descriptor

for desc in ("annulus-log a=0.5", "pinned c=2", "annulus-log a=1.5", "gauss-scaled s=0.8"):
    pot = parse_descriptor(desc)
    co = expansion_coefficients(pot)
    print(f"{desc}  [{co.regime.value}, log N coefficient {co.clog}]")
    for row in remainder_sweep(pot, [100, 200, 400, 800]):
        print(f"  N={row.n:4d}  remainder {row.remainder:+.5f}")
