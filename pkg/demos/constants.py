"""Print the universal constants and check the two identities linking them."""

from hardwall.constants import beta_tilde, compute_universal_constants, identity_residuals

c = compute_universal_constants()
for name, value in c.as_dict().items():
    print(f"{name:>10s} = {value:.15f}   (quadrature error ~ {c.errors[name]:.1e})")
r_in, r_out = identity_residuals(c)
print(f"identity residuals: inner {r_in:.1e}, outer {r_out:.1e}")
print(f"beta via the alternative integrals: {beta_tilde('in'):.15f}, {beta_tilde('out'):.15f}")
