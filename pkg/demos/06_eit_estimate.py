"""Estimating the cross-Kerr coupling from atomic-medium parameters."""

from kerrdeco.analytics import EitParams, estimate_cross_coupling

# a transparency medium of n_at atoms couples the two cavity modes;
# the estimate is only trustworthy while the coupling stays adiabatic
for n_at in (50, 99, 100, 400):
    eit = EitParams(g13=1.0, g24=1.0, omega_c=10.0, delta_omega2=5.0, n_at=n_at)
    est = estimate_cross_coupling(eit)
    guard = "ok" if est.adiabatic_ok else "VIOLATED (estimate unreliable)"
    print(f"n_at = {n_at:4d}: chi12 = {est.chi12:8.4f} rad/us, "
          f"|g13|^2 n_at / omega_c^2 = {est.adiabatic_ratio:6.3f}, adiabatic {guard}")

# the reference arithmetic example
est = estimate_cross_coupling(EitParams(1.0, 1.0, 10.0, 5.0, 100))
print(f"\nreference point: chi12 = {est.chi12} rad/us")
