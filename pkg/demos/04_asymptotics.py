"""
Low-temperature expansion of the TE free energy
===============================================

dF_TE ~ C1 T^2 - C1 C2 T^{5/2} for a Drude metal, assembled two ways:
an Euler-Maclaurin sum with a shifted starting point, and a Mellin/zeta
route.  Both give the same coefficients.
"""
from nernst_casimir.asymptotics import (
    asymptotic_coefficients,
    power_term_pieces,
    riemann_zeta,
    zeta_route,
)
from nernst_casimir.dispersion import GOLD_1, GOLD_2

a = 1e-6
co = asymptotic_coefficients(GOLD_2, a)
print(f"g'(0) = {co.g_prime_0:.8f}, I = {co.I:.8f}")
print(f"C1 = {co.C1:.4e} J/(m^2 K^2)")
print(f"C2 = {co.C2:.4f} K^-1/2 (Euler-Maclaurin), {co.C2_exact_zeta:.4f} (exact zeta)")

# %% the n^{3/2} sum: Euler-Maclaurin pieces against zeta(-3/2)
for p in (1, 2, 3):
    e = power_term_pieces(1.5, p)
    print(f"p = {p}: delta S = {e.delta_S:.7f}, next term {e.error_estimate:.2e}")
print(f"zeta(-3/2) = {riemann_zeta(-1.5):.7f}")

# %% zeta route
zr = zeta_route(GOLD_2, a, 0.1)
print(f"zeta route: T^2 coefficient {zr.t2_coefficient:.4e}, T^5/2 coefficient {zr.t52_coefficient:.4e}")
print(f"           -C1 C2 = {-co.C1 * co.C2:.4e}")

# %% sensitivity to the optical data and to the gap
alt = asymptotic_coefficients(GOLD_1, a)
print(f"gold-1: C1 shifts by {100 * (alt.C1 / co.C1 - 1):.2f}%, C2 by {100 * (alt.C2 / co.C2 - 1):.2f}%")
print(f"a = 2 um: C2 = {asymptotic_coefficients(GOLD_2, 2 * a).C2:.4f}")
