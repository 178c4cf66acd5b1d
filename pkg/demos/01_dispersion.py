"""
Permittivity on the imaginary frequency axis
============================================

Three metal models side by side, then the test that decides whether the
zero-frequency TE mode survives: does zeta^2 (eps - 1) vanish as zeta -> 0?
"""
import numpy as np

from nernst_casimir.dispersion import GOLD_2, Drude, IdealMetal, Plasma, te_zero_mode_condition

drude = Drude(GOLD_2)
plasma = Plasma(GOLD_2.omega_p)
print(f"gold: omega_p = {GOLD_2.omega_p:.4e} rad/s, nu = {GOLD_2.nu:.4e} rad/s")

# %% eps(i zeta) over eight decades
zeta = np.geomspace(1e9, 1e17, 9)
print(f"\n{'zeta (rad/s)':>14} {'Drude':>14} {'plasma':>14}")
for z, d, p in zip(zeta, drude.permittivity(zeta), plasma.permittivity(zeta)):
    print(f"{z:14.3e} {d:14.4e} {p:14.4e}")

# %% Drude grows like 1/zeta at small zeta, plasma like 1/zeta^2, so only
# Drude keeps zeta^2 (eps - 1) going to zero
probes = np.array([1e9, 1e8, 1e7, 1e6])
for model in (drude, plasma, IdealMetal()):
    chk = te_zero_mode_condition(model, probes)
    print(f"{type(model).__name__:>10}: zero mode suppressed = {chk.satisfied}, exponent = {chk.exponent:.3f}")
