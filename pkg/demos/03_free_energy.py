"""
Casimir free energy of two gold plates versus temperature
=========================================================

Matsubara sum at a = 1 um from 0 to 800 K, against the zero-temperature
value, the ideal metal and the classical high-temperature limit.
"""
import numpy as np

from nernst_casimir.constants import classical_limit, ideal_metal_energy_T0
from nernst_casimir.dispersion import GOLD_2, Drude, Plasma
from nernst_casimir.lifshitz import free_energy, free_energy_T0

a = 1e-6
gold = Drude(GOLD_2)
F0 = free_energy_T0(gold, a).F_total
print(f"F(0) = {F0:.5e} J/m^2, ideal metal {ideal_metal_energy_T0(a):.5e} J/m^2")

# %% Drude and plasma curves
print(f"\n{'T (K)':>7} {'F_Drude/F0':>11} {'F_plasma/F0':>12} {'F_Drude/F_cl':>13}")
plasma = Plasma(GOLD_2.omega_p)
for T in np.linspace(100, 800, 8):
    fd = free_energy(gold, a, T).F_total
    fp = free_energy(plasma, a, T).F_total
    print(f"{T:7.0f} {fd / F0:11.4f} {fp / F0:12.4f} {fd / classical_limit(a, T):13.4f}")

# %% far above room temperature only the static TM term is left
for T in (2000.0, 5000.0):
    print(f"T = {T:.0f} K: F / F_cl = {free_energy(gold, a, T).F_total / classical_limit(a, T):.6f}")
