"""
Squared reflection coefficients
===============================

A (TM) and B (TE) for gold on a frequency-wavenumber grid.  At zeta = 0 the
TM coefficient is 1 and the TE coefficient is 0 for a Drude metal.
"""
import numpy as np

from nernst_casimir.dispersion import GOLD_2, Drude, Plasma
from nernst_casimir.reflection import reflection_surface

zeta = np.array([0.0, 1e11, 1e13, 1e15])
kperp = np.array([0.0, 1e6, 1e7, 1e8])

for model in (Drude(GOLD_2), Plasma(GOLD_2.omega_p)):
    A, B = reflection_surface(model, zeta, kperp)
    print(f"\n{type(model).__name__}: rows zeta = {zeta}, columns k_perp = {kperp}")
    print("A =\n", np.array2string(A, precision=5))
    print("B =\n", np.array2string(B, precision=5))

# %% the plasma model keeps B > 0 at zeta = 0: that is the surviving TE zero mode
