"""
Numerical TE free energy against the analytic form, and the Nernst check
========================================================================

R = (dF_th - dF_num)/dF_th with dF_th = C1 T^2/(1 + C2 sqrt T).  A fit
R = c0 + c1 sqrt T + c2 T tests whether C1 and C2 are right.  Takes about
half a minute.
"""
from nernst_casimir.analysis import VerdictConfig, default_ratio_grid, nernst_verdict
from nernst_casimir.dispersion import GOLD_2, Drude, Plasma

a = 1e-6
report = nernst_verdict(Drude(GOLD_2), a, VerdictConfig(T_grid=tuple(default_ratio_grid())))
for p in report.series:
    print(f"T = {p.T:7.4f} K   R = {p.R:8.5f}")
print()
print(report.text())

# %% the plasma model fails at the first hurdle
print(nernst_verdict(Plasma(GOLD_2.omega_p), a).text())
