"""
Expected Euler characteristic
=============================

The mean Euler characteristic of a random Rips complex on the torus rises,
crosses zero at intensity 1/r^2 and turns negative once holes outnumber
components. A few Monte-Carlo points are checked against the formula.
"""

import numpy as np

from holefree import chi_2d_stationary_lambdas, empirical_chi, expected_chi_2d, sample_poisson

lams = np.linspace(0, 15, 31)
curve = [expected_chi_2d(lam, 1.0, 10.0) for lam in lams]
for lam, chi in zip(lams[::3], curve[::3]):
    print(f"lambda {lam:5.1f}   E[chi] {chi:9.3f}")

peak, trough = chi_2d_stationary_lambdas(1.0)
print(f"maximum at lambda = {peak:.4f}, minimum at lambda = {trough:.4f}")

# simulation stays at low intensity where cliques are small
for lam in (0.2, 0.5, 1.0):
    chis = [empirical_chi(sample_poisson(lam, 10.0, "torus", "uniform", seed=s), 1.0)
            for s in range(200)]
    err = np.std(chis, ddof=1) / np.sqrt(len(chis))
    print(f"lambda {lam}: simulated {np.mean(chis):7.3f} +- {err:.3f}, "
          f"formula {expected_chi_2d(lam, 1.0, 10.0):7.3f}")
