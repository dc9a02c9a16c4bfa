#!/usr/bin/env python3
"""Bath correlation kernels and the dephasing rate.

Builds the kernel cache at a few temperatures and shows how the
time-dependent dephasing rate D(t) relaxes towards its constant
Markovian value 4*pi*gamma*T, and how the zero-temperature grids
reproduce the analytic closed forms.
"""

import numpy as np

from dephasr import ModelParams, alpha_eff, build_cache, markovian_rate

print(__doc__)

params = {T: ModelParams(omega_s=1.0, gamma=0.1, cutoff=5.0, temperature=T)
          for T in (0.0, 0.1, 1.0)}
caches = {T: build_cache(p, t_max=20.0, grid_step=1e-3)
          for T, p in params.items()}

print("effective kernel at t = 0 (equals integral of J(w) coth(w/2T) dw):")
for T, p in params.items():
    print(f"  T = {T:>4}: alpha_eff(0) = {alpha_eff(0.0, p).real:.6f}")

print("\ndephasing rate D(t) vs the Markovian constant:")
header = "    t   " + "".join(f"T={T:<10}" for T in params)
print(header)
for t in (0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0):
    row = f"  {t:5.1f} " + "".join(f"{caches[T].rate(t):10.5f}  " for T in params)
    print(row)
print("  D_inf " + "".join(f"{markovian_rate(p):10.5f}  " for p in params.values()))
print("(at T = 0 the rate decays back to zero: no thermal dephasing survives"
      "\n the long-time limit for an ohmic bath)")

print("\nzero-temperature closed forms vs the cached grids:")
lam, g = 5.0, 0.1
c0 = caches[0.0]
ts = np.array([0.2, 1.0, 5.0])
print("    t      D(t) cache     4 g L^2 t/(1+L^2 t^2)")
for t in ts:
    print(f"  {t:5.2f}  {float(c0.rate(t)):14.10f}  "
          f"{4 * g * lam**2 * t / (1 + lam**2 * t**2):14.10f}")
print("    t    Gamma(t) cache   2 g ln(1+L^2 t^2)")
for t in ts:
    print(f"  {t:5.2f}  {float(c0.exponent(t)):14.10f}  "
          f"{2 * g * np.log(1 + lam**2 * t**2):14.10f}")
