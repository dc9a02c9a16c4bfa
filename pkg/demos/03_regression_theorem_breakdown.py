#!/usr/bin/env python3
"""Where the quantum regression theorem fails.

Computes <sx(t1) sy(t2)> at t2 = 0.2 four ways: exact operator result,
the full second-order evolution equation (cross kernel included), the
regression-theorem shortcut (cross kernel dropped) and the Markovian
constant-rate version.  The full equation reproduces the exact curve;
the shortcut does not, except at t2 = 0 where its defining extra terms
vanish identically.
"""

import math

import numpy as np

from dephasr import (DensityMatrix, Mode, ModelParams, TimeGrid,
                     SIGMA_X, SIGMA_Y,
                     build_cache, evolve_two_time)

print(__doc__)

params = ModelParams(omega_s=1.0, gamma=0.1, cutoff=5.0, temperature=0.1)
cache = build_cache(params, t_max=10.0, grid_step=5e-4)
rho0 = DensityMatrix.from_pure(math.sqrt(3) / 2, 0.5)

t2 = 0.2
grid = TimeGrid(t2, 10.0, 1e-3)
runs = {mode: evolve_two_time(SIGMA_X, SIGMA_Y, t2, grid, mode, rho0, cache)
        for mode in (Mode.EXACT, Mode.NM_FULL, Mode.NM_QRT, Mode.MARKOVIAN)}

print(f"Re <sx(t1) sy(t2={t2})>:")
print("    t1      exact      full eq.   QRT ansatz   Markovian")
times = runs[Mode.EXACT].times
for idx in range(0, 2400, 300):
    cells = "".join(f"{runs[m].values[idx].real:11.5f}"
                    for m in (Mode.EXACT, Mode.NM_FULL, Mode.NM_QRT,
                              Mode.MARKOVIAN))
    print(f"  {times[idx]:6.2f} {cells}")

dev_full = np.max(np.abs(runs[Mode.NM_FULL].values - runs[Mode.EXACT].values))
dev_qrt = np.max(np.abs(runs[Mode.NM_QRT].values - runs[Mode.EXACT].values))
print(f"\nmax |full eq. - exact|    = {dev_full:.2e}   (agreement)")
print(f"max |QRT ansatz - exact|  = {dev_qrt:.2e}   (breakdown)")

grid0 = TimeGrid(0.0, 5.0, 1e-3)
full0 = evolve_two_time(SIGMA_X, SIGMA_Y, 0.0, grid0, Mode.NM_FULL, rho0, cache)
qrt0 = evolve_two_time(SIGMA_X, SIGMA_Y, 0.0, grid0, Mode.NM_QRT, rho0, cache)
print(f"\nat t2 = 0 the shortcut is exact: max deviation = "
      f"{np.max(np.abs(full0.values - qrt0.values)):.2e}")
