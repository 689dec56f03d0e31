"""
The hard-edge rate function
===========================

Tabulate the rate function over a density grid and locate its zero.
Everything here is deterministic and runs in about a second.
"""

import math

import numpy as np

from hardedge import gamma_fn, rate_bess, rate_sine

# the density map gamma falls from +inf to 0 as nu runs up to 1
for nu in (-50.0, -3.0, 0.0, 0.5, 1.0):
    print(f"gamma({nu:6.1f}) = {gamma_fn(nu):.10f}")

# rate function on a grid; the zero sits at the typical density 2/pi
print("\n   rho        nu          I_bess      32 I_sine(rho/4)")
for rho in np.linspace(0, 3, 7):
    ev = rate_bess(rho)
    print(f"{rho:6.3f}  {ev.nu:10.6f}  {ev.I_bess:12.9f}  {32 * rate_sine(rho / 4):12.9f}")

# an empty interval costs I(0) = 1/2, which matches exp(-(beta/2) lambda) tails
print("\nI(0)     =", rate_bess(0.0).I_bess)
print("I(2/pi)  =", rate_bess(2 / math.pi).I_bess)
