"""
Three routes to the same count
==============================

Hard-edge counts at beta = 2, lambda = 2 from the phase diffusion, the
Riccati zero count and a 400 x 400 bidiagonal matrix.  At beta = 2 and
a = 0 the chance of no point below 1 is exactly exp(-1).
"""

import math

import numpy as np

from hardedge import bess_counts, oracle_counts, riccati_counts

n = 2000
lam = 2.0
phi = bess_counts(2.0, 0.0, [1.0, lam], n, master_seed=1)
ric = riccati_counts(2.0, 0.0, [1.0, lam * lam], n, master_seed=2)
mat = oracle_counts(400, 2.0, 0.0, [1.0, lam], n, master_seed=3)

print("route      P(M(1)=0)   mean M(2)   P(M(2)=k), k=0..3")
for name, v in (("phase", phi.values), ("riccati", ric.values), ("matrix", mat)):
    law = np.bincount(v[1], minlength=4)[:4] / n
    print(f"{name:8s}  {np.mean(v[0] == 0):9.4f}   {v[1].mean():9.4f}   {np.array2string(law, precision=4)}")
print(f"exact     {math.exp(-1):9.4f}")
