"""
Reading a count off one phase path
==================================

The phase diffusion starts at 2 pi, is pushed upward while the drift
envelope is large, and then settles on a multiple of 2 pi.  The number of
completed 4 pi windings is the number of points in [0, lambda].
"""

import numpy as np

from hardedge import ModelParams, NoiseDriver, count_from_phi, simulate_phi

params = ModelParams(beta=2.0, a=0.0, lam=6.0)
run = simulate_phi(params, noise=NoiseDriver(master_seed=3), record_path=True)

# a coarse view of the path: phase in units of 2 pi
for t, x in zip(run.path_t[::512], run.path_x[::512]):
    print(f"t = {t:7.2f}   phi / 2pi = {x / (2 * np.pi):8.4f}")

sample = count_from_phi(run)
print(f"\nterminal phase / 2pi = {run.terminal_value / (2 * np.pi):.6f}")
print(f"count M(6) = {sample.value}   converged = {sample.converged}   steps = {run.n_steps}")
print(f"typical value 2 lambda / pi = {2 * params.lam / np.pi:.3f}")
