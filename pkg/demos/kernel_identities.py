"""Evaluate the Fejer and modulated Dirichlet kernels and check their
classical identities numerically: |D|^2 = K, unit mean over a period, and
the K <= pi^2/(n alpha^2) envelope (note: pi^2, not pi — the constant pi
already fails at n = 1, alpha = 2)."""

import math

import numpy as np

from specfield.kernels import dirichlet_mod, fejer

angles = np.array([0.1, 0.5, 1.0, 2.0, 3.0])
n = 17

print(f"order n = {n}")
print(f"{'alpha':>8} {'K(alpha,n)':>14} {'|D|^2':>14} {'pi^2/(n a^2)':>14}")
for a in angles:
    k = fejer(a, n)
    d2 = abs(dirichlet_mod(a, n)) ** 2
    env = math.pi ** 2 / (n * a * a)
    print(f"{a:8.3f} {k:14.8f} {d2:14.8f} {env:14.8f}")

grid = -math.pi + 2 * math.pi * (np.arange(4096) + 0.5) / 4096
for order in (1, 8, 64):
    mean = float(np.mean(fejer(grid, order)))
    print(f"mean of K over one period, n = {order:3d}: {mean:.9f}")

# the pi constant is too small: at n = 1 the kernel is identically 1
a = 2.0
print(f"\nK(2, 1) = {fejer(a, 1):.3f} but pi/(1 * 2^2) = {math.pi / 4:.3f}"
      " -> the pi version of the envelope is false")
print(f"pi^2/(1 * 2^2) = {math.pi ** 2 / 4:.3f} holds")
