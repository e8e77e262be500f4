"""Apparent polarization of a thermal spin seen from a boosted frame.

A spin at inverse temperature beta in a field with splitting epsilon has
polarization alpha = tanh(-beta eps/2). A boost of rapidity lam along the
field axis shifts the hyperbolic angle, so alpha' = tanh(-beta eps/2 - lam).
"""
import math

import numpy as np

from geoqubit.spacetime import RelativisticDensity, boost_density, boost_polarization

beta_eps = 1.2
alpha = math.tanh(-beta_eps / 2)
print(f"alpha at rest: {alpha:.6f}")

print(" lambda   rational    tanh       spacetime")
for lam in np.linspace(-2, 2, 9):
    a = boost_polarization(alpha, lam)
    b = math.tanh(-beta_eps / 2 - lam)
    rho = boost_density(RelativisticDensity.from_polarization([0, 0, alpha]), lam)
    c = rho.polarization()[2]
    print(f"{lam:7.2f}  {a:+.6f}  {b:+.6f}  {c:+.6f}")

# a pure state stays pure in every frame
print("alpha = 1 after boosts:", {float(l): boost_polarization(1.0, l) for l in (-3.0, 0.5, 3.0)})
