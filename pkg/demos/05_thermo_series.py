"""
Thermodynamic-limit series
==========================

Everything the infinite chain knows, from rapidly converging series:
bulk energy density, hole dispersion, twisted boundary energy, and the
excitation gap, including their behavior towards the isotropic point.
"""

import math

import numpy as np

from twistbethe.common import Parity
from twistbethe.thermo import (
    e0_density,
    excitation_gap_tl,
    ground_energy_tl,
    hole_energy,
    twisted_boundary_energy,
)

# ---------------------------------------------------------------
# 1. Headline numbers at eta = 2 and 3, normalized by cosh(eta).

for eta in (2.0, 3.0):
    ch = math.cosh(eta)
    print(f"eta = {eta}:")
    print(f"  e0          = {e0_density(eta):+.12f}")
    print(f"  E_b / cosh  = {twisted_boundary_energy(eta, 'even') / ch:.12f}")
    print(f"  gap / cosh  = {excitation_gap_tl(eta, 'odd') / ch:.12f}")
    print(f"  gap (even)  = {excitation_gap_tl(eta, 'even')}")

# ---------------------------------------------------------------
# 2. The hole dispersion e_h(x) on the rapidity window [-pi/eta, pi/eta]:
#    maximal at the center, minimal at the band edge, where its value is
#    exactly the boundary energy (and vanishes exponentially as eta -> 0).

eta = 2.0
xs = np.linspace(0.0, math.pi / eta, 7)
print("\nhole dispersion, eta = 2:")
for x in xs:
    print(f"  e_h({x:+.4f}) = {hole_energy(float(x), eta):.10f}")

# ---------------------------------------------------------------
# 3. Which (boundary, parity) pairs carry the hole in the ground state:
#    twisted-even and periodic-odd do, and the other two do not, so the
#    twisted-minus-periodic difference reverses sign with parity.

for N in (100, 101):
    d = ground_energy_tl(N, eta, "anti") - ground_energy_tl(N, eta, "per")
    print(f"N = {N}: E_anti - E_per = {d:+.12f}")
print("+E_b (even)     =",
      f"{twisted_boundary_energy(eta, Parity.EVEN):+.12f}")

# ---------------------------------------------------------------
# 4. Towards the isotropic point the gap closes like the band-edge hole
#    energy, and e0/cosh(eta) approaches 1 - 4 ln 2.

print("\nsmall-eta behavior:")
for eta in (1.0, 0.5, 0.25, 0.1, 1e-3):
    e0n = e0_density(eta) / math.cosh(eta)
    print(f"  eta = {eta:<6}: e0/cosh = {e0n:+.8f}")
print("  1 - 4 ln 2   :", 1.0 - 4.0 * math.log(2.0))
