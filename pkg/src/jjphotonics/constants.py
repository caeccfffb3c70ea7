"""Physical constants used throughout, in SI units."""

import scipy.constants as _sc

e = _sc.e            # elementary charge [C]
h = _sc.h            # Planck constant [J s]
k_B = _sc.k          # Boltzmann constant [J/K]

# superconducting resistance quantum h/(4e^2), ~6.45 kOhm
R_Q = h / (4.0 * e**2)

# superconducting flux quantum h/(2e)
Phi_0 = h / (2.0 * e)
