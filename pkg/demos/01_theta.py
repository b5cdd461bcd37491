"""
Theta series on a lattice
=========================

Evaluate the odd theta series, look at its tail bound, and check the two
quasi-periodicity laws numerically.
"""
import cmath
import math

import numpy as np

from skewtor.theta import SeriesConfig, eval_theta, theta_with_tail

tau = 1j

# the value together with the size of the first omitted term and a rigorous tail bound
value, first, bound = theta_with_tail(0.3 + 0.2j, tau, SeriesConfig())
print("theta(0.3+0.2i) =", value)
print("first omitted term %.1e, tail bound %.1e" % (first, bound))

print("theta(0) =", eval_theta(0, tau))

zs = [complex(a, b) for a in np.linspace(0, 1, 5) for b in np.linspace(0, 1, 5)]
shift = max(abs(eval_theta(z + 1, tau) - eval_theta(z, tau)) for z in zs)
twist = max(abs(eval_theta(z + tau, tau) + cmath.exp(-2j * math.pi * z) * eval_theta(z, tau)) for z in zs)
print("worst |theta(z+1) - theta(z)|:", shift)
print("worst |theta(z+tau) + e(-z) theta(z)|:", twist)
