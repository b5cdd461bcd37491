"""
Clock and shift matrices
========================

Finite unitary models of vu = e(theta) uv at rational theta = p/q, and
what happens along the continued-fraction convergents of an irrational.
"""
import math

import numpy as np

from skewtor import presentations as pres
from skewtor.reps import check_theorem1_numeric, clock_shift, convergents, relation_residuals
from skewtor.algebra import U, V

rep = clock_shift(1, 5)
print(np.round(rep[V], 3))
w = np.exp(2j * np.pi / 5)
print("|VU - w UV| =", np.linalg.norm(rep[V] @ rep[U] - w * rep[U] @ rep[V], 2))

print("mapped quotient at 3/64:", check_theorem1_numeric(3, 64).max_residual)

theta = math.sqrt(2) - 1
for p, q in convergents(theta, 7)[1:]:
    r = relation_residuals(clock_shift(p, q), pres.torus_relations(), theta).max_residual
    print("%3d/%-4d residual %.2e" % (p, q, r))
