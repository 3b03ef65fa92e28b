"""
Checking a cone against sampled secants
=======================================

"""

# directions of secant lines between nearby points of X and Y approach the cone
import numpy as np

from relcone.cone import LinearCone, cone_pair
from relcone.instances import two_cusps
from relcone.oracle import convergence_sweep, sample, validate

x, y = two_cusps()
c = cone_pair(x, y)
s = sample(x, y, 1e-3, 2000, seed=7)
print(s.count, "directions, largest distance to the cone", validate(s, c).soundness)

# the distance shrinks with the sampling radius
print(np.array(convergence_sweep(x, y, c, (1e-2, 1e-3, 1e-4), 2000, seed=7)))

# dropping one plane is detected, though only by about 14 r with uniform sampling
wrong = LinearCone(3, [([(1, 0, 0), (0, 1, 1)], [])])
print(validate(s, wrong).soundness, validate(s, wrong).passed)
