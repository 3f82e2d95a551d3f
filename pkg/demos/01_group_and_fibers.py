# A first look at the Heisenberg group over F_5 and its vertical projections.
import numpy as np

from heislw.group import HeisenbergGroup

H = HeisenbergGroup(1, 5)

# The twisted product does not commute; the discrepancy sits in t.
a, b = (1, 0, 0), (0, 1, 0)
print("a*b =", H.mul(a, b), " b*a =", H.mul(b, a))
print("commutator =", H.commutator(a, b))  # central: (0, 0, omega(a, b))

# pi_1 forgets x_1 and shifts t by x_1 x_2 / 2.
p = (2, 3, 1)
print("pi_1", p, "->", H.project(1, p))
print("pi_2", p, "->", H.project(2, p))

# Every point splits as (point of W_1) * (point of L_1).
base, shift = H.decompose(1, p)
print("decompose:", base, "*", shift, "=", H.mul(base, shift))

# A fiber of pi_1 is a left coset of L_1: a curve, not a straight line...
fib = H.fiber(1, (1, 0))
print("fiber over (1, 0):\n", fib)
# ...until the shear T_1 straightens it onto an additive translate of L_1.
print("straightened:\n", H.straighten(1, fib))

# Each plane point has exactly q preimages under every projection.
for j in (1, 2):
    print("pi_%d preimage counts:" % j, np.unique(np.bincount(H.projection_ranks(j))))
