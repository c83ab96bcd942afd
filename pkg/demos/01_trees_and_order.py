"""
Rooted trees and Runge-Kutta order
==================================

Enumerate trees, then read off the order of a few classical tableaux from
their elementary weights.  Everything here is exact rational arithmetic.
"""
from fractions import Fraction

from bseries.butcher import EULER, EXPLICIT_MIDPOINT, HEUN, RK4, condition_text, elementary_weights, order_conditions, order_of
from bseries.trees import density, symmetry, trees_up_to

# Trees through order 4, with symmetry and density
print(f"{'|u|':>3}  {'levels':<14}{'sigma':>6}{'u!':>6}")
for u in trees_up_to(4, include_empty=False):
    print(f"{len(u):>3}  {str(list(u.levels)):<14}{symmetry(u):>6}{density(u):>6}")

# The order conditions through order 3, written as tableau sums
print()
for u, rhs in order_conditions(3):
    print(condition_text(u, rhs))

# Orders of a few tableaux, checked through trees of order 5
print()
for tab in (EULER, EXPLICIT_MIDPOINT, HEUN, RK4):
    print(f"{tab.name:<18} order {order_of(elementary_weights(tab, 5), 5)}")

# Where RK4 stops: the first tree whose weight misses 1/u!
phi = elementary_weights(RK4, 5)
miss = [(u, phi[u]) for u in trees_up_to(5, include_empty=False) if phi[u] != Fraction(1, density(u))]
u, w = miss[0]
print(f"\nRK4 first misses at {list(u.levels)}: weight {w}, exact flow {Fraction(1, density(u))}")
