"""
Composition and the modified equation
=====================================

Two Euler steps compose to a map with the same coefficients as one step of
size 2h, up to the trees where they differ.  The logarithm of the Euler
coefficients gives the modified vector field, and midpoint's logarithm is
Hamiltonian.
"""
from fractions import Fraction

import numpy as np

from bseries.butcher import (
    EULER,
    IMPLICIT_MIDPOINT,
    compose,
    elementary_weights,
    exp_star,
    is_hamiltonian_field_coeffs,
    is_symplectic_coeffs,
    log_star,
    scale,
)
from bseries.fixtures import cubic_oscillator
from bseries.harness import euler_modified_field, integrate, observed_rates, reference_solution, rk_step

euler = elementary_weights(EULER, 4)

# Two half steps against one full step
two_halves = compose(scale(euler, Fraction(1, 2)), scale(euler, Fraction(1, 2)))
for u, c in two_halves.coeffs.items():
    if c != euler[u]:
        print(f"two half steps differ from one step at {list(u.levels)}: {c} vs {euler[u]}")

# Modified field of Euler
beta = log_star(euler)
print("\nEuler modified field, tree by tree:")
for u, c in beta.coeffs.items():
    if len(u):
        print(f"  {str(list(u.levels)):<14} {c}")
assert exp_star(beta) == euler

# Symplecticity and the Hamiltonian character of the logarithm
mid = elementary_weights(IMPLICIT_MIDPOINT, 5)
print("\nmidpoint symplectic:", bool(is_symplectic_coeffs(mid)))
print("midpoint log Hamiltonian:", bool(is_hamiltonian_field_coeffs(log_star(mid.truncate(4)))))
res = is_symplectic_coeffs(euler)
print("Euler symplectic:", bool(res), "witness", [list(t.levels) for t in res.witness])

# Euler follows its truncated modified flow one order better than the true flow
f = cubic_oscillator()
x0, T = [0.3, 0.2], 2.0
hs = [0.04, 0.02, 0.01]
errs = []
for h in hs:
    num = integrate(lambda x, hh: rk_step(EULER, f, x, hh), x0, T, h)
    errs.append(float(np.max(np.abs(num - reference_solution(euler_modified_field(f, h, 2), x0, T)))))
print("\ntracking the grade-2 modified field:", ", ".join(f"{r:.2f}" for r in observed_rates(hs, errs)[:-1]))
