"""Canonical test problems shared by the tests, demos and the CLI."""
from __future__ import annotations

from fractions import Fraction

from .extended import PerturbedProblem
from .polynomials import Poly, PolyMap

F = Fraction


def scalar_exponential() -> PolyMap:
    """``x' = x``."""
    return PolyMap([Poly.variable(1, 0)], 1)


def rotation_2d() -> PolyMap:
    """Hamiltonian ``(p^2 + q^2)/2``; ``p' = -q, q' = p``."""
    return PolyMap.linear([[0, -1], [1, 0]])


def rotation_hamiltonian() -> Poly:
    p, q = Poly.variable(2, 0), Poly.variable(2, 1)
    return (p * p + q * q) * F(1, 2)


def cubic_hamiltonian() -> Poly:
    """``H = p^2/2 + q^2/2 + q^3/3``."""
    p, q = Poly.variable(2, 0), Poly.variable(2, 1)
    return (p * p + q * q) * F(1, 2) + q * q * q * F(1, 3)


def cubic_oscillator() -> PolyMap:
    """Field of :func:`cubic_hamiltonian`: ``p' = -q - q^2, q' = p``."""
    from .vectorfields import hamiltonian_vector_field

    return hamiltonian_vector_field(cubic_hamiltonian())


def perturbed_oscillator(eps: float = 1.0) -> PerturbedProblem:
    """One angle (d = 1, omega = 1), one slow variable y, modes {-1, 0, 1}.

    Real form of the perturbation (before scaling by ``eps``)::

        y'     = -0.1 y^2 + 0.3 (1 - y^2) cos(theta) + 0.2 y sin(theta)
        theta' =  0.2 y^2 + 0.1 y cos(theta) - 0.15 y^2 sin(theta)

    Using cos = (e + e*)/2 and sin = (e - e*)/(2i) gives the Fourier modes.
    """
    def poly(terms: dict) -> Poly:
        return Poly(1, {e: c * eps for e, c in terms.items()})

    # coefficient of e^{i theta}: (a - i b)/2 for a cos + b sin
    f0 = PolyMap([poly({(2,): -0.1}), poly({(2,): 0.2})], 1)
    f1 = PolyMap(
        [
            poly({(0,): 0.15 + 0j, (2,): -0.15 + 0j, (1,): -0.1j}),
            poly({(1,): 0.05 + 0j, (2,): 0.075j}),
        ],
        1,
    )
    fm1 = f1.map_coeffs(lambda c: complex(c).conjugate())
    return PerturbedProblem((1.0,), {(-1,): fm1, (0,): f0, (1,): f1}, name="perturbed oscillator")
