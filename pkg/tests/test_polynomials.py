import cmath
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bseries.jets import Jet, expi, max_abs_diff
from bseries.polynomials import Poly, PolyMap


def random_cubic_map(rng, dim=3) -> PolyMap:
    comps = []
    for _ in range(dim):
        terms = {}
        for _ in range(6):
            e = tuple(int(k) for k in rng.multinomial(int(rng.integers(0, 4)), [1 / dim] * dim))
            terms[e] = F(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
        comps.append(Poly(dim, terms))
    return PolyMap(comps, dim)


def test_arithmetic_and_evaluation():
    x, y = Poly.variable(2, 0), Poly.variable(2, 1)
    p = (x + y) ** 2 - x * x
    assert p == y * y + x * y * 2
    assert p([F(1, 2), F(1, 3)]) == F(1, 9) + F(1, 3)
    assert (p - p).is_zero()
    assert p.diff(0) == y * 2 and p.diff(1) == y * 2 + x * 2


def test_evaluation_over_jets_and_floats():
    x = Poly.variable(1, 0)
    p = x * x * 3 + 1
    eps = Jet.variable(3)
    v = p([eps + 2])
    assert [v[k] for k in range(4)] == [13, 12, 3, 0]
    assert p(np.array([0.5])) == pytest.approx(1.75)


def test_finite_difference_derivatives(rng):
    for _ in range(5):
        f = random_cubic_map(rng)
        x = rng.normal(size=3)
        g = rng.normal(size=3)
        exact = np.array(f.directional(PolyMap([Poly.constant(3, float(v)) for v in g], 3))(x), dtype=float)
        h = 1e-5
        fd = (np.array(f(x + h * g), dtype=float) - np.array(f(x - h * g), dtype=float)) / (2 * h)
        assert np.linalg.norm(fd - exact) <= 1e-6 * max(1.0, np.linalg.norm(exact))


def test_multilinear_second_derivative_fd(rng):
    f = random_cubic_map(rng)
    x, u, v = rng.normal(size=(3, 3))
    cu = PolyMap([Poly.constant(3, float(a)) for a in u], 3)
    cv = PolyMap([Poly.constant(3, float(a)) for a in v], 3)
    exact = np.array(f.multilinear([cu, cv])(x), dtype=float)
    h = 1e-4
    fx = lambda z: np.array(f(z), dtype=float)  # noqa: E731
    fd = (fx(x + h * u + h * v) - fx(x + h * u - h * v) - fx(x - h * u + h * v) + fx(x - h * u - h * v)) / (4 * h * h)
    assert np.linalg.norm(fd - exact) <= 1e-6 * max(1.0, np.linalg.norm(exact))


def test_linear_map_and_identity():
    A = PolyMap.linear([[1, 2], [3, 4]])
    assert A([F(1), F(1)]) == [3, 7]
    assert PolyMap.identity(2)([F(5), F(6)]) == [5, 6]
    assert A.directional(PolyMap.identity(2)) == A


def test_json_round_trip(rng):
    f = random_cubic_map(rng)
    assert PolyMap.from_json(f.to_json()) == f
    g = f.map_coeffs(lambda c: complex(c) * (1 + 0.5j))
    assert PolyMap.from_json(g.to_json()) == g
    with pytest.raises(ValueError):
        PolyMap.from_json({"dim": 1})


small = st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=9), min_size=3, max_size=3)


@given(small, small)
def test_jet_ring_axioms(a, b):
    x, y = Jet(a, 2), Jet(b, 2)
    assert x * y == y * x
    assert (x + y) * x == x * x + y * x
    assert (x * y) ** 2 == x**2 * y**2


def test_jet_expi_matches_taylor():
    e = Jet.variable(4)
    z = expi(e * 0.7 + 0.3)
    expected = [cmath.exp(0.3j) * (0.7j) ** k / math.factorial(k) for k in range(5)]
    assert max_abs_diff(z, Jet(expected, 4)) < 1e-15
    assert expi(0.25) == cmath.exp(0.25j)
