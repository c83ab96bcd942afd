from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bseries.butcher import (
    EULER,
    EXPLICIT_MIDPOINT,
    HEUN,
    IMPLICIT_MIDPOINT,
    RK4,
    BMap,
    RKTableau,
    adjoint,
    compose,
    condition_text,
    effective_order,
    elementary_weights,
    exact_flow_bmap,
    exp_star,
    inverse,
    is_hamiltonian_field_coeffs,
    is_symplectic_coeffs,
    is_symplectic_tableau,
    log_star,
    order_conditions,
    order_of,
    random_algebra_like,
    random_group_like,
    scale,
    unit_bmap,
)
from bseries.polynomials import Poly, PolyMap
from bseries.trees import EMPTY, LEAF, RootedTree, butcher_product, density, trees_up_to
from bseries.vectorfields import bseries_eval
from oracles import rational_sample

T = RootedTree
seeds = st.integers(0, 2**32 - 1)


def rg(seed, cap=5):
    return random_group_like(cap, np.random.default_rng(seed))


def test_exact_flow_values():
    phi = exact_flow_bmap(4)
    assert phi[EMPTY] == 1 and phi[LEAF] == 1 and phi[[1, 2, 3, 2]] == F(1, 8)


def test_euler_weights():
    c = elementary_weights(EULER, 3)
    assert c[EMPTY] == 1 and c[LEAF] == 1 and c[[1, 2]] == 0


def test_weight_of_decomposed_tree_matches_tableau_sum():
    A = [[F(1, 3), F(-1, 5), 0], [F(2, 7), F(1, 2), F(1, 9)], [1, F(-3, 4), F(1, 6)]]
    b = [F(1, 4), F(2, 5), F(7, 20)]
    c = elementary_weights(RKTableau(A, b), 4)
    s = range(3)
    expected = sum(b[i] * sum(A[i][j] for j in s) * sum(A[i][k] * sum(A[k][l] for l in s) for k in s) for i in s)
    assert c[[1, 2, 3, 2]] == expected


def test_compose_with_unit_is_identity(rng):
    d = random_algebra_like(5, rng)
    assert compose(d, unit_bmap(5)) == d


def test_compose_rejects_non_group_like(rng):
    with pytest.raises(ValueError):
        compose(unit_bmap(3), random_algebra_like(3, rng))


def test_seven_term_decomposition(rng):
    d, g = rg(1, 4), rg(2, 4)
    u = T([1, 2, 3, 2])
    a, b, c3, ch = LEAF, T([1, 2]), T([1, 2, 3]), T([1, 2, 2])
    expected = (d[EMPTY] * g[u] + d[a] * g[a] * g[b] + d[b] * g[b] + d[b] * g[a] * g[a]
                + d[c3] * g[a] + d[ch] * g[a] + d[u] * g[EMPTY])
    assert compose(d, g)[u] == expected


def test_flow_semigroup():
    phi = exact_flow_bmap(5)
    for s, t in [(F(1, 3), F(2, 5)), (F(-1), F(3, 2))]:
        assert compose(scale(phi, s), scale(phi, t)) == scale(phi, s + t)


def test_scale_special_values():
    phi = exact_flow_bmap(4)
    assert scale(phi, 1) == phi and scale(phi, 0) == unit_bmap(4)
    assert all(c == F((-1) ** len(u), density(u)) for u, c in scale(phi, -1).coeffs.items())


def test_inverse_examples():
    assert inverse(unit_bmap(5)) == unit_bmap(5)
    assert inverse(exact_flow_bmap(5)) == scale(exact_flow_bmap(5), -1)


@given(seeds, seeds, seeds)
def test_group_axioms(s1, s2, s3):
    a, b, c = rg(s1), rg(s2), rg(s3)
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a, inverse(a)) == unit_bmap(5) == compose(inverse(a), a)
    assert compose(unit_bmap(5), a) == a == compose(a, unit_bmap(5))


def test_adjoint_of_euler_is_implicit_euler():
    implicit_euler = elementary_weights(RKTableau([[1]], [1]), 5)
    assert adjoint(elementary_weights(EULER, 5)) == implicit_euler


def test_order_of_known_methods():
    assert order_of(elementary_weights(EULER, 4)) == 1
    assert order_of(elementary_weights(HEUN, 4)) == 2
    assert order_of(elementary_weights(EXPLICIT_MIDPOINT, 4)) == 2
    assert order_of(elementary_weights(IMPLICIT_MIDPOINT, 4)) == 2
    assert order_of(elementary_weights(RK4, 5)) == 4
    assert order_of(exact_flow_bmap(6), 6) == 6


def test_order_conditions_through_three():
    conds = order_conditions(3)
    assert [(list(u.levels), v) for u, v in conds] == [
        ([1], 1), ([1, 2], F(1, 2)), ([1, 2, 3], F(1, 6)), ([1, 2, 2], F(1, 3))]
    assert [condition_text(u) for u, _ in conds] == [
        "sum_i b_i = 1",
        "sum_ij b_i a_ij = 1/2",
        "sum_ijk b_i a_ij a_jk = 1/6",
        "sum_ijk b_i a_ij a_ik = 1/3",
    ]
    assert len(order_conditions(1)) == 1 and len(order_conditions(2)) == 2
    with pytest.raises(ValueError):
        order_conditions(0)


def test_symplectic_checks():
    assert is_symplectic_tableau(IMPLICIT_MIDPOINT)
    assert is_symplectic_coeffs(elementary_weights(IMPLICIT_MIDPOINT, 5))
    assert is_symplectic_coeffs(exact_flow_bmap(5))
    res = is_symplectic_coeffs(elementary_weights(EULER, 5))
    assert not res and res.witness == (LEAF, LEAF)
    assert not is_symplectic_tableau(EULER)
    assert is_symplectic_tableau(RKTableau([[1, 2], [3, 4]], [0, 0]))


def test_gauss_two_stage_is_symplectic():
    # Gauss collocation has irrational nodes; its symplectic property is
    # checked on a rational tableau with the same structure b_i a_ij + b_j a_ji = b_i b_j
    A = [[F(1, 4), F(1, 4) - F(1, 3)], [F(1, 4) + F(1, 3), F(1, 4)]]
    t = RKTableau(A, [F(1, 2), F(1, 2)])
    assert is_symplectic_tableau(t)
    assert is_symplectic_coeffs(elementary_weights(t, 5))


def test_hamiltonian_field_checks():
    beta = log_star(exact_flow_bmap(4))
    assert beta[LEAF] == 1 and all(c == 0 for u, c in beta.coeffs.items() if u != LEAF)
    assert is_hamiltonian_field_coeffs(beta)
    bad = BMap(3, {LEAF: 1, T([1, 2]): F(1, 7)})
    res = is_hamiltonian_field_coeffs(bad)
    assert not res and res.witness == (LEAF, LEAF)
    assert is_hamiltonian_field_coeffs(log_star(elementary_weights(IMPLICIT_MIDPOINT, 4)))


def test_symplectic_group_implies_hamiltonian_log():
    A = [[F(1, 4), F(1, 4) - F(1, 3)], [F(1, 4) + F(1, 3), F(1, 4)]]
    g = elementary_weights(RKTableau(A, [F(1, 2), F(1, 2)]), 5)
    assert is_symplectic_coeffs(g) and is_hamiltonian_field_coeffs(log_star(g))


def test_log_of_euler():
    beta = log_star(elementary_weights(EULER, 4))
    assert [beta[u] for u in ([1], [1, 2], [1, 2, 3], [1, 2, 2])] == [1, F(-1, 2), F(1, 3), F(1, 6)]
    assert [beta[u] for u in ([1, 2, 3, 4], [1, 2, 3, 3], [1, 2, 3, 2], [1, 2, 2, 2])] == [
        F(-1, 4), F(-1, 6), F(-1, 12), 0]


def test_exp_log_trivial_cases():
    assert exp_star(BMap(5, {})) == unit_bmap(5)
    assert exp_star(BMap(5, {LEAF: 1})) == exact_flow_bmap(5)
    assert log_star(unit_bmap(5)) == BMap(5, {})


@given(seeds)
def test_exp_log_round_trip(seed):
    g = rg(seed)
    assert exp_star(log_star(g)) == g
    b = random_algebra_like(5, np.random.default_rng(seed))
    assert log_star(exp_star(b)) == b


def test_effective_order():
    psi = elementary_weights(RKTableau([[0, 0], [F(2, 3), F(1, 3)]], [F(1, 2), F(1, 2)]), 4)
    assert order_of(psi) == 2
    chi = BMap(4, {EMPTY: 1, T([1, 2]): F(1, 12)})
    assert effective_order(psi, chi, 4) == 3
    assert effective_order(psi, unit_bmap(4), 4) == order_of(psi)
    phi = exact_flow_bmap(4)
    assert effective_order(phi, scale(phi, F(2, 3)), 4) == 4


def test_flow_does_not_commute_with_every_map():
    # conjugating the exact flow by a general group element does change it:
    # the Butcher group is not abelian
    phi, e = exact_flow_bmap(4), elementary_weights(EULER, 4)
    diff = compose(phi, e) - compose(e, phi)
    assert diff[[1, 2, 2]] == 1
    assert effective_order(phi, e, 4) == 2


def _affine_field(f: PolyMap, M, Minv, c) -> PolyMap:
    """``fbar(xbar) = M^-1 f(M xbar + c)`` as a polynomial map."""
    n = f.dim
    xs = [Poly.variable(n, j) for j in range(n)]
    args = [sum((xs[j] * M[i][j] for j in range(n)), Poly.constant(n, c[i])) for i in range(n)]
    vals = [p(args) for p in f]
    return PolyMap([sum((vals[j] * Minv[i][j] for j in range(n)), Poly.zero(n)) for i in range(n)], n)


def test_affine_equivariance(rng):
    x0, x1 = Poly.variable(2, 0), Poly.variable(2, 1)
    f = PolyMap([x1 * x1 - x0 + F(1, 2), x0 * x1 * 2 + x1 * x1 * x1], 2)
    M = [[F(2), F(1)], [F(1), F(1)]]
    Minv = [[F(1), F(-1)], [F(-1), F(2)]]
    c = [F(1, 3), F(-2, 5)]
    fbar = _affine_field(f, M, Minv, c)
    for seed in range(3):
        g = rg(seed, 4)
        x = rational_sample(rng, 2)
        h = F(1, 7)
        xbar = [sum(Minv[i][j] * (x[j] - c[j]) for j in range(2)) for i in range(2)]
        inner = bseries_eval(g, fbar, xbar, h)
        rhs = [sum(M[i][j] * inner[j] for j in range(2)) + c[i] for i in range(2)]
        assert bseries_eval(g, f, x, h) == rhs


def test_bmap_json_round_trip(rng):
    g = random_group_like(4, rng)
    assert BMap.from_json(g.to_json()) == g
    assert RKTableau.from_json(RK4.to_json()) == RK4


def test_bmap_rejects_floats():
    with pytest.raises(TypeError):
        BMap(2, {LEAF: 0.5})


def test_butcher_product_coefficients_symmetric_in_hamiltonian_check():
    beta = log_star(elementary_weights(IMPLICIT_MIDPOINT, 4))
    for u in trees_up_to(2, include_empty=False):
        for v in trees_up_to(2, include_empty=False):
            assert beta[butcher_product(u, v)] + beta[butcher_product(v, u)] == 0
