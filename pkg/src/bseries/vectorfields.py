"""Series evaluation on polynomial vector fields.

Elementary differentials, word-basis functions and iterated commutators are
built symbolically as :class:`PolyMap` objects and then evaluated, so every
identity between coefficient algebra and actual maps can be tested exactly.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .butcher import BMap
from .polynomials import Poly, PolyMap
from .trees import RootedTree, symmetry, trees_up_to
from .words import WMap, Word, is_lie_element


def elementary_differential_field(f: PolyMap, u: RootedTree) -> PolyMap:
    """``F_u`` as a polynomial field: a vertex with children ``v_1..v_m``
    becomes ``f^(m)[F_v1, ..., F_vm]``."""
    if u.is_empty():
        return PolyMap.identity(f.dim)
    cache = f.cache.setdefault("elementary", {})
    if u not in cache:
        cache[u] = f.multilinear([elementary_differential_field(f, v) for v in u.children()])
    return cache[u]


def elementary_differential(f: PolyMap, u: RootedTree, x: Sequence):
    if u.is_empty():
        raise ValueError("elementary differential needs a nonempty tree")
    if len(x) != f.dim:
        raise ValueError(f"point of dimension {len(x)} for a field in dimension {f.dim}")
    return elementary_differential_field(f, u)(x)


def bseries_eval(delta: BMap, f: PolyMap, x: Sequence, h, cap: int | None = None):
    """Truncated ``sum_{|u| <= cap} h^|u| / sigma(u) * delta_u * F_u(x)``."""
    n = delta.cap if cap is None else cap
    if n > delta.cap:
        raise ValueError(f"cap {n} exceeds the grade cap {delta.cap} of the coefficients")
    if len(x) != f.dim:
        raise ValueError(f"point of dimension {len(x)} for a field in dimension {f.dim}")
    acc = [delta.coeffs[RootedTree()] * xi for xi in x]
    for u in trees_up_to(n, include_empty=False):
        c = delta.coeffs[u]
        if c == 0:
            continue
        val = elementary_differential_field(f, u)(x)
        w = h ** len(u) * (c / symmetry(u))
        acc = [a + w * v for a, v in zip(acc, val)]
    return acc


def bseries_field(delta: BMap, f: PolyMap, h, cap: int | None = None) -> PolyMap:
    """``B_delta`` as a polynomial map for a fixed numeric step ``h``."""
    n = delta.cap if cap is None else cap
    out = PolyMap.identity(f.dim) * delta.coeffs[RootedTree()]
    for u in trees_up_to(n, include_empty=False):
        c = delta.coeffs[u]
        if c:
            out = out + elementary_differential_field(f, u) * (h ** len(u) * c / symmetry(u))
    return out


def _letter_fields(fs: Mapping, w: Word) -> None:
    for a in w:
        if a not in fs:
            raise KeyError(f"no vector field for letter {a!r}")


def word_basis_field(fs: Mapping, w: Word) -> PolyMap:
    """``f_{a1..an} = (d f_{a2..an}) f_{a1}``; ``f_() = x``."""
    w = tuple(w)
    _letter_fields(fs, w)
    if not w:
        any_field = next(iter(fs.values()))
        return PolyMap.identity(any_field.dim)
    if len(w) == 1:
        return fs[w[0]]
    # cached on the last letter's field; the stored tuple pins the other fields
    # so their ids stay valid as keys
    owner = fs[w[-1]]
    cache = owner.cache.setdefault("words", {})
    fields = tuple(fs[a] for a in w)
    key = tuple(id(g) for g in fields)
    if key not in cache:
        cache[key] = (word_basis_field(fs, w[1:]).directional(fs[w[0]]), fields)
    return cache[key][0]


def word_basis(fs: Mapping, w: Word, x: Sequence):
    return word_basis_field(fs, w)(x)


def wordseries_eval(delta: WMap, fs: Mapping, x: Sequence, cap: int | None = None):
    """Truncated ``sum_{|w| <= cap} delta_w f_w(x)``."""
    n = delta.cap if cap is None else cap
    acc = [delta.coeffs[()] * xi for xi in x]
    for w, c in delta.coeffs.items():
        if not w or len(w) > n or c == 0:
            continue
        val = word_basis_field(fs, w)(x)
        acc = [a + c * v for a, v in zip(acc, val)]
    return acc


def jacobi_bracket(f: PolyMap, g: PolyMap) -> PolyMap:
    """Commutator ``(dg) f - (df) g``."""
    if f.dim != g.dim or f.size != g.size:
        raise ValueError("fields must live in the same space")
    return g.directional(f) - f.directional(g)


def _check_even(dim: int) -> int:
    if dim % 2:
        raise ValueError(f"symplectic structure needs an even dimension, got {dim}")
    return dim // 2


def poisson_bracket(A: Poly, B: Poly) -> Poly:
    """``{A, B} = grad(A)^T J grad(B)`` with ``J = [[0, I], [-I, 0]]``.

    With this sign, ``J^{-1} grad`` turns nested brackets of Hamiltonians
    into nested Jacobi brackets of their fields, in the same order.
    """
    if A.dim != B.dim:
        raise ValueError("dimension mismatch")
    m = _check_even(A.dim)
    out = Poly.zero(A.dim)
    for j in range(m):
        out = out + A.diff(j) * B.diff(m + j) - A.diff(m + j) * B.diff(j)
    return out


def hamiltonian_vector_field(H: Poly) -> PolyMap:
    """``J^{-1} grad H`` for ``x = (p, q)``: ``(-dH/dq, dH/dp)``."""
    m = _check_even(H.dim)
    grad = H.gradient()
    return PolyMap([-grad[m + j] for j in range(m)] + [grad[j] for j in range(m)], H.dim)


def hamiltonian_word(Hs: Mapping, w: Word) -> Poly:
    """``H_w = (1/n) {{...{H_a1, H_a2}, ...}, H_an}``."""
    w = tuple(w)
    if not w:
        raise ValueError("Hamiltonian words are defined for nonempty words")
    acc = Hs[w[0]]
    for a in w[1:]:
        acc = poisson_bracket(acc, Hs[a])
    return acc * Fraction(1, len(w))


def nested_commutator_field(fs: Mapping, w: Word) -> PolyMap:
    """``[[...[f_a1, f_a2], ...], f_an]``."""
    w = tuple(w)
    _letter_fields(fs, w)
    acc = fs[w[0]]
    for a in w[1:]:
        acc = jacobi_bracket(acc, fs[a])
    return acc


def dsw_eval(beta: WMap, fs: Mapping, x: Sequence, cap: int | None = None, tol: float = 1e-12):
    """Evaluate a Lie element through iterated commutators (Dynkin-Specht-Wever)."""
    n = beta.cap if cap is None else cap
    res = is_lie_element(beta, n, tol)
    if not res:
        raise ValueError(f"coefficients are not a Lie element: {res.detail} at {res.witness}")
    acc = [0 * xi for xi in x]
    for w, c in beta.coeffs.items():
        if not w or len(w) > n or c == 0:
            continue
        val = nested_commutator_field(fs, w)(x)
        acc = [a + c * v / len(w) for a, v in zip(acc, val)]
    return acc
