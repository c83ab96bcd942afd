"""Coefficient maps on rooted trees and the Butcher group.

All coefficients are exact :class:`fractions.Fraction` values.  A map
``delta`` stands for the formal series

    B_delta(x) = sum_u h^{|u|} / sigma(u) * delta_u * F_u(x)

so composition, inverses, logarithms and order checks are computed purely on
the coefficients, independently of the vector field.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Mapping, Sequence

from .trees import (
    EMPTY,
    RootedTree,
    butcher_product,
    coproduct,
    density,
    enumerate_trees,
    trees_up_to,
)

DEFAULT_CAP = 6


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact coefficients; pass a string or Fraction")
    return Fraction(x)


def _json_number(x):
    """JSON decimals such as ``0.5`` are read as the decimal written, not the binary float."""
    return repr(x) if isinstance(x, float) else x


@dataclass(frozen=True)
class BMap:
    """Dense map from every tree of order <= ``cap`` to a rational number."""

    cap: int
    coeffs: Mapping[RootedTree, Fraction]

    def __post_init__(self):
        full = {u: Fraction(0) for u in trees_up_to(self.cap)}
        for u, c in self.coeffs.items():
            if len(u) > self.cap:
                continue
            full[u] = _frac(c)
        object.__setattr__(self, "coeffs", full)

    def __getitem__(self, u: RootedTree | Sequence[int]) -> Fraction:
        if not isinstance(u, RootedTree):
            u = RootedTree(u)
        return self.coeffs[u]

    @property
    def is_group_like(self) -> bool:
        return self.coeffs[EMPTY] == 1

    @property
    def is_algebra_like(self) -> bool:
        return self.coeffs[EMPTY] == 0

    def trees(self) -> list[RootedTree]:
        return list(self.coeffs)

    def truncate(self, cap: int) -> BMap:
        if cap > self.cap:
            raise ValueError(f"cannot raise grade cap from {self.cap} to {cap}")
        return BMap(cap, {u: c for u, c in self.coeffs.items() if len(u) <= cap})

    def __eq__(self, other) -> bool:
        return isinstance(other, BMap) and self.cap == other.cap and self.coeffs == other.coeffs

    def __add__(self, other: BMap) -> BMap:
        cap = _common_cap(self, other)
        return BMap(cap, {u: self.coeffs[u] + other.coeffs[u] for u in trees_up_to(cap)})

    def __sub__(self, other: BMap) -> BMap:
        cap = _common_cap(self, other)
        return BMap(cap, {u: self.coeffs[u] - other.coeffs[u] for u in trees_up_to(cap)})

    def __repr__(self) -> str:
        body = ", ".join(f"{u}: {c}" for u, c in self.coeffs.items() if c)
        return f"BMap(cap={self.cap}, {{{body}}})"

    def to_json(self) -> dict[str, str]:
        return {",".join(map(str, u.levels)): str(c) for u, c in self.coeffs.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, str], cap: int | None = None) -> BMap:
        coeffs = {}
        for key, val in data.items():
            levels = [int(x) for x in key.split(",")] if key.strip() else []
            coeffs[RootedTree(levels)] = _frac(val)
        if cap is None:
            cap = max((len(u) for u in coeffs), default=0)
        return cls(cap, coeffs)


def _common_cap(a: BMap, b: BMap) -> int:
    if a.cap != b.cap:
        raise ValueError(f"grade caps differ: {a.cap} != {b.cap}")
    return a.cap


def unit_bmap(cap: int = DEFAULT_CAP) -> BMap:
    return BMap(cap, {EMPTY: 1})


def exact_flow_bmap(cap: int = DEFAULT_CAP) -> BMap:
    """Coefficients ``1/u!`` of the exact solution flow."""
    if cap < 0:
        raise ValueError("grade cap must be nonnegative")
    return BMap(cap, {u: Fraction(1, density(u)) for u in trees_up_to(cap)})


def scale(gamma: BMap, theta) -> BMap:
    """Absorb a step factor: ``theta**|u| * gamma_u``."""
    theta = _frac(theta)
    return BMap(gamma.cap, {u: theta ** len(u) * c for u, c in gamma.coeffs.items()})


@dataclass(frozen=True)
class RKTableau:
    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    name: str = ""

    def __post_init__(self):
        A = tuple(tuple(_frac(x) for x in row) for row in self.A)
        b = tuple(_frac(x) for x in self.b)
        s = len(b)
        if len(A) != s or any(len(row) != s for row in A):
            raise ValueError(f"tableau dimensions inconsistent: A is {len(A)}x?, b has {s} entries")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def stages(self) -> int:
        return len(self.b)

    @property
    def c(self) -> tuple[Fraction, ...]:
        return tuple(sum(row, Fraction(0)) for row in self.A)

    @property
    def is_explicit(self) -> bool:
        return all(self.A[i][j] == 0 for i in range(self.stages) for j in range(i, self.stages))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "A": [[str(x) for x in row] for row in self.A],
            "b": [str(x) for x in self.b],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> RKTableau:
        try:
            A = [[_json_number(x) for x in row] for row in data["A"]]
            return cls(A=A, b=[_json_number(x) for x in data["b"]], name=data.get("name", ""))
        except KeyError as exc:
            raise ValueError(f"tableau JSON missing key {exc}") from None


EULER = RKTableau(A=((0,),), b=(1,), name="euler")
IMPLICIT_MIDPOINT = RKTableau(A=((Fraction(1, 2),),), b=(1,), name="implicit midpoint")
EXPLICIT_MIDPOINT = RKTableau(A=((0, 0), (Fraction(1, 2), 0)), b=(0, 1), name="explicit midpoint")
HEUN = RKTableau(A=((0, 0), (1, 0)), b=(Fraction(1, 2), Fraction(1, 2)), name="heun")
RK4 = RKTableau(
    A=(
        (0, 0, 0, 0),
        (Fraction(1, 2), 0, 0, 0),
        (0, Fraction(1, 2), 0, 0),
        (0, 0, 1, 0),
    ),
    b=(Fraction(1, 6), Fraction(1, 3), Fraction(1, 3), Fraction(1, 6)),
    name="rk4",
)


def elementary_weights(t: RKTableau, cap: int = DEFAULT_CAP) -> BMap:
    """Elementary weights ``c_u = sum_i b_i Phi_i(u)`` of a Runge-Kutta tableau.

    ``Phi_i(u)`` is the product over the root's children ``v`` of
    ``sum_j a_ij Phi_j(v)``, so the tree structure is mirrored by nested sums.
    """
    s = t.stages
    stage: dict[RootedTree, tuple[Fraction, ...]] = {}

    def phi(u: RootedTree) -> tuple[Fraction, ...]:
        if u in stage:
            return stage[u]
        vals = [Fraction(1)] * s
        for v in u.children():
            pv = phi(v)
            inner = [sum((t.A[i][j] * pv[j] for j in range(s)), Fraction(0)) for i in range(s)]
            vals = [x * y for x, y in zip(vals, inner)]
        stage[u] = tuple(vals)
        return stage[u]

    coeffs = {EMPTY: Fraction(1)}
    for u in trees_up_to(cap, include_empty=False):
        coeffs[u] = sum((bi * p for bi, p in zip(t.b, phi(u))), Fraction(0))
    return BMap(cap, coeffs)


def _convolve(delta: BMap, gamma: BMap, cap: int) -> dict[RootedTree, Fraction]:
    out = {}
    for u in trees_up_to(cap):
        acc = Fraction(0)
        for rem, forest, m in coproduct(u):
            d = delta.coeffs[rem]
            if d == 0:
                continue
            acc += m * d * prod((gamma.coeffs[v] for v in forest), start=Fraction(1))
        out[u] = acc
    return out


def compose(delta: BMap, gamma: BMap) -> BMap:
    """Coefficients of ``B_delta(B_gamma(x))``.

    ``delta`` is evaluated on what remains attached to the root after pruning,
    ``gamma`` on the removed pieces.  ``gamma`` must be group-like.
    """
    if not gamma.is_group_like:
        raise ValueError("right operand of compose must be group-like (gamma_empty == 1)")
    cap = _common_cap(delta, gamma)
    return BMap(cap, _convolve(delta, gamma, cap))


def inverse(gamma: BMap) -> BMap:
    """Group inverse, solved tree by tree in increasing order."""
    if not gamma.is_group_like:
        raise ValueError("inverse requires a group-like map")
    inv = {EMPTY: Fraction(1)}
    for u in trees_up_to(gamma.cap, include_empty=False):
        acc = Fraction(0)
        for rem, forest, m in coproduct(u):
            if rem.is_empty():
                continue
            acc += m * gamma.coeffs[rem] * prod((inv[v] for v in forest), start=Fraction(1))
        inv[u] = -acc
    return BMap(gamma.cap, inv)


def adjoint(gamma: BMap) -> BMap:
    """Coefficients of the adjoint method: inverse taken at step ``-h``."""
    return scale(inverse(gamma), -1)


def order_of(gamma: BMap, max_order: int | None = None) -> int:
    """Largest ``nu <= max_order`` with ``gamma_u = 1/u!`` for all ``|u| <= nu``."""
    if max_order is None:
        max_order = gamma.cap
    if max_order > gamma.cap:
        raise ValueError(f"max_order {max_order} exceeds grade cap {gamma.cap}")
    for n in range(1, max_order + 1):
        if any(gamma.coeffs[u] != Fraction(1, density(u)) for u in enumerate_trees(n)):
            return n - 1
    return max_order


def order_conditions(p: int) -> list[tuple[RootedTree, Fraction]]:
    """One condition ``c_u = 1/u!`` per tree of order 1..p."""
    if p < 1:
        raise ValueError("target order must be >= 1")
    return [(u, Fraction(1, density(u))) for u in trees_up_to(p, include_empty=False)]


_INDEX_NAMES = "ijklmnpqrs"


def condition_text(u: RootedTree, rhs: Fraction | None = None) -> str:
    """Order condition of ``u`` as a tableau sum, e.g. ``sum_ijk b_i a_ij a_jk = 1/6``.

    Vertices are indexed in level-sequence order; each edge contributes ``a``
    with the parent index first.
    """
    if u.is_empty():
        raise ValueError("the empty tree has no order condition")
    if len(u) > len(_INDEX_NAMES):
        raise ValueError(f"trees with more than {len(_INDEX_NAMES)} vertices are not rendered")
    names = _INDEX_NAMES[: len(u)]
    factors = [f"b_{names[0]}"]
    last_at_level: dict[int, int] = {}
    for v, lev in enumerate(u.levels):
        if v:
            parent = last_at_level[lev - 1]
            factors.append(f"a_{names[parent]}{names[v]}")
        last_at_level[lev] = v
    value = Fraction(1, density(u)) if rhs is None else rhs
    return f"sum_{names} {' '.join(factors)} = {value}"


@dataclass(frozen=True)
class CheckResult:
    """Outcome of an identity check; falsy on failure, with the first witness."""

    ok: bool
    witness: object = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _tree_pairs(n: int) -> Iterable[tuple[RootedTree, RootedTree]]:
    trees = trees_up_to(n - 1, include_empty=False)
    for u in trees:
        for v in trees:
            if len(u) + len(v) <= n:
                yield u, v


def is_symplectic_coeffs(delta: BMap, max_order: int | None = None) -> CheckResult:
    """Check ``delta_{u o v} + delta_{v o u} == delta_u delta_v`` for ``|u|+|v| <= max_order``."""
    n = delta.cap if max_order is None else max_order
    if n > delta.cap:
        raise ValueError("max_order exceeds grade cap")
    if not delta.is_group_like:
        return CheckResult(False, None, "not group-like")
    d = delta.coeffs
    for u, v in _tree_pairs(n):
        lhs = d[butcher_product(u, v)] + d[butcher_product(v, u)]
        if lhs != d[u] * d[v]:
            return CheckResult(False, (u, v), f"{lhs} != {d[u] * d[v]}")
    return CheckResult(True)


def is_hamiltonian_field_coeffs(beta: BMap, max_order: int | None = None) -> CheckResult:
    """Check the linear condition ``beta_{u o v} + beta_{v o u} == 0``."""
    n = beta.cap if max_order is None else max_order
    if n > beta.cap:
        raise ValueError("max_order exceeds grade cap")
    if not beta.is_algebra_like:
        return CheckResult(False, None, "beta at the empty tree must vanish")
    d = beta.coeffs
    for u, v in _tree_pairs(n):
        lhs = d[butcher_product(u, v)] + d[butcher_product(v, u)]
        if lhs != 0:
            return CheckResult(False, (u, v), f"{lhs} != 0")
    return CheckResult(True)


def is_symplectic_tableau(t: RKTableau) -> CheckResult:
    """Exact check of ``b_i a_ij + b_j a_ji == b_i b_j`` for all stage pairs."""
    A, b = t.A, t.b
    for i in range(t.stages):
        for j in range(t.stages):
            if b[i] * A[i][j] + b[j] * A[j][i] != b[i] * b[j]:
                return CheckResult(False, (i, j))
    return CheckResult(True)


# Exponential and logarithm. Coefficients of the time-t flow are polynomials in t,
# stored as coefficient lists (index = power of t).

def _poly_mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _exp_polys(beta: BMap, cap: int) -> dict[RootedTree, list[Fraction]]:
    gam: dict[RootedTree, list[Fraction]] = {EMPTY: [Fraction(1)]}
    for u in trees_up_to(cap, include_empty=False):
        deriv = [Fraction(0)]
        for rem, forest, m in coproduct(u):
            b = beta.coeffs[rem]
            if rem.is_empty() or b == 0:
                continue
            term = [m * b]
            for v in forest:
                term = _poly_mul(term, gam[v])
            if len(term) > len(deriv):
                deriv += [Fraction(0)] * (len(term) - len(deriv))
            for k, c in enumerate(term):
                deriv[k] += c
        gam[u] = [Fraction(0)] + [c / (k + 1) for k, c in enumerate(deriv)]
    return gam


def exp_star(beta: BMap) -> BMap:
    """Time-1 flow coefficients of the field whose coefficient map is ``beta``.

    Integrates ``gamma'(t) = beta * gamma(t)`` (beta in the remainder slot)
    from ``gamma(0) = unit`` exactly, tree by tree.
    """
    if not beta.is_algebra_like:
        raise ValueError("exp_star requires beta_empty == 0")
    polys = _exp_polys(beta, beta.cap)
    return BMap(beta.cap, {u: sum(p, Fraction(0)) for u, p in polys.items()})


def log_star(gamma: BMap) -> BMap:
    """Modified-field coefficients: the unique ``beta`` with ``exp_star(beta) == gamma``.

    The grade-n unknowns enter ``exp_star`` with coefficient one, so each
    grade is solved from the lower ones.
    """
    if not gamma.is_group_like:
        raise ValueError("log_star requires a group-like map")
    beta: dict[RootedTree, Fraction] = {EMPTY: Fraction(0)}
    for n in range(1, gamma.cap + 1):
        trial = BMap(n, beta)
        polys = _exp_polys(trial, n)
        for u in enumerate_trees(n):
            beta[u] = gamma.coeffs[u] - sum(polys[u], Fraction(0))
    return BMap(gamma.cap, beta)


def conjugate(psi: BMap, chi: BMap) -> BMap:
    """Processed method ``chi^{-1} o psi o chi``."""
    return compose(inverse(chi), compose(psi, chi))


def effective_order(psi: BMap, chi: BMap, max_order: int | None = None) -> int:
    if not (psi.is_group_like and chi.is_group_like):
        raise ValueError("effective_order requires group-like maps")
    return order_of(conjugate(psi, chi), max_order)


def random_group_like(cap: int, rng, num: int = 9, den: int = 7) -> BMap:
    """Group-like map with random small rationals; for tests and demos."""
    coeffs = {EMPTY: Fraction(1)}
    for u in trees_up_to(cap, include_empty=False):
        coeffs[u] = Fraction(int(rng.integers(-num, num + 1)), int(rng.integers(1, den + 1)))
    return BMap(cap, coeffs)


def random_algebra_like(cap: int, rng, num: int = 9, den: int = 7) -> BMap:
    g = random_group_like(cap, rng, num, den)
    return g - unit_bmap(cap)
