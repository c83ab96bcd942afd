"""Sparse multivariate polynomials and polynomial vector fields.

Coefficients are either exact rationals (:class:`~fractions.Fraction`) or
complex floats.  Evaluation works over any ring whose elements support
``+``, ``*`` and integer powers, which is how the truncated power series in
:mod:`bseries.jets` are pushed through polynomial fields.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

Exps = tuple[int, ...]


def _coerce(c):
    if isinstance(c, (Fraction, complex, float)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, np.generic):
        return c.item()
    return c


def _is_zero(c) -> bool:
    return c == 0


class Poly:
    """Polynomial in ``dim`` variables: a dict from exponent tuples to coefficients."""

    __slots__ = ("dim", "terms", "_compiled")

    def __init__(self, dim: int, terms: Mapping[Exps, object] | None = None):
        self.dim = dim
        clean: dict[Exps, object] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != dim or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e} for dimension {dim}")
            c = _coerce(c)
            if e in clean:
                c = clean[e] + c
            if _is_zero(c):
                clean.pop(e, None)
            else:
                clean[e] = c
        self.terms = clean
        self._compiled = None

    @classmethod
    def constant(cls, dim: int, c) -> Poly:
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def variable(cls, dim: int, j: int, coeff=1) -> Poly:
        e = [0] * dim
        e[j] = 1
        return cls(dim, {tuple(e): coeff})

    @classmethod
    def zero(cls, dim: int) -> Poly:
        return cls(dim)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, float, complex)):
            other = Poly.constant(self.dim, other)
        return isinstance(other, Poly) and self.dim == other.dim and self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        if not self.terms:
            return "Poly(0)"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i + 1}^{k}" if k > 1 else f"x{i + 1}" for i, k in enumerate(e) if k)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def _lift(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.dim != self.dim:
                raise ValueError(f"dimension mismatch: {self.dim} != {other.dim}")
            return other
        return Poly.constant(self.dim, other)

    def __add__(self, other) -> Poly:
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return Poly(self.dim, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> Poly:
        return self._lift(other) - self

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            c0 = _coerce(other)
            return Poly(self.dim, {e: c * c0 for e, c in self.terms.items()})
        other = self._lift(other)
        out: dict[Exps, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return Poly(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        out = Poly.constant(self.dim, 1)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, j: int) -> Poly:
        out = {}
        for e, c in self.terms.items():
            k = e[j]
            if k:
                e2 = list(e)
                e2[j] -= 1
                out[tuple(e2)] = c * k
        return Poly(self.dim, out)

    def gradient(self) -> list[Poly]:
        return [self.diff(j) for j in range(self.dim)]

    def map_coeffs(self, fn) -> Poly:
        return Poly(self.dim, {e: fn(c) for e, c in self.terms.items()})

    def __call__(self, x: Sequence):
        if len(x) != self.dim:
            raise ValueError(f"point has dimension {len(x)}, polynomial expects {self.dim}")
        if isinstance(x, np.ndarray) and x.dtype.kind in "fc":
            return self._eval_float(x)
        acc = 0
        for e, c in self.terms.items():
            term = c
            for xi, k in zip(x, e):
                if k:
                    term = term * xi**k if k > 1 else term * xi
            acc = acc + term
        return acc

    def _eval_float(self, x: np.ndarray):
        if self._compiled is None:
            if self.terms:
                E = np.array(list(self.terms), dtype=float)
                C = np.array([complex(c) for c in self.terms.values()])
                if not np.any(C.imag):
                    C = C.real
            else:
                E = np.zeros((0, self.dim))
                C = np.zeros(0)
            self._compiled = (E, C)
        E, C = self._compiled
        if not len(C):
            return 0.0
        return np.prod(x[None, :] ** E, axis=1) @ C


class PolyMap:
    """Vector field whose components are :class:`Poly` in the same variables."""

    __slots__ = ("dim", "components", "cache")

    def __init__(self, components: Iterable[Poly], dim: int | None = None):
        comps = list(components)
        if dim is None:
            if not comps:
                raise ValueError("cannot infer dimension of an empty PolyMap")
            dim = comps[0].dim
        for p in comps:
            if p.dim != dim:
                raise ValueError("all components must share the variable count")
        self.dim = dim
        self.components = tuple(comps)
        self.cache: dict = {}

    @property
    def size(self) -> int:
        return len(self.components)

    @classmethod
    def identity(cls, dim: int) -> PolyMap:
        return cls([Poly.variable(dim, j) for j in range(dim)], dim)

    @classmethod
    def zero(cls, dim: int, size: int | None = None) -> PolyMap:
        return cls([Poly.zero(dim) for _ in range(dim if size is None else size)], dim)

    @classmethod
    def linear(cls, matrix: Sequence[Sequence]) -> PolyMap:
        n = len(matrix)
        return cls(
            [sum((Poly.variable(n, j, matrix[i][j]) for j in range(n)), Poly.zero(n)) for i in range(n)],
            n,
        )

    def __getitem__(self, i: int) -> Poly:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMap) and self.dim == other.dim and self.components == other.components

    __hash__ = None

    def __repr__(self) -> str:
        return "PolyMap([" + ", ".join(repr(p) for p in self.components) + "])"

    def _check(self, other: PolyMap) -> None:
        if self.dim != other.dim or self.size != other.size:
            raise ValueError(f"dimension mismatch: {self.dim}/{self.size} vs {other.dim}/{other.size}")

    def __add__(self, other: PolyMap) -> PolyMap:
        self._check(other)
        return PolyMap([a + b for a, b in zip(self, other)], self.dim)

    def __sub__(self, other: PolyMap) -> PolyMap:
        self._check(other)
        return PolyMap([a - b for a, b in zip(self, other)], self.dim)

    def __neg__(self) -> PolyMap:
        return PolyMap([-a for a in self], self.dim)

    def __mul__(self, c) -> PolyMap:
        return PolyMap([a * c for a in self], self.dim)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self)

    def __call__(self, x: Sequence):
        if len(x) != self.dim:
            raise ValueError(f"point has dimension {len(x)}, field expects {self.dim}")
        if isinstance(x, np.ndarray) and x.dtype.kind in "fc":
            return np.array([p._eval_float(x) for p in self.components])
        return [p(x) for p in self.components]

    def diff(self, j: int) -> PolyMap:
        return PolyMap([p.diff(j) for p in self], self.dim)

    def directional(self, g: PolyMap) -> PolyMap:
        """Jacobian of ``self`` applied to ``g``: ``(d self) g``."""
        if g.size != self.dim:
            raise ValueError("direction field must have one component per variable")
        out = [Poly.zero(self.dim) for _ in range(self.size)]
        for j in range(self.dim):
            if g[j].is_zero():
                continue
            dj = self.diff(j)
            out = [o + d * g[j] for o, d in zip(out, dj)]
        return PolyMap(out, self.dim)

    def multilinear(self, gs: Sequence[PolyMap]) -> PolyMap:
        """m-th Frechet derivative of ``self`` applied to the fields ``gs``.

        The arguments are held fixed while differentiating, so this is
        ``sum_J d^m self / dx_J * g1_{j1} ... gm_{jm}``.
        """
        if not gs:
            return self
        g, rest = gs[0], gs[1:]
        out = PolyMap.zero(self.dim, self.size)
        for j in range(self.dim):
            if g[j].is_zero():
                continue
            dj = self.diff(j)
            if dj.is_zero():
                continue
            inner = dj.multilinear(rest)
            out = out + PolyMap([p * g[j] for p in inner], self.dim)
        return out

    def map_coeffs(self, fn) -> PolyMap:
        return PolyMap([p.map_coeffs(fn) for p in self], self.dim)

    def to_json(self) -> dict:
        comps = []
        for p in self:
            terms = []
            for e, c in sorted(p.terms.items()):
                if isinstance(c, Fraction):
                    cj = str(c)
                else:
                    c = complex(c)
                    cj = [c.real, c.imag]
                terms.append({"coeff": cj, "exps": list(e)})
            comps.append(terms)
        return {"dim": self.dim, "components": comps}

    @classmethod
    def from_json(cls, data: Mapping) -> PolyMap:
        try:
            dim = int(data["dim"])
            comps = []
            for terms in data["components"]:
                p: dict[Exps, object] = {}
                for t in terms:
                    c = t["coeff"]
                    if isinstance(c, (list, tuple)):
                        c = complex(float(c[0]), float(c[1]))
                    else:
                        c = Fraction(str(c))
                    e = tuple(t["exps"])
                    p[e] = p[e] + c if e in p else c
                comps.append(Poly(dim, p))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed PolyMap JSON: {exc}") from None
        return cls(comps, dim)
