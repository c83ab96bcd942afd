"""Truncated power series in one small parameter.

Pushing a :class:`Jet` through a series evaluation keeps track of every
power of the step (or perturbation size) separately, so "equal through order
N" becomes coefficient-wise equality instead of a tolerance.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Sequence


class Jet:
    __slots__ = ("c", "order")

    def __init__(self, coeffs: Sequence, order: int):
        c = list(coeffs)[: order + 1]
        c += [0] * (order + 1 - len(c))
        self.c = c
        self.order = order

    @classmethod
    def variable(cls, order: int) -> Jet:
        return cls([0, 1], order)

    @classmethod
    def const(cls, x, order: int) -> Jet:
        return cls([x], order)

    def _lift(self, other) -> Jet:
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError("jets of different truncation order")
            return other
        return Jet([other], self.order)

    def __add__(self, other) -> Jet:
        o = self._lift(other)
        return Jet([a + b for a, b in zip(self.c, o.c)], self.order)

    __radd__ = __add__

    def __neg__(self) -> Jet:
        return Jet([-a for a in self.c], self.order)

    def __sub__(self, other) -> Jet:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> Jet:
        return self._lift(other) - self

    def __mul__(self, other) -> Jet:
        if not isinstance(other, Jet):
            return Jet([a * other for a in self.c], self.order)
        o = self._lift(other)
        out = [0] * (self.order + 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j in range(self.order + 1 - i):
                b = o.c[j]
                if b != 0:
                    out[i + j] = out[i + j] + a * b
        return Jet(out, self.order)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Jet:
        if isinstance(other, Jet):
            raise TypeError("division by a jet is not needed here")
        if isinstance(other, int):
            other = Fraction(other)
        return Jet([a / other for a in self.c], self.order)

    def __pow__(self, n: int) -> Jet:
        out = Jet([1], self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def expi(self) -> Jet:
        """``exp(1j * self)`` as a jet (complex coefficients)."""
        head = cmath.exp(1j * self.c[0])
        nil = Jet([0] + [1j * a for a in self.c[1:]], self.order)
        out = Jet([1], self.order)
        term = Jet([1], self.order)
        for k in range(1, self.order + 1):
            term = term * nil / k
            out = out + term
        return out * head

    def __getitem__(self, k: int):
        return self.c[k]

    def __eq__(self, other) -> bool:
        o = self._lift(other) if not isinstance(other, Jet) else other
        return self.order == o.order and all(a == b for a, b in zip(self.c, o.c))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Jet({self.c})"


def expi(z):
    """``exp(i z)`` for scalars or jets."""
    if isinstance(z, Jet):
        return z.expi()
    return cmath.exp(1j * z)


def max_abs_diff(a: Jet, b: Jet) -> float:
    return max(abs(complex(x) - complex(y)) for x, y in zip(a.c, b.c))
