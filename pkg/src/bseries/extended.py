"""Extended word series for perturbed integrable systems.

The systems have the form ``d/dt (y, theta) = (0, omega) + sum_k f_k(y, theta)``
with ``f_k(y, theta) = exp(i k . theta) fhat_k(y)``.  Coefficients are pairs
``(v, delta)``: an angle shift ``v`` and word coefficients over integer-vector
letters ``k``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .butcher import CheckResult
from .jets import expi
from .polynomials import Poly, PolyMap
from .words import (
    LambdaSpec,
    WMap,
    Word,
    convolution,
    is_group_element,
    is_lie_element,
    iterated_integral_coeffs,
    unit_wmap,
)


def _dot(k: Sequence[int], v: Sequence) -> object:
    acc = 0
    for a, b in zip(k, v):
        if a:
            acc = acc + a * b
    return acc


def letter_sum(w: Word, d: int) -> tuple[int, ...]:
    out = [0] * d
    for k in w:
        for j in range(d):
            out[j] += k[j]
    return tuple(out)


def check_frequencies(omega: Sequence[float]) -> tuple[float, ...]:
    omega = tuple(float(x) for x in omega)
    if not omega:
        raise ValueError("frequency vector must be nonempty")
    if any(w <= 0 for w in omega):
        raise ValueError(f"frequencies must be strictly positive, got {omega}")
    return omega


@dataclass(frozen=True)
class ExtCoeffs:
    """Pair ``(shift, coeffs)`` representing ``(0, shift) + sum_w coeffs_w f_w(x)``."""

    shift: tuple
    coeffs: WMap

    def __post_init__(self):
        shift = tuple(complex(s) for s in self.shift)
        d = len(shift)
        for k in self.coeffs.alphabet:
            if not isinstance(k, tuple) or len(k) != d:
                raise ValueError(f"letter {k!r} is not an integer vector of length {d}")
        object.__setattr__(self, "shift", shift)

    @property
    def d(self) -> int:
        return len(self.shift)

    def is_group(self, tol: float = 1e-12) -> CheckResult:
        return is_group_element(self.coeffs, tol=tol)

    def max_abs_diff(self, other: ExtCoeffs) -> float:
        ds = max((abs(a - b) for a, b in zip(self.shift, other.shift)), default=0.0)
        return max(ds, self.coeffs.max_abs_diff(other.coeffs))


def ext_unit(modes: Sequence[Sequence[int]], cap: int) -> ExtCoeffs:
    modes = tuple(tuple(k) for k in modes)
    return ExtCoeffs((0,) * len(modes[0]), unit_wmap(modes, cap))


def rotation(modes, v: Sequence, cap: int) -> ExtCoeffs:
    """Pure angle shift ``(v, 1)``: the flow of the unperturbed dynamics."""
    modes = tuple(tuple(k) for k in modes)
    return ExtCoeffs(tuple(v), unit_wmap(modes, cap))


def _check_dim(v: Sequence, delta: WMap) -> int:
    d = len(v)
    for k in delta.alphabet:
        if not isinstance(k, tuple) or len(k) != d:
            raise ValueError(f"letter {k!r} does not match a shift of dimension {d}")
    return d


def xi_big(v: Sequence, delta: WMap) -> WMap:
    """Phase multiplication ``exp(i (k1+...+kn) . v) delta_w``; the empty word is untouched."""
    d = _check_dim(v, delta)
    return delta.map(lambda w, c: c if not w else cmath.exp(1j * _dot(letter_sum(w, d), v)) * c)


def xi_small(v: Sequence, delta: WMap) -> WMap:
    """Infinitesimal phase ``i (k1+...+kn) . v delta_w``; zero on the empty word."""
    d = _check_dim(v, delta)
    return delta.map(lambda w, c: 0j if not w else 1j * _dot(letter_sum(w, d), v) * c)


def bigstar(lhs: ExtCoeffs, rhs: ExtCoeffs, check: bool = True, tol: float = 1e-12) -> ExtCoeffs:
    """``(u, g) * (v, d) = (g_() v + d_() u, g conv Xi_u d)``; ``lhs`` must be a group element.

    Composition: the series of the result is ``W(v,d)`` applied after ``W(u,g)``.
    """
    if check:
        res = lhs.is_group(tol)
        if not res:
            raise ValueError(f"left operand is not in the extended group: {res.detail} at {res.witness}")
    u, g = lhs.shift, lhs.coeffs
    v, dl = rhs.shift, rhs.coeffs
    g0, d0 = g.coeffs[()], dl.coeffs[()]
    shift = tuple(g0 * vi + d0 * ui for ui, vi in zip(u, v))
    return ExtCoeffs(shift, convolution(g, xi_big(u, dl)))


def ext_bracket(a: ExtCoeffs, b: ExtCoeffs, tol: float = 1e-12) -> ExtCoeffs:
    """Lie bracket ``(0, xi_v eta - xi_u delta + delta*eta - eta*delta)``."""
    for name, x in (("first", a), ("second", b)):
        res = is_lie_element(x.coeffs, tol=tol)
        if not res:
            raise ValueError(f"{name} operand is not in the extended Lie algebra: {res.detail}")
    v, delta = a.shift, a.coeffs
    u, eta = b.shift, b.coeffs
    out = xi_small(v, eta) - xi_small(u, delta) + convolution(delta, eta) - convolution(eta, delta)
    return ExtCoeffs((0,) * len(v), out)


def flow_coeffs(omega: Sequence[float], t, modes: Sequence[Sequence[int]], cap: int) -> ExtCoeffs:
    """Exact-solution coefficients ``(t omega, alpha(t))`` with ``lambda_k = exp(i k . omega t)``."""
    omega = check_frequencies(omega)
    modes = tuple(tuple(int(x) for x in k) for k in modes)
    alpha = iterated_integral_coeffs(LambdaSpec.oscillatory(modes, omega), t, cap)
    return ExtCoeffs(tuple(t * w for w in omega), alpha)


# Evaluation on trigonometric-polynomial fields

class TrigField:
    """Field ``sum_K exp(i K . theta) P_K(y)`` on ``x = (y, theta)``.

    ``P_K`` is a :class:`PolyMap` in the ``y`` variables with one component
    per coordinate of ``x``.
    """

    __slots__ = ("ny", "d", "parts", "_compiled")

    def __init__(self, ny: int, d: int, parts: Mapping[tuple, PolyMap]):
        self.ny = ny
        self.d = d
        self.parts = {}
        for K, P in parts.items():
            K = tuple(int(x) for x in K)
            if P.size != ny + d or P.dim != ny:
                raise ValueError("trigonometric part has the wrong shape")
            if not P.is_zero():
                self.parts[K] = P
        self._compiled = None

    @property
    def size(self) -> int:
        return self.ny + self.d

    @classmethod
    def constant_shift(cls, ny: int, v: Sequence) -> TrigField:
        d = len(v)
        comps = [Poly.zero(ny) for _ in range(ny)] + [Poly.constant(ny, vi) for vi in v]
        return cls(ny, d, {(0,) * d: PolyMap(comps, ny)})

    def __add__(self, other: TrigField) -> TrigField:
        parts = dict(self.parts)
        for K, P in other.parts.items():
            parts[K] = parts[K] + P if K in parts else P
        return TrigField(self.ny, self.d, parts)

    def __sub__(self, other: TrigField) -> TrigField:
        return self + other * -1

    def __mul__(self, c) -> TrigField:
        return TrigField(self.ny, self.d, {K: P * c for K, P in self.parts.items()})

    __rmul__ = __mul__

    def directional(self, g: TrigField) -> TrigField:
        """Jacobian of ``self`` with respect to ``(y, theta)`` applied to ``g``."""
        out: dict[tuple, PolyMap] = {}
        ny = self.ny
        for K, P in self.parts.items():
            for L, Q in g.parts.items():
                comps = [Poly.zero(ny) for _ in range(self.size)]
                for j in range(ny):
                    if Q[j].is_zero():
                        continue
                    dP = P.diff(j)
                    comps = [c + dp * Q[j] for c, dp in zip(comps, dP)]
                phase = Poly.zero(ny)
                for l, kl in enumerate(K):
                    if kl:
                        phase = phase + Q[ny + l] * (1j * kl)
                if not phase.is_zero():
                    comps = [c + p * phase for c, p in zip(comps, P)]
                KL = tuple(a + b for a, b in zip(K, L))
                term = PolyMap(comps, ny)
                out[KL] = out[KL] + term if KL in out else term
        return TrigField(ny, self.d, out)

    def __call__(self, x: Sequence):
        if len(x) != self.size:
            raise ValueError(f"point of dimension {len(x)} for a field of size {self.size}")
        if isinstance(x, np.ndarray):
            return self._eval_float(x)
        y, theta = list(x[: self.ny]), list(x[self.ny:])
        acc = [0] * self.size
        for K, P in self.parts.items():
            ph = expi(_dot(K, theta)) if any(K) else 1
            vals = P(y) if self.ny else [p.terms.get((), 0) for p in P]
            acc = [a + ph * v for a, v in zip(acc, vals)]
        return acc

    def _eval_float(self, x: np.ndarray) -> np.ndarray:
        y, theta = x[: self.ny], x[self.ny:]
        acc = np.zeros(self.size, dtype=complex)
        for K, P in self.parts.items():
            ph = np.exp(1j * np.dot(K, theta)) if any(K) else 1.0
            if self.ny:
                acc += ph * P(np.asarray(y, dtype=complex))
            else:
                acc += ph * np.array([complex(p.terms.get((), 0)) for p in P])
        return acc


@dataclass
class PerturbedProblem:
    """``d/dt (y, theta) = (0, omega) + sum_k exp(i k . theta) fhat_k(y)``."""

    omega: tuple
    modes: dict
    name: str = ""

    def __post_init__(self):
        self.omega = check_frequencies(self.omega)
        d = len(self.omega)
        modes = {}
        ny = None
        for k, fh in self.modes.items():
            k = tuple(int(x) for x in k)
            if len(k) != d:
                raise ValueError(f"mode {k} does not have length d = {d}")
            if ny is None:
                ny = fh.dim
            if fh.dim != ny or fh.size != ny + d:
                raise ValueError(f"fhat for mode {k} has the wrong shape")
            modes[k] = fh
        if not modes:
            raise ValueError("a perturbed problem needs at least one mode")
        self.modes = modes
        self._check_reality()
        self._fields: dict[tuple, TrigField] = {}

    @property
    def d(self) -> int:
        return len(self.omega)

    @property
    def ny(self) -> int:
        return next(iter(self.modes.values())).dim

    @property
    def dim(self) -> int:
        return self.ny + self.d

    @property
    def alphabet(self) -> tuple:
        return tuple(self.modes)

    def _check_reality(self, tol: float = 1e-14) -> None:
        for k, fh in self.modes.items():
            mk = tuple(-x for x in k)
            if mk not in self.modes:
                raise ValueError(f"mode {k} has no conjugate partner {mk}")
            partner = self.modes[mk]
            for p, q in zip(fh, partner):
                keys = set(p.terms) | set(q.terms)
                for e in keys:
                    a = complex(p.terms.get(e, 0))
                    b = complex(q.terms.get(e, 0))
                    if abs(a - b.conjugate()) > tol * max(1.0, abs(a)):
                        raise ValueError(f"fhat_{k} and fhat_{mk} are not mutually conjugate")

    def letter_field(self, k: tuple) -> TrigField:
        k = tuple(k)
        if k not in self.modes:
            raise KeyError(f"letter {k} is not a mode of the problem")
        return TrigField(self.ny, self.d, {k: self.modes[k]})

    def perturbation(self) -> TrigField:
        out = TrigField(self.ny, self.d, {})
        for k in self.modes:
            out = out + self.letter_field(k)
        return out

    def word_field(self, w: Word) -> TrigField:
        """``f_w`` built by ``f_{k1..kn} = (d f_{k2..kn}) f_{k1}``."""
        w = tuple(tuple(k) for k in w)
        if not w:
            raise ValueError("the empty word has the identity map, not a trigonometric field")
        if w not in self._fields:
            if len(w) == 1:
                self._fields[w] = self.letter_field(w[0])
            else:
                self._fields[w] = self.word_field(w[1:]).directional(self.letter_field(w[0]))
        return self._fields[w]

    def series_field(self, c: ExtCoeffs, cap: int | None = None) -> TrigField:
        """The field ``(0, v) + sum_{1 <= |w| <= cap} delta_w f_w`` (empty word excluded)."""
        n = c.coeffs.cap if cap is None else cap
        out = TrigField.constant_shift(self.ny, c.shift)
        for w, coef in c.coeffs.coeffs.items():
            if w and len(w) <= n and coef != 0:
                out = out + self.word_field(w) * coef
        return out

    def full_field(self) -> TrigField:
        return TrigField.constant_shift(self.ny, self.omega) + self.perturbation()

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "d": self.d,
            "omega": list(self.omega),
            "modes": [{"k": list(k), "fhat": fh.to_json()} for k, fh in self.modes.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> PerturbedProblem:
        try:
            d = int(data["d"])
            modes = {tuple(m["k"]): PolyMap.from_json(m["fhat"]) for m in data["modes"]}
            omega = tuple(data["omega"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed perturbed-problem JSON: {exc}") from None
        if len(omega) != d:
            raise ValueError(f"omega has {len(omega)} entries, d = {d}")
        return cls(omega, modes, data.get("name", ""))


def hamiltonian_perturbed_problem(omega: Sequence[float], hhat: Mapping[tuple, Poly], name: str = "") -> PerturbedProblem:
    """Perturbed problem in action-angle variables ``x = (a, theta)``, ``a`` in R^d.

    The Hamiltonian is ``omega . a + sum_k exp(i k . theta) hhat_k(a)``, so
    ``a' = -dH/dtheta`` and ``theta' = dH/da``; mode ``k`` contributes
    ``fhat_k = (-i k hhat_k, grad hhat_k)``.
    """
    omega = check_frequencies(omega)
    d = len(omega)
    modes = {}
    for k, H in hhat.items():
        k = tuple(int(x) for x in k)
        if H.dim != d:
            raise ValueError(f"hhat_{k} must be a polynomial in the {d} action variables")
        comps = [H * (-1j * kj) for kj in k] + H.gradient()
        modes[k] = PolyMap(comps, d)
    return PerturbedProblem(omega, modes, name)


def ext_series_eval(c: ExtCoeffs, problem: PerturbedProblem, x: Sequence, cap: int | None = None, eps=None):
    """``(0, v) + sum_{|w| <= cap} delta_w f_w(x)`` with ``f_() (x) = x``.

    If ``eps`` is given (typically a jet variable) each word coefficient is
    weighted by ``eps**|w|``, which is the same as scaling the perturbation.
    """
    n = c.coeffs.cap if cap is None else cap
    if c.d != problem.d:
        raise ValueError("shift dimension does not match the problem")
    ny = problem.ny
    out = [c.coeffs.coeffs[()] * xi for xi in x]
    out = out[:ny] + [a + s for a, s in zip(out[ny:], c.shift)]
    for w, coef in c.coeffs.coeffs.items():
        if not w or len(w) > n or coef == 0:
            continue
        weight = coef if eps is None else coef * eps ** len(w)
        val = problem.word_field(w)(x)
        out = [a + weight * v for a, v in zip(out, val)]
    return out
