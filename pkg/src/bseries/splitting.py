"""Splitting integrators for perturbed integrable problems.

The scheme alternates exact rotations ``phi^U_{a_j h}`` with perturbation
flows ``phi^P_{b_j h}``, starting with ``phi^U_{a_1 h}``.  Its extended word
series coefficients are obtained in closed form and, independently, by
chaining the extended-group product; modified systems are built word by word.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, groupby
from typing import Mapping, Sequence

from .extended import ExtCoeffs, bigstar, check_frequencies, letter_sum, rotation
from .words import ExpPoly, WMap, Word, words_of_length, words_up_to

RESONANCE_TOL = 1e-8
WARN_TOL = 1e-6
CONFLUENT_TOL = 1e-6


class ResonanceError(ValueError):
    """A letter combination with ``(k1+...+kr) . omega h`` in ``2 pi Z \\ {0}``."""

    def __init__(self, letters: tuple, j: int, message: str = ""):
        self.letters = letters
        self.j = j
        super().__init__(message or f"numerical resonance: letters {letters} hit 2*pi*{j}")


@dataclass(frozen=True)
class SplittingScheme:
    a: tuple
    b: tuple
    name: str = ""

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        b = tuple(float(x) for x in self.b)
        if len(a) != len(b) or not a:
            raise ValueError("a and b must be nonempty and of equal length")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def stages(self) -> int:
        return len(self.a)

    @property
    def c(self) -> tuple[float, ...]:
        """Cumulative rotation fractions ``c_j = a_1 + ... + a_j``."""
        out, s = [], 0.0
        for x in self.a:
            s += x
            out.append(s)
        return tuple(out)

    @property
    def total_a(self) -> float:
        return math.fsum(self.a)

    def to_json(self) -> dict:
        return {"name": self.name, "a": list(self.a), "b": list(self.b)}

    @classmethod
    def from_json(cls, data: Mapping) -> SplittingScheme:
        try:
            return cls(a=data["a"], b=data["b"], name=data.get("name", ""))
        except KeyError as exc:
            raise ValueError(f"splitting JSON missing key {exc}") from None


LIE_TROTTER = SplittingScheme(a=(1.0,), b=(1.0,), name="lie-trotter")
STRANG = SplittingScheme(a=(0.5, 0.5), b=(1.0, 0.0), name="strang")


@dataclass(frozen=True)
class ModifiedSystem:
    """``d/dt x = (0, omega) + sum_{1 <= |w| <= grade} beta_w f_w(x)``."""

    omega: tuple
    h: float
    grade: int
    beta: WMap

    def as_ext(self) -> ExtCoeffs:
        return ExtCoeffs(self.omega, self.beta)


def _modes(K) -> tuple:
    return tuple(tuple(int(x) for x in k) for k in K)


def taylor_coeffs(t, K, cap: int) -> WMap:
    """Taylor coefficients ``t^n / n!`` of the perturbation flow."""
    K = _modes(K)
    if isinstance(t, int):
        t = Fraction(t)
    return WMap(K, cap, {w: t ** len(w) / math.factorial(len(w)) for w in words_up_to(K, cap)})


def run_weight(js: Sequence[int]) -> Fraction:
    """Product of ``1/l!`` over the runs of equal stage indices in a sorted sequence."""
    out = Fraction(1)
    for _, run in groupby(js):
        out /= math.factorial(len(list(run)))
    return out


def splitting_coeffs(s: SplittingScheme, omega, h: float, K, cap: int) -> ExtCoeffs:
    """Closed-form coefficients ``(h a omega, alpha~(h))`` of the splitting map.

    ``alpha~_{k1..kn}(h) = h^n sum_{j1<=...<=jn} w(j) b_j1...b_jn exp(i (c_j1 k1 + ... + c_jn kn) . omega h)``
    where ``w(j)`` is the product of ``1/l!`` over runs of equal indices.
    """
    omega = check_frequencies(omega)
    K = _modes(K)
    r, c, b = s.stages, s.c, s.b
    kw = {k: sum(ki * wi for ki, wi in zip(k, omega)) for k in K}
    coeffs: dict[Word, complex] = {(): 1.0 + 0j}
    for n in range(1, cap + 1):
        seqs = [(js, float(run_weight(js)) * math.prod(b[j] for j in js))
                for js in combinations_with_replacement(range(r), n)]
        seqs = [(js, wt) for js, wt in seqs if wt != 0]
        for w in words_of_length(K, n):
            acc = 0j
            for js, wt in seqs:
                phase = sum(c[j] * kw[k] for j, k in zip(js, w)) * h
                acc += wt * cmath.exp(1j * phase)
            coeffs[w] = h**n * acc
    return ExtCoeffs(tuple(h * s.total_a * wi for wi in omega), WMap(K, cap, coeffs))


def splitting_coeffs_by_composition(s: SplittingScheme, omega, h: float, K, cap: int) -> ExtCoeffs:
    """The same coefficients from the extended-group product of the individual flows."""
    omega = check_frequencies(omega)
    K = _modes(K)
    acc = rotation(K, (0.0,) * len(omega), cap)
    for aj, bj in zip(s.a, s.b):
        acc = bigstar(acc, rotation(K, tuple(aj * h * w for w in omega), cap), check=False)
        acc = bigstar(acc, ExtCoeffs((0.0,) * len(omega), taylor_coeffs(bj * h, K, cap)), check=False)
    return acc


def _frequency(letters, omega) -> float:
    k = letter_sum(letters, len(omega))
    return math.fsum(ki * wi for ki, wi in zip(k, omega))


def detect_resonances(omega, h: float, n: int, K, tol: float = RESONANCE_TOL) -> list[tuple[tuple, int]]:
    """Multisets of at most ``n`` letters with ``(sum k) . omega h`` near ``2 pi j``, ``j != 0``.

    A combination is flagged when ``|lambda h - 2 pi j| < tol * |lambda| h``,
    i.e. when the factor ``E(lambda, h)`` drops below ``tol * h``.
    """
    omega = check_frequencies(omega)
    K = _modes(K)
    out = []
    for r in range(1, n + 1):
        for combo in combinations_with_replacement(K, r):
            lam = _frequency(combo, omega)
            x = lam * h
            j = round(x / (2 * math.pi))
            if j != 0 and abs(x - 2 * math.pi * j) < tol * abs(lam) * abs(h):
                out.append((combo, j))
    return out


def phase_integral(lam: float, h: float) -> complex:
    """``E(lam, h) = (exp(i lam h) - 1) / (i lam)``, with ``E = h`` at ``lam = 0``."""
    x = lam * h
    if abs(x) < CONFLUENT_TOL:
        # Taylor form near the removable singularity
        return h * (1 + 1j * x / 2 - x * x / 6 - 1j * x**3 / 24)
    return (cmath.exp(1j * x) - 1) / (1j * lam)


def _exp_modified_polys(omega, beta: WMap, cap: int) -> dict[Word, ExpPoly]:
    d = len(omega)
    K = beta.alphabet
    A: dict[Word, ExpPoly] = {(): ExpPoly.constant(omega)}
    forced = {}
    for w, c in beta.coeffs.items():
        if w and len(w) <= cap and c != 0:
            forced[w] = ExpPoly(omega, {(letter_sum(w, d), 0): c})
    for n in range(1, cap + 1):
        for w in words_of_length(K, n):
            deriv = ExpPoly(omega)
            for j in range(n):
                tail = forced.get(w[j:])
                if tail is not None:
                    deriv = deriv + A[w[:j]] * tail
            A[w] = deriv.integrate()
    return A


def exp_modified(omega, beta: WMap, h: float, K=None, cap: int | None = None) -> ExtCoeffs:
    """Time-``h`` flow coefficients of ``(0, omega) + W_beta``.

    Solves ``A' = A * Xi_{t omega} beta`` with ``A(0) = 1`` in closed form and
    returns ``(h omega, A(h))``.
    """
    omega = check_frequencies(omega)
    if K is not None and _modes(K) != beta.alphabet:
        raise ValueError("mode set does not match the alphabet of beta")
    n = beta.cap if cap is None else cap
    if n > beta.cap:
        beta = WMap(beta.alphabet, n, beta.coeffs)
    polys = _exp_modified_polys(omega, beta, n)
    coeffs = {w: complex(p(h)) for w, p in polys.items()}
    return ExtCoeffs(tuple(h * w for w in omega), WMap(beta.alphabet, n, coeffs))


def modified_system(
    s: SplittingScheme, omega, h: float, n: int, K, tol: float = RESONANCE_TOL
) -> ModifiedSystem:
    """Coefficients ``beta~`` (words of at most ``n`` letters) whose flow reproduces the integrator.

    For each word the new unknown enters the flow with factor
    ``E(lambda_w, h)``, ``lambda_w = (sum k) . omega``; dividing by it is
    exactly what a numerical resonance forbids.
    """
    omega = check_frequencies(omega)
    K = _modes(K)
    res = detect_resonances(omega, h, n, K, tol)
    if res:
        letters, j = res[0]
        raise ResonanceError(letters, j, f"numerical resonance of order {len(letters)}: letters {letters}, j = {j}")
    target = splitting_coeffs(s, omega, h, K, n).coeffs
    beta: dict[Word, complex] = {(): 0j}
    for m in range(1, n + 1):
        known = WMap(K, m, beta)
        polys = _exp_modified_polys(omega, known, m)
        for w in words_of_length(K, m):
            lam = _frequency(w, omega)
            E = phase_integral(lam, h)
            if abs(E) < tol * abs(h):
                j = round(lam * h / (2 * math.pi))
                raise ResonanceError(w, j, f"numerical resonance at word {w}, j = {j}")
            if abs(E) < WARN_TOL * abs(h):
                warnings.warn(f"near-resonant small denominator {abs(E):.3e} at word {w}", RuntimeWarning, stacklevel=2)
            beta[w] = (target.coeffs[w] - complex(polys[w](h))) / E
    return ModifiedSystem(omega, float(h), n, WMap(K, n, beta))
