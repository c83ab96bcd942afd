"""Word-series coefficients: shuffle relations, convolution and iterated integrals.

A word is a tuple of letters.  Letters are any hashable values; the
oscillatory machinery uses integer tuples ``k`` so that letter sums and
frequencies ``k . omega`` are tracked exactly.
"""
from __future__ import annotations

import cmath
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Callable, Hashable, Mapping, Sequence

from .butcher import CheckResult

Letter = Hashable
Word = tuple

EMPTY_WORD: Word = ()


def words_of_length(alphabet: Sequence[Letter], n: int) -> list[Word]:
    return [tuple(w) for w in product(alphabet, repeat=n)]


def words_up_to(alphabet: Sequence[Letter], n: int) -> list[Word]:
    out: list[Word] = []
    for k in range(n + 1):
        out.extend(words_of_length(alphabet, k))
    return out


@lru_cache(maxsize=None)
def shuffle(w: Word, v: Word) -> Counter:
    """All order-preserving interleavings of ``w`` and ``v``, with multiplicity."""
    w, v = tuple(w), tuple(v)
    if not w:
        return Counter({v: 1})
    if not v:
        return Counter({w: 1})
    out: Counter = Counter()
    for x, m in shuffle(w[1:], v).items():
        out[(w[0],) + x] += m
    for x, m in shuffle(w, v[1:]).items():
        out[(v[0],) + x] += m
    return out


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True)
class WMap:
    """Dense coefficient map on all words of length <= ``cap`` over a finite alphabet."""

    alphabet: tuple
    cap: int
    coeffs: Mapping[Word, object]

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet has repeated letters")
        full = {w: Fraction(0) for w in words_up_to(alphabet, self.cap)}
        for w, c in self.coeffs.items():
            w = tuple(w)
            if len(w) > self.cap:
                continue
            if w not in full:
                raise ValueError(f"word {w} uses letters outside the alphabet {alphabet}")
            full[w] = Fraction(c) if isinstance(c, int) else c
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "coeffs", full)

    def __getitem__(self, w) -> object:
        return self.coeffs[tuple(w)]

    def words(self) -> list[Word]:
        return list(self.coeffs)

    @property
    def exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs.values())

    def _check(self, other: WMap) -> None:
        if self.alphabet != other.alphabet:
            raise ValueError(f"alphabet mismatch: {self.alphabet} vs {other.alphabet}")
        if self.cap != other.cap:
            raise ValueError(f"cap mismatch: {self.cap} vs {other.cap}")

    def __add__(self, other: WMap) -> WMap:
        self._check(other)
        return WMap(self.alphabet, self.cap, {w: c + other.coeffs[w] for w, c in self.coeffs.items()})

    def __sub__(self, other: WMap) -> WMap:
        self._check(other)
        return WMap(self.alphabet, self.cap, {w: c - other.coeffs[w] for w, c in self.coeffs.items()})

    def __mul__(self, s) -> WMap:
        return WMap(self.alphabet, self.cap, {w: c * s for w, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self) -> WMap:
        return self * -1

    def map(self, fn: Callable[[Word, object], object]) -> WMap:
        return WMap(self.alphabet, self.cap, {w: fn(w, c) for w, c in self.coeffs.items()})

    def truncate(self, cap: int) -> WMap:
        return WMap(self.alphabet, cap, {w: c for w, c in self.coeffs.items() if len(w) <= cap})

    def max_abs_diff(self, other: WMap) -> float:
        self._check(other)
        return max(abs(complex(c) - complex(other.coeffs[w])) for w, c in self.coeffs.items())

    def __repr__(self) -> str:
        body = ", ".join(f"{_wstr(w)}: {c}" for w, c in self.coeffs.items() if c != 0)
        return f"WMap(cap={self.cap}, {{{body}}})"


def _wstr(w: Word) -> str:
    return "".join(map(str, w)) if w else "()"


def unit_wmap(alphabet: Sequence[Letter], cap: int) -> WMap:
    """The convolution unit: 1 on the empty word, 0 elsewhere."""
    return WMap(tuple(alphabet), cap, {(): Fraction(1)})


def zero_wmap(alphabet: Sequence[Letter], cap: int) -> WMap:
    return WMap(tuple(alphabet), cap, {})


def convolution(delta: WMap, other: WMap) -> WMap:
    """Deconcatenation product: ``(d * d')_w = sum over splits w = uv of d_u d'_v``."""
    delta._check(other)
    d, e = delta.coeffs, other.coeffs
    out = {}
    for w in d:
        out[w] = sum((d[w[:j]] * e[w[j:]] for j in range(len(w) + 1)), Fraction(0))
    return WMap(delta.alphabet, delta.cap, out)


def _close(a, b, tol: float) -> bool:
    if tol == 0 or (_is_exact(a) and _is_exact(b)):
        return a == b
    a, b = complex(a), complex(b)
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _shuffle_pairs(alphabet, n: int):
    for m in range(1, n):
        for w in words_of_length(alphabet, m):
            for k in range(m, n - m + 1):
                for v in words_of_length(alphabet, k):
                    yield w, v


def is_group_element(gamma: WMap, max_len: int | None = None, tol: float = 1e-12) -> CheckResult:
    """Shuffle relations ``gamma_w gamma_v = sum gamma_(w sh v)`` for ``|w|+|v| <= max_len``."""
    n = gamma.cap if max_len is None else max_len
    g = gamma.coeffs
    if not _close(g[()], 1, tol):
        return CheckResult(False, (), "coefficient of the empty word is not 1")
    for w, v in _shuffle_pairs(gamma.alphabet, n):
        rhs = sum((m * g[x] for x, m in shuffle(w, v).items()), Fraction(0))
        lhs = g[w] * g[v]
        if not _close(lhs, rhs, tol):
            return CheckResult(False, (w, v), f"{lhs} != {rhs}")
    return CheckResult(True)


def is_lie_element(beta: WMap, max_len: int | None = None, tol: float = 1e-12) -> CheckResult:
    """``beta_() == 0`` and ``sum beta_(w sh v) == 0`` for nonempty ``w, v``."""
    n = beta.cap if max_len is None else max_len
    b = beta.coeffs
    if not _close(b[()], 0, tol):
        return CheckResult(False, (), "coefficient of the empty word is not 0")
    scale = max((abs(complex(c)) for c in b.values()), default=0.0)
    for w, v in _shuffle_pairs(beta.alphabet, n):
        s = sum((m * b[x] for x, m in shuffle(w, v).items()), Fraction(0))
        if _is_exact(s):
            if s != 0:
                return CheckResult(False, (w, v), f"shuffle sum {s}")
        elif abs(complex(s)) > tol * max(1.0, scale):
            return CheckResult(False, (w, v), f"shuffle sum {s}")
    return CheckResult(True)


def antipode_inverse(gamma: WMap, check: bool = True, tol: float = 1e-12) -> WMap:
    """Convolution inverse of a group element: ``(-1)^|w| gamma_{reversed w}``."""
    if check:
        res = is_group_element(gamma, tol=tol)
        if not res:
            raise ValueError(f"not a group element: {res.detail} at {res.witness}")
    return gamma.map(lambda w, c: (-1) ** len(w) * gamma.coeffs[w[::-1]])


def lie_bracket(beta: WMap, other: WMap) -> WMap:
    return convolution(beta, other) - convolution(other, beta)


# Exponential polynomials  sum c * t^m * exp(i (label . omega) t)

class ExpPoly:
    """Exponential polynomial with exact frequency labels.

    Terms are keyed by ``(label, power)`` where ``label`` is an integer
    vector; the frequency of a term is ``label . omega``.  Labels add under
    multiplication, so resonant combinations are recognised exactly.
    """

    __slots__ = ("omega", "terms")

    def __init__(self, omega: Sequence[float], terms: Mapping[tuple, object] | None = None):
        self.omega = tuple(omega)
        self.terms: dict[tuple, object] = {}
        for key, c in (terms or {}).items():
            if c != 0:
                self.terms[key] = self.terms.get(key, 0) + c

    @classmethod
    def constant(cls, omega: Sequence[float], c=Fraction(1)) -> ExpPoly:
        return cls(omega, {((0,) * len(omega), 0): c})

    def freq(self, label: tuple) -> float:
        return float(sum(k * w for k, w in zip(label, self.omega)))

    def _is_zero_freq(self, label: tuple) -> bool:
        if not any(label):
            return True
        mu = self.freq(label)
        size = sum(abs(k * w) for k, w in zip(label, self.omega))
        return abs(mu) <= 1e-14 * size

    def __add__(self, other: ExpPoly) -> ExpPoly:
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return ExpPoly(self.omega, out)

    def __mul__(self, other) -> ExpPoly:
        if not isinstance(other, ExpPoly):
            return ExpPoly(self.omega, {k: c * other for k, c in self.terms.items()})
        out: dict[tuple, object] = {}
        for (l1, m1), c1 in self.terms.items():
            for (l2, m2), c2 in other.terms.items():
                key = (tuple(a + b for a, b in zip(l1, l2)), m1 + m2)
                out[key] = out.get(key, 0) + c1 * c2
        return ExpPoly(self.omega, out)

    __rmul__ = __mul__

    def integrate(self) -> ExpPoly:
        """Antiderivative vanishing at 0, in closed form."""
        zero = (0,) * len(self.omega)
        out: dict[tuple, object] = {}

        def add(key, c):
            out[key] = out.get(key, 0) + c

        for (label, m), c in self.terms.items():
            if self._is_zero_freq(label):
                add((label, m + 1), c / (m + 1) if _is_exact(c) else c / (m + 1))
                continue
            ia = 1j * self.freq(label)
            # int_0^t s^m e^{ias} ds = e^{iat} sum_p t^p coef_p  + const
            coef = c / ia
            for p in range(m, -1, -1):
                add((label, p), coef)
                coef = -coef * p / ia
            # value at 0 of the bracketed expression is the p = 0 coefficient
            add((zero, 0), -c * (-1) ** m * factorial(m) / ia ** (m + 1))
        return ExpPoly(self.omega, out)

    def __call__(self, t):
        exact = _is_exact(t) and all(_is_exact(c) and not any(l) for (l, _), c in self.terms.items())
        acc = Fraction(0) if exact else 0j
        for (label, m), c in self.terms.items():
            term = c * t**m
            if any(label):
                term = term * cmath.exp(1j * self.freq(label) * t)
            acc = acc + term
        return acc

    def __repr__(self) -> str:
        return "ExpPoly(" + " + ".join(f"{c}*t^{m}*e^(i{l}.w t)" for (l, m), c in self.terms.items()) + ")"


@dataclass(frozen=True)
class LambdaSpec:
    """Per-letter forcing ``lambda_a(t) = sum_j c_j t^m_j exp(i mu_j t)``.

    Each term is ``(c, m, label)`` with frequency ``mu = label . omega``.
    """

    omega: tuple
    terms: Mapping[Letter, tuple]

    def __post_init__(self):
        omega = tuple(self.omega)
        norm = {}
        for a, ts in self.terms.items():
            rows = []
            for c, m, label in ts:
                label = tuple(int(k) for k in label)
                if len(label) != len(omega):
                    raise ValueError(f"label {label} does not match omega of length {len(omega)}")
                rows.append((c, int(m), label))
            norm[a] = tuple(rows)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "terms", norm)

    @property
    def alphabet(self) -> tuple:
        return tuple(self.terms)

    @classmethod
    def constant(cls, alphabet: Sequence[Letter]) -> LambdaSpec:
        """``lambda_a == 1`` for every letter."""
        return cls((), {a: ((Fraction(1), 0, ()),) for a in alphabet})

    @classmethod
    def oscillatory(cls, modes: Sequence[Sequence[int]], omega: Sequence[float]) -> LambdaSpec:
        """``lambda_k(t) = exp(i k . omega t)`` for integer-vector letters ``k``."""
        return cls(tuple(omega), {tuple(k): ((Fraction(1), 0, tuple(k)),) for k in modes})

    @classmethod
    def frequencies(cls, freqs: Mapping[Letter, float]) -> LambdaSpec:
        """``lambda_a(t) = exp(i mu_a t)``, one frequency per letter."""
        distinct = sorted({float(mu) for mu in freqs.values() if mu != 0})
        omega = tuple(distinct)
        terms = {}
        for a, mu in freqs.items():
            label = tuple(1 if mu != 0 and float(mu) == w else 0 for w in distinct)
            terms[a] = ((Fraction(1), 0, label),)
        return cls(omega, terms)

    def exppoly(self, a: Letter) -> ExpPoly:
        return ExpPoly(self.omega, {(label, m): c for c, m, label in self.terms[a]})


def iterated_integral_exppolys(spec: LambdaSpec, cap: int) -> dict[Word, ExpPoly]:
    """The functions ``alpha_w(t)`` as exponential polynomials, for ``|w| <= cap``."""
    alpha = {(): ExpPoly.constant(spec.omega)}
    lam = {a: spec.exppoly(a) for a in spec.alphabet}
    for n in range(1, cap + 1):
        for w in words_of_length(spec.alphabet, n):
            alpha[w] = (alpha[w[:-1]] * lam[w[-1]]).integrate()
    return alpha


def iterated_integral_coeffs(spec: LambdaSpec, t, cap: int) -> WMap:
    """``alpha_w(t)`` with ``alpha_a1..an(t) = int_0^t lambda_an(s) alpha_a1..an-1(s) ds``."""
    polys = iterated_integral_exppolys(spec, cap)
    return WMap(spec.alphabet, cap, {w: p(t) for w, p in polys.items()})


def exact_flow_wmap(alphabet: Sequence[Letter], t, cap: int) -> WMap:
    """Taylor coefficients ``t^n / n!`` on every word with n letters."""
    if isinstance(t, int):
        t = Fraction(t)
    return WMap(tuple(alphabet), cap, {w: t ** len(w) / factorial(len(w)) for w in words_up_to(alphabet, cap)})


def word_to_str(w: Word) -> str:
    return ".".join(",".join(map(str, a)) if isinstance(a, tuple) else str(a) for a in w)


def word_from_str(s: str, integer_letters: bool) -> Word:
    if not s:
        return ()
    parts = s.split(".")
    if integer_letters:
        return tuple(tuple(int(x) for x in p.split(",")) for p in parts)
    return tuple(parts)


def wmap_to_json(delta: WMap) -> dict:
    """Rationals are written as ``"p/q"`` strings, anything else as ``[re, im]``."""
    integer = any(isinstance(a, tuple) for a in delta.alphabet)
    alpha = [",".join(map(str, a)) if integer else a for a in delta.alphabet]
    coeffs = {}
    for w, c in delta.coeffs.items():
        if _is_exact(c):
            coeffs[word_to_str(w)] = str(Fraction(c))
        else:
            c = complex(c)
            coeffs[word_to_str(w)] = [c.real, c.imag]
    return {"letters": "vectors" if integer else "symbols", "alphabet": alpha, "cap": delta.cap, "coeffs": coeffs}


def wmap_from_json(data: Mapping) -> WMap:
    try:
        raw = list(data["alphabet"])
        kind = data.get("letters")
        if kind is None:
            kind = "vectors" if any(isinstance(a, list) or (isinstance(a, str) and "," in a) for a in raw) else "symbols"
        if kind not in ("vectors", "symbols"):
            raise ValueError(f"letters must be 'vectors' or 'symbols', got {kind!r}")
        integer = kind == "vectors"
        if integer:
            alphabet = tuple(tuple(int(x) for x in (a.split(",") if isinstance(a, str) else a)) for a in raw)
        else:
            alphabet = tuple(raw)
        coeffs = {}
        for key, val in data["coeffs"].items():
            c = complex(float(val[0]), float(val[1])) if isinstance(val, (list, tuple)) else Fraction(str(val))
            coeffs[word_from_str(key, integer)] = c
        return WMap(alphabet, int(data["cap"]), coeffs)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed WMap JSON: {exc}") from None
