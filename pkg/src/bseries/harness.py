"""Reference integrators and convergence experiments (float mode).

These tie the formal coefficient machinery to trajectories actually computed
with numpy: RK steps from a tableau, splitting steps for perturbed problems,
Richardson-checked reference solutions and h-refinement studies.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .butcher import RKTableau, elementary_weights, exact_flow_bmap, log_star
from .extended import PerturbedProblem, TrigField
from .polynomials import PolyMap
from .splitting import SplittingScheme, modified_system
from .vectorfields import bseries_eval, bseries_field

FIXED_POINT_TOL = 1e-14
FIXED_POINT_CAP = 100
MICRO_STEPS = 64
REFERENCE_TOL = 1e-12


class ConvergenceError(RuntimeError):
    """An iterative solver or reference computation did not converge."""


def rk_step(t: RKTableau, f: Callable, x, h: float, tol: float = FIXED_POINT_TOL, cap: int = FIXED_POINT_CAP) -> np.ndarray:
    """One step ``x + h sum b_i f(X_i)`` with ``X_i = x + h sum_j a_ij f(X_j)``."""
    x = np.asarray(x, dtype=float)
    A = np.array([[float(a) for a in row] for row in t.A])
    b = np.array([float(v) for v in t.b])
    s = len(b)
    K = np.zeros((s, x.size))
    if t.is_explicit:
        for i in range(s):
            K[i] = f(x + h * (A[i, :i] @ K[:i]))
        return x + h * (b @ K)
    K[:] = f(x)
    scale = max(1.0, float(np.max(np.abs(x))))
    for _ in range(cap):
        X = x + h * (A @ K)
        K_new = np.array([f(Xi) for Xi in X])
        # residual of the stage equations, measured on the stage values
        if abs(h) * float(np.max(np.abs(K_new - K))) < tol * scale:
            K = K_new
            break
        K = K_new
    else:
        raise ConvergenceError(f"fixed-point iteration did not reach {tol:g} in {cap} iterations (h = {h})")
    return x + h * (b @ K)


def rk4_integrate(f: Callable, x0, T: float, n: int) -> np.ndarray:
    """Classical RK4 with ``n`` equal steps."""
    x = np.asarray(x0, dtype=float).copy()
    dt = T / n
    for _ in range(n):
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        x = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


def reference_solution(f: Callable, x0, T: float, tol: float = REFERENCE_TOL, n0: int = 32, max_doublings: int = 18) -> np.ndarray:
    """RK4 with step halving until the Richardson error estimate drops below ``tol``."""
    n = n0
    coarse = rk4_integrate(f, x0, T, n)
    for _ in range(max_doublings):
        n *= 2
        fine = rk4_integrate(f, x0, T, n)
        est = float(np.max(np.abs(fine - coarse))) / 15
        if est < tol * max(1.0, float(np.max(np.abs(fine)))):
            return fine + (fine - coarse) / 15
        coarse = fine
    raise ConvergenceError(f"reference solution did not reach {tol:g} with {n} RK4 steps")


def compile_trig(tf: TrigField) -> Callable:
    """Vectorized float evaluator of a :class:`TrigField`; returns complex arrays."""
    ny = tf.ny
    monos: dict[tuple, int] = {}
    entries = []
    for K, P in tf.parts.items():
        for i, p in enumerate(P):
            for e, c in p.terms.items():
                key = (K, e)
                if key not in monos:
                    monos[key] = len(monos)
                entries.append((monos[key], i, complex(c)))
    keys = list(monos)
    E = np.array([e for _, e in keys], dtype=float).reshape(len(keys), ny)
    Km = np.array([K for K, _ in keys], dtype=float).reshape(len(keys), tf.d)
    C = np.zeros((len(keys), tf.size), dtype=complex)
    for m, i, c in entries:
        C[m, i] += c

    def evaluate(x: np.ndarray) -> np.ndarray:
        y, theta = x[:ny], x[ny:]
        mono = np.prod(y ** E, axis=1) * np.exp(1j * (Km @ theta))
        return mono @ C

    return evaluate


def real_field(tf: TrigField, tol: float = 1e-9) -> Callable:
    """Real part of a trigonometric field that is real on real points."""
    ev = compile_trig(tf)

    def f(x: np.ndarray) -> np.ndarray:
        v = ev(x)
        if float(np.max(np.abs(v.imag))) > tol * max(1.0, float(np.max(np.abs(v.real)))):
            raise ValueError("trigonometric field is not real at this point")
        return v.real

    return f


def splitting_step(s: SplittingScheme, problem: PerturbedProblem, x, h: float, micro: int = MICRO_STEPS, perturbation: Callable | None = None) -> np.ndarray:
    """Alternate exact rotations ``theta += a_j h omega`` with RK4-resolved perturbation flows."""
    x = np.asarray(x, dtype=float).copy()
    ny = problem.ny
    omega = np.array(problem.omega)
    P = perturbation or real_field(problem.perturbation())
    for aj, bj in zip(s.a, s.b):
        x[ny:] += aj * h * omega
        if bj:
            x = rk4_integrate(P, x, bj * h, micro)
    return x


def integrate(step: Callable, x0, T: float, h: float) -> np.ndarray:
    n = steps_for(T, h)
    x = np.asarray(x0, dtype=float)
    for _ in range(n):
        x = step(x, T / n)
    return x


def steps_for(T: float, h: float) -> int:
    n = round(T / h)
    if n < 1 or abs(n * h - T) > 1e-9 * abs(T):
        raise ValueError(f"step {h} does not divide the interval {T}")
    return n


def euler_modified_field(f: PolyMap, h: float, grade: int = 2) -> PolyMap:
    """Truncated modified field of explicit Euler: trees with at most ``grade + 1`` vertices."""
    from .butcher import EULER

    beta = log_star(elementary_weights(EULER, grade + 1))
    return bseries_field(beta, f, h) * (1.0 / h)


def splitting_modified_field(s: SplittingScheme, problem: PerturbedProblem, h: float, grade: int = 2) -> Callable:
    ms = modified_system(s, problem.omega, h, grade, problem.alphabet)
    return real_field(problem.series_field(ms.as_ext()))


def observed_rates(hs: Sequence[float], errs: Sequence[float]) -> list[float]:
    """``log(err_i / err_{i+1}) / log(h_i / h_{i+1})``; NaN for the last row."""
    out = []
    for i in range(len(hs)):
        if i + 1 < len(hs) and errs[i] > 0 and errs[i + 1] > 0:
            out.append(math.log(errs[i] / errs[i + 1]) / math.log(hs[i] / hs[i + 1]))
        else:
            out.append(float("nan"))
    return out


@dataclass
class ExperimentConfig:
    """A convergence experiment: which step map, on which problem, for which h."""

    method: str
    steps: list
    T: float
    x0: list
    tableau: str | None = None
    scheme: str | None = None
    field: str | None = None
    problem: str | None = None
    grade: int = 6
    mode: str = "float"
    output: str | None = None
    local: bool = False
    base: Path = dc_field(default_factory=Path.cwd)

    METHODS = ("rk", "splitting", "bseries")

    def __post_init__(self):
        if self.method not in self.METHODS:
            raise ValueError(f"method must be one of {self.METHODS}, got {self.method!r}")
        self.steps = [float(h) for h in self.steps]
        if not self.steps:
            raise ValueError("step list is empty")
        if any(a <= b for a, b in zip(self.steps, self.steps[1:])):
            raise ValueError("step list must be strictly decreasing")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"mode must be exact or float, got {self.mode!r}")
        if self.mode == "exact":
            raise ValueError("convergence studies run in float mode only")
        self.T = float(self.T)
        self.x0 = [float(v) for v in self.x0]
        need = {"rk": ("tableau", "field"), "splitting": ("scheme", "problem"), "bseries": ("field",)}[self.method]
        for name in need:
            if getattr(self, name) is None:
                raise ValueError(f"method {self.method!r} needs a {name} file")
        parsers = {
            "tableau": RKTableau.from_json,
            "scheme": SplittingScheme.from_json,
            "field": PolyMap.from_json,
            "problem": PerturbedProblem.from_json,
        }
        for name, parse in parsers.items():
            path = getattr(self, name)
            if path is not None:
                try:
                    parse(self._load(path))
                except (KeyError, TypeError, ValueError) as exc:
                    raise ValueError(f"{name} file {path} does not parse: {exc}") from None

    def _load(self, path) -> dict:
        p = Path(path)
        if not p.is_absolute():
            p = self.base / p
        if not p.exists() and Path(path).parent == Path("."):
            # bare names fall back to the shipped fixtures, as on the command line
            shipped = Path(str(resources.files("bseries"))) / "data" / Path(path).name
            if shipped.exists():
                p = shipped
        try:
            return json.loads(p.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot read {p}: {exc}") from None

    @classmethod
    def from_json(cls, data: dict, base: Path | None = None) -> ExperimentConfig:
        keys = {"method", "steps", "T", "x0", "tableau", "scheme", "field", "problem", "grade", "mode", "output", "local"}
        unknown = set(data) - keys
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        try:
            return cls(**data, base=base or Path.cwd())
        except TypeError as exc:
            raise ValueError(f"malformed experiment config: {exc}") from None

    def step_map(self) -> Callable:
        if self.method == "rk":
            tab = RKTableau.from_json(self._load(self.tableau))
            f = PolyMap.from_json(self._load(self.field))
            return lambda x, h: rk_step(tab, f, x, h)
        if self.method == "bseries":
            f = PolyMap.from_json(self._load(self.field))
            flow = exact_flow_bmap(self.grade)
            return lambda x, h: np.array(bseries_eval(flow, f, x, h), dtype=float)
        scheme = SplittingScheme.from_json(self._load(self.scheme))
        problem = PerturbedProblem.from_json(self._load(self.problem))
        P = real_field(problem.perturbation())
        return lambda x, h: splitting_step(scheme, problem, x, h, perturbation=P)

    def exact_field(self) -> Callable:
        if self.method == "splitting":
            problem = PerturbedProblem.from_json(self._load(self.problem))
            return real_field(problem.full_field())
        return PolyMap.from_json(self._load(self.field))


def convergence_study(cfg: ExperimentConfig, reference=None) -> list[tuple[float, float, float]]:
    """Rows ``(h, error, rate)`` in order of decreasing ``h``.

    Global errors are measured at ``T``; with ``cfg.local`` a single step of
    size ``h`` is compared with the exact flow at time ``h`` instead.
    ``reference`` may be a point (global) or a function of time.
    """
    step = cfg.step_map()
    x0 = np.asarray(cfg.x0, dtype=float)
    if reference is None:
        f = cfg.exact_field()
        reference = lambda t: reference_solution(f, x0, t)  # noqa: E731
    ref = reference if callable(reference) else (lambda t: np.asarray(reference, dtype=float))
    errs = []
    for h in cfg.steps:
        if cfg.local:
            approx, exact = step(x0, h), ref(h)
        else:
            approx, exact = integrate(step, x0, cfg.T, h), ref(cfg.T)
        errs.append(float(np.max(np.abs(np.asarray(approx, dtype=float) - exact))))
    return list(zip(cfg.steps, errs, observed_rates(cfg.steps, errs)))


def _fmt(v: float) -> str:
    return "" if math.isnan(v) else format(v, ".17g")


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["h", "error", "rate"])
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()

