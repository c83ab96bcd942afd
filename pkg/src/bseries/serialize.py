"""JSON input/output shared by the CLI and the experiment configs.

Every loader raises :class:`ConfigError` (a ``ValueError``) with the offending
path, so the CLI can map bad input to a single exit code.  Writers are
byte-deterministic: same object, same bytes.
"""
from __future__ import annotations

import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .butcher import BMap, RKTableau, elementary_weights
from .extended import ExtCoeffs, PerturbedProblem
from .polynomials import PolyMap
from .splitting import SplittingScheme
from .words import wmap_from_json, wmap_to_json


class ConfigError(ValueError):
    """Unreadable or malformed input."""


def data_path(name: str) -> Path:
    """Path of a fixture file shipped in ``bseries/data``."""
    p = Path(str(resources.files("bseries") / "data" / name))
    if not p.exists():
        raise ConfigError(f"no shipped fixture named {name!r}")
    return p


def read_json(path) -> Any:
    if str(path) == "-":
        text = sys.stdin.read()
    else:
        p = Path(path)
        if not p.exists() and p.parent == Path("."):
            # bare names fall back to the shipped fixtures (euler.json, strang.json, ...)
            shipped = Path(str(resources.files("bseries"))) / "data" / p.name
            if shipped.exists():
                p = shipped
        try:
            text = p.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_text(text: str, path=None) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def write_json(obj: Any, path=None) -> None:
    write_text(dumps(obj), path)


def number_to_json(x, mode: str = "exact"):
    """Fractions stay exact strings in exact mode; complex numbers become ``[re, im]``."""
    if isinstance(x, Fraction):
        return str(x) if mode == "exact" else float(x)
    if isinstance(x, int):
        return x if mode == "exact" else float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return float(x)


def bmap_to_json(delta: BMap, mode: str = "exact") -> dict:
    return {",".join(map(str, u.levels)) or "": number_to_json(c, mode) for u, c in delta.coeffs.items()}


def ext_to_json(c: ExtCoeffs) -> dict:
    return {"shift": [[s.real, s.imag] for s in c.shift], "coefficients": wmap_to_json(c.coeffs)}


def ext_from_json(data: Mapping) -> ExtCoeffs:
    try:
        shift = tuple(complex(*s) if isinstance(s, list) else complex(s) for s in data["shift"])
        return ExtCoeffs(shift, wmap_from_json(data["coefficients"]))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed extended coefficients: {exc}") from None


def _parse(kind: str, parser, path):
    data = read_json(path)
    try:
        return parser(data)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{path} is not a valid {kind}: {exc}") from None


def load_tableau(path) -> RKTableau:
    return _parse("tableau", RKTableau.from_json, path)


def load_scheme(path) -> SplittingScheme:
    return _parse("splitting scheme", SplittingScheme.from_json, path)


def load_field(path) -> PolyMap:
    return _parse("polynomial field", PolyMap.from_json, path)


def load_problem(path) -> PerturbedProblem:
    return _parse("perturbed problem", PerturbedProblem.from_json, path)


def load_coefficients(path, cap: int) -> BMap:
    """A tableau file (has ``A`` and ``b``) gives its elementary weights; otherwise a BMap."""
    data = read_json(path)
    try:
        if isinstance(data, Mapping) and "A" in data:
            return elementary_weights(RKTableau.from_json(data), cap)
        delta = BMap.from_json(data)
        if delta.cap < cap:
            raise ValueError(f"coefficients are only given through grade {delta.cap}, {cap} requested")
        return delta.truncate(cap)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{path} is neither a tableau nor B-series coefficients: {exc}") from None
