"""Command-line front end.

Exit codes: 0 success, 1 a requested check failed, 2 bad arguments or input.
"""
from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import serialize as io
from .butcher import (
    EULER,
    IMPLICIT_MIDPOINT,
    RK4,
    compose,
    condition_text,
    elementary_weights,
    exp_star,
    is_hamiltonian_field_coeffs,
    is_symplectic_coeffs,
    is_symplectic_tableau,
    log_star,
    order_conditions,
    order_of,
    random_group_like,
)
from .harness import ExperimentConfig, convergence_study, rows_to_csv
from .splitting import detect_resonances, modified_system, splitting_coeffs
from .trees import butcher_product, density, symmetry, trees_up_to
from .words import (
    LambdaSpec,
    is_group_element,
    is_lie_element,
    iterated_integral_coeffs,
    wmap_to_json,
)


class Failure(Exception):
    """A validation check requested on the command line did not hold."""


def _tree_str(u) -> str:
    return "[" + ",".join(map(str, u.levels)) + "]"


def _num(x, mode: str) -> str:
    if mode == "float":
        return format(float(x), ".17g")
    return str(x)


def _close(x, target, args) -> bool:
    if args.mode == "exact":
        return x == target
    return abs(float(x) - float(target)) <= args.tol


def _parse_vector_list(text: str) -> tuple:
    """``"-1;0;1"`` or ``"1,0;0,1"`` into integer vectors."""
    try:
        return tuple(tuple(int(v) for v in part.split(",")) for part in text.split(";") if part.strip())
    except ValueError:
        raise io.ConfigError(f"cannot parse mode list {text!r}") from None


def _parse_floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise io.ConfigError(f"cannot parse number list {text!r}") from None


# subcommands

def cmd_trees(args) -> None:
    trees = trees_up_to(args.max_order, include_empty=False)
    if args.json:
        rows = [{"tree": list(u.levels), "order": len(u), "sigma": symmetry(u), "density": density(u)} for u in trees]
        io.write_json(rows, args.output)
        return
    lines = [f"{'|u|':>3}  {'tree':<14}{'sigma':>6}{'u!':>6}"]
    lines += [f"{len(u):>3}  {_tree_str(u):<14}{symmetry(u):>6}{density(u):>6}" for u in trees]
    io.write_text("\n".join(lines) + "\n", args.output)


def cmd_rk_order(args) -> None:
    tab = io.load_tableau(args.input)
    cap = args.max_order
    weights = elementary_weights(tab, cap)
    order = 0
    lines = []
    failed = False
    for u, rhs in order_conditions(cap):
        ok = _close(weights.coeffs[u], rhs, args)
        if not ok and not failed:
            failed = True
            order = len(u) - 1
        if args.conditions:
            mark = "ok  " if ok else "FAIL"
            lines.append(f"{mark} {condition_text(u)}   (tableau gives {_num(weights.coeffs[u], args.mode)})")
    if not failed:
        order = cap
    if args.mode == "exact":
        assert order == order_of(weights, cap)
    lines.append(f"order {order}" + (f" (checked through {cap})" if order == cap else ""))
    io.write_text("\n".join(lines) + "\n", args.output)
    if args.expect is not None and order != args.expect:
        raise Failure(f"expected order {args.expect}, found {order}")


def cmd_rk_symplectic(args) -> None:
    tab = io.load_tableau(args.input)
    t_res = is_symplectic_tableau(tab)
    c_res = is_symplectic_coeffs(elementary_weights(tab, args.max_order))
    lines = []
    for name, res in (("tableau test", t_res), (f"coefficient test (grade <= {args.max_order})", c_res)):
        if res:
            lines.append(f"{name}: pass")
        else:
            w = res.witness
            wit = ", ".join(_tree_str(x) if hasattr(x, "levels") else str(x) for x in w) if isinstance(w, tuple) else str(w)
            lines.append(f"{name}: fail at ({wit}) {res.detail}".rstrip())
    symplectic = bool(t_res) and bool(c_res)
    lines.append("symplectic" if symplectic else "not symplectic")
    io.write_text("\n".join(lines) + "\n", args.output)
    if args.expect is not None and symplectic != (args.expect == "yes"):
        raise Failure("symplecticity differs from --expect")


def cmd_compose(args) -> None:
    cap = args.max_order
    gamma = io.load_coefficients(args.input, cap)
    delta = io.load_coefficients(args.then, cap)
    if not gamma.is_group_like:
        raise io.ConfigError("the first map must be group-like (coefficient 1 on the empty tree)")
    zeta = compose(delta, gamma)
    io.write_json(io.bmap_to_json(zeta, args.mode), args.output)


def cmd_modified_equation(args) -> None:
    cap = args.max_order
    gamma = io.load_coefficients(args.input, cap)
    if not gamma.is_group_like:
        raise io.ConfigError("integrator coefficients must be group-like")
    beta = log_star(gamma)
    if exp_star(beta) != gamma:
        raise Failure("exp_star(log_star(gamma)) does not reproduce gamma")
    report = {"modified_field": io.bmap_to_json(beta, args.mode)}
    ham = is_hamiltonian_field_coeffs(beta, min(cap, 4))
    report["hamiltonian_through_grade_4"] = bool(ham)
    io.write_json(report, args.output)


def cmd_words(args) -> None:
    cap = args.max_order
    if args.omega is not None:
        omega = _parse_floats(args.omega)
        modes = _parse_vector_list(args.modes) if args.modes else _unit_modes(len(omega))
        spec = LambdaSpec.oscillatory(modes, omega)
        t = float(args.t)
    else:
        letters = tuple(a for a in args.alphabet.split(",") if a)
        if not letters:
            raise io.ConfigError("empty alphabet")
        spec = LambdaSpec.constant(letters)
        try:
            t = Fraction(args.t)
        except ValueError:
            raise io.ConfigError(f"cannot parse time {args.t!r}") from None
        if args.mode == "float":
            t = float(t)
    alpha = iterated_integral_coeffs(spec, t, cap)
    group = is_group_element(alpha, cap, tol=args.tol)
    report = {"t": str(t), "coefficients": wmap_to_json(alpha), "group_element": bool(group)}
    io.write_json(report, args.output)
    if not group:
        raise Failure(f"shuffle relation fails at {group.witness}")


def _unit_modes(d: int) -> tuple:
    out = []
    for j in range(d):
        for s in (-1, 1):
            k = [0] * d
            k[j] = s
            out.append(tuple(k))
    return tuple(out)


def cmd_splitting_analyze(args) -> None:
    scheme = io.load_scheme(args.input)
    omega = _parse_floats(args.omega)
    if args.problem:
        modes = io.load_problem(args.problem).alphabet
    elif args.modes:
        modes = _parse_vector_list(args.modes)
    else:
        modes = _unit_modes(len(omega))
    if any(len(k) != len(omega) for k in modes):
        raise io.ConfigError("mode vectors must have the length of omega")
    if args.h <= 0:
        raise io.ConfigError("step size must be positive")
    try:
        coeffs = splitting_coeffs(scheme, omega, args.h, modes, args.max_order)
    except ValueError as exc:
        raise io.ConfigError(str(exc)) from None
    res = detect_resonances(omega, args.h, args.max_order, modes)
    report = {
        "scheme": scheme.name,
        "omega": list(omega),
        "h": args.h,
        "max_order": args.max_order,
        "modes": [list(k) for k in modes],
        "splitting": io.ext_to_json(coeffs),
        "resonances": [{"letters": [list(k) for k in letters], "j": j} for letters, j in res],
        "modified_system": None,
    }
    if not res:
        ms = modified_system(scheme, omega, args.h, args.max_order, modes)
        report["modified_system"] = {"coefficients": wmap_to_json(ms.beta), "lie_element": bool(is_lie_element(ms.beta, tol=1e-10))}
    io.write_json(report, args.output)
    if args.require_nonresonant and res:
        raise Failure(f"{len(res)} numerical resonance(s) found")


def _self_checks(n: int):
    """Fast exact identities; yields ``(name, ok)``."""
    table = [(len(u), symmetry(u), density(u)) for u in trees_up_to(4, include_empty=False)]
    yield "table of trees through order 4", table == [
        (1, 1, 1), (2, 1, 2), (3, 1, 6), (3, 2, 3), (4, 1, 24), (4, 2, 12), (4, 1, 8), (4, 6, 4)]
    yield "euler has order 1", order_of(elementary_weights(EULER, n), n) == 1
    yield "rk4 has order 4", order_of(elementary_weights(RK4, max(n, 5)), max(n, 5)) == 4
    yield "implicit midpoint is symplectic", bool(is_symplectic_tableau(IMPLICIT_MIDPOINT)) and bool(
        is_symplectic_coeffs(elementary_weights(IMPLICIT_MIDPOINT, n)))
    beta = log_star(elementary_weights(EULER, n))
    yield "modified equation of euler", [beta[u] for u in ([1], [1, 2], [1, 2, 3], [1, 2, 2])] == [
        1, Fraction(-1, 2), Fraction(1, 3), Fraction(1, 6)]
    rng = np.random.default_rng(0)
    g, d, e = (random_group_like(n, rng) for _ in range(3))
    yield "composition is associative", compose(e, compose(d, g)) == compose(compose(e, d), g)
    u, v = trees_up_to(2, include_empty=False)[:2]
    yield "butcher product grafts onto the root", butcher_product(u, v).levels == (1, 2, 3)


def cmd_verify(args) -> None:
    if args.input is None:
        lines, bad = [], 0
        for name, ok in _self_checks(args.max_order):
            lines.append(f"{'PASS' if ok else 'FAIL'}  {name}")
            bad += not ok
        io.write_text("\n".join(lines) + "\n", args.output)
        if bad:
            raise Failure(f"{bad} self-check(s) failed")
        return
    data = io.read_json(args.input)
    if not isinstance(data, dict):
        raise io.ConfigError("experiment config must be a JSON object")
    base = Path(args.input).resolve().parent
    try:
        cfg = ExperimentConfig.from_json(data, base=base)
    except ValueError as exc:
        raise io.ConfigError(str(exc)) from None
    rows = convergence_study(cfg)
    io.write_text(rows_to_csv(rows), args.output or cfg.output)
    if args.expect_rate is not None:
        rates = [r for _, _, r in rows if not math.isnan(r)]
        if not rates or abs(rates[-1] - args.expect_rate) > args.rate_tol:
            raise Failure(f"observed rate {rates[-1] if rates else 'n/a'} is not {args.expect_rate} +- {args.rate_tol}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-N", "--max-order", type=int, default=4, help="grade cap (tree order or word length)")
    common.add_argument("-i", "--input", help="input JSON file ('-' for stdin)")
    common.add_argument("-o", "--output", help="output file (default stdout)")
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--tol", type=float, default=1e-12, help="comparison tolerance in float mode")

    p = argparse.ArgumentParser(prog="bseries", description="B-series and word-series toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("trees", parents=[common], help="list rooted trees with symmetry and density")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_trees)

    s = sub.add_parser("rk-order", parents=[common], help="order of a Runge-Kutta tableau")
    s.add_argument("--expect", type=int, help="exit 1 unless the order equals this")
    s.add_argument("--conditions", action="store_true", help="list every condition checked")
    s.set_defaults(func=cmd_rk_order, need_input=True)

    s = sub.add_parser("rk-symplectic", parents=[common], help="symplecticity tests for a tableau")
    s.add_argument("--expect", choices=("yes", "no"))
    s.set_defaults(func=cmd_rk_symplectic, need_input=True)

    s = sub.add_parser("compose", parents=[common], help="coefficients of B_delta(B_gamma(x))")
    s.add_argument("--then", required=True, help="map applied second (delta)")
    s.set_defaults(func=cmd_compose, need_input=True)

    s = sub.add_parser("modified-equation", parents=[common], help="logarithm of integrator coefficients")
    s.set_defaults(func=cmd_modified_equation, need_input=True)

    s = sub.add_parser("words", parents=[common], help="iterated-integral word coefficients")
    s.add_argument("--alphabet", default="a,b")
    s.add_argument("--t", default="1")
    s.add_argument("--omega", help="frequencies; switches to oscillatory letters")
    s.add_argument("--modes", help="letters as integer vectors, e.g. '-1;1'")
    s.set_defaults(func=cmd_words)

    s = sub.add_parser("splitting-analyze", parents=[common], help="splitting coefficients, resonances, modified system")
    s.add_argument("--omega", required=True)
    s.add_argument("--h", type=float, required=True)
    s.add_argument("--modes", help="letters as integer vectors, e.g. '-1;0;1'")
    s.add_argument("--problem", help="perturbed-problem JSON supplying the letters")
    s.add_argument("--require-nonresonant", action="store_true")
    s.set_defaults(func=cmd_splitting_analyze, need_input=True)

    s = sub.add_parser("verify", parents=[common], help="self-checks, or a convergence study from a config")
    s.add_argument("--expect-rate", type=float)
    s.add_argument("--rate-tol", type=float, default=0.2)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "need_input", False) and not args.input:
        parser.error(f"{args.command} needs --input")
    if args.max_order < 1:
        parser.error("--max-order must be at least 1")
    try:
        args.func(args)
    except Failure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except (io.ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
