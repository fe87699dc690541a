"""Batch command-line front end.

Subcommands: derivative, solve, eigen, nonlinear, lifetime, simulate, fk,
compare-caputo, verify.  Every command takes --output json|csv and --seed;
identical invocations produce byte-identical output.  A key=value config
file supplies defaults (flags win).  CENFRAC_THREADS sets the default for
--threads.  Failures print ``ERROR[<code>]: message`` on stderr; usage
errors exit 2, contract/domain errors exit 1.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__, ivp, rl, stochastic, verify
from .errors import CenfracError, UsageError
from .special import FracOrder


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _emit(args, command: str, meta: dict, header: list[str], rows: list[tuple]) -> None:
    meta = {"version": __version__, "command": command, **meta}
    if args.output == "json":
        payload = {
            "meta": meta,
            "rows": [
                {k: (float(v) if isinstance(v, (int, float, np.floating)) else v)
                 for k, v in zip(header, row)}
                for row in rows
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        for key, val in meta.items():
            print(f"# {key}={_fmt(val)}")
        print(",".join(header))
        for row in rows:
            print(",".join(_fmt(v) for v in row))


def parse_forcing(spec: str, order: FracOrder, T: float, env_M=None, env_alpha=None):
    """Tiny forcing grammar: const:c | pow:alpha[:coef] | cos | table:<path>."""
    parts = spec.split(":")
    kind = parts[0]
    if kind == "const":
        if len(parts) != 2:
            raise UsageError(f"malformed forcing spec {spec!r}")
        return rl.constant_forcing(float(parts[1]), order, T)
    if kind == "pow":
        if len(parts) not in (2, 3):
            raise UsageError(f"malformed forcing spec {spec!r}")
        coef = float(parts[2]) if len(parts) == 3 else 1.0
        return rl.power_forcing(float(parts[1]), order, T, coef)
    if kind == "cos":
        return rl.cos_forcing(order, T)
    if kind == "table":
        if len(parts) != 2:
            raise UsageError(f"malformed forcing spec {spec!r}")
        if env_M is None or env_alpha is None:
            raise UsageError("table forcing requires --env-M and --env-alpha")
        data = np.loadtxt(parts[1], delimiter=",", ndmin=2)
        return rl.table_forcing(data[:, 0], data[:, 1], order, T, env_M, env_alpha)
    raise UsageError(f"unknown forcing kind {kind!r} in {spec!r}")


def _grid(T: float, n: int) -> np.ndarray:
    return np.linspace(T / n, T, n)


# --------------------------------------------------------------------------
# subcommand bodies


def cmd_derivative(args) -> int:
    order = FracOrder(args.beta)
    xs = _grid(args.T, args.grid)
    if args.monomial is not None:
        a = args.monomial
        u = rl.SmoothFn(
            lambda x: np.asarray(x, dtype=float) ** a,
            lambda x: a * np.asarray(x, dtype=float) ** (a - 1.0),
            origin_power=a,
            domain_end=args.T,
        )
        closed = rl.monomial_censored_derivative(a, order, xs)
    else:
        c = args.constant
        u = rl.SmoothFn(
            lambda x: np.full_like(np.asarray(x, dtype=float), c),
            lambda x: np.zeros_like(np.asarray(x, dtype=float)),
            origin_power=1.0,
            domain_end=args.T,
        )
        closed = np.zeros_like(xs)
    d_cens = rl.censored_derivative(u, order, xs, "jump_integral")
    d_rl = rl.rl_derivative(u, order, xs)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(d_rl != 0.0, d_cens / d_rl, np.nan)
    rows = [
        (x, dc, dr, rt, cf)
        for x, dc, dr, rt, cf in zip(xs, d_cens, d_rl, ratio, closed)
    ]
    _emit(
        args,
        "derivative",
        {"beta": args.beta, "seed": args.seed, "tol": args.tol},
        ["x", "D_beta", "RL", "ratio", "closed_form"],
        rows,
    )
    return 0


def cmd_solve(args) -> int:
    order = FracOrder(args.beta)
    g = parse_forcing(args.g, order, args.T, args.env_M, args.env_alpha)
    sol = ivp.solve_linear(g, args.u0, order, args.T, args.tol)
    xs = _grid(args.T, args.grid)
    rows = [(x, u) for x, u in zip(xs, sol(xs))]
    _emit(
        args,
        "solve",
        {
            "beta": args.beta,
            "seed": args.seed,
            "tol": args.tol,
            "depth": sol.depth,
            "tail_bound": sol.tail_bound,
        },
        ["x", "u"],
        rows,
    )
    return 0


def cmd_eigen(args) -> int:
    order = FracOrder(args.beta)
    sol = ivp.solve_eigen(args.lam, args.u0, order, args.T, args.tol)
    xs = _grid(args.T, args.grid)
    rows = [(x, u) for x, u in zip(xs, sol(xs))]
    _emit(
        args,
        "eigen",
        {
            "beta": args.beta,
            "seed": args.seed,
            "tol": args.tol,
            "lambda": args.lam,
            "depth": sol.depth,
            "tail_bound": sol.tail_bound,
        },
        ["x", "u"],
        rows,
    )
    return 0


def _parse_nonlinear_f(args, order: FracOrder):
    spec = args.f
    if spec.startswith("linear:"):
        lam = float(spec.split(":", 1)[1])

        def fn(x, y):
            return lam * y

        L = max(abs(lam), 1e-12)
        M = max(abs(lam) * (abs(args.u0) + args.Y), 1e-12)
        return fn, L, M
    g = parse_forcing(spec, order, args.T, args.env_M, args.env_alpha)
    xs = np.geomspace(args.T * 1e-8, args.T, 512)
    M = max(float(np.max(np.abs(g.fn(xs)))), 1e-12)

    def fn(x, y):
        return np.asarray(g.fn(x), dtype=float) + 0.0 * y

    return fn, 1e-12, M


def cmd_nonlinear(args) -> int:
    order = FracOrder(args.beta)
    fn, L, M = _parse_nonlinear_f(args, order)
    spec = ivp.NonlinearSpec(fn, L, args.Y, M, args.u0)
    result = ivp.solve_nonlinear(spec, order, args.T, args.tol, args.max_iters)
    t1 = result.solution.domain_end
    xs = _grid(t1, args.grid)
    rows = [(x, u) for x, u in zip(xs, result.solution(xs))]
    _emit(
        args,
        "nonlinear",
        {
            "beta": args.beta,
            "seed": args.seed,
            "tol": args.tol,
            "T1": t1,
            "iterations": result.iterations,
        },
        ["x", "u"],
        rows,
    )
    return 0


def cmd_lifetime(args) -> int:
    order = FracOrder(args.beta)
    rng = stochastic.RngStream(args.seed)
    est, se, tail = stochastic.estimate_lifetime(
        args.x, order, args.n, args.depth, rng, threads=args.threads
    )
    ref = stochastic.lifetime_closed_form(args.x, order)
    _emit(
        args,
        "lifetime",
        {"beta": args.beta, "seed": args.seed, "tol": args.tol,
         "n": args.n, "depth": args.depth},
        ["x", "estimate", "stderr", "tail_bound", "closed_form", "abs_dev"],
        [(args.x, est, se, tail, ref, abs(est - ref))],
    )
    return 0


def cmd_simulate(args) -> int:
    order = FracOrder(args.beta)
    rng = stochastic.RngStream(args.seed)
    est = stochastic.mean_lifetime_from_paths(
        args.x, order, args.h, args.threshold, args.n, rng,
        max_steps=args.max_steps, threads=args.threads,
    )
    ref = stochastic.lifetime_closed_form(args.x, order)
    _emit(
        args,
        "simulate",
        {"beta": args.beta, "seed": args.seed, "tol": args.tol, "h": args.h,
         "threshold": args.threshold, "n": args.n, "backend": est.backend},
        ["x", "mean_lifetime", "stderr", "bias_bound", "mean_resurrections",
         "closed_form"],
        [(args.x, est.estimate, est.stderr, est.bias_bound,
          est.mean_resurrections, ref)],
    )
    return 0


def cmd_fk(args) -> int:
    order = FracOrder(args.beta)
    rng = stochastic.RngStream(args.seed)
    g = parse_forcing(args.g, order, max(args.T, args.x), args.env_M, args.env_alpha)
    est, se = stochastic.estimate_feynman_kac(
        g, args.x, order, args.n, args.h, rng,
        stop_threshold=args.threshold, threads=args.threads,
    )
    ref = float(ivp.solve_linear(g, 0.0, order, args.x, args.tol)(args.x))
    _emit(
        args,
        "fk",
        {"beta": args.beta, "seed": args.seed, "tol": args.tol, "h": args.h,
         "threshold": args.threshold, "n": args.n},
        ["x", "estimate", "stderr", "reference", "rel_dev"],
        [(args.x, est, se, ref, abs(est - ref) / abs(ref) if ref else math.nan)],
    )
    return 0


def cmd_compare_caputo(args) -> int:
    order = FracOrder(args.beta)
    g = parse_forcing(args.g, order, args.T, args.env_M, args.env_alpha)
    sol = ivp.solve_linear(g, args.u0, order, args.T, args.tol)
    xs = _grid(args.T, args.grid)
    censored = sol(xs)
    caputo = args.u0 + rl.rl_integral(g, order, xs)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(
            caputo != args.u0,
            (censored - args.u0) / (caputo - args.u0),
            np.nan,
        )
    rows = list(zip(xs, censored, caputo, ratio))
    _emit(
        args,
        "compare-caputo",
        {"beta": args.beta, "seed": args.seed, "tol": args.tol, "u0": args.u0},
        ["x", "censored", "caputo", "ratio"],
        rows,
    )
    return 0


def cmd_verify(args) -> int:
    betas = (args.beta,) if args.beta is not None else None
    cfg = verify.VerifyConfig(
        betas=betas,
        seed=args.seed,
        quick=args.quick,
        tol_scale=args.tol_scale,
        threads=args.threads,
    )
    results = verify.run_all(cfg)
    print(json.dumps(verify.report_dict(cfg, results), indent=2))
    return 0 if all(r.passed for r in results) else 1


# --------------------------------------------------------------------------
# parser assembly and config handling


def _add_common(sp, beta_default=0.5):
    sp.add_argument("--beta", type=float, default=beta_default)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--output", choices=("csv", "json"), default="csv")
    sp.add_argument("--config", default=None, help="key=value defaults file")


def _add_forcing(sp):
    sp.add_argument("--g", required=True, help="const:c | pow:a[:c] | cos | table:path")
    sp.add_argument("--env-M", dest="env_M", type=float, default=None)
    sp.add_argument("--env-alpha", dest="env_alpha", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cenfrac",
        description="Censored fractional derivative: solvers and Monte Carlo checks",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derivative", help="evaluate censored/R-L derivatives")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--monomial", type=float, default=None)
    group.add_argument("--constant", type=float, default=None)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=cmd_derivative)

    p = sub.add_parser("solve", help="solve D u = g(x)")
    _add_forcing(p)
    p.add_argument("--u0", type=float, default=0.0)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("eigen", help="solve D u = lambda u")
    p.add_argument("--lam", "--lambda", dest="lam", type=float, required=True)
    p.add_argument("--u0", type=float, default=1.0)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("nonlinear", help="solve D u = f(x, u) on [0, T1]")
    p.add_argument("--f", required=True, help="linear:lam | const:c | pow:a[:c] | cos")
    p.add_argument("--env-M", dest="env_M", type=float, default=None)
    p.add_argument("--env-alpha", dest="env_alpha", type=float, default=None)
    p.add_argument("--u0", type=float, default=0.0)
    p.add_argument("--Y", type=float, default=1.0)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=8)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=80)
    _add_common(p)
    p.set_defaults(func=cmd_nonlinear)

    p = sub.add_parser("lifetime", help="Rao-Blackwellized mean lifetime")
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--depth", type=int, default=60)
    _add_common(p)
    p.set_defaults(func=cmd_lifetime)

    p = sub.add_parser("simulate", help="censored-path mean lifetime")
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--n", type=int, default=20_000)
    p.add_argument("--max-steps", dest="max_steps", type=int,
                   default=stochastic.paths.DEFAULT_MAX_STEPS)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fk", help="Feynman-Kac estimate of the linear solve")
    _add_forcing(p)
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--n", type=int, default=10_000)
    _add_common(p)
    p.set_defaults(func=cmd_fk)

    p = sub.add_parser("compare-caputo", help="censored vs Caputo solution")
    _add_forcing(p)
    p.add_argument("--u0", type=float, default=0.0)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=cmd_compare_caputo)

    p = sub.add_parser("verify", help="run the full identity suite")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--quick", action="store_true")
    p.add_argument("--tol-scale", dest="tol_scale", type=float, default=1.0)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--output", choices=("csv", "json"), default="json")
    p.add_argument("--config", default=None)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    return parser


def _load_config(path: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    try:
        with open(path) as fh:
            for line_no, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{line_no}: expected key=value")
                key, value = line.split("=", 1)
                entries[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return entries


def _apply_config(args, argv: list[str]) -> None:
    if not getattr(args, "config", None):
        return
    entries = _load_config(args.config)
    passed = {
        tok.split("=", 1)[0].lstrip("-").replace("-", "_")
        for tok in argv
        if tok.startswith("--")
    }
    converters = {
        "beta": float, "seed": int, "tol": float, "threads": int, "output": str,
        "T": float, "grid": int, "u0": float, "Y": float, "x": float,
        "n": int, "depth": int, "h": float, "threshold": float,
        "max_steps": int, "max_iters": int, "lam": float, "g": str, "f": str,
        "env_M": float, "env_alpha": float, "monomial": float, "constant": float,
        "tol_scale": float,
    }
    for key, raw in entries.items():
        if key in passed:
            continue  # flags win
        if not hasattr(args, key):
            raise UsageError(f"config key {key!r} unknown for this command")
        conv = converters.get(key, str)
        try:
            setattr(args, key, conv(raw))
        except ValueError as exc:
            raise UsageError(f"config key {key!r}: {exc}") from exc


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, argv)
        return args.func(args)
    except UsageError as exc:
        print(f"ERROR[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except CenfracError as exc:
        print(f"ERROR[{exc.code}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
