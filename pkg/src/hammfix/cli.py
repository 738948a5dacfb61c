"""Command-line front end.

Subcommands: coeffs, solve, scan, verify, gibbs-check.  Reports are JSON
(17 significant digits) or CSV (12 significant digits); identical inputs
produce byte-identical output.  Exit status: 0 all gates pass, 1 usage or
configuration error, 2 verification failure, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

import numpy as np

from .fixpoints import (
    classify_regime,
    fixed_functions,
    rk_fixed_function,
    scan_phase,
)
from .gibbs import (
    DiscretizedSpin,
    EnumerationBudgetError,
    ModelSpec,
    hammerstein_residual,
    marginal_compatibility,
    rk_residual,
)
from .kernels import make_paper_kernel
from .polyroots import classify_discriminant
from .reduction import build_quartic, coefficients_closed_form, coefficients_quadrature

__all__ = ["main", "build_parser"]

_DEFAULTS = {
    "quad_tol": 1e-10,
    "root_tol": 1e-12,
    "residual_tol": 1e-6,
    "format": "json",
    "k": 3,
    "n": 1,
    "m": 24,
    "root_branching": None,
    "jbeta": 1.0,
    "b_min": 1.0,
    "b_max": 1.0,
    "b_steps": 1,
}

_SCAN_CSV_COLUMNS = (
    "a",
    "b",
    "threshold",
    "regime",
    "count",
    "xi1",
    "xi2",
    "xi3",
    "max_residual",
)


class UsageError(Exception):
    pass


def _json_dumps(obj, sig: int = 17) -> str:
    """Deterministic JSON with floats at a fixed number of significant digits."""

    def render(x, depth):
        pad = "  " * depth
        inner = "  " * (depth + 1)
        if isinstance(x, dict):
            if not x:
                return "{}"
            items = [f'{inner}"{key}": {render(val, depth + 1)}' for key, val in x.items()]
            return "{\n" + ",\n".join(items) + "\n" + pad + "}"
        if isinstance(x, (list, tuple)):
            if not x:
                return "[]"
            items = [f"{inner}{render(val, depth + 1)}" for val in x]
            return "[\n" + ",\n".join(items) + "\n" + pad + "]"
        if isinstance(x, (bool, np.bool_)):
            return "true" if x else "false"
        if x is None:
            return "null"
        if isinstance(x, (int, np.integer)):
            return str(int(x))
        if isinstance(x, (float, np.floating)):
            x = float(x)
            if not np.isfinite(x):
                return "null"
            return f"{x:.{sig}g}"
        return json.dumps(str(x))

    return render(obj, 0) + "\n"


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _scan_csv(rows) -> str:
    lines = [",".join(_SCAN_CSV_COLUMNS)]
    for row in rows:
        d = row.to_json_dict()
        lines.append(",".join(_csv_cell(d[c]) for c in _SCAN_CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _flat_csv(obj, prefix="") -> List[str]:
    lines = []
    if isinstance(obj, dict):
        for key, val in obj.items():
            lines.extend(_flat_csv(val, f"{prefix}{key}."))
    elif isinstance(obj, (list, tuple)):
        for i, val in enumerate(obj):
            lines.extend(_flat_csv(val, f"{prefix}{i}."))
    else:
        lines.append(f"{prefix[:-1]},{_csv_cell(obj)}")
    return lines


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_config(path: str) -> dict:
    cfg = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"config {path}:{lineno}: expected 'key = value'")
                key, value = (part.strip() for part in line.split("=", 1))
                cfg[key.replace("-", "_")] = value
    except OSError as exc:
        raise UsageError(f"unreadable config file {path}: {exc}") from exc
    return cfg


def _coerce(key: str, value: str):
    if key in ("format", "regime"):
        return value
    if key in ("k", "n", "m", "root_branching", "a_steps", "b_steps"):
        return int(value)
    return float(value)


def _resolve(args: argparse.Namespace, keys) -> dict:
    """Merge CLI flags over config-file values over built-in defaults."""
    cfg = _read_config(args.config) if getattr(args, "config", None) else {}
    resolved = {}
    for key in keys:
        flag_val = getattr(args, key, None)
        if flag_val is not None:
            resolved[key] = flag_val
        elif key in cfg:
            try:
                resolved[key] = _coerce(key, cfg[key])
            except ValueError as exc:
                raise UsageError(f"config value for {key!r}: {exc}") from exc
        else:
            resolved[key] = _DEFAULTS.get(key)
    return resolved


def _require_params(args, cfg_keys=("a", "b"), positive=True):
    opts = _resolve(args, ("a", "b", "quad_tol", "root_tol", "residual_tol", "format"))
    for key in ("a", "b"):
        pos = getattr(args, f"{key}_pos", None)
        if pos is not None and getattr(args, key, None) is None:
            opts[key] = pos
    a, b = opts.get("a"), opts.get("b")
    if a is None or b is None:
        raise UsageError("kernel parameters a and b are required")
    if positive and (a <= 0.0 or b <= 0.0):
        raise UsageError(f"kernel parameters must be positive, got a={a}, b={b}")
    for key in ("quad_tol", "root_tol", "residual_tol"):
        if not opts[key] > 0.0:
            raise UsageError(f"{key} must be positive")
    return opts


def _descriptor_report(spec, descs, residual_tol, quad_tol, full=False):
    entries = []
    all_pass = True
    for desc in descs:
        entry = desc.to_json_dict()
        if full:
            h_res = hammerstein_residual(spec, desc.f, k=3, tol=1e-8)
            r_res = rk_residual(spec, rk_fixed_function(desc), k=3, tol=1e-8)
            entry["hammerstein_residual"] = h_res
            entry["rk_residual"] = r_res
            ok = (
                desc.cubic_residual < residual_tol
                and h_res < residual_tol
                and r_res < residual_tol
            )
        else:
            ok = desc.cubic_residual < residual_tol
        entry["pass"] = ok
        all_pass &= ok
        entries.append(entry)
    return entries, all_pass


def _cmd_coeffs(args) -> int:
    opts = _require_params(args, positive=False)
    a, b = opts["a"], opts["b"]
    if a < 0.0 or b < 0.0 or (a == 0.0 and b == 0.0):
        raise UsageError(f"invalid kernel parameters a={a}, b={b}")
    closed = coefficients_closed_form(a, b)
    quad = coefficients_quadrature(make_paper_kernel(a, b), tol=opts["quad_tol"])
    discrepancy = max(
        abs(closed.entries()[name] - quad.entries()[name]) for name in closed.entries()
    )
    quartic = build_quartic(quad)
    general_linear = quad.a11 - 3.0 * quad.b12
    a_row_linear = quad.a11 - 3.0 * quad.a12
    report = {
        "command": "coeffs",
        "kernel": {"family": "paper", "a": a, "b": b},
        "closed_form": closed.to_json_dict(),
        "quadrature": quad.to_json_dict(),
        "max_discrepancy": discrepancy,
        "quartic": quartic.to_json_dict(),
        "linear_coefficient": {
            "general": general_linear,
            "a_row_only": a_row_linear,
            "difference": general_linear - a_row_linear,
        },
    }
    text = _json_dumps(report) if opts["format"] == "json" else "\n".join(_flat_csv(report)) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_solve(args) -> int:
    opts = _require_params(args)
    a, b = opts["a"], opts["b"]
    spec = make_paper_kernel(a, b)
    regime = classify_regime(a, b)
    descs = fixed_functions(spec, tol=opts["quad_tol"], root_tol=opts["root_tol"])
    entries, all_pass = _descriptor_report(spec, descs, opts["residual_tol"], opts["quad_tol"])
    report = {
        "command": "solve",
        "kernel": {"family": "paper", "a": a, "b": b},
        "regime": regime.to_json_dict(),
        "count": len(descs),
        "residual_tol": opts["residual_tol"],
        "fixed_points": entries,
        "passed": all_pass,
    }
    text = _json_dumps(report) if opts["format"] == "json" else "\n".join(_flat_csv(report)) + "\n"
    _emit(text, args.out)
    return 0 if all_pass else 2


def _cmd_verify(args) -> int:
    if getattr(args, "report", None):
        return _verify_from_report(args)
    opts = _require_params(args)
    a, b = opts["a"], opts["b"]
    spec = make_paper_kernel(a, b)
    regime = classify_regime(a, b)
    descs = fixed_functions(spec, tol=opts["quad_tol"], root_tol=opts["root_tol"])
    entries, all_pass = _descriptor_report(
        spec, descs, opts["residual_tol"], opts["quad_tol"], full=True
    )
    report = {
        "command": "verify",
        "kernel": {"family": "paper", "a": a, "b": b},
        "regime": regime.to_json_dict(),
        "count": len(descs),
        "residual_tol": opts["residual_tol"],
        "fixed_points": entries,
        "passed": all_pass,
    }
    text = _json_dumps(report) if opts["format"] == "json" else "\n".join(_flat_csv(report)) + "\n"
    _emit(text, args.out)
    return 0 if all_pass else 2


def _verify_from_report(args) -> int:
    try:
        with open(args.report) as fh:
            stored = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"unreadable report {args.report}: {exc}") from exc
    tol = args.residual_tol if args.residual_tol is not None else stored.get(
        "residual_tol", _DEFAULTS["residual_tol"]
    )
    entries = []
    all_pass = True
    for entry in stored.get("fixed_points", []):
        residuals = [
            entry.get(key)
            for key in ("cubic_residual", "hammerstein_residual", "rk_residual")
            if entry.get(key) is not None
        ]
        ok = bool(residuals) and all(res < tol for res in residuals)
        all_pass &= ok
        entries.append({"xi0": entry.get("xi0"), "pass": ok})
    report = {
        "command": "verify",
        "source_report": args.report,
        "residual_tol": tol,
        "fixed_points": entries,
        "passed": all_pass,
    }
    _emit(_json_dumps(report), args.out)
    return 0 if all_pass else 2


def _cmd_scan(args) -> int:
    opts = _resolve(
        args,
        (
            "a_min",
            "a_max",
            "a_steps",
            "b_min",
            "b_max",
            "b_steps",
            "quad_tol",
            "root_tol",
            "format",
        ),
    )
    for key in ("a_min", "a_max", "a_steps"):
        if opts[key] is None:
            raise UsageError(f"scan requires --{key.replace('_', '-')}")
    rows = scan_phase(
        (opts["a_min"], opts["a_max"]),
        (opts["b_min"], opts["b_max"]),
        int(opts["a_steps"]),
        int(opts["b_steps"]),
        tol=opts["quad_tol"],
        root_tol=opts["root_tol"],
    )
    if opts["format"] == "csv":
        text = _scan_csv(rows)
    else:
        text = _json_dumps({"command": "scan", "rows": [r.to_json_dict() for r in rows]})
    _emit(text, args.out)
    if args.plot:
        from .plots import render_phase_figure

        render_phase_figure(rows, args.plot)
    return 0 if all(not r.flagged for r in rows) else 2


def _cmd_gibbs_check(args) -> int:
    opts = _require_params(args)
    gibbs_opts = _resolve(args, ("k", "n", "m", "root_branching", "jbeta"))
    a, b = opts["a"], opts["b"]
    spec = make_paper_kernel(a, b)
    model = ModelSpec(
        kernel=spec,
        k=int(gibbs_opts["k"]),
        jbeta=gibbs_opts["jbeta"],
        root_branching=gibbs_opts["root_branching"],
    )
    spin = DiscretizedSpin.gauss(int(gibbs_opts["m"]))
    descs = fixed_functions(spec, tol=opts["quad_tol"], root_tol=opts["root_tol"])
    checks = []
    all_pass = True
    for desc in descs:
        rep = marginal_compatibility(model, spin, desc.f, n=int(gibbs_opts["n"]))
        ok = (
            rep.marginal_discrepancy < opts["residual_tol"]
            and rep.eq5_residual < opts["residual_tol"]
        )
        all_pass &= ok
        entry = {"xi0": desc.xi0}
        entry.update(rep.to_json_dict())
        entry["pass"] = ok
        checks.append(entry)
    report = {
        "command": "gibbs-check",
        "kernel": {"family": "paper", "a": a, "b": b},
        "residual_tol": opts["residual_tol"],
        "checks": checks,
        "passed": all_pass,
    }
    _emit(_json_dumps(report), args.out)
    return 0 if all_pass else 2


def _add_common(parser, with_params=True):
    if with_params:
        parser.add_argument("a_pos", nargs="?", type=float, metavar="a", default=None)
        parser.add_argument("b_pos", nargs="?", type=float, metavar="b", default=None)
        parser.add_argument("--a", type=float, default=None)
        parser.add_argument("--b", type=float, default=None)
    parser.add_argument("--quad-tol", dest="quad_tol", type=float, default=None)
    parser.add_argument("--root-tol", dest="root_tol", type=float, default=None)
    parser.add_argument("--residual-tol", dest="residual_tol", type=float, default=None)
    parser.add_argument("--format", choices=("json", "csv"), default=None)
    parser.add_argument("--out", default=None)
    parser.add_argument("--config", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hammfix",
        description="Positive fixed points of rank-2 degenerate kernel operators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="coefficient tableaux and the ratio quartic")
    _add_common(p)
    p.set_defaults(fn=_cmd_coeffs)

    p = sub.add_parser("solve", help="classify the regime and list fixed points")
    _add_common(p)
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("verify", help="residual report for every fixed point")
    _add_common(p)
    p.add_argument("--report", default=None, help="re-check verdicts from a stored JSON report")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("scan", help="phase scan over a parameter grid")
    _add_common(p, with_params=False)
    p.add_argument("--a-min", dest="a_min", type=float, default=None)
    p.add_argument("--a-max", dest="a_max", type=float, default=None)
    p.add_argument("--a-steps", dest="a_steps", type=int, default=None)
    p.add_argument("--b-min", dest="b_min", type=float, default=None)
    p.add_argument("--b-max", dest="b_max", type=float, default=None)
    p.add_argument("--b-steps", dest="b_steps", type=int, default=None)
    p.add_argument("--plot", default=None, help="also render a phase figure to this path")
    p.set_defaults(fn=_cmd_scan)

    p = sub.add_parser("gibbs-check", help="finite-tree compatibility check per fixed point")
    _add_common(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--root-branching", dest="root_branching", type=int, default=None)
    p.add_argument("--jbeta", type=float, default=None)
    p.set_defaults(fn=_cmd_gibbs_check)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EnumerationBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
