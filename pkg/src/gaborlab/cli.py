"""Command-line front end.

Exit codes: 0 success, 1 other library error, 2 bad input (parse error,
bad range, unknown family, non-positive parameter, grid too coarse),
3 singular generator, 4 unsupported dimension, 5 relation check failed.
JSON and CSV payloads go to stdout (or ``--out``); diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import certificates as cert
from .classifier import AnalysisConfig, classify, phase_csv, phase_diagram
from .errors import (
    GaborLabError,
    GridTooCoarse,
    NonPositive,
    ParseError,
    SingularGenerator,
    UnknownFamily,
    UnsupportedDimension,
)
from .exact import format_rational, parse_rational
from .families import build_family, get_family, read_lattice
from .lattice import detect_product_form, maximal_product_sublattice

EXIT_INPUT = 2
EXIT_SINGULAR = 3
EXIT_DIMENSION = 4
EXIT_CHECK_FAILED = 5

PARAM_FLAGS = ("a", "b", "c", "k")

CONFIG_KEYS = {
    "index_bound": int,
    "numeric_fallback": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "radius": float,
    "h": float,
    "T": float,
    "tol": float,
    "max_iter": int,
    "zak_resolution": int,
}


class UsageError(GaborLabError, ValueError):
    pass


def _emit(payload: dict, out: str | None = None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def read_config(path: str | None) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    if not path:
        return {}
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{n}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ParseError(f"{path}:{n}: unknown key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](val)
        except ValueError:
            raise ParseError(f"{path}:{n}: bad value for {key}: {val!r}") from None
    return out


def _config(args) -> AnalysisConfig:
    values = read_config(getattr(args, "config", None))
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None and v is not False:
            values[key] = v
    return AnalysisConfig(**values)


def _family_values(args) -> dict:
    fam = get_family(args.family)
    values = {}
    for p in PARAM_FLAGS:
        v = getattr(args, p, None)
        if v is None:
            continue
        if p not in fam.params:
            raise UsageError(f"family {fam.name!r} does not take --{p}")
        values[p] = v
    return values


def _lattice(args):
    if args.family and args.matrix:
        raise UsageError("give either --family or --matrix, not both")
    if args.matrix:
        return read_lattice(args.matrix), {"matrix": str(args.matrix)}
    if not args.family:
        raise UsageError("a lattice is required: --family NAME or --matrix FILE")
    values = _family_values(args)
    lattice = build_family(args.family, values)
    params = {"family": args.family}
    params.update({k: format_rational(parse_rational(v)) for k, v in values.items()})
    return lattice, params


def parse_range(text: str, step: Fraction | None) -> list[Fraction]:
    """``"start:stop"`` (inclusive, needs a step) or a single value."""
    if ":" not in text:
        return [parse_rational(text)]
    lo, hi = (parse_rational(s) for s in text.split(":", 1))
    if step is None or step <= 0:
        raise UsageError("ranges need a positive --step")
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    n = int((hi - lo) / step)
    return [lo + j * step for j in range(n + 1)]


# -- commands --------------------------------------------------------------


def cmd_density(args) -> int:
    lattice, params = _lattice(args)
    d = lattice.density
    _emit({"schema": 1, "density": format_rational(d), "approx": float(d), "params": params})
    return 0


def cmd_classify(args) -> int:
    lattice, params = _lattice(args)
    verdict = classify(lattice, _config(args), params)
    _emit(verdict.to_json(), args.out)
    return 0


def cmd_certify(args) -> int:
    lattice, params = _lattice(args)
    bound = _config(args).index_bound
    pf = detect_product_form(lattice)
    k = maximal_product_sublattice(lattice)
    found = {
        "incompleteness": cert.search_incompleteness_certificate(lattice, bound),
        "frame_sublattice": cert.certify_frame_by_sublattice(lattice, bound),
        "critical_cosets": cert.certify_complete_not_frame(lattice),
    }
    payload = {
        "schema": 1,
        "params": params,
        "density": format_rational(lattice.density),
        "product_form": None if pf is None else
        [[[format_rational(x) for x in row] for row in b] for b in pf.blocks],
        "maximal_product_blocks": [[[format_rational(x) for x in row] for row in b] for b in k.blocks],
        "certificates": {name: (c.to_json() if c is not None else None) for name, c in found.items()},
    }
    _emit(payload, args.out)
    return 0


def cmd_zak_scan(args) -> int:
    from .numerics.signals import GaussianWindow
    from .numerics.zak import write_scan_csv, zak_min_scan

    scan = zak_min_scan(GaussianWindow(args.d), args.m, args.offset)
    if args.out:
        write_scan_csv(scan, args.out)
    _emit({
        "schema": 1, "d": args.d, "m": args.m, "offset": args.offset,
        "min_modulus": scan.min_modulus, "argmin": list(scan.argmin),
        "A": scan.min_modulus ** 2, "B": scan.max_modulus ** 2,
    })
    return 0


def cmd_bounds(args) -> int:
    from .numerics.frames import frame_bounds_estimate, two_scale_test
    from .numerics.signals import GaussianWindow, default_grid

    lattice, params = _lattice(args)
    cfg = _config(args)
    g = GaussianWindow(lattice.dim)
    dh, dT = default_grid(lattice.dim)
    h = cfg.h if cfg.h is not None else dh
    T = cfg.T if cfg.T is not None else dT
    R = cfg.radius if cfg.radius is not None else min(8.0, 1 / (2 * h))
    kw = dict(tol=cfg.tol, max_iter=cfg.max_iter)
    if args.two_scale:
        res = two_scale_test(g, lattice, R, h, T, **kw)
        payload = dict(res.to_json(), schema=1, params=params)
    else:
        est = frame_bounds_estimate(g, lattice, R, h, T, **kw)
        payload = dict(est.to_json(), schema=1, params=params)
        if not est.converged:
            print(f"gaborlab: warning: iteration did not converge (residual {est.residual:.3g})",
                  file=sys.stderr)
    _emit(payload, args.out)
    return 0


def cmd_sweep(args) -> int:
    fam = get_family(args.family)
    step = parse_rational(args.step) if args.step is not None else None
    grid = {}
    for p in fam.params:
        text = getattr(args, p, None)
        if text is None:
            raise UsageError(f"sweep over {fam.name!r} needs --{p}")
        grid[p] = parse_range(text, step)
    cells = phase_diagram(args.family, grid, _config(args))
    text = phase_csv(cells)
    if args.out:
        Path(args.out).write_text(text)
        print(f"gaborlab: wrote {len(cells)} rows to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def cmd_relation_check(args) -> int:
    from .numerics.checks import relation_checks

    results = relation_checks(args.d, args.h, args.T)
    for r in results:
        status = "info" if r.informational else ("pass" if r.passed else "FAIL")
        err = "n/a" if r.error is None else f"{r.error:.3e}"
        print(f"{status:4s} {r.name:38s} error={err} tol={r.tolerance:.0e} {r.note}", file=sys.stderr)
    ok = all(r.ok for r in results)
    _emit({"schema": 1, "d": args.d, "passed": ok, "checks": [r.to_json() for r in results]})
    return 0 if ok else EXIT_CHECK_FAILED


# -- parser ----------------------------------------------------------------


def _add_lattice(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="sep1d, sep2d, sep3d, skew, cor6 or threed")
    for name in PARAM_FLAGS:
        p.add_argument(f"--{name}", help=f"family parameter {name} (rational literal)")
    p.add_argument("--matrix", help="lattice file: d, then 2d rows of 2d rationals")


def _add_config(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file overriding analysis defaults")
    p.add_argument("--index-bound", dest="index_bound", type=int)
    p.add_argument("--numeric", dest="numeric_fallback", action="store_true",
                   help="enable the numeric frame bound fallback")
    p.add_argument("--radius", type=float, help="truncation radius R")
    p.add_argument("--h", type=float, help="grid step")
    p.add_argument("--T", type=float, help="support radius")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaborlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="exact density of a lattice")
    _add_lattice(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("classify", help="classify (g, L) with an evidence chain")
    _add_lattice(p)
    _add_config(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("certify", help="search algebraic certificates")
    _add_lattice(p)
    p.add_argument("--config")
    p.add_argument("--index-bound", dest="index_bound", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("zak-scan", help="scan |Z g_d| on a uniform grid")
    p.add_argument("--d", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--m", type=int, default=64)
    p.add_argument("--offset", type=float, default=0.0)
    p.add_argument("--out", help="CSV of the scanned values")
    p.set_defaults(func=cmd_zak_scan)

    p = sub.add_parser("bounds", help="numerical frame bound estimates")
    _add_lattice(p)
    _add_config(p)
    p.add_argument("--two-scale", action="store_true", help="also run at 2R and report the ratio")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", help="phase diagram of a family as CSV")
    p.add_argument("--family", required=True)
    for name in PARAM_FLAGS:
        p.add_argument(f"--{name}", help="value or start:stop range")
    p.add_argument("--step")
    p.add_argument("--config")
    p.add_argument("--index-bound", dest="index_bound", type=int)
    p.add_argument("--numeric", dest="numeric_fallback", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("relation-check", help="analytic cross-checks of the quadratures")
    p.add_argument("--d", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--h", type=float)
    p.add_argument("--T", type=float)
    p.set_defaults(func=cmd_relation_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SingularGenerator as exc:
        code, msg = EXIT_SINGULAR, exc
    except UnsupportedDimension as exc:
        code, msg = EXIT_DIMENSION, exc
    except (ParseError, UsageError, UnknownFamily, NonPositive, GridTooCoarse) as exc:
        code, msg = EXIT_INPUT, exc
    except OSError as exc:
        code, msg = EXIT_INPUT, exc
    except GaborLabError as exc:
        code, msg = 1, exc
    except ValueError as exc:
        code, msg = EXIT_INPUT, exc
    print(f"gaborlab: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
