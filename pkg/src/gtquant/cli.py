"""Command-line entry point: ``gtquant verify | spectrum | info``.

Exit codes: 0 success, 1 a verification suite failed, 2 bad configuration
or unsupported request.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from . import algebra as alg
from ._io import atomic_write
from .hilbert import BoxGridSpec, GridSpec
from .operators import HeisenbergRepConfig, RepConfig, ShiftMode, pi1_spectrum_table
from .verify import SUITES, SuiteConfig, reports_to_json, run_all

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

OPERATORS = ("pi1",)

_TOP_KEYS = {"seed", "trials", "tolerances", "grid", "rep", "heis"}
_GRID_KEYS = {"n_phi", "n_s", "s_min", "s_max"}
_REP_KEYS = {"hbar", "alpha", "shift_mode"}
_HEIS_KEYS = {"mu", "n", "box_half_width"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CliConfig:
    suite: SuiteConfig = field(default_factory=SuiteConfig)
    json_path: Optional[str] = None
    suites: Optional[tuple] = None
    workers: int = 1


def _check_keys(section: str, data, allowed: set) -> dict:
    if not isinstance(data, dict):
        raise ConfigError(f"config section {section!r} must be an object")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {section}: {', '.join(unknown)}")
    return data


def _int(name, v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{name} must be an integer, got {v!r}")
    return v


def _real(name, v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{name} must be a finite number, got {v!r}")
    return float(v)


def suite_config_from_dict(data: dict) -> SuiteConfig:
    """Build a :class:`SuiteConfig` from parsed JSON, rejecting unknown keys."""
    data = _check_keys("config", data, _TOP_KEYS)
    base = SuiteConfig()
    try:
        grid = base.grid
        if "grid" in data:
            g = _check_keys("grid", data["grid"], _GRID_KEYS)
            grid = GridSpec(
                n_phi=_int("grid.n_phi", g.get("n_phi", grid.n_phi)),
                n_s=_int("grid.n_s", g.get("n_s", grid.n_s)),
                s_min=_real("grid.s_min", g.get("s_min", grid.s_min)),
                s_max=_real("grid.s_max", g.get("s_max", grid.s_max)),
            )
        rep = base.rep
        if "rep" in data:
            r = _check_keys("rep", data["rep"], _REP_KEYS)
            rep = RepConfig(
                hbar=_real("rep.hbar", r.get("hbar", rep.hbar)),
                alpha=_real("rep.alpha", r.get("alpha", rep.alpha)),
                shift_mode=ShiftMode(r.get("shift_mode", rep.shift_mode.value)),
            )
        heis = base.heis
        h = _check_keys("heis", data.get("heis", {}), _HEIS_KEYS)
        # the plane representation follows the punctured one's shift mode
        heis = HeisenbergRepConfig(
            mu=_real("heis.mu", h.get("mu", heis.mu)),
            box=BoxGridSpec(
                n=_int("heis.n", h.get("n", heis.box.n)),
                half_width=_real("heis.box_half_width", h.get("box_half_width", heis.box.half_width)),
            ),
            shift_mode=rep.shift_mode,
        )
        tolerances = data.get("tolerances", {})
        if not isinstance(tolerances, dict):
            raise ConfigError("tolerances must be an object")
        tolerances = {k: _real(f"tolerances.{k}", v) for k, v in tolerances.items()}
        return SuiteConfig(
            seed=_int("seed", data.get("seed", base.seed)),
            trials=_int("trials", data.get("trials", base.trials)),
            tolerances=tolerances,
            grid=grid,
            rep=rep,
            heis=heis,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str) -> SuiteConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return suite_config_from_dict(data)


def resolve_verify_config(args: argparse.Namespace) -> CliConfig:
    """File config first, then command-line flags on top."""
    cfg = load_config(args.config) if args.config else SuiteConfig()
    try:
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        if args.trials is not None:
            cfg = replace(cfg, trials=args.trials)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    suites = None
    if args.suite:
        unknown = [s for s in args.suite if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")
        suites = tuple(args.suite)
    if args.workers < 1:
        raise ConfigError("--workers must be >= 1")
    return CliConfig(cfg, args.json, suites, args.workers)


def summary_table(reports) -> str:
    lines = [f"{'suite':<24}{'trials':>8}{'max_residual':>15}{'tolerance':>12}  result"]
    for r in reports:
        lines.append(
            f"{r.suite:<24}{r.trials:>8}{r.max_residual:>15.3e}{r.tolerance:>12.1e}  "
            f"{'PASS' if r.passed else 'FAIL'}"
        )
    return "\n".join(lines)


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        cli = resolve_verify_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run_all(cli.suite, cli.suites, workers=cli.workers)
    except ValueError as exc:
        # e.g. a grid too coarse to host the band-limited test states
        print(f"error: configuration cannot be run: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cli.json_path:
        try:
            with atomic_write(cli.json_path) as fh:
                fh.write(reports_to_json(result.reports))
        except OSError as exc:
            print(f"error: cannot write {cli.json_path}: {exc.strerror}", file=sys.stderr)
            return EXIT_CONFIG
    print(summary_table(result.reports))
    print(f"{'all passed' if result.passed else 'FAILED'} in {result.runtime:.2f} s")
    return EXIT_OK if result.passed else EXIT_FAILED


def write_spectrum_csv(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "eigenvalue"])
    for n, ev in rows:
        # 12 decimals: the table is exact to 1e-12, so roundoff digits are dropped
        w.writerow([n, f"{round(float(ev), 12) + 0.0:.12g}"])


def cmd_spectrum(args: argparse.Namespace) -> int:
    if args.operator not in OPERATORS:
        print(f"error: unsupported operator {args.operator!r}; supported: {', '.join(OPERATORS)}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rep = RepConfig(hbar=args.hbar, alpha=args.alpha)
        grid = GridSpec(n_phi=args.nphi, n_s=4)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    rows = pi1_spectrum_table(rep, grid)
    if args.csv:
        try:
            with atomic_write(args.csv, newline="") as fh:
                write_spectrum_csv(rows, fh)
        except OSError as exc:
            print(f"error: cannot write {args.csv}: {exc.strerror}", file=sys.stderr)
            return EXIT_CONFIG
    else:
        write_spectrum_csv(rows, sys.stdout)
    return EXIT_OK


_BASIS = (("e1", (1, 0, 0, 0)), ("e2", (0, 1, 0, 0)), ("e_theta", (0, 0, 1, 0)), ("e_r", (0, 0, 0, 1)))


def _format_element(v) -> str:
    terms = []
    for (name, _), c in zip(_BASIS, v):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c):g} "
        terms.append(f"{sign} {mag}{name}")
    if not terms:
        return "0"
    text = " ".join(terms)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def info_text() -> str:
    elems = [(n, alg.AlgebraElement(*map(float, v))) for n, v in _BASIS]
    width = max(len(n) for n, _ in elems) + 2
    header = "[row, col]".ljust(10) + "".join(n.rjust(width + 4) for n, _ in elems)
    rows = [header]
    for na, a in elems:
        cells = "".join(_format_element(alg.bracket(a, b).as_array()).rjust(width + 4) for _, b in elems)
        rows.append(na.ljust(10) + cells)
    return "\n".join(
        [
            "Canonical group G = R^2 x| (SO(2) x R+), elements g = (u, theta, lam)",
            "  product   (u, th, l)(u', th', l') = (u + l^-1 A_th u', th + th', l l')",
            "  inverse   (u, th, l)^-1 = (-l A_-th u, -th, 1/l)",
            "  action    g.(x, p) = (l A_th x, l^-1 A_th p - u) on (R^2 - {0}) x R^2",
            "  cover     R^2 x| (R x R+): same law, theta not reduced mod 2 pi",
            "",
            "Lie algebra basis e1, e2 (translations), e_theta (rotation), e_r (dilation)",
            *rows,
            "",
            "Momentum map  P_(b1,b2,theta,r)(x, p) = r x.p + b.x + theta (x p_y - y p_x)",
            "",
            "Generator -> operator dictionary on L^2(dphi ds / 2pi), s = ln rho",
            "  e1      -> c   = e^s cos(phi)",
            "  e2      -> s   = e^s sin(phi)",
            "  e_theta -> pi1 = -i hbar d/dphi + hbar alpha",
            "  e_r     -> pi2 = -i hbar d/ds",
            "  K_A = b1 c + b2 s + theta pi1 + r pi2,  -(i/hbar)[K_A, K_B] = K_[A,B]",
            "",
            "Plane case: Heisenberg group, (u,v,t)(u',v',t') = (u+u', v+v', t+t' + (u'.v - u.v')/2)",
            "  x_i -> x_i,  p_i -> -i mu d/dx_i,  z -> mu",
        ]
    )


def cmd_info(args: argparse.Namespace) -> int:
    print(info_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gtquant", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", action="append", metavar="NAME", help=f"suite to run (repeatable): {', '.join(SUITES)}")
    v.add_argument("--config", metavar="PATH", help="JSON config file")
    v.add_argument("--seed", type=int)
    v.add_argument("--trials", type=int)
    v.add_argument("--workers", type=int, default=1, help="run suites on this many threads")
    v.add_argument("--json", metavar="PATH", help="write the report array here")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("spectrum", help="eigenvalue table of an operator")
    s.add_argument("--operator", required=True)
    s.add_argument("--alpha", type=float, default=0.0)
    s.add_argument("--hbar", type=float, default=1.0)
    s.add_argument("--nphi", type=int, default=256)
    s.add_argument("--csv", metavar="PATH", help="output CSV (default: stdout)")
    s.set_defaults(func=cmd_spectrum)

    i = sub.add_parser("info", help="print the group law, bracket table and operator dictionary")
    i.set_defaults(func=cmd_info)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
