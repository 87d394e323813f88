"""``octomaxwell`` command-line entry point.

Exit codes: 0 success, 1 a checked property failed, 2 usage, config or IO error.

Octonion literals accepted by ``mul``:

* ``e<k>`` for a basis unit, k in 0..7, optionally signed (``-e3``);
* eight comma-separated reals ``y0,y1,...,y7``.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .checks import run_all
from .config import ConfigError, load_config, residual_request, solver_config
from .fdtd import COMPONENT_ORDER, CFLError, run
from .octonion import DEFAULT_CONSTANTS, Octonion, format_octonion, mul
from .reports import dumps, duality_report, report_csv, residual_report
from .representation import kron_quat_image, pauli_image, pi, real_quat_image
from .scenarios import SCENARIOS

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SWEEP = (0.0, math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2, 1.0, 3.0, math.pi)
DEFAULT_N = {"potential-wave": 16, "zero": 16, "static-gauss": 16}
CONSEQUENCE_CHANNELS = ("continuity_e", "continuity_m", "dalembertian_y0")
MIN_ORDER = 1.9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on its own errors, which matches our convention
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# literal parsing


def parse_octonion(text: str) -> Octonion:
    """Parse ``e<k>`` / ``-e<k>`` or eight comma-separated reals.

    Errors name the 1-based character position of the offending token.
    """
    s = text.strip()
    body = s[1:] if s[:1] in "+-" else s
    if body.startswith("e") and "," not in s:
        digits = body[1:]
        if not digits.isdigit() or not 0 <= int(digits) <= 7:
            pos = s.index("e") + 2
            raise UsageError(f"bad basis literal {text!r} at position {pos}: expected e0..e7")
        y = np.zeros(8)
        y[int(digits)] = -1.0 if s.startswith("-") else 1.0
        return Octonion(y)
    parts = s.split(",")
    values = []
    pos = 1
    for part in parts:
        try:
            v = float(part)
        except ValueError:
            raise UsageError(f"bad number {part.strip()!r} at position {pos} of {text!r}") from None
        if not math.isfinite(v):
            raise UsageError(f"non-finite number {part.strip()!r} at position {pos} of {text!r}")
        values.append(v)
        pos += len(part) + 1
    if len(values) != 8:
        raise UsageError(f"expected 8 comma-separated reals, got {len(values)} in {text!r}")
    return Octonion(values)


def parse_triple(text: str) -> tuple[int, int, int]:
    if len(text) != 3 or not text.isdigit() or any(c not in "1234567" for c in text):
        raise UsageError(f"--corrupt expects three digits in 1..7, e.g. 123; got {text!r}")
    a, b, c = (int(ch) for ch in text)
    if len({a, b, c}) != 3:
        raise UsageError(f"--corrupt indices must be distinct, got {text!r}")
    return a, b, c


def parse_theta(text: str) -> float:
    """A real angle; ``pi`` and ``pi/k`` or ``k*pi`` are accepted for convenience."""
    t = text.strip().replace(" ", "")
    try:
        if "pi" in t:
            num, _, den = t.partition("/")
            coeff = num.replace("*pi", "").replace("pi", "") or "1"
            coeff = {"-": "-1", "+": "1"}.get(coeff, coeff)
            value = float(coeff) * math.pi / (float(den) if den else 1.0)
        else:
            value = float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid angle {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"invalid angle {text!r}")
    return value


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text!r}")
    return v


# ---------------------------------------------------------------------------
# output helpers


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)


def _matrix_table(m: np.ndarray, title: str) -> str:
    def cell(z) -> str:
        z = complex(z)
        re = 0.0 if z.real == 0 else z.real
        im = 0.0 if z.imag == 0 else z.imag
        if im == 0:
            return f"{re:g}"
        if re == 0:
            return f"{im:g}i"
        return f"{re:g}{im:+g}i"

    cells = [[cell(v) for v in row] for row in m]
    width = max(len(c) for row in cells for c in row)
    lines = [title]
    lines += ["  " + " ".join(c.rjust(width) for c in row) for row in cells]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_algebra_check(args) -> int:
    constants = DEFAULT_CONSTANTS
    corrupt = None
    if args.corrupt:
        triple = parse_triple(args.corrupt)
        constants = constants.flipped(*triple)
        corrupt = args.corrupt
    results = run_all(constants, seed=args.seed)
    passed = all(r.passed for r in results)
    if args.json:
        report = {
            "schema": "octomaxwell/algebra-check",
            "version": 1,
            "seed": args.seed,
            "corrupt": corrupt,
            "passed": passed,
            "checks": [r.as_dict() for r in results],
        }
        sys.stdout.write(dumps(report))
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            line = f"{status}  {r.name:<26} worst={r.worst_error:.17g} tol={r.tolerance:.17g}"
            print(line + (f"  ({r.detail})" if r.detail else ""))
        print("all properties pass" if passed else "property failure")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_mul(args) -> int:
    a, b = parse_octonion(args.a), parse_octonion(args.b)
    p = mul(a, b)
    text = format_octonion(p)
    if not args.json:
        print(text)
    else:
        report = {
            "schema": "octomaxwell/mul-result",
            "version": 1,
            "a": a.y.tolist(),
            "b": b.y.tolist(),
            "product": p.y.tolist(),
            "text": text,
        }
        sys.stdout.write(dumps(report))
    return EXIT_OK


def cmd_rep_show(args) -> int:
    k = args.index
    if not 0 <= k <= 7:
        raise UsageError(f"basis index must be 0..7, got {k}")
    e = np.zeros(8)
    e[k] = 1.0
    out = [_matrix_table(pi(Octonion(e)).m, f"pi(e{k})  (complex entries, i = e7)")]
    if k <= 3:
        out.append(_matrix_table(pauli_image(k), f"2x2 complex image of e{k}"))
        out.append(_matrix_table(real_quat_image(k), f"4x4 real image of e{k}"))
        same = np.array_equal(real_quat_image(k), kron_quat_image(k))
        out.append(f"tensor-product construction agrees: {'yes' if same else 'NO'}\n")
    else:
        out.append(f"e{k} lies outside the quaternion span; no real or 2x2 image\n")
    sys.stdout.write("\n".join(out))
    return EXIT_OK


def _request_from(args) -> dict:
    req = {"scenario": None, "params": {}, "n": None, "h": None, "refine": 0, "thetas": None}
    if getattr(args, "config", None):
        req.update({k: v for k, v in residual_request(load_config(args.config)).items() if v is not None})
    for key in ("scenario", "n", "h", "refine"):
        value = getattr(args, key, None)
        if value is not None:
            req[key] = value
    if req["scenario"] is None:
        req["scenario"] = args.default_scenario
    if req["scenario"] not in SCENARIOS:
        raise UsageError(f"unknown scenario {req['scenario']!r}; known: {', '.join(sorted(SCENARIOS))}")
    if req["n"] is None:
        req["n"] = DEFAULT_N.get(req["scenario"], 32)
    return req


def _build_residual_report(req: dict) -> dict:
    try:
        return residual_report(req["scenario"], req["n"], req["h"], req["refine"], **req["params"])
    except (TypeError, ValueError) as exc:
        raise UsageError(f"cannot build scenario {req['scenario']!r}: {exc}") from exc


def cmd_residual(args) -> int:
    req = _request_from(args)
    report = _build_residual_report(req)
    _emit(dumps(report) if args.json else report_csv(report), args.out)
    return EXIT_OK


def cmd_dalembert(args) -> int:
    req = _request_from(args)
    report = _build_residual_report(req)
    rows = [r for r in report["rows"] if r["residual_name"] in CONSEQUENCE_CHANNELS]
    if not rows:
        raise UsageError(f"scenario {req['scenario']!r} carries no Y field; use potential-wave")
    report = dict(report, rows=rows)
    _emit(dumps(report) if args.json else report_csv(report), args.out)
    orders = [r["convergence_order"] for r in rows if r["convergence_order"] is not None]
    ok = all(o >= MIN_ORDER for o in orders)
    print(f"consequence channels: {'converging' if ok else 'order below'} (min order {MIN_ORDER})", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_duality(args) -> int:
    req = _request_from(args)
    thetas = list(args.theta or [])
    if args.sweep or not thetas:
        thetas += [t for t in SWEEP if t not in thetas]
    elif req.get("thetas") and not args.theta:
        thetas = req["thetas"]
    try:
        report = duality_report(req["scenario"], req["n"], thetas, req["h"], tol=args.tol, **req["params"])
    except (TypeError, ValueError) as exc:
        raise UsageError(f"cannot build scenario {req['scenario']!r}: {exc}") from exc
    if args.json:
        _emit(dumps(report), args.out)
    else:
        lines = ["theta,invariance_rel_error,pair_rotation_rel_error,composition_error,mirror_field_gap,passed"]
        for e in report["entries"]:
            gap = e.get("mirror_field_gap")
            lines.append(
                ",".join(
                    [
                        f"{e['theta']:.17g}",
                        f"{e['invariance_rel_error']:.17g}",
                        f"{e['pair_rotation_rel_error']:.17g}",
                        f"{e['composition_error']:.17g}",
                        "" if gap is None else f"{gap:.17g}",
                        "true" if e["passed"] else "false",
                    ]
                )
            )
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_simulate(args) -> int:
    data = load_config(args.config)
    cfg = solver_config(data, steps=args.steps, allow_cfl_violation=args.allow_cfl_violation or None)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    result = run(cfg, out_dir=out)
    csv_path = out / "diagnostics.csv"
    csv_path.write_text(result.csv_text())
    e0 = result.rows[0].energy
    scale = abs(e0) if e0 != 0 else 1.0
    files = ["diagnostics.csv"]
    for m in result.snapshots:
        stem = f"snapshot_{m:06d}"
        files += [f"{stem}.json"] + [f"{stem}_{c}.bin" for c in COMPONENT_ORDER]
    summary = {
        "schema": "octomaxwell/simulate-summary",
        "version": 1,
        "scenario": cfg.scenario,
        "params": cfg.params,
        "n": list(cfg.n),
        "h": list(cfg.h),
        "dt": cfg.dt,
        "cfl_limit": cfg.cfl_limit,
        "steps": cfg.steps,
        "duality_theta": cfg.duality_theta,
        "energy_initial": e0,
        "energy_final": result.rows[-1].energy,
        "max_energy_drift": max(abs(r.energy - e0) for r in result.rows) / scale,
        "max_gauss_drift": result.max_gauss_drift,
        "max_duality_drift": max(r.duality_drift for r in result.rows),
        "snapshots": result.snapshots,
        "files": sorted(files) + ["summary.json"],
    }
    (out / "summary.json").write_text(dumps(summary))
    print(f"wrote {csv_path} ({len(result.rows)} rows) and {out / 'summary.json'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="octomaxwell",
        description="Octonion algebra, its matrix representation and the octonionic Maxwell equation.",
        epilog="Octonion literals: e<k> (k = 0..7, optional sign) or eight comma-separated reals.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("algebra-check", help="run the algebra property suites")
    s.add_argument("--json", action="store_true", help="machine-readable report")
    s.add_argument("--corrupt", metavar="ABC", help="test hook: flip the sign of f_ABC (e.g. 123)")
    s.add_argument("--seed", type=int, default=20240611, help="seed for the random-sample suites")
    s.set_defaults(func=cmd_algebra_check)

    s = sub.add_parser("mul", help="multiply two octonion literals")
    s.add_argument("a", help="left factor: e<k> or y0,...,y7")
    s.add_argument("b", help="right factor: e<k> or y0,...,y7")
    s.add_argument("--json", action="store_true", help="print a JSON record (includes the text form)")
    s.set_defaults(func=cmd_mul)

    for name in ("rep-show", "rep"):
        s = sub.add_parser(name, help="print the matrix images of a basis unit" if name == "rep-show" else None)
        if name == "rep":
            # ``rep show K`` spelling
            s.add_argument("action", choices=["show"])
        s.add_argument("index", type=int, help="basis index 0..7")
        s.set_defaults(func=cmd_rep_show)

    def add_report_flags(s, default_scenario):
        s.add_argument("--scenario", help=f"one of: {', '.join(sorted(SCENARIOS))}")
        s.add_argument("--n", type=_positive_int, help="points per resolved axis")
        s.add_argument("--h", type=_positive_float, help="grid spacing (default: scenario-specific)")
        s.add_argument("--config", help="TOML config file")
        s.add_argument("--json", action="store_true", help="JSON instead of CSV")
        s.add_argument("--out", type=Path, help="write the report here instead of stdout")
        s.set_defaults(default_scenario=default_scenario)

    s = sub.add_parser("residual", help="Maxwell residuals of a scenario, optionally over a refinement ladder")
    add_report_flags(s, "plane-wave")
    s.add_argument("--refine", type=int, choices=range(0, 6), metavar="K", help="extra halvings of h (0..5)")
    s.set_defaults(func=cmd_residual)

    s = sub.add_parser("dalembert", help="continuity and box(Y0) convergence for a Y-field scenario")
    add_report_flags(s, "potential-wave")
    s.add_argument("--refine", type=int, choices=range(1, 6), metavar="K", default=None, help="extra halvings")
    s.set_defaults(func=cmd_dalembert, refine_default=2)

    s = sub.add_parser("duality", help="duality-rotation invariance checks")
    add_report_flags(s, "electric-gauss")
    s.add_argument("--theta", type=parse_theta, action="append", help="angle (repeatable; pi/4 etc. allowed)")
    s.add_argument("--sweep", action="store_true", help="add the standard angle sweep")
    s.add_argument("--tol", type=float, default=1e-12, help="relative tolerance")
    s.set_defaults(func=cmd_duality)

    s = sub.add_parser("simulate", help="run the leapfrog solver from a config file")
    s.add_argument("--config", required=True, help="TOML solver config")
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--steps", type=_positive_int, help="override time.steps (>= 1)")
    s.add_argument("--allow-cfl-violation", action="store_true", help="run even if dt exceeds the CFL limit")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "refine_default", None) is not None and args.refine is None and not args.config:
        args.refine = args.refine_default
    try:
        return args.func(args)
    except (UsageError, ConfigError, CFLError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"octomaxwell: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"octomaxwell: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
