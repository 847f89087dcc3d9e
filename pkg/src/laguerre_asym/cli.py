"""Command-line harness: evaluation, sweeps, error tables and coefficient dumps.

Every command writes CSV (or JSON) and, when --out is given, a JSON sidecar
next to it holding the full run specification.  Output contains no time
stamps or random seeds, so identical invocations give identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath
from mpmath import mp, mpc, mpf

from . import __version__, checks, oracle
from .coefficients import CoefficientTable
from .expansions import (
    AIRY_CAUCHY, AT_Z2, CauchyContour, EvalOptions, TruncationOrders, airy_laguerre_case2,
    evaluate, evaluate_u,
)
from .liouville import _as_fraction, make_params
from .numeric import DEFAULT_BITS_ENV, PrecisionContext, default_bits

COMMANDS = ("eval", "sweep-circle", "sweep-real", "table1", "table2", "coeffs", "check")
TABLE_ALPHAS = ("0", "100")
TABLE_NS = (10, 100, 1000)
TABLE_ORDERS = (2, 4, 8, 12, 16)
TABLE_CONTOUR_POINTS = 300


@dataclass(frozen=True)
class RunSpec:
    command: str
    n: tuple[int, ...] = ()
    alpha: tuple[str, ...] = ()
    z: tuple[str, ...] = ()
    circle: Optional[tuple[str, str, int]] = None
    interval: Optional[tuple[str, str, int]] = None
    orders_N: Optional[int] = None
    orders_m: Optional[int] = None
    bits: int = 256
    contour_radius: Optional[str] = None
    contour_points: Optional[int] = None
    method: str = "auto"
    case: str = "auto"
    function: str = "L"
    point: str = "caption"
    from_left: bool = False
    oracle: bool = False
    out: Optional[str] = None
    format: str = "csv"
    jobs: int = 1
    version: str = field(default=__version__)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


# -- parsing --------------------------------------------------------------------------

_TOKEN = re.compile(r"^\s*(?:([-+]?[0-9.eE+-]+)\s*\*\s*)?(z1|z2|d|rm)\s*$")


def resolve_length(token: str, p) -> mpf:
    """A number, or [k*]name with name in z1, z2, d (= z2 - z1), rm (= min(z1, d))."""
    m = _TOKEN.match(token)
    if not m:
        return mpf(token)
    tp = p.turning_points()
    base = {"z1": tp.z1, "z2": tp.z2, "d": tp.z2 - tp.z1, "rm": p.r_m}[m.group(2)]
    return base * (mpf(m.group(1)) if m.group(1) else 1)


def _triple(text: str, what: str) -> tuple[str, str, int]:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"{what} needs three comma-separated fields")
    k = int(parts[2])
    if k < 2:
        raise argparse.ArgumentTypeError(f"{what}: samples must be >= 2")
    return parts[0], parts[1], k


def _orders(text: str) -> tuple[int, Optional[int]]:
    parts = text.split(",")
    if len(parts) > 2:
        raise argparse.ArgumentTypeError("--orders takes N or N,m")
    N = int(parts[0])
    m = int(parts[1]) if len(parts) == 2 else None
    if N < 1 or (m is not None and m < 1):
        raise argparse.ArgumentTypeError("orders must be positive")
    return N, m


def _contour(text: str) -> tuple[Optional[str], Optional[int]]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("--contour takes radius,points (either may be empty)")
    r = parts[0].strip() or None
    pts = int(parts[1]) if parts[1].strip() else None
    if pts is not None and pts < 4:
        raise argparse.ArgumentTypeError("contour points must be >= 4")
    return r, pts


def _alpha(text: str) -> str:
    _as_fraction(text)  # validates
    return text.strip()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="laguerre-asym",
                                 description="Asymptotic Laguerre and U evaluation at large degree.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--n", type=int, action="append", help="degree (repeatable)")
    ap.add_argument("--alpha", type=_alpha, action="append", help="order, decimal or p/q (repeatable)")
    ap.add_argument("--z", action="append", help="evaluation point such as 0.5+0.25j (repeatable)")
    ap.add_argument("--circle", type=lambda s: _triple(s, "--circle"),
                    help="center,radius,samples; center/radius may use z1, z2, d, rm (e.g. 0.5*z1)")
    ap.add_argument("--from-left", action="store_true",
                    help="parametrize the circle as center - R exp(-i theta)")
    ap.add_argument("--interval", type=lambda s: _triple(s, "--interval"), help="a,b,samples on the real axis")
    ap.add_argument("--orders", type=_orders, help="N or N,m (default 16, m = N/2)")
    ap.add_argument("--bits", type=int, help=f"mantissa bits (default ${DEFAULT_BITS_ENV} or 256)")
    ap.add_argument("--contour", type=_contour, help="radius,points (upper-half nodes)")
    ap.add_argument("--method", choices=("auto", "lg", "airy", "cauchy"), default="auto")
    ap.add_argument("--case", choices=("auto", "1a", "1b", "2"), default="auto")
    ap.add_argument("--function", choices=("L", "U"), default="L")
    ap.add_argument("--point", choices=("caption", "text"), default="caption",
                    help="table point z2 + 0.1 d (caption) or z1 + 0.1 d (text)")
    ap.add_argument("--oracle", action="store_true", help="eval: add oracle error columns")
    ap.add_argument("--out", help="output file; a .json sidecar is written beside it")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes")
    return ap


def spec_from_args(args: argparse.Namespace) -> RunSpec:
    bits = args.bits if args.bits is not None else default_bits()
    if bits < 64:
        raise SystemExit("--bits must be >= 64")
    if args.jobs < 1:
        raise SystemExit("--jobs must be >= 1")
    N, m = args.orders if args.orders else (None, None)
    cr, cp = args.contour if args.contour else (None, None)
    return RunSpec(
        command=args.command, n=tuple(args.n or ()), alpha=tuple(args.alpha or ()),
        z=tuple(args.z or ()), circle=args.circle, interval=args.interval, orders_N=N, orders_m=m,
        bits=bits, contour_radius=cr, contour_points=cp, method=args.method, case=args.case,
        function=args.function, point=args.point, from_left=args.from_left, oracle=args.oracle,
        out=args.out, format=args.format, jobs=args.jobs)


# -- formatting -----------------------------------------------------------------------

def fmt(x) -> str:
    """Full-mantissa decimal string at the active precision."""
    if x is None:
        return "nan"
    x = mpf(x)
    if mpmath.isnan(x):
        return "nan"
    if mpmath.isinf(x):
        return "inf" if x > 0 else "-inf"
    return mpmath.nstr(x, mpmath.libmp.prec_to_dps(mp.prec), strip_zeros=False,
                       min_fixed=1, max_fixed=0)


def _parse_z(text: str) -> mpc:
    return mpc(mpmath.mpmathify(text.replace(" ", "")))


# -- workers (top level so they pickle) ------------------------------------------------

def _options(spec: RunSpec, method: Optional[str] = None, radius=None) -> EvalOptions:
    pts = spec.contour_points or 100
    return EvalOptions(method or spec.method, spec.case, pts, radius)


def _radius(spec: RunSpec, p) -> Optional[mpf]:
    return None if spec.contour_radius is None else resolve_length(spec.contour_radius, p)


def _orders_of(spec: RunSpec, default_N: int = 16) -> TruncationOrders:
    return TruncationOrders(spec.orders_N or default_N, spec.orders_m)


def _safe(fn: Callable, *a):
    try:
        return fn(*a), ""
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        return None, type(exc).__name__


def _errors(value, n: int, alpha: Fraction, x: mpc, obits: int):
    if value is None:
        return None, None
    return oracle.rel_err_env(value, n, alpha, x, obits)


def _oracle_bits(spec: RunSpec) -> int:
    return max(512, 2 * spec.bits)


def _eval_task(task) -> list[str]:
    spec, n, alpha, zs = task
    with PrecisionContext(spec.bits).activate():
        p = make_params(n, alpha)
        z = _parse_z(zs)
        fn = evaluate if spec.function == "L" else evaluate_u
        res, err = _safe(fn, z, p, _orders_of(spec), _options(spec, radius=_radius(spec, p)))
        row = [str(n), alpha, fmt(z.real), fmt(z.imag), spec.function]
        if res is None:
            row += ["", "error:" + err, "nan", "nan", "nan", "false"]
        else:
            v = res.to_mpc()
            row += [res.case, res.method, fmt(v.real), fmt(v.imag), fmt(res.est_error),
                    str(res.region_ok).lower()]
        if spec.oracle:
            if spec.function != "L":
                ex = oracle.u_upper_sheet(n, alpha, z if z.imag >= 0 else mpmath.conj(z),
                                          _oracle_bits(spec)).to_mpc()
                ex = ex if z.imag >= 0 else mpmath.conj(ex)
                e = oracle.rel_err(res.value, ex) if res is not None else None
                row += [fmt(e), "nan"]
            else:
                eps, eh = _errors(None if res is None else res.value, n, _as_fraction(alpha),
                                  p.u_mp * z, _oracle_bits(spec))
                row += [fmt(eps), fmt(eh)]
    return row


def _sweep_task(task) -> list[str]:
    spec, n, alpha, k, param, z = task
    with PrecisionContext(spec.bits).activate():
        p = make_params(n, alpha)
        z = mpc(z)
        o = _orders_of(spec)
        radius = _radius(spec, p)
        lg, e1 = _safe(evaluate, z, p, o, _options(spec, "lg", radius))
        am = "cauchy" if spec.method == "cauchy" else "airy"
        ai, e2 = _safe(evaluate, z, p, o, _options(spec, am, radius))
        x = p.u_mp * z
        al = _as_fraction(alpha)
        ob = _oracle_bits(spec)
        el, hl = _errors(None if lg is None else lg.value, n, al, x, ob)
        ea, ha = _errors(None if ai is None else ai.value, n, al, x, ob)
        return [str(n), alpha, str(k), fmt(param), fmt(z.real), fmt(z.imag),
                fmt(el), fmt(ea), fmt(hl), fmt(ha),
                fmt(None if lg is None else lg.est_error), fmt(None if ai is None else ai.est_error),
                ai.method if ai is not None else "error:" + e2,
                "" if lg is not None else "error:" + e1]


def table_point(p, which: str) -> mpf:
    tp = p.turning_points()
    d = tp.z2 - tp.z1
    return tp.z2 + d / 10 if which == "caption" else tp.z1 + d / 10


def table_cell(spec: RunSpec, alpha: str, n: int, N: int):
    """(z, relative error, estimate, status, minimum bits) for one table entry."""
    with PrecisionContext(spec.bits).activate():
        p = make_params(n, alpha)
        z = table_point(p, spec.point)
        m = spec.orders_m or max(1, N // 2)
        pts = spec.contour_points or TABLE_CONTOUR_POINTS
        contour = CauchyContour(AT_Z2, _radius(spec, p), pts)
        c, r = contour.resolve(p)
        method = "cauchy" if abs(z - c) < r else "direct"
        res = airy_laguerre_case2(z, p, m, method, contour)
        exact = oracle.laguerre_exact(n, _as_fraction(alpha), p.u_mp * z, _oracle_bits(spec))
        err = oracle.rel_err(res.value, exact)
        floor = mpf(2) ** (-spec.bits + 24)
        status, need = "ok", ""
        if err is not None and err < floor:
            status = "needs-bits"
            need = str(int(math.ceil(-float(mpmath.log(max(res.est_error, mpf(2) ** -spec.bits), 2)))) + 64)
        return z, err, res.est_error, status, need


def _table_task(task):
    spec, alpha, n, N = task
    z, err, est, status, need = table_cell(spec, alpha, n, N)
    with PrecisionContext(spec.bits).activate():
        return [alpha, str(n), str(N), str(spec.orders_m or max(1, N // 2)), fmt(z), fmt(err),
                fmt(est), status, need]


def _run(tasks: list, worker: Callable, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    # processes rather than threads: mpmath precision is process-global
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks))  # map keeps input order


# -- commands ------------------------------------------------------------------------------

EVAL_COLUMNS = ["n", "alpha", "z_re", "z_im", "function", "case", "method", "value_re", "value_im",
                "est_error", "region_ok"]
SWEEP_COLUMNS = ["n", "alpha", "index", "parameter", "z_re", "z_im", "err_rel_lg", "err_rel_airy",
                 "err_env_lg", "err_env_airy", "est_lg", "est_airy", "method_airy", "note_lg"]
TABLE1_COLUMNS = ["alpha", "n", "N", "m", "z", "err_rel", "est_error", "status", "min_bits"]
TABLE2_COLUMNS = ["alpha", "n", "N", "constant", "below_one"]
COEFF_COLUMNS = ["n", "alpha", "s", "lambda", "mu", "S_power", "numerator"]
CHECK_COLUMNS = ["check", "passed", "margin", "detail"]


def _grid(spec: RunSpec, ns=(100,), alphas=("0",)):
    return [(n, a) for a in (spec.alpha or alphas) for n in (spec.n or ns)]


def cmd_eval(spec: RunSpec):
    if not spec.z:
        raise SystemExit("eval needs at least one --z")
    tasks = [(spec, n, a, z) for n, a in _grid(spec) for z in spec.z]
    cols = EVAL_COLUMNS + (["err_rel", "err_env"] if spec.oracle else [])
    return cols, _run(tasks, _eval_task, spec.jobs)


def _sweep_tasks(spec: RunSpec, points: Callable) -> list:
    tasks = []
    for n, a in _grid(spec):
        with PrecisionContext(spec.bits).activate():
            p = make_params(n, a)
            for k, (param, z) in enumerate(points(p)):
                tasks.append((spec, n, a, k, param, z))
    return tasks


def cmd_sweep_circle(spec: RunSpec):
    if not spec.circle:
        raise SystemExit("sweep-circle needs --circle center,radius,samples")
    cs, rs, k = spec.circle

    def points(p):
        c, R = resolve_length(cs, p), resolve_length(rs, p)
        for j in range(k):
            th = mp.pi * j / (k - 1)
            z = c - R * mpmath.expj(-th) if spec.from_left else c + R * mpmath.expj(th)
            yield th, z

    return SWEEP_COLUMNS, _run(_sweep_tasks(spec, points), _sweep_task, spec.jobs)


def cmd_sweep_real(spec: RunSpec):
    if not spec.interval:
        raise SystemExit("sweep-real needs --interval a,b,samples")
    as_, bs, k = spec.interval

    def points(p):
        a, b = resolve_length(as_, p), resolve_length(bs, p)
        for j in range(k):
            x = a + (b - a) * j / (k - 1)
            yield x, mpc(x)

    return SWEEP_COLUMNS, _run(_sweep_tasks(spec, points), _sweep_task, spec.jobs)


def _table_tasks(spec: RunSpec) -> list:
    orders = (spec.orders_N,) if spec.orders_N else TABLE_ORDERS
    return [(spec, a, n, N) for a in (spec.alpha or TABLE_ALPHAS)
            for n in (spec.n or TABLE_NS) for N in orders]


def cmd_table1(spec: RunSpec):
    return TABLE1_COLUMNS, _run(_table_tasks(spec), _table_task, spec.jobs)


def cmd_table2(spec: RunSpec):
    rows = []
    for r in _run(_table_tasks(spec), _table_task, spec.jobs):
        alpha, n, N, err = r[0], int(r[1]), int(r[2]), r[5]
        with PrecisionContext(spec.bits).activate():
            const = mpf(n) ** (N + 1) * mpf(err) if err != "nan" else None
            rows.append([alpha, str(n), str(N), fmt(const),
                         "nan" if const is None else str(bool(const < 1)).lower()])
    return TABLE2_COLUMNS, rows


def cmd_coeffs(spec: RunSpec):
    rows = []
    s_max = spec.orders_N or 16
    for n, a in _grid(spec):
        with PrecisionContext(spec.bits).activate():
            p = make_params(n, a)
            tab = CoefficientTable.build(p, s_max)
            for s in range(1, s_max + 1):
                e = tab.ehat[s - 1]
                rows.append([str(n), a, str(s), fmt(tab.lam[s - 1]), fmt(tab.mu[s - 1]),
                             str(e.S_power), " ".join(fmt(c) for c in e.numerator)])
    return COEFF_COLUMNS, rows


def cmd_check(spec: RunSpec):
    with PrecisionContext(spec.bits).activate():
        outcomes = checks.run_all()
    rows = [[o.name, str(o.passed).lower(), f"{o.margin:.3e}", o.detail] for o in outcomes]
    return CHECK_COLUMNS, rows


HANDLERS = {
    "eval": cmd_eval, "sweep-circle": cmd_sweep_circle, "sweep-real": cmd_sweep_real,
    "table1": cmd_table1, "table2": cmd_table2, "coeffs": cmd_coeffs, "check": cmd_check,
}


# -- output --------------------------------------------------------------------------------

def render(spec: RunSpec, columns: Sequence[str], rows: list) -> str:
    if spec.format == "json":
        doc = {"runspec": asdict(spec), "columns": list(columns),
               "rows": [dict(zip(columns, r)) for r in rows]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def write_output(spec: RunSpec, columns: Sequence[str], rows: list) -> None:
    text = render(spec, columns, rows)
    if spec.out is None:
        sys.stdout.write(text)
        return
    with open(spec.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    if spec.format == "csv":
        with open(spec.out + ".json", "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"runspec": asdict(spec), "columns": list(columns)},
                                indent=2, sort_keys=True) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    spec = spec_from_args(args)
    columns, rows = HANDLERS[spec.command](spec)
    write_output(spec, columns, rows)
    if spec.command == "check":
        failed = [r for r in rows if r[1] != "true"]
        for r in rows:
            print(("PASS " if r[1] == "true" else "FAIL ") + f"{r[0]}  margin={r[2]}  {r[3]}",
                  file=sys.stderr)
        return 1 if failed else 0
    if spec.command == "table2":
        return 0 if all(r[4] != "false" for r in rows) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
