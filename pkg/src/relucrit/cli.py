"""Command-line interface: ``relucrit <command> [options]``.

Exit codes: 0 ok, 1 usage error, 2 numeric failure, 3 verification failure.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from datetime import datetime, timezone

import numpy as np

from .charts import embed
from .consistency import ConsistencySeed, consistency_residual
from .continuation import direct_jump, lambda_path
from .errors import RelucritError, UnknownFamily
from .families import FAMILIES, consistency_at, critical_point
from .newton import NewtonConfig
from .objective import gradient_full, gradient_reduced, objective_reduced
from .seeds import family_chart, load_seeds
from .series import DECAY_LIMITS, compare_approximations, decay_scan
from .verify import SUITE_ALIASES, SUITES, run_verify

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3
TABLES = ("inftable1", "inftable4", "compA", "compI", "compII", "typeM")
MIN_K = {"a": 3, "i": 3, "ii": 3, "m": 5}
CONFIG_KEYS = {
    "max_iters": int,
    "tol_residual": float,
    "fd_step": float,
    "tol_stall": float,
    "max_halvings": int,
    "damping": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
}


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# output


def fmt(x):
    """17 significant digits for floats; other values as str."""
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "" if x is None else str(x)


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(r.get(h)) for h in header])
    return buf.getvalue()


def atomic_write(path, text):
    """Write via a temporary file in the target directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _jsonable(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v]
    return v


def json_text(records, timestamp=True, extra=None):
    stamp = datetime.now(timezone.utc).isoformat() if timestamp else None
    out = []
    for r in records:
        rec = {k: _jsonable(v) for k, v in r.items()}
        if stamp:
            rec["timestamp"] = stamp
        out.append(rec)
    doc = {"records": out}
    if extra:
        doc.update({k: _jsonable(v) for k, v in extra.items()})
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def emit(args, header, rows, name=None, extra=None):
    """Write rows as CSV (default) or JSON to --output or stdout."""
    text = json_text(rows, not args.no_timestamp, extra) if args.json else csv_text(header, rows)
    target = args.output
    if target and name is not None and (os.path.isdir(target) or target.endswith(os.sep)):
        target = os.path.join(target, name + (".json" if args.json else ".csv"))
    if target:
        atomic_write(target, text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# configuration


def parse_config(items):
    """``--config`` values: key=value pairs or paths to key=value files."""
    pairs = []
    for item in items or []:
        if os.path.isfile(item):
            with open(item, encoding="utf-8") as fh:
                for lineno, raw in enumerate(fh, 1):
                    line = raw.split("#", 1)[0].strip()
                    if not line:
                        continue
                    if "=" not in line:
                        raise UsageError(f"{item}:{lineno}: expected key=value")
                    pairs.append(line)
        elif "=" in item:
            pairs.append(item)
        else:
            raise UsageError(f"--config {item!r}: not a file and not key=value")
    opts = {}
    for p in pairs:
        key, val = (s.strip() for s in p.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"unknown config key {key!r} (known: {', '.join(sorted(CONFIG_KEYS))})")
        try:
            opts[key] = CONFIG_KEYS[key](val)
        except ValueError:
            raise UsageError(f"bad value for {key}: {val!r}") from None
    try:
        return NewtonConfig(**opts)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _seeds(args):
    if not getattr(args, "seed_file", None):
        return None
    try:
        return load_seeds(args.seed_file)
    except (OSError, ValueError) as exc:
        raise UsageError(f"seed file: {exc}") from None


def _check_k(family, k):
    if not math.isfinite(k) or k < MIN_K[family]:
        raise UsageError(f"k must be >= {MIN_K[family]} for family {family} (got {k:g})")


# --------------------------------------------------------------------------
# commands


def _seed_fields(chart, xi):
    t = ConsistencySeed.from_xi(chart, xi)
    rec = {"rho": t.rho}
    if chart.p >= 1:
        rec.update(nu=t.nu, eps=t.eps)
    if chart.p >= 2:
        rec["eta"] = t.eta
    return rec


def _xi_fields(xi, prefix="xi"):
    return {f"{prefix}{i + 1}": float(v) for i, v in enumerate(xi)}


def _header(chart, extra_front, extra_back, prefix="xi"):
    return extra_front + [f"{prefix}{i + 1}" for i in range(chart.m)] + extra_back


def cmd_solve_consistency(args):
    fam = args.family
    _check_k(fam, args.k)
    cfg = parse_config(args.config)
    chart, xi0 = consistency_at(fam, args.k, cfg, _seeds(args))
    res = float(np.max(np.abs(consistency_residual(chart, xi0, args.k))))
    rec = {"family": fam, "k": float(args.k), **_seed_fields(chart, xi0), **_xi_fields(xi0), "residual": res}
    seed_cols = [c for c in ("rho", "nu", "eps", "eta") if c in rec]
    emit(args, _header(chart, ["family", "k"] + seed_cols, ["residual"]), [rec])
    return EXIT_OK


def cmd_solve_critical(args):
    fam = args.family
    _check_k(fam, args.k)
    if not 0.0 < args.lambda_inc <= 0.5:
        raise UsageError("--lambda-inc must lie in (0, 0.5]")
    cfg = parse_config(args.config)
    chart, xi0 = consistency_at(fam, args.k, cfg, _seeds(args))
    if args.path_output and args.method != "path":
        raise UsageError("--path-output needs --method path")
    if args.method == "jump":
        xi1 = direct_jump(chart, xi0, args.k, cfg)
    else:
        path = lambda_path(chart, xi0, args.k, args.lambda_inc, cfg)
        xi1 = path[-1].xi
        if args.path_output:
            write_path_csv(args.path_output, chart, path)
    grad = float(np.max(np.abs(gradient_reduced(chart, xi1, args.k))))
    rec = {
        "family": fam,
        "k": float(args.k),
        "method": args.method,
        **_xi_fields(xi0, "xi0_"),
        **_xi_fields(xi1),
        "objective": objective_reduced(chart, xi1, args.k),
        "gradient_max": grad,
    }
    header = ["family", "k", "method"] + [f"xi0_{i + 1}" for i in range(chart.m)]
    header += [f"xi{i + 1}" for i in range(chart.m)] + ["objective", "gradient_max"]
    emit(args, header, [rec])
    return EXIT_OK


def write_path_csv(path_file, chart, samples):
    header = ["lambda"] + [f"xi_{i + 1}" for i in range(chart.m)] + ["residual_norm"]
    rows = [
        {"lambda": smp.lam, **{f"xi_{i + 1}": float(v) for i, v in enumerate(smp.xi)}, "residual_norm": smp.residual_norm}
        for smp in samples
    ]
    atomic_write(path_file, csv_text(header, rows))


def table_inftable1(cfg, seeds):
    rows = []
    for k in (6, 1000):
        for fam in ("a", "i", "ii"):
            chart, xi0 = consistency_at(fam, k, cfg, seeds)
            if chart.p == 0:
                one_rho, one_nu, eps = xi0[0], xi0[0], xi0[1]
            else:
                one_rho, one_nu, eps = xi0[0], xi0[4], xi0[1]
            rows.append({"type": fam.upper(), "k": k, "one_plus_rho": one_rho, "one_plus_nu": one_nu, "eps": eps})
    return ["type", "k", "one_plus_rho", "one_plus_nu", "eps"], rows


def _as_p1(chart, xi):
    # type A viewed in the Delta S_{k-1} chart
    return np.array([xi[0], xi[1], xi[1], xi[1], xi[0]]) if chart.p == 0 else np.asarray(xi)


def table_inftable4(cfg, seeds, k=6):
    rows = []
    for fam in ("a", "i", "ii"):
        chart, xi0 = consistency_at(fam, k, cfg, seeds)
        xi1 = direct_jump(chart, xi0, k, cfg)
        gnorm = float(np.linalg.norm(gradient_full(embed(chart, xi1, k))))
        rows.append({"type": fam.upper(), **_xi_fields(_as_p1(chart, xi1)), "gradient_norm": gnorm})
    return ["type"] + [f"xi{i}" for i in range(1, 6)] + ["gradient_norm"], rows


def table_comparison(fam, cfg, k=10_000):
    comp = compare_approximations(fam, k, cfg)
    coords = [r.coordinate for r in comp]
    labels = [("c_a", "approx_series"), ("c_a_plus", "approx_series_plus"), ("c_s", "approx_consistency"), ("c", "solved")]
    errs = [("abs_ca_minus_c", "a"), ("abs_ca_plus_minus_c", "a+"), ("abs_cs_minus_c", "s")]
    rows = []
    for lab, attr in labels:
        if attr == "approx_series_plus" and fam != "a":
            continue
        rows.append({"row": lab, **{r.coordinate: getattr(r, attr) for r in comp}})
    for lab, key in errs:
        if key not in comp[0].abs_errors:
            continue
        rows.append({"row": lab, **{r.coordinate: r.abs_errors[key] for r in comp}})
    return ["row"] + coords, rows


def table_typeM(cfg, seeds, k=10_000):
    pt = critical_point("m", k, cfg, seeds)
    chart = family_chart("m")
    coords = [f"xi{i + 1}" for i in range(chart.m)]
    rows = [
        {"row": "c0", **dict(zip(coords, pt.xi0)), "objective": objective_reduced(chart, pt.xi0, k)},
        {"row": "c", **dict(zip(coords, pt.xi1)), "objective": objective_reduced(chart, pt.xi1, k)},
        {"row": "abs_c0_minus_c", **dict(zip(coords, np.abs(pt.xi0 - pt.xi1)))},
    ]
    return ["row"] + coords + ["objective"], rows


def build_table(which, cfg, seeds=None):
    if which == "inftable1":
        return table_inftable1(cfg, seeds)
    if which == "inftable4":
        return table_inftable4(cfg, seeds)
    if which in ("compA", "compI", "compII"):
        return table_comparison({"compA": "a", "compI": "i", "compII": "ii"}[which], cfg)
    if which == "typeM":
        return table_typeM(cfg, seeds)
    raise UsageError(f"unknown table {which!r}; choose from {', '.join(TABLES)}")


def cmd_tables(args):
    which = args.which
    if which not in TABLES and which != "all":
        raise UsageError(f"unknown table {which!r}; choose from {', '.join(TABLES)} or all")
    cfg = parse_config(args.config)
    seeds = _seeds(args)
    names = TABLES if which == "all" else (which,)
    if len(names) > 1 and args.output and not os.path.isdir(args.output):
        os.makedirs(args.output, exist_ok=True)
    for name in names:
        header, rows = build_table(name, cfg, seeds)
        emit(args, header, rows, name=name)
    return EXIT_OK


def decay_fit(rows, degree=2):
    """Least-squares fit of the normalized objective in s = 1/sqrt(k); returns the constant term."""
    s = np.array([1 / math.sqrt(r[0]) for r in rows])
    y = np.array([r[2] for r in rows])
    deg = min(degree, len(rows) - 1)
    coef = np.linalg.lstsq(np.vander(s, deg + 1, increasing=True), y, rcond=None)[0]
    return float(coef[0])


def decay_grid(k_min, k_max, points):
    ks = np.unique(np.round(np.geomspace(k_min, k_max, points)).astype(int))
    return [float(k) for k in ks]


def cmd_decay(args):
    fam = args.family
    if args.k_min is None or args.k_max is None:
        raise UsageError("decay needs --k-min and --k-max")
    if args.k_min > args.k_max or args.points < 1:
        raise UsageError("empty k range")
    _check_k(fam, args.k_min)
    cfg = parse_config(args.config)
    ks = decay_grid(args.k_min, args.k_max, args.points)
    rows = decay_scan(fam, ks, cfg)
    records = [{"family": fam, "k": k, "objective": F, "normalized": nF} for k, F, nF in rows]
    fit = decay_fit(rows) if len(rows) > 1 else rows[0][2]
    extra = {"fitted_constant": fit, "limit": DECAY_LIMITS.get(fam)}
    emit(args, ["family", "k", "objective", "normalized"], records, extra=extra)
    lim = DECAY_LIMITS.get(fam)
    print(f"fitted constant {fit:.6f}" + (f" (limit {lim:.6f})" if lim is not None else ""), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    only = args.only
    for name in only or []:
        if SUITE_ALIASES.get(name, name) not in SUITES:
            raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    seeds = None
    if args.seed_file:
        try:
            seeds = load_seeds(args.seed_file)
        except (OSError, ValueError) as exc:
            print(f"FAIL consistency/seed_file: {exc}")
            return EXIT_VERIFY
    results = run_verify(only, seeds)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.suite}/{r.name}: {r.detail} [{r.seconds:.2f}s]")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_VERIFY


# --------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--output", help="output file (directory for several tables); default stdout")
    common.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    common.add_argument("--no-timestamp", action="store_true", help="omit timestamps from JSON records")
    common.add_argument("--seed-file", help="key=value seed file replacing the built-in seeds")
    common.add_argument("--config", action="append", help="key=value or a file of key=value lines (repeatable)")

    p = _Parser(prog="relucrit", description="Critical points of the ReLU student-teacher objective.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def family_args(sp):
        sp.add_argument("--family", choices=FAMILIES, required=True)
        sp.add_argument("--k", type=float, required=True)

    sp = sub.add_parser("solve-consistency", parents=[common], help="solve the consistency equations")
    family_args(sp)
    sp.set_defaults(func=cmd_solve_consistency)

    sp = sub.add_parser("solve-critical", parents=[common], help="consistency solution, then Newton to lam = 1")
    family_args(sp)
    sp.add_argument("--method", choices=("jump", "path"), default="jump")
    sp.add_argument("--lambda-inc", type=float, default=0.01)
    sp.add_argument("--path-output", help="CSV of the lam-path samples (with --method path)")
    sp.set_defaults(func=cmd_solve_critical)

    sp = sub.add_parser("tables", parents=[common], help="regenerate a reference table")
    sp.add_argument("--which", required=True, help=f"one of {', '.join(TABLES)} or all")
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("decay", parents=[common], help="objective decay scan over k")
    sp.add_argument("--family", choices=FAMILIES, required=True)
    sp.add_argument("--k-min", type=float)
    sp.add_argument("--k-max", type=float)
    sp.add_argument("--points", type=int, default=12)
    sp.set_defaults(func=cmd_decay)

    sp = sub.add_parser("verify", parents=[common], help="run the property suites")
    sp.add_argument("--only", action="append", help=f"suite name ({', '.join(SUITES)}); repeatable")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, UnknownFamily) as exc:
        print(f"relucrit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, RelucritError, FloatingPointError) as exc:
        print(f"relucrit: numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
