"""Command-line frontend: profile, mix, window, simulate, oracle-check, spectrum."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass, field

from . import __version__, analysis, bounds, engine, montecarlo, oracle
from .model import InvalidParams, KneserParams, spectrum, spectrum_exact

SCHEMA_VERSION = 1
FLOOR_NOTE = "d(t) for non-integer t is d(floor(t)); bounds take real t, exact values use floor(t)"

PROFILE_COLUMNS = [
    "t",
    "d_exact",
    "spectral_upper",
    "g_bound",
    "wilson_lower_exact",
    "wilson_lower_analytic",
    "ef_t",
    "varf_t",
    "spectral_upper_raw",
    "wilson_lower_exact_raw",
    "wilson_lower_analytic_raw",
]
SIMULATE_COLUMNS = ["t", "emp_mean", "emp_var", "stderr", "exact_mean", "exact_var"]


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    n: int
    k: int
    t_max: int | None = None
    c_grid: list[float] | None = None
    eps: list[float] = field(default_factory=list)
    bounds_only: bool = False
    stream_rows: bool = False
    walks: int = 100_000
    horizon: int | None = None
    seed: int = 0
    mode: str = "lumped"
    format: str = "csv"
    out: str | None = None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(**d)

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in vars(ns).items() if k in names})


def fmt_real(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float) and math.isinf(x):
        return "-inf" if x < 0 else "inf"
    if isinstance(x, int):
        return str(x)
    return f"{x:.17g}"


def json_real(x):
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return x


def parse_c_grid(text: str) -> list[float]:
    try:
        a, b, st = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--c-grid expects a:b:step, got {text!r}")
    if st <= 0 or b < a:
        raise argparse.ArgumentTypeError("--c-grid needs step > 0 and a <= b")
    count = int(math.floor((b - a) / st + 1e-9)) + 1
    return [round(a + i * st, 12) for i in range(count)]


def metadata(cfg: RunConfig, schema: str) -> dict:
    return {
        "schema": f"kneser-mix/{schema}",
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "config": cfg.to_dict(),
        "note": FLOOR_NOTE,
    }


def render(cfg: RunConfig, schema: str, columns: list[str], rows: list[dict], extra: dict | None = None) -> str:
    meta = metadata(cfg, schema)
    if cfg.format == "json":
        doc = dict(meta)
        if extra:
            doc.update(extra)
        doc["columns"] = columns
        doc["rows"] = [{c: json_real(r.get(c)) for c in columns} for r in rows]
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# {json.dumps(meta, sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt_real(r.get(c)) for c in columns])
    return buf.getvalue()


def _params(cfg: RunConfig) -> KneserParams:
    try:
        return KneserParams(cfg.n, cfg.k)
    except InvalidParams as exc:
        raise CliError(f"invalid parameters: {exc}")


def _check_exact_feasible(p: KneserParams, cfg: RunConfig) -> None:
    if not cfg.bounds_only and not engine.dense_feasible(p) and not cfg.stream_rows:
        raise CliError(
            f"exact mode needs a dense ({p.n + 1})^2 kernel, above the n <= {engine.DENSE_MAX_N} "
            "memory ceiling; pass --stream-rows or --bounds-only"
        )


def default_t_max(p: KneserParams) -> int:
    return math.ceil(p.t_star + 5 * p.window)


def profile_rows(p: KneserParams, t_max: int, bounds_only: bool = False, stream: bool = False) -> list[dict]:
    table = spectrum(p)
    d = mom = None
    if not bounds_only:
        d = engine.exact_tv_profile(p, t_max, stream=stream or None)
        mom = engine.f_moments(p, t_max, stream=stream or None)
    rows = []
    for t in range(t_max + 1):
        raw = bounds.spectral_upper_raw(p, t, table)
        row = {
            "t": t,
            "spectral_upper": min(1.0, raw),
            "g_bound": bounds.g_bound(p, t),
            "wilson_lower_analytic": bounds.wilson_lower_analytic(p, t),
            "spectral_upper_raw": raw,
            "wilson_lower_analytic_raw": bounds.wilson_lower_analytic_raw(p, t),
        }
        if d is not None:
            w = bounds.wilson_inputs_exact(p, mom.mean[t], mom.var[t])
            row.update(
                d_exact=float(d[t]),
                wilson_lower_exact=w.bound(),
                wilson_lower_exact_raw=w.raw(),
                ef_t=float(mom.mean[t]),
                varf_t=float(mom.var[t]),
            )
        rows.append(row)
    return rows


def cmd_profile(cfg: RunConfig) -> str:
    p = _params(cfg)
    _check_exact_feasible(p, cfg)
    t_max = cfg.t_max if cfg.t_max is not None else default_t_max(p)
    if t_max < 0:
        raise CliError("--t-max must be non-negative")
    cfg.t_max = t_max
    rows = profile_rows(p, t_max, cfg.bounds_only, cfg.stream_rows)
    extra = {"t_star": p.t_star, "window_scale": p.window}
    return render(cfg, "profile", PROFILE_COLUMNS, rows, extra)


def cmd_mix(cfg: RunConfig) -> str:
    p = _params(cfg)
    if cfg.bounds_only:
        raise CliError("mix needs the exact profile; --bounds-only is not supported")
    _check_exact_feasible(p, cfg)
    if not cfg.eps:
        cfg.eps = [0.25]
    for e in cfg.eps:
        if not 0 < e < 1:
            raise CliError(f"--eps values must lie in (0, 1), got {e}")
    profile = engine.TVProfile(p, stream=cfg.stream_rows or None)
    report = analysis.mixing_report(p, cfg.eps, cfg.c_grid, profile)
    doc = metadata(cfg, "mix")
    doc["report"] = report.to_dict()
    return json.dumps(doc, indent=2) + "\n"


def cmd_window(cfg: RunConfig) -> str:
    p = _params(cfg)
    _check_exact_feasible(p, cfg)
    grid = cfg.c_grid or parse_c_grid("-3:3:0.5")
    cfg.c_grid = grid
    profile = None if cfg.bounds_only else engine.TVProfile(p, stream=cfg.stream_rows or None)
    probe = analysis.window_probe(p, grid, profile, bounds_only=cfg.bounds_only)
    rows = probe.to_dict()["rows"]
    columns = ["c", "t", "lower", "upper"] if cfg.bounds_only else ["c", "t", "d"]
    return render(cfg, "window", columns, rows, {"t_star": p.t_star, "window_scale": p.window})


def cmd_simulate(cfg: RunConfig) -> str:
    p = _params(cfg)
    if cfg.horizon is None:
        cfg.horizon = math.ceil(2 * p.t_star)
    try:
        sim = montecarlo.SimConfig(p, cfg.walks, cfg.horizon, cfg.seed, cfg.mode)
    except ValueError as exc:
        raise CliError(str(exc))
    est = montecarlo.estimate_f_moments(sim)
    mom = engine.f_moments(p, cfg.horizon)
    rows = [
        {
            "t": e.t,
            "emp_mean": e.mean,
            "emp_var": e.var,
            "stderr": e.stderr,
            "exact_mean": float(mom.mean[e.t]),
            "exact_var": float(mom.var[e.t]),
        }
        for e in est
    ]
    return render(cfg, "simulate", SIMULATE_COLUMNS, rows)


def cmd_oracle_check(cfg: RunConfig) -> tuple[str, bool]:
    p = _params(cfg)
    t_max = cfg.t_max if cfg.t_max is not None else 50
    try:
        chain = oracle.build_full_chain(p)
    except oracle.OracleSizeError as exc:
        raise CliError(str(exc))
    checks = {}
    exact = oracle.oracle_tv(chain, t_max)
    d = engine.exact_tv_profile(p, t_max)
    checks["tv_equivalence"] = bool(max(abs(float(a) - b) for a, b in zip(exact, d)) <= 1e-10)
    for kind, ok in oracle.lump_consistency(chain, t_max).items():
        checks[f"lump_consistency_{kind.value}"] = bool(ok)
    for m, ok in oracle.certify_spectrum(chain, 6).items():
        checks[f"spectrum_trace_m{m}"] = bool(ok)
    passed = all(checks.values())
    doc = metadata(cfg, "oracle-check")
    doc.update(checks=checks, passed=passed)
    return json.dumps(doc, indent=2) + "\n", passed


def cmd_spectrum(cfg: RunConfig) -> str:
    p = _params(cfg)
    exact = spectrum_exact(p) if p.vertex_count is not None and p.n <= 2000 else None
    rows = []
    for e in spectrum(p):
        row = {
            "i": e.index,
            "sign": e.sign,
            "eigenvalue": e.value,
            "log_abs_eigenvalue": e.log_magnitude,
            "log_multiplicity": e.log_multiplicity,
        }
        if exact is not None:
            row["multiplicity"] = exact[e.index][1]
        rows.append(row)
    cols = ["i", "sign", "eigenvalue", "log_abs_eigenvalue", "log_multiplicity", "multiplicity"]
    return render(cfg, "spectrum", cols, rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kneser-mix", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--out")
        return sp

    sp = common(sub.add_parser("profile", help="per-t exact TV, bounds and f_t moments"))
    sp.add_argument("--t-max", type=int)
    sp.add_argument("--bounds-only", action="store_true")
    sp.add_argument("--stream-rows", action="store_true")

    sp = common(sub.add_parser("mix", help="mixing times and cutoff diagnostics (JSON)"))
    sp.add_argument("--eps", type=float, action="append", default=[])
    sp.add_argument("--c-grid", type=parse_c_grid)
    sp.add_argument("--stream-rows", action="store_true")
    sp.add_argument("--bounds-only", action="store_true")

    sp = common(sub.add_parser("window", help="d(t* + c n/k) over a c grid"))
    sp.add_argument("--c-grid", type=parse_c_grid)
    sp.add_argument("--bounds-only", action="store_true")
    sp.add_argument("--stream-rows", action="store_true")

    sp = common(sub.add_parser("simulate", help="Monte Carlo moments of f_t"))
    sp.add_argument("--walks", type=int, default=100_000)
    sp.add_argument("--horizon", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", choices=["lumped", "explicit"], default="lumped")

    sp = common(sub.add_parser("oracle-check", help="brute-force checks on tiny instances"))
    sp.add_argument("--t-max", type=int)

    common(sub.add_parser("spectrum", help="walk eigenvalues and multiplicities"))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig.from_namespace(args)
    ok = True
    try:
        if cfg.subcommand == "profile":
            text = cmd_profile(cfg)
        elif cfg.subcommand == "mix":
            text = cmd_mix(cfg)
        elif cfg.subcommand == "window":
            text = cmd_window(cfg)
        elif cfg.subcommand == "simulate":
            text = cmd_simulate(cfg)
        elif cfg.subcommand == "oracle-check":
            text, ok = cmd_oracle_check(cfg)
        else:
            text = cmd_spectrum(cfg)
    except CliError as exc:
        print(f"kneser-mix {cfg.subcommand}: error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
