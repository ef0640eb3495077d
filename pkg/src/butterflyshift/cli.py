"""Command-line front end: critical / curves / equilibria / oracle / sweep.

Configuration is a flat key=value text file overridden by command-line flags
(flag wins).  All CSV output carries a header row and 15-significant-digit
floats; runs are deterministic.  Exit status: 0 success, 1 oracle FAIL,
2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from . import critical, oracle
from .model import ModelParams, build_graph
from .series import DEFAULT_TOL, riemann_zeta
from .svgchart import write_line_chart

THREADS_ENV = "BUTTERFLYSHIFT_THREADS"

EXIT_OK = 0
EXIT_ORACLE_FAIL = 1
EXIT_CONFIG = 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    beta_start: float = 0.0
    beta_stop: float = 1.2
    beta_step: float = 0.01
    series_tol: float = DEFAULT_TOL
    root_tol: float = 1e-12
    n_return: int = 22
    n_period: int = 12
    n_ln: int = 20
    out: str | None = None
    svg: bool = False
    deterministic_reduction: bool = True

    def __post_init__(self) -> None:
        if self.beta_start < 0:
            raise ConfigError("beta_start must be >= 0")
        if self.beta_step <= 0:
            raise ConfigError("beta_step must be > 0")
        if self.series_tol <= 0 or self.root_tol <= 0:
            raise ConfigError("tolerances must be positive")
        if not (1 <= self.n_return <= oracle.RAW_HORIZON_CAP):
            raise ConfigError(f"n_return must be in 1..{oracle.RAW_HORIZON_CAP}")
        if not (3 <= self.n_period <= oracle.PERIOD_CAP):
            raise ConfigError(f"n_period must be in 3..{oracle.PERIOD_CAP}")
        if not (2 <= self.n_ln <= 20):
            raise ConfigError("n_ln must be in 2..20")


_PARAM_KEYS = {"alpha": float, "gamma": float, "delta": float, "epsilon": float,
               "L": int, "variant": str}
_CONFIG_KEYS = {"beta_start": float, "beta_stop": float, "beta_step": float,
                "series_tol": float, "root_tol": float, "n_return": int,
                "n_period": int, "n_ln": int, "out": str, "svg": bool,
                "deterministic_reduction": bool}


def _parse_bool(v: str) -> bool:
    if v.lower() in ("1", "true", "yes", "on"):
        return True
    if v.lower() in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {v!r}")


def read_config_file(path: str) -> dict:
    values: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key in _PARAM_KEYS:
            typ = _PARAM_KEYS[key]
        elif key in _CONFIG_KEYS:
            typ = _CONFIG_KEYS[key]
        else:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _parse_bool(val) if typ is bool else typ(val)
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    return values


def build_run_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config:
        values.update(read_config_file(args.config))
    for key in (*_PARAM_KEYS, *_CONFIG_KEYS):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    try:
        params = ModelParams(
            alpha=values.get("alpha", 1.0),
            gamma=values.get("gamma", 0.5),
            delta=values.get("delta", 1.0),
            epsilon=values.get("epsilon", 1.0),
            L=values.get("L", 1),
            variant=values.get("variant", "A"),
        )
        return RunConfig(params=params,
                         **{k: values[k] for k in _CONFIG_KEYS if k in values})
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.15g}"
    return str(x)


def _write_csv(path: str | None, header: list[str], rows: list[list]) -> None:
    fh = open(path, "w", newline="", encoding="utf-8") if path else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    finally:
        if path:
            fh.close()


def _thread_map(fn, items):
    try:
        workers = int(os.environ.get(THREADS_ENV, "1") or "1")
    except ValueError:
        workers = 1
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))  # map preserves input order


def _beta_grid(cfg: RunConfig) -> list[float]:
    grid = []
    k = 0
    while True:
        b = cfg.beta_start + k * cfg.beta_step
        if b > cfg.beta_stop + 1e-12:
            break
        grid.append(round(b, 12))
        k += 1
    return grid


# ---------------------------------------------------------------------------
# subcommands

def cmd_critical(cfg: RunConfig) -> int:
    crit = critical.critical_set(cfg.params, cfg.series_tol)
    eb_lo = cfg.params.epsilon * crit.beta_lo
    eb_hi = cfg.params.epsilon * crit.beta_hi
    zeta_lo = riemann_zeta(eb_lo) if eb_lo > 1 else math.inf
    lo_name, hi_name = ("beta_1", "beta_c") if cfg.params.variant == "A" else ("beta_2", "beta_c_prime")
    print(f"{lo_name} = {_fmt(crit.beta_lo)}   (residual {_fmt(crit.residual_lo)})")
    print(f"{hi_name} = {_fmt(crit.beta_hi)}   (residual {_fmt(crit.residual_hi)})")
    print(f"eps*{lo_name} = {_fmt(eb_lo)}")
    print(f"eps*{hi_name} = {_fmt(eb_hi)}")
    print(f"zeta(eps*{lo_name}) = {_fmt(zeta_lo)}")
    if cfg.out:
        _write_csv(cfg.out,
                   ["beta_lo", "beta_hi", "residual_lo", "residual_hi",
                    "eps_beta_lo", "eps_beta_hi", "zeta_eps_beta_lo"],
                   [[crit.beta_lo, crit.beta_hi, crit.residual_lo, crit.residual_hi,
                     eb_lo, eb_hi, zeta_lo]])
    return EXIT_OK


def cmd_curves(cfg: RunConfig) -> int:
    grid = _beta_grid(cfg)
    samples = _thread_map(lambda b: critical.pressure_sample(cfg.params, b, cfg.series_tol),
                          grid)
    rows = [[s.beta, s.p34, s.p_mid, s.p_full, s.ztilde, s.regime] for s in samples]
    _write_csv(cfg.out, ["beta", "p34", "p_mid", "p_full", "ztilde", "regime"], rows)
    if cfg.svg:
        crit = critical.critical_set(cfg.params, cfg.series_tol)
        svg_path = (os.path.splitext(cfg.out)[0] + ".svg") if cfg.out else "curves.svg"
        write_line_chart(
            svg_path,
            f"pressure curves (variant {cfg.params.variant})",
            "beta", "pressure",
            [("P_full", grid, [s.p_full for s in samples]),
             ("P_mid", grid, [s.p_mid for s in samples]),
             ("P_34", grid, [s.p34 for s in samples])],
            vlines=[(crit.beta_lo, "beta_lo"), (crit.beta_hi, "beta_hi")],
        )
        print(f"wrote {svg_path}", file=sys.stderr)
    return EXIT_OK


def cmd_equilibria(cfg: RunConfig, beta_star: float | None) -> int:
    rows = []
    for which in ("at_beta_lo", "at_beta_hi"):
        rep = critical.equilibrium_report(cfg.params, which, beta_star=beta_star,
                                          tol=cfg.series_tol)
        cyl = "[32]" if which == "at_beta_lo" else "[1]"
        rel = ">" if rep.eps_beta > 2 else "<="
        verdict = (f"eps*beta {rel} 2: "
                   + (f"at least {rep.count_lower_bound} equilibrium states; "
                      if rep.count_lower_bound > 1 else "unique equilibrium state; ")
                   + (f"weight on {cyl}" if rep.weight_on_cylinder
                      else f"no equilibrium state gives weight to {cyl}"))
        print(f"{which}: beta* = {_fmt(rep.beta_star)}  eps*beta = {_fmt(rep.eps_beta)}")
        print(f"  return-time derivative finite: {rep.return_time_derivative_finite}")
        print(f"  {verdict}")
        rows.append([which, rep.beta_star, rep.eps_beta,
                     rep.return_time_derivative_finite, rep.count_lower_bound,
                     rep.weight_on_cylinder])
    if cfg.params.variant == "B":
        print("above beta_c': two equilibrium states (one per wing); pressure analytic")
    if cfg.out:
        _write_csv(cfg.out,
                   ["which", "beta_star", "eps_beta", "return_time_derivative_finite",
                    "count_lower_bound", "weight_on_cylinder"], rows)
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, corrupt_edge: str | None) -> int:
    params = cfg.params
    extra = []
    if corrupt_edge:
        try:
            a, _, b = corrupt_edge.partition(":")
            extra.append((a.strip(), b.strip()))
        except Exception as exc:  # pragma: no cover - trivial parse
            raise ConfigError(f"bad --corrupt-edge {corrupt_edge!r}: {exc}") from exc
    graph = build_graph(params, extra_edges=extra)
    failures = []
    print(f"{'check':<28} {'analytic':>22} {'oracle':>22} {'gap':>12} {'bound':>12}  status")

    def report(name, analytic, enumerated, gap, bound, ok):
        status = "ok" if ok else "FAIL"
        if not ok:
            failures.append(name)
        print(f"{name:<28} {_fmt(analytic):>22} {_fmt(enumerated):>22} "
              f"{gap:>12.3e} {bound:>12.3e}  {status}")

    for n, enum, closed in oracle.check_Ln(params, 1.0, cfg.n_ln):
        ok = abs(enum - closed) <= 1e-11 * abs(closed)
        if not ok:
            failures.append(f"L_n n={n}")
    print(f"L_n closed form n=2..{cfg.n_ln}: "
          + ("all exact (<=1e-11 relative)" if not any(f.startswith("L_n") for f in failures)
             else "MISMATCH"))

    crit = critical.critical_set(params, cfg.series_tol)
    betas = [0.25, 0.5] if crit.beta_hi > 0.6 else [0.5 * crit.beta_hi]
    for b in betas:
        P = critical.pressure_full(params, b, cfg.series_tol)
        Z = P + 0.2
        cmp1 = oracle.enumerate_returns_to_1(params, b, Z, cfg.n_return, graph=graph)
        report(f"returns_to_1 beta={b:g}", cmp1.analytic, cmp1.enumerated_partial,
               cmp1.gap, cmp1.certified_tail, cmp1.consistent)
        Z32 = max(critical.pressure_34(params, b) + 0.3,
                  oracle.abscissa_32(params, b) + 0.2)
        n32 = min(cfg.n_return, 20)
        cmp2 = oracle.enumerate_returns_to_32(params, b, Z32, n32, graph=graph)
        report(f"returns_to_32 beta={b:g}", cmp2.analytic, cmp2.enumerated_partial,
               cmp2.gap, cmp2.certified_tail, cmp2.consistent)

    h_full = oracle.incidence_entropy(graph)
    p_full0 = critical.pressure_full(params, 0.0, cfg.series_tol)
    report("entropy vs P(0)", p_full0, h_full, p_full0 - h_full, 1e-8,
           abs(p_full0 - h_full) <= 1e-8)
    h_mid = oracle.incidence_entropy(graph, restrict_to=oracle.no_one_family(graph))
    p_mid0 = critical.pressure_mid(params, 0.0, cfg.series_tol)
    report("entropy vs P_mid(0)", p_mid0, h_mid, p_mid0 - h_mid, 1e-8,
           abs(p_mid0 - h_mid) <= 1e-8)

    b = 0.5 if crit.beta_hi > 0.6 else 0.5 * crit.beta_hi
    rich = oracle.richardson_orbit_pressure(params, b, cfg.n_period, graph=graph)
    P = critical.pressure_full(params, b, cfg.series_tol)
    report(f"periodic orbits beta={b:g}", P, rich, P - rich, 0.02, abs(P - rich) <= 0.02)

    if failures:
        print(f"FAIL ({len(failures)} checks): " + ", ".join(failures))
        return EXIT_ORACLE_FAIL
    print("PASS")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, param_name: str, values: list[float]) -> int:
    if param_name not in ("alpha", "gamma", "delta", "epsilon", "L"):
        raise ConfigError(f"cannot sweep parameter {param_name!r}")

    def one(v):
        v_typed = int(v) if param_name == "L" else float(v)
        p = replace(cfg.params, **{param_name: v_typed})
        crit = critical.critical_set(p, cfg.series_tol)
        eb_lo = p.epsilon * crit.beta_lo
        eb_hi = p.epsilon * crit.beta_hi
        zl = riemann_zeta(eb_lo) if eb_lo > 1 else math.inf
        return [v_typed, crit.beta_lo, crit.beta_hi, eb_lo, eb_hi, zl]

    rows = _thread_map(one, values)
    _write_csv(cfg.out, ["value", "beta_lo", "beta_hi", "eps_beta_lo",
                         "eps_beta_hi", "zeta_eps_beta_lo"], rows)
    return EXIT_OK


# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--variant", choices=["A", "B"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--L", type=int)
    p.add_argument("--beta-start", dest="beta_start", type=float)
    p.add_argument("--beta-stop", dest="beta_stop", type=float)
    p.add_argument("--beta-step", dest="beta_step", type=float)
    p.add_argument("--series-tol", dest="series_tol", type=float)
    p.add_argument("--root-tol", dest="root_tol", type=float)
    p.add_argument("--n-return", dest="n_return", type=int)
    p.add_argument("--n-period", dest="n_period", type=int)
    p.add_argument("--n-ln", dest="n_ln", type=int)
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--svg", action="store_const", const=True, default=None,
                   help="also write an SVG chart next to the CSV")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="butterflyshift",
        description="Pressure functions and phase transitions of two butterfly "
                    "subshifts, with brute-force verification oracles.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("critical", help="transition parameters beta_lo < beta_hi")
    _add_common(p)
    p = sub.add_parser("curves", help="CSV of P34 / P_mid / P_full over a beta grid")
    _add_common(p)
    p = sub.add_parser("equilibria", help="equilibrium count and cylinder-weight verdicts")
    _add_common(p)
    p.add_argument("--beta-star", dest="beta_star", type=float,
                   help="evaluate the criterion at this beta instead of the transitions")
    p = sub.add_parser("oracle", help="run the brute-force verification table")
    _add_common(p)
    p.add_argument("--corrupt-edge", dest="corrupt_edge",
                   help="test hook: add edge FROM:TO to the graph (negative control)")
    p = sub.add_parser("sweep", help="sweep one parameter, reporting the criticals")
    _add_common(p)
    p.add_argument("--param", required=True,
                   choices=["alpha", "gamma", "delta", "epsilon", "L"])
    p.add_argument("--values", required=True,
                   help="comma-separated parameter values")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_run_config(args)
        if args.command == "critical":
            return cmd_critical(cfg)
        if args.command == "curves":
            return cmd_curves(cfg)
        if args.command == "equilibria":
            return cmd_equilibria(cfg, args.beta_star)
        if args.command == "oracle":
            return cmd_oracle(cfg, args.corrupt_edge)
        if args.command == "sweep":
            values = [float(v) for v in args.values.split(",") if v.strip()]
            if not values:
                raise ConfigError("--values is empty")
            return cmd_sweep(cfg, args.param, values)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
