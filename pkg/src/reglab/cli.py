"""Command line surface: configuration, scenario orchestration, reporting.

Configuration is a flat ``key = value`` file (``#`` comments allowed);
every CLI flag overrides its config key.  All outputs are deterministic
functions of the declared seed and settings.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from . import io
from .oracles import full_partition, qv_partition
from .paths import (
    SamplePath,
    cantor_clock,
    make_grid,
    sample_bm,
    sample_fbm,
    sample_volterra,
)
from .regularize import (
    DEFAULT_LADDER,
    eps_ladder,
    fit_loglog_slope,
    functional_family,
)
from .scenarios import SCENARIOS, RunSettings, run_scenario
from .young import holder_norm, smooth_eps

_CONFIG_KEYS = {
    "seed": int,
    "grid_n": int,
    "horizon": float,
    "ensemble": int,
    "eps_ladder": str,
    "scenarios": str,
    "out": str,
    "quadrature": str,
}


@dataclass(frozen=True)
class RunConfig:
    seed: int
    grid_n: int = 4096
    horizon: float = 1.0
    ensemble: int = 200
    eps_ladder: tuple[int, ...] = DEFAULT_LADDER
    scenarios: tuple[str, ...] = ()  # empty = all
    out: str = "runs"
    quadrature: str | None = None
    thresholds: dict = field(default_factory=dict)  # (scenario, metric) -> float

    def validate(self) -> "RunConfig":
        make_grid(self.horizon, self.grid_n)  # grid preconditions
        eps_ladder(make_grid(self.horizon, self.grid_n), self.eps_ladder)
        if self.ensemble < 1:
            raise ValueError("ensemble size must be positive")
        if self.quadrature not in (None, "grid", "jittered"):
            raise ValueError(f"quadrature must be grid or jittered, got {self.quadrature!r}")
        for sid in self.scenarios:
            if sid not in SCENARIOS:
                raise ValueError(
                    f"unknown scenario {sid!r}; known: {', '.join(sorted(SCENARIOS))}"
                )
        return self


def parse_config(text: str) -> RunConfig:
    """Parse the flat key-value config format.

    Unknown keys, duplicate keys, missing ``seed`` and type mismatches are
    all hard errors.
    """
    seen: dict[str, str] = {}
    thresholds: dict = {}
    unknown: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key.startswith("threshold."):
            parts = key.split(".")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: thresholds use threshold.<scenario>.<metric>")
            if key in thresholds:
                raise ValueError(f"duplicate key {key!r}")
            try:
                thresholds[(parts[1], parts[2])] = float(value)
            except ValueError:
                raise ValueError(f"key {key!r}: expected a float, got {value!r}") from None
            continue
        if key not in _CONFIG_KEYS:
            unknown.append(key)
            continue
        if key in seen:
            raise ValueError(f"duplicate key {key!r}")
        seen[key] = value
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    if "seed" not in seen:
        raise ValueError("missing required key 'seed'")

    kwargs: dict = {"thresholds": thresholds}
    for key, value in seen.items():
        typ = _CONFIG_KEYS[key]
        if key == "eps_ladder":
            kwargs[key] = _parse_ladder(value)
        elif key == "scenarios":
            kwargs[key] = tuple(s.strip() for s in value.split(",") if s.strip())
        elif key == "quadrature":
            kwargs[key] = value
        else:
            try:
                kwargs[key] = typ(value)
            except ValueError:
                raise ValueError(f"key {key!r}: expected {typ.__name__}, got {value!r}") from None
    return RunConfig(**kwargs).validate()


def render_config(cfg: RunConfig) -> str:
    """Inverse of parse_config (modulo comments)."""
    lines = [
        f"seed = {cfg.seed}",
        f"grid_n = {cfg.grid_n}",
        f"horizon = {cfg.horizon!r}",
        f"ensemble = {cfg.ensemble}",
        f"eps_ladder = {','.join(str(m) for m in cfg.eps_ladder)}",
        f"out = {cfg.out}",
    ]
    if cfg.scenarios:
        lines.append(f"scenarios = {','.join(cfg.scenarios)}")
    if cfg.quadrature is not None:
        lines.append(f"quadrature = {cfg.quadrature}")
    for (sid, metric), v in cfg.thresholds.items():
        lines.append(f"threshold.{sid}.{metric} = {v!r}")
    return "\n".join(lines) + "\n"


def _parse_ladder(value: str) -> tuple[int, ...]:
    try:
        mult = tuple(int(v.strip()) for v in value.split(",") if v.strip())
    except ValueError:
        raise ValueError(f"eps_ladder must be a comma list of integers, got {value!r}") from None
    return mult


def _settings_for(cfg: RunConfig, scenario_id: str) -> RunSettings:
    thr = {m: v for (sid, m), v in cfg.thresholds.items() if sid == scenario_id}
    return RunSettings(
        grid=make_grid(cfg.horizon, cfg.grid_n),
        ensemble=cfg.ensemble,
        seed=cfg.seed,
        multipliers=cfg.eps_ladder,
        quadrature=cfg.quadrature,
        thresholds=thr,
    )


def _load_config(args) -> RunConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
    else:
        if args.seed is None:
            raise ValueError("either --config or --seed is required")
        cfg = RunConfig(seed=args.seed)
    overrides: dict = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if getattr(args, "grid_n", None) is not None:
        overrides["grid_n"] = args.grid_n
    if getattr(args, "horizon", None) is not None:
        overrides["horizon"] = args.horizon
    if getattr(args, "ensemble", None) is not None:
        overrides["ensemble"] = args.ensemble
    if getattr(args, "eps_ladder", None) is not None:
        overrides["eps_ladder"] = _parse_ladder(args.eps_ladder)
    if getattr(args, "scenario", None):
        overrides["scenarios"] = tuple(s.strip() for s in args.scenario.split(","))
    if getattr(args, "out", None) is not None:
        overrides["out"] = args.out
    if getattr(args, "quadrature", None) is not None:
        overrides["quadrature"] = args.quadrature
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg.validate()


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--seed", type=int, help="master seed (required unless in config)")
    p.add_argument("--grid-n", dest="grid_n", type=int, help="number of grid steps")
    p.add_argument("--horizon", type=float, help="time horizon T")
    p.add_argument("--ensemble", type=int, help="number of Monte-Carlo paths")
    p.add_argument("--eps-ladder", dest="eps_ladder", help="comma list of eps/dt multipliers")
    p.add_argument("--out", help="output directory")
    p.add_argument("--quadrature", choices=["grid", "jittered"], help="ds-quadrature override")


def _cmd_scenario(args) -> int:
    if args.action != "run":
        raise ValueError(f"unknown scenario action {args.action!r} (expected 'run')")
    cfg = _load_config(args)
    if cfg.scenarios:
        ids = list(cfg.scenarios)
    elif args.all:
        ids = list(SCENARIOS)
    else:
        raise ValueError("select scenarios with --scenario ID[,ID...] or --all")
    os.makedirs(cfg.out, exist_ok=True)
    ok = True
    for sid in ids:
        result = run_scenario(sid, _settings_for(cfg, sid))
        io.write_scenario_result(cfg.out, result)
        for row in result.rows:
            print(
                f"{row.scenario:<24} {row.metric:<32} value={row.value:.6g} "
                f"threshold={row.threshold:.6g} {row.verdict}"
            )
        ok = ok and result.all_passed
    return 0 if ok else 1


def _cmd_report(args) -> int:
    out_dir = args.out or "runs"
    rows = io.collect_summaries(out_dir)
    md = io.render_markdown(rows)
    with open(os.path.join(out_dir, "report.md"), "w") as fh:
        fh.write(md)
    print(md, end="")
    return 0


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    g = make_grid(cfg.horizon, cfg.grid_n)
    os.makedirs(cfg.out, exist_ok=True)
    for i in range(args.count):
        if args.process == "bm":
            p = sample_bm(g, cfg.seed, i)
        elif args.process == "fbm":
            p = sample_fbm(g, args.hurst, cfg.seed, i)
        elif args.process == "volterra":
            p = sample_volterra(g, cfg.seed, i)[0]
        elif args.process == "cantor":
            p = cantor_clock(g, args.depth)
        else:
            raise ValueError(f"unknown process {args.process!r}")
        path = os.path.join(cfg.out, f"{args.process}_path_{i}.csv")
        with open(path, "w") as fh:
            fh.write("t,value\n")
            for t, v in zip(g.times, p.values):
                fh.write(f"{io.fmt(t)},{io.fmt(v)}\n")
        print(path)
    return 0


def _member_paths(cfg: RunConfig, g, args):
    for i in range(cfg.ensemble):
        if args.process == "fbm":
            yield i, sample_fbm(g, args.hurst, cfg.seed, i)
        elif args.process == "volterra":
            yield i, sample_volterra(g, cfg.seed, i)[0]
        else:
            yield i, sample_bm(g, cfg.seed, i)


def _cmd_integrate(args) -> int:
    cfg = _load_config(args)
    g = make_grid(cfg.horizon, cfg.grid_n)
    ladder = eps_ladder(g, cfg.eps_ladder)
    os.makedirs(cfg.out, exist_ok=True)
    rows = []
    for i, x in _member_paths(cfg, g, args):
        y = 1.0 if args.integrand == "unit" else x
        fam = functional_family(
            y, x, ladder, args.kind,
            cfg.quadrature or "grid",
            None if (cfg.quadrature or "grid") == "grid" else cfg.seed + i,
        )
        for e, c in zip(fam.eps, fam.curves):
            rows.extend((i, e, t, v) for t, v in zip(g.times, c.values))
    out = os.path.join(cfg.out, f"integrate_{args.kind}.csv")
    io.write_curves_csv(out, rows)
    print(out)
    return 0


def _cmd_qv(args) -> int:
    cfg = _load_config(args)
    g = make_grid(cfg.horizon, cfg.grid_n)
    ladder = eps_ladder(g, cfg.eps_ladder)
    os.makedirs(cfg.out, exist_ok=True)
    rows = []
    end_values = {e: [] for e in ladder}
    qv_cross = []
    for i, x in _member_paths(cfg, g, args):
        fam = functional_family(x, x, ladder, "cov")
        qv_cross.append(qv_partition(x, full_partition(g)).values[-1])
        for e, c in zip(fam.eps, fam.curves):
            end_values[e].append(c.values[-1])
            if i < 2:
                rows.extend((i, e, t, v) for t, v in zip(g.times, c.values))
    out = os.path.join(cfg.out, "qv_curves.csv")
    io.write_curves_csv(out, rows)
    for e in ladder:
        print(f"eps={e:.8g} median_bracket_at_T={np.median(end_values[e]):.6g}")
    print(f"partition_qv_median_at_T={np.median(qv_cross):.6g}")
    print(out)
    return 0


def _cmd_levy(args) -> int:
    cfg = _load_config(args)
    g = make_grid(cfg.horizon, cfg.grid_n)
    ladder = eps_ladder(g, cfg.eps_ladder)
    os.makedirs(cfg.out, exist_ok=True)
    rows = []
    for i in range(cfg.ensemble):
        x = sample_bm(g, cfg.seed, 2 * i)
        y = sample_bm(g, cfg.seed, 2 * i + 1)
        fam = functional_family(x, y, ladder, "levy")
        if i < 2:
            for e, c in zip(fam.eps, fam.curves):
                rows.extend((i, e, t, v) for t, v in zip(g.times, c.values))
    out = os.path.join(cfg.out, "levy_curves.csv")
    io.write_curves_csv(out, rows)
    print(out)
    return 0


def _cmd_young(args) -> int:
    cfg = _load_config(args)
    g = make_grid(cfg.horizon, cfg.grid_n)
    ladder = eps_ladder(g, cfg.eps_ladder)
    os.makedirs(cfg.out, exist_ok=True)
    z = sample_fbm(g, args.hurst, cfg.seed, 0)
    alphas = sorted({0.25, 0.5, max(args.hurst - 0.01, 0.05)})
    with open(os.path.join(cfg.out, "holder.csv"), "w") as fh:
        fh.write("alpha,N_alpha,s_star,t_star\n")
        for a in alphas:
            est = holder_norm(z, a)
            fh.write(f"{io.fmt(a)},{io.fmt(est.norm)},{io.fmt(est.s_star)},{io.fmt(est.t_star)}\n")
    norms = []
    with open(os.path.join(cfg.out, "smoothing.csv"), "w") as fh:
        fh.write("eps,holder_gap\n")
        for e in ladder:
            n = holder_norm(SamplePath(g, smooth_eps(z, e).values - z.values), args.gamma_prime).norm
            norms.append(n)
            fh.write(f"{io.fmt(e)},{io.fmt(n)}\n")
    slope, _, _ = fit_loglog_slope(ladder, norms)
    print(f"smoothing_decay_slope={slope:.4f}")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="reglab",
        description="Monte-Carlo checks of regularized stochastic integrals",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample paths to CSV")
    _add_common(p)
    p.add_argument("--process", choices=["bm", "fbm", "volterra", "cantor"], default="bm")
    p.add_argument("--hurst", type=float, default=0.7)
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("integrate", help="directed eps-functionals along the ladder")
    _add_common(p)
    p.add_argument("--kind", choices=["forward", "backward", "symmetric"], default="forward")
    p.add_argument("--process", choices=["bm", "fbm", "volterra"], default="bm")
    p.add_argument("--hurst", type=float, default=0.7)
    p.add_argument("--integrand", choices=["self", "unit"], default="self")
    p.set_defaults(fn=_cmd_integrate)

    p = sub.add_parser("qv", help="bracket ladder plus partition cross-oracle")
    _add_common(p)
    p.add_argument("--process", choices=["bm", "fbm", "volterra"], default="bm")
    p.add_argument("--hurst", type=float, default=0.7)
    p.set_defaults(fn=_cmd_qv)

    p = sub.add_parser("levy", help="area functional of two independent Brownian paths")
    _add_common(p)
    p.set_defaults(fn=_cmd_levy)

    p = sub.add_parser("young", help="Hoelder norms and smoothing decay")
    _add_common(p)
    p.add_argument("--hurst", type=float, default=0.6)
    p.add_argument("--gamma-prime", dest="gamma_prime", type=float, default=0.5)
    p.set_defaults(fn=_cmd_young)

    p = sub.add_parser("scenario", help="run named verification scenarios")
    p.add_argument("action", choices=["run"])
    _add_common(p)
    p.add_argument("--scenario", help="comma list of scenario ids")
    p.add_argument("--all", action="store_true", help="run every scenario")
    p.set_defaults(fn=_cmd_scenario)

    p = sub.add_parser("report", help="aggregate summaries into markdown")
    p.add_argument("--out", help="output directory to scan", default="runs")
    p.set_defaults(fn=_cmd_report)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
