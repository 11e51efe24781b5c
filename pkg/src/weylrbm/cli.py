"""Batch entry point: ``weylrbm {info,verify,simulate,sweep,skew}``.

Exit codes: 0 success, 1 a gated check failed, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from weylrbm import io, rootsys, suites, weyl
from weylrbm.analysis import SWEEP_CHECKS, convergence_sweep
from weylrbm.sim import (BandwidthWarning, PathConfig, SkewConfig, estimate_Y, run_ensemble,
                         simulate_reflected, skew_bm_1d, skew_multidim_prototype)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    system: str = "B2"
    dt: float = 1e-4
    horizon: float = 1.0
    epsilon_coeff: float = 5.0
    n_paths: int = 200
    seed: int = 0
    output_dir: str = "out"
    checks: tuple = suites.DEFAULT_CHECKS

    def __post_init__(self):
        object.__setattr__(self, "checks", tuple(self.checks))
        try:
            spec = rootsys.RootSystemSpec.parse(self.system)
        except rootsys.RootSystemError as exc:
            raise ConfigError(str(exc)) from exc
        object.__setattr__(self, "system", str(spec))
        if not (self.dt > 0 and self.horizon > 0 and self.dt < self.horizon):
            raise ConfigError(f"need 0 < dt < horizon, got dt={self.dt}, horizon={self.horizon}")
        if self.epsilon_coeff <= 0:
            raise ConfigError("epsilon_coeff must be positive")
        if self.n_paths < 1:
            raise ConfigError("n_paths must be >= 1")
        unknown = [c for c in self.checks if c not in suites.CHECKS]
        if unknown:
            raise ConfigError(f"unknown check(s) {unknown}; available: {', '.join(suites.CHECKS)}")

    @property
    def epsilon(self) -> float:
        return self.epsilon_coeff * math.sqrt(self.dt)

    def path_config(self) -> PathConfig:
        return PathConfig(dt=self.dt, horizon=self.horizon, seed=self.seed)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            lines.append(f"{f.name}={','.join(v) if f.name == 'checks' else repr(v) if isinstance(v, float) else v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        raw = dict(_kv_pairs(text))
        return cls.from_mapping(raw)

    @classmethod
    def from_mapping(cls, raw: dict) -> "RunConfig":
        types = {f.name: f.type for f in fields(cls)}
        kw = {}
        for k, v in raw.items():
            if k not in types:
                raise ConfigError(f"unknown config key {k!r}")
            try:
                if k == "checks":
                    kw[k] = tuple(c.strip() for c in v.split(",") if c.strip()) if isinstance(v, str) else tuple(v)
                elif types[k] == "float":
                    kw[k] = float(v)
                elif types[k] == "int":
                    kw[k] = int(v)
                else:
                    kw[k] = str(v)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {k}: {v!r}") from exc
        return cls(**kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["checks"] = list(self.checks)
        return d


def load_config_file(path: str) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from exc
    if p.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{p}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{p}: top level must be an object")
        return data
    return dict(_kv_pairs(text))


def _kv_pairs(text):
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key=value, got {line!r}")
        k, v = line.split("=", 1)
        yield k.strip(), v.strip()


# flag name -> RunConfig field
_FLAGS = {"system": "system", "dt": "dt", "horizon": "horizon", "eps_coeff": "epsilon_coeff",
          "paths": "n_paths", "seed": "seed", "out": "output_dir", "checks": "checks"}


def resolve_config(args) -> RunConfig:
    raw = load_config_file(args.config) if getattr(args, "config", None) else {}
    for flag, key in _FLAGS.items():
        v = getattr(args, flag, None)
        if v is not None:
            raw[key] = v
    return RunConfig.from_mapping(raw)


# -- commands ------------------------------------------------------------------------------

def cmd_info(args) -> int:
    try:
        rs = rootsys.build_root_system(args.system)
    except rootsys.RootSystemError as exc:
        raise ConfigError(str(exc)) from exc
    gd = rootsys.gram_data(rs)
    group = weyl.enumerate_group(rs)
    table = weyl.orbit_table(group, rs)
    doc = {
        "system": str(rs.spec), "rank": rs.rank, "ambient_dim": rs.ambient_dim,
        "n_roots": len(rs.roots), "roots": rs.roots, "simple": rs.simple,
        "order": group.order, "gram": gd.gram, "gram_inverse": gd.gram_inv, "dual": gd.dual,
        "orbits": [{"seed": o.seed, "simple_count": o.simple_count,
                    "simple_members": list(o.simple_members), "n_positive": len(o.orbit_positives)}
                   for o in table],
    }
    if rs.rank == 2:
        doc["wedge_angle"] = rootsys.wedge_angle(gd)
        doc["wedge_angle_over_pi"] = doc["wedge_angle"] / math.pi
    print(json.dumps(io._plain(doc), indent=2))
    return 0


def _checks_for(cfg: RunConfig) -> list[suites.CheckResult]:
    specs = list(rootsys.family_matrix())
    if cfg.system not in {str(s) for s in specs}:
        specs.append(rootsys.RootSystemSpec.parse(cfg.system))
    results = suites.algebra_suite(specs, t_max=None, seed=cfg.seed)
    common = dict(dt=cfg.dt, horizon=cfg.horizon, n_paths=cfg.n_paths, seed=cfg.seed)
    per_system = dict(common, systems=(cfg.system,), eps_coeff=cfg.epsilon_coeff)
    kwargs = {
        "levy": common,
        "driving": per_system, "support": per_system, "corollary": per_system, "pushing": per_system,
        "skew": dict(common, systems=(cfg.system,)),
        "sweep": dict(system=cfg.system, n_paths=cfg.n_paths, eps_coeff=cfg.epsilon_coeff, seed=cfg.seed),
        "transience": dict(systems=(cfg.system,), n_paths=cfg.n_paths, seed=cfg.seed),
    }
    for name in cfg.checks:
        if name != "algebra":
            results += suites.run_check(name, **kwargs[name])
    return results


def cmd_verify(args) -> int:
    cfg = resolve_config(args)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = _checks_for(cfg)
    for r in results:
        print(r.line())
    failed = [r for r in results if r.gated and not r.passed]
    io.write_json(out / "verify_report.json",
                  {"config": cfg.to_dict(), "passed": not failed, "n_checks": len(results),
                   "n_failed": len(failed), "results": [r.to_dict() for r in results]}, kind="verify")
    rows = [{"name": r.name, "passed": r.passed, "gated": r.gated,
             **{k: v for k, v in r.detail.items() if np.isscalar(v)}} for r in results]
    io.write_report_csv(out / "verify_report.csv", rows)
    (out / "run_config.txt").write_text(cfg.to_text())
    print(f"{len(results) - len(failed)}/{len(results)} passed; reports in {out}")
    return 1 if failed else 0


def cmd_simulate(args) -> int:
    cfg = resolve_config(args)
    rs = rootsys.build_root_system(cfg.system)
    gd = rootsys.gram_data(rs)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    want_svg = args.svg
    if want_svg and rs.rank != 2:
        warnings.warn(f"--svg needs a rank-2 system, {cfg.system} has rank {rs.rank}; writing CSV only",
                      stacklevel=1)
        want_svg = False
    paths = run_ensemble(lambda c: simulate_reflected(rs, c), cfg.path_config(), cfg.n_paths)
    files = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BandwidthWarning)
        for k, p in enumerate(paths):
            est = estimate_Y(p, gd, cfg.epsilon)
            files.append(str(io.write_path_csv(out / f"path_{k:04d}.csv", p, est)))
            if want_svg:
                svg = out / f"path_{k:04d}.svg"
                svg.write_text(io.chamber_svg(p.pi_theta, rs.simple_span))
                files.append(str(svg))
    io.write_json(out / "simulate_manifest.json",
                  {"config": cfg.to_dict(), "columns": io.path_columns(rs.rank), "files": files},
                  kind="simulate")
    (out / "run_config.txt").write_text(cfg.to_text())
    print(f"wrote {len(files)} files to {out}")
    return 0


def cmd_sweep(args) -> int:
    cfg = resolve_config(args)
    if args.sweep_check not in SWEEP_CHECKS:
        raise ConfigError(f"unknown sweep check {args.sweep_check!r}; expected one of {SWEEP_CHECKS}")
    dts = [float(x) for x in args.dts.split(",")]
    if len(dts) < 3:
        raise ConfigError("--dts needs at least 3 values")
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BandwidthWarning)
        res = convergence_sweep(args.sweep_check, dts, eps_coeff=cfg.epsilon_coeff, system=cfg.system,
                                n_paths=cfg.n_paths, horizon=cfg.horizon, seed=cfg.seed)
    io.write_json(out / "sweep_report.json", {"config": cfg.to_dict(), **res.to_dict()}, kind="sweep")
    io.write_report_csv(out / "sweep_report.csv",
                        [{"dt": dt, **r.to_dict()} for dt, r in zip(res.dts, res.reports)])
    for dt, r in zip(res.dts, res.reports):
        print(f"dt={dt:g}  {r.name}={r.estimate:.4f} +- {r.std_error:.4f}")
    print(f"trend {'ok' if res.trend_ok else 'violated'}")
    return 0 if res.trend_ok else 1


def cmd_skew(args) -> int:
    cfg = resolve_config(args)
    if not 0.0 <= args.p <= 1.0:
        raise ConfigError("--p must lie in [0, 1]")
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.multidim:
        rs = rootsys.build_root_system(cfg.system)
        sk = skew_multidim_prototype(rs, SkewConfig(dt=cfg.dt, horizon=cfg.horizon, seed=cfg.seed),
                                     np.full(rs.rank, args.p))
        table = np.column_stack([sk.times, sk.values])
        header = "t," + ",".join(f"x_{i + 1}" for i in range(rs.rank))
        np.savetxt(out / "skew_path.csv", table, delimiter=",", header=header, comments="")
        kept = [e[2] for e in sk.events]
        payload = {"config": cfg.to_dict(), "p": args.p, "multidim": True, "n_events": len(kept),
                   "reflected_fraction": float(np.mean(kept)) if kept else None}
    else:
        runs = [skew_bm_1d(SkewConfig(p=args.p, dt=cfg.dt, horizon=cfg.horizon, seed=cfg.seed + k))
                for k in range(cfg.n_paths)]
        draws = np.concatenate([r.draws for r in runs]).astype(float)
        np.savetxt(out / "skew_path.csv", np.column_stack([runs[0].times, runs[0].values, runs[0].reflected]),
                   delimiter=",", header="t,x,abs_x", comments="")
        payload = {"config": cfg.to_dict(), "p": args.p, "multidim": False,
                   "n_draws": int(draws.size), "positive_fraction": float(draws.mean()) if draws.size else None,
                   "terminal_sign_mean": float(np.mean([np.sign(r.values[-1]) for r in runs])),
                   "qv_over_T_mean": float(np.mean([np.sum(np.diff(r.values) ** 2) / cfg.horizon for r in runs]))}
    io.write_json(out / "skew_report.json", payload, kind="skew")
    print(json.dumps(io._plain({k: v for k, v in payload.items() if k != "config"})))
    return 0


# -- parser --------------------------------------------------------------------------------

def _add_run_flags(p: argparse.ArgumentParser, with_checks: bool = False) -> None:
    d = RunConfig()
    # SUPPRESS keeps unset flags out of the namespace so config-file values survive
    p.add_argument("--config", help="key=value or .json config file; flags override it")
    p.add_argument("--system", default=argparse.SUPPRESS, help=f"root system, e.g. B2, A3, I2(5), orth4 (default: {d.system})")
    p.add_argument("--dt", type=float, default=argparse.SUPPRESS, help=f"time step (default: {d.dt:g})")
    p.add_argument("--horizon", type=float, default=argparse.SUPPRESS, help=f"time horizon T (default: {d.horizon:g})")
    p.add_argument("--paths", type=int, default=argparse.SUPPRESS, help=f"number of paths (default: {d.n_paths})")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=f"base seed; path k uses seed+k (default: {d.seed})")
    p.add_argument("--eps-coeff", dest="eps_coeff", type=float, default=argparse.SUPPRESS,
                   help=f"bandwidth eps = coeff * sqrt(dt) (default: {d.epsilon_coeff:g})")
    p.add_argument("--out", default=argparse.SUPPRESS, help=f"output directory (default: {d.output_dir})")
    if with_checks:
        p.add_argument("--checks", default=argparse.SUPPRESS,
                       help=f"comma list from {', '.join(suites.CHECKS)}; algebra always runs "
                            f"(default: {','.join(d.checks)})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weylrbm", description="Brownian motion folded into a Weyl chamber.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="print root system data as JSON")
    p.add_argument("--system", default="B2", help="root system (default: B2)")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("verify", help="run verification suites and write reports")
    _add_run_flags(p, with_checks=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="write per-path CSV files and optional SVG plots")
    _add_run_flags(p)
    p.add_argument("--svg", action="store_true", help="also write an SVG per path (rank 2 only)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="convergence study over a dt grid")
    _add_run_flags(p)
    p.add_argument("--sweep-check", default="corollary", help=f"one of {SWEEP_CHECKS} (default: corollary)")
    p.add_argument("--dts", default="1e-3,1e-4,1e-5", help="comma list of dt values (default: 1e-3,1e-4,1e-5)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("skew", help="simulate skew Brownian motion")
    _add_run_flags(p)
    p.add_argument("--p", type=float, default=0.5, help="probability of the positive side (default: 0.5)")
    p.add_argument("--multidim", action="store_true", help="run the chamber prototype with p on every wall")
    p.set_defaults(func=cmd_skew)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
