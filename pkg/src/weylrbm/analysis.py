"""Convergence sweeps in (dt, eps) and the transience proxy."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.special import gammaln

from weylrbm.rootsys import RootSystem, build_root_system, gram_data, wedge_angle
from weylrbm.sim.checks import corollary_check, orbit_local_times, verify_driving_bm
from weylrbm.sim.estimators import estimate_Y
from weylrbm.sim.paths import (PathConfig, interior_point, run_ensemble, simulate_brownian,
                               simulate_reflected)
from weylrbm.stats import StatReport, ks_critical, ks_two_sample, mean_se
from weylrbm.weyl import enumerate_group, orbit_of_simple, project_points

__all__ = ["SWEEP_CHECKS", "StatReport", "SweepResult", "TransienceReport", "convergence_sweep",
           "gaussian_norm_mean", "ks_critical", "ks_two_sample", "mean_se", "sweep_cell",
           "transience_check", "with_start_distance"]

SWEEP_CHECKS = ("corollary", "driving_qv")


@dataclass
class SweepResult:
    check: str
    system: str
    eps_coeff: float
    dts: list
    reports: list = field(default_factory=list)
    trend_ok: bool = False

    @property
    def errors(self) -> list:
        return [r.estimate for r in self.reports]

    def to_dict(self):
        d = asdict(self)
        d["reports"] = [r.to_dict() for r in self.reports]
        return d


def _trend(errors, ses) -> bool:
    # non-increasing up to one standard error of slack per step, and net decrease
    ok = all(b <= a + s for a, b, s in zip(errors, errors[1:], ses[1:]))
    return ok and errors[-1] <= errors[0]


def sweep_cell(check: str, rs: RootSystem, dt: float, eps_coeff: float, n_paths: int,
               horizon: float, seed: int, start=None, tolerance: float = 0.10,
               workers: int = 1) -> StatReport:
    gd = gram_data(rs)
    eps = eps_coeff * math.sqrt(dt)
    cfg = PathConfig(dt=dt, horizon=horizon, seed=seed, start=start)
    paths = run_ensemble(lambda c: simulate_reflected(rs, c), cfg, n_paths, workers)
    ests = [estimate_Y(p, gd, eps) for p in paths]
    name = f"{check}@dt={dt:g}"
    if check == "corollary":
        group = enumerate_group(rs)
        res = [r for r in corollary_check(rs, group, gd, paths, eps, ests) if r.applicable]
        if not res:
            return StatReport.evaluate(name, n_paths, float("nan"), float("nan"), 0.0, tolerance)
        worst = max(res, key=lambda r: r.rel_error)
        i = worst.index
        # per-path spread of the overlap, scaled like the relative error
        se = _corollary_se(rs, group, paths, ests, eps, i) / worst.y_mean
        return StatReport.evaluate(name, n_paths, worst.rel_error, se, 0.0, tolerance)
    if check == "driving_qv":
        reps = [r for r in verify_driving_bm(ests, horizon) if r.name.startswith("qv_over_T")]
        err = max(abs(r.estimate - 1.0) for r in reps)
        se = max(r.std_error for r in reps)
        return StatReport.evaluate(name, n_paths, err, se, 0.0, 0.05)
    raise ValueError(f"unknown sweep check {check!r}; expected one of {SWEEP_CHECKS}")


def _corollary_se(rs, group, paths, ests, eps, i) -> float:
    orbit = orbit_of_simple(group, rs, i)
    diffs = [orbit_local_times(p, orbit.orbit_positives, eps)[0][-1] - e.y_curves[-1, i]
             for p, e in zip(paths, ests)]
    return mean_se(diffs)[1]


def convergence_sweep(check: str, dts, eps_coeff: float = 5.0, system: str = "B2",
                      n_paths: int = 200, horizon: float = 1.0, seed: int = 0,
                      start=None, workers: int = 1) -> SweepResult:
    """Run ``check`` at each dt with eps = eps_coeff * sqrt(dt) and flag a decreasing error."""
    dts = [float(d) for d in dts]
    if len(dts) < 3:
        raise ValueError("a sweep needs at least 3 grid points")
    if check not in SWEEP_CHECKS:
        raise ValueError(f"unknown sweep check {check!r}; expected one of {SWEEP_CHECKS}")
    rs = build_root_system(system)
    reports = [sweep_cell(check, rs, dt, eps_coeff, n_paths, horizon, seed, start, workers=workers)
               for dt in dts]
    res = SweepResult(check=check, system=system, eps_coeff=eps_coeff, dts=dts, reports=reports)
    res.trend_ok = _trend([r.estimate for r in reports], [r.std_error for r in reports])
    return res


def gaussian_norm_mean(rank: int, variance: float) -> float:
    """E|N(0, variance I_rank)| = sqrt(2 variance) Gamma((r+1)/2) / Gamma(r/2)."""
    return math.sqrt(2 * variance) * math.exp(gammaln((rank + 1) / 2) - gammaln(rank / 2))


@dataclass
class TransienceReport:
    system: str
    n_paths: int
    horizon: float
    max_norm_error: float
    growth_fraction: float
    norm_mean: StatReport
    min_ratio_mean: float
    wedge_angle: float | None

    @property
    def norm_identity_ok(self) -> bool:
        return self.max_norm_error <= 1e-8

    @property
    def growth_ok(self) -> bool:
        return bool(self.growth_fraction > 0.5)

    def to_dict(self):
        d = asdict(self)
        d["norm_mean"] = self.norm_mean.to_dict()
        d["norm_identity_ok"] = self.norm_identity_ok
        d["growth_ok"] = self.growth_ok
        return d


def transience_check(rs: RootSystem, cfg: PathConfig, n_paths: int = 500) -> TransienceReport:
    """Norm preservation plus a finite-horizon proxy for escape to infinity.

    Reports the fraction of paths with |pi(theta_T)| > |pi(theta_{T/2})| and
    the mean of min_{[T/2, T]} |pi(theta)| / |pi(theta_{T/2})|.
    """
    if rs.rank < 2:
        raise ValueError("transience proxy needs rank >= 2")
    start = cfg.start_vector(rs.rank)
    n = cfg.n_steps
    half = n // 2
    err, grow, ratio, final = 0.0, 0, [], []
    for k in range(n_paths):
        theta = simulate_brownian(cfg.with_seed(cfg.seed + k), rs.rank).theta
        pi = project_points(rs, theta)
        r_pi = np.linalg.norm(pi, axis=1)
        err = max(err, float(np.max(np.abs(r_pi - np.linalg.norm(theta, axis=1)))))
        grow += int(r_pi[-1] > r_pi[half])
        ratio.append(r_pi[half:].min() / r_pi[half])
        final.append(r_pi[-1])
    m, se = mean_se(final)
    oracle = gaussian_norm_mean(rs.rank, cfg.horizon) if not np.any(start) else float("nan")
    norm_rep = StatReport.evaluate("final_norm_mean", n_paths, m, se, oracle, 3 * se)
    angle = wedge_angle(gram_data(rs)) if rs.rank == 2 else None
    return TransienceReport(system=str(rs.spec), n_paths=n_paths, horizon=cfg.horizon,
                            max_norm_error=err, growth_fraction=float(grow / n_paths),
                            norm_mean=norm_rep, min_ratio_mean=float(np.mean(ratio)),
                            wedge_angle=angle)


def with_start_distance(cfg: PathConfig, rs: RootSystem, distance: float) -> PathConfig:
    return replace(cfg, start=tuple(interior_point(gram_data(rs), distance)))
