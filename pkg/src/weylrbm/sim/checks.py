"""Ensemble checks of the reflected-process identities."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from weylrbm.rootsys import GramData, RootSystem
from weylrbm.sim.estimators import (PushingEstimate, estimate_local_time_1d, estimate_Y,
                                    occupation_local_time)
from weylrbm.sim.paths import PathConfig, ReflectedPath, brownian_from
from weylrbm.stats import StatReport, ks_critical, ks_two_sample, mean_se
from weylrbm.weyl import WeylGroup, orbit_of_simple, project_points_enumerated


def verify_driving_bm(estimates: list[PushingEstimate], horizon: float,
                      qv_tol: float = 0.05) -> list[StatReport]:
    """Quadratic variation, centring and independence of the recovered driving process."""
    n = len(estimates)
    drv = np.stack([pe.driving for pe in estimates])        # (paths, steps+1, rank)
    inc = np.diff(drv, axis=1)
    rank = drv.shape[2]
    reports = []
    for a in range(rank):
        qv = np.sum(inc[:, :, a] ** 2, axis=1) / horizon
        m, se = mean_se(qv)
        reports.append(StatReport.evaluate(f"qv_over_T[{a}]", n, m, se, 1.0, qv_tol))
    for a in range(rank):
        m, se = mean_se(drv[:, -1, a])
        reports.append(StatReport.evaluate(f"increment_mean[{a}]", n, m, se, 0.0, 3 * se))
    for a in range(rank):
        for b in range(a + 1, rank):
            cq = np.sum(inc[:, :, a] * inc[:, :, b], axis=1) / horizon
            m, se = mean_se(cq)
            reports.append(StatReport.evaluate(f"cross_qv[{a},{b}]", n, m, se, 0.0, qv_tol))
    half = drv.shape[1] // 2
    for a in range(rank):
        first = drv[:, half, a] - drv[:, 0, a]
        second = drv[:, -1, a] - drv[:, half, a]
        r = float(np.corrcoef(first, second)[0, 1])
        se = 1.0 / math.sqrt(n)
        reports.append(StatReport.evaluate(f"disjoint_increment_corr[{a}]", n, r, se, 0.0, 3 * se))
    return reports


def martingale_part(path: ReflectedPath, group: WeylGroup, rs: RootSystem) -> np.ndarray:
    """Discrete stochastic integral sum_k w_k^* (theta_{k+1} - theta_k), w_k locating theta_k.

    Independent of any slab estimator; ``pi - pi_0 - martingale_part`` is the
    exact discrete pushing of the folded walk.
    """
    _, which = project_points_enumerated(group, rs.simple_span, path.theta[:-1])
    mats = group.matrices[which]
    inc = np.einsum("kji,kj->ki", mats, np.diff(path.theta, axis=0))
    out = np.zeros_like(path.theta)
    np.cumsum(inc, axis=0, out=out[1:])
    return out


@dataclass
class CorollaryResult:
    index: int
    applicable: bool
    n_paths: int = 0
    y_mean: float = float("nan")
    local_sum_mean: float = float("nan")
    rel_error: float = float("nan")
    overlap_mean: float = float("nan")
    reason: str = ""

    def to_dict(self):
        return asdict(self)


def orbit_local_times(path: ReflectedPath, orbit_positives: np.ndarray, epsilon: float):
    """Sum of two-sided local times of <alpha, theta> over the orbit, and the overlap mass.

    The overlap is the part of that sum coming from steps where two or more
    slabs ``{|<alpha, theta>| <= eps}`` hold at once.
    """
    vals = path.theta @ orbit_positives.T
    rates = np.einsum("ij,ij->i", orbit_positives, orbit_positives)
    total = np.zeros(len(vals))
    for k, alpha_rate in enumerate(rates):
        total += estimate_local_time_1d(vals[:, k], path.dt, epsilon, alpha_rate)
    hits = np.sum(np.abs(vals) <= epsilon, axis=1)
    extra = np.maximum(hits - 1, 0)
    overlap = rates[0] / (2 * epsilon) * path.dt * np.sum(extra[:-1])
    return total, float(overlap)


def corollary_check(rs: RootSystem, group: WeylGroup, gd: GramData, paths: list[ReflectedPath],
                    epsilon: float, estimates: list[PushingEstimate] | None = None) -> list[CorollaryResult]:
    """Compare Y_i(T) with the summed local times over the orbit's positive roots."""
    if estimates is None:
        estimates = [estimate_Y(p, gd, epsilon) for p in paths]
    results = []
    for i in range(rs.rank):
        orbit = orbit_of_simple(group, rs, i)
        if orbit.simple_count != 1:
            results.append(CorollaryResult(
                index=i, applicable=False,
                reason=f"orbit contains {orbit.simple_count} simple roots {orbit.simple_members}"))
            continue
        ys, ls, ov = [], [], []
        for path, pe in zip(paths, estimates):
            total, overlap = orbit_local_times(path, orbit.orbit_positives, epsilon)
            ys.append(pe.y_curves[-1, i])
            ls.append(total[-1])
            ov.append(overlap)
        y_mean, l_mean = float(np.mean(ys)), float(np.mean(ls))
        rel = abs(y_mean - l_mean) / y_mean if y_mean > 0 else float("nan")
        results.append(CorollaryResult(index=i, applicable=True, n_paths=len(paths),
                                       y_mean=y_mean, local_sum_mean=l_mean, rel_error=rel,
                                       overlap_mean=float(np.mean(ov))))
    return results


def wall_local_time(path: ReflectedPath, gd: GramData, epsilon: float) -> np.ndarray:
    """Right local time at 0 of each nonnegative series <s_i, pi(theta)>."""
    return occupation_local_time(path.wall_products, path.dt, epsilon, gd.norms2, one_sided=True)


@dataclass
class PushingIdentity:
    exact: bool
    ratios: list
    max_abs_diff: float


def pushing_identity_check(path: ReflectedPath, pe: PushingEstimate, gd: GramData) -> PushingIdentity:
    """Local time of the wall distance equals 2Y at a shared bandwidth, as an identity of estimators."""
    loc = wall_local_time(path, gd, pe.epsilon)
    twice = 2.0 * pe.y_curves
    yt = pe.y_curves[-1]
    ratios = [float(loc[-1, i] / yt[i]) if yt[i] > 0 else float("nan") for i in range(len(yt))]
    return PushingIdentity(exact=bool(np.array_equal(loc, twice)), ratios=ratios,
                           max_abs_diff=float(np.max(np.abs(loc - twice))))


def pushing_identity_ensemble(paths: list[ReflectedPath], gd: GramData, eps_y: float,
                              eps_local: float) -> list[StatReport]:
    """Ensemble relative deviation of L(eps_local) from 2Y(eps_y), per wall."""
    loc = np.array([wall_local_time(p, gd, eps_local)[-1] for p in paths])
    y = np.array([estimate_Y(p, gd, eps_y).y_curves[-1] for p in paths])
    out = []
    for i in range(gd.rank):
        target = 2 * y[:, i].mean()
        m, se = mean_se(loc[:, i])
        rel = abs(m - target) / target if target > 0 else float("nan")
        out.append(StatReport.evaluate(f"local_vs_2Y[{i}]", len(paths), rel, se / target, 0.0, 0.10))
    return out


@dataclass
class LevyReport:
    n_paths: int
    ks_statistic: float
    ks_critical: float
    sup_mean: float
    sup_se: float
    sup_oracle: float
    local_time_mean: float
    local_time_se: float

    @property
    def ks_passed(self) -> bool:
        return self.ks_statistic < self.ks_critical

    def sup_report(self, tol: float = 0.05) -> StatReport:
        rel = self.sup_mean / self.sup_oracle - 1.0
        return StatReport.evaluate("sup_mean_rel_error", self.n_paths, rel,
                                   self.sup_se / self.sup_oracle, 0.0, tol)

    def to_dict(self):
        d = asdict(self)
        d["ks_passed"] = self.ks_passed
        return d


def levy_check_1d(cfg: PathConfig, n_paths: int, epsilon: float | None = None) -> LevyReport:
    """Compare |B_T| with S_T - B_T on independent path sets, and the local time estimate with S_T.

    Paths ``seed + k`` for ``k < n_paths`` feed |B_T| and the local-time
    estimate; paths ``seed + n_paths + k`` feed the running maximum.
    """
    if n_paths < 100:
        raise ValueError("n_paths must be >= 100")
    if epsilon is None:
        epsilon = 5 * math.sqrt(cfg.dt)
    n = cfg.n_steps
    abs_b = np.empty(n_paths)
    loc = np.empty(n_paths)
    for k in range(n_paths):
        b = brownian_from(np.random.default_rng(cfg.seed + k), n, 1, cfg.dt, 0.0)[:, 0]
        abs_b[k] = abs(b[-1])
        loc[k] = estimate_local_time_1d(b, cfg.dt, epsilon)[-1]
    gap = np.empty(n_paths)
    sup = np.empty(n_paths)
    for k in range(n_paths):
        b = brownian_from(np.random.default_rng(cfg.seed + n_paths + k), n, 1, cfg.dt, 0.0)[:, 0]
        sup[k] = b.max()
        gap[k] = sup[k] - b[-1]
    sm, sse = mean_se(sup)
    lm, lse = mean_se(loc)
    return LevyReport(n_paths=n_paths, ks_statistic=ks_two_sample(abs_b, gap),
                      ks_critical=ks_critical(n_paths, n_paths), sup_mean=sm, sup_se=sse,
                      sup_oracle=math.sqrt(2 * cfg.horizon / math.pi),
                      local_time_mean=lm, local_time_se=lse)
