"""Named verification suites shared by the CLI and the acceptance tests.

Each runner returns a list of :class:`CheckResult`; ``gated`` results decide
the exit status of ``weylrbm verify``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from weylrbm import rootsys, weyl
from weylrbm.analysis import convergence_sweep, transience_check
from weylrbm.sim import (BandwidthWarning, PathConfig, SkewConfig, corollary_check,
                         estimate_normal_pushing, estimate_Y, levy_check_1d,
                         pushing_identity_check, pushing_identity_ensemble, run_ensemble,
                         simulate_brownian, simulate_reflected, reflect_path, skew_bm_1d,
                         skew_multidim_prototype, verify_driving_bm, verify_support_condition)
from weylrbm.stats import mean_se

CHECKS = ("algebra", "levy", "driving", "support", "corollary", "pushing", "skew",
          "sweep", "transience")
DEFAULT_CHECKS = ("algebra",)


@dataclass
class CheckResult:
    name: str
    passed: bool
    gated: bool = True
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)

    def line(self) -> str:
        if not self.gated:
            return f"[INFO] {self.name}"
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}"


def auto_t_max(gd: rootsys.GramData, tol: float = 1e-6, floor: float = 40.0) -> float:
    """Smallest t_max (>= floor) whose truncation tail bound falls an order below ``tol``."""
    lam = float(np.linalg.eigvalsh(gd.gram).min())
    need = math.log(1.0 / (0.1 * tol * lam)) / lam
    return max(floor, math.ceil(need))


# -- exact suite ---------------------------------------------------------------------------

def algebra_suite(specs=None, t_max: float | None = 40.0, proj_samples: int = 10_000,
                  prop_samples: int = 100_000, seed: int = 0) -> list[CheckResult]:
    """Exact checks over a family matrix. ``t_max=None`` picks a tail-safe horizon per system."""
    specs = rootsys.family_matrix() if specs is None else specs
    out = []
    rng = np.random.default_rng(seed)
    for spec in specs:
        rs = rootsys.build_root_system(spec)
        gd = rootsys.gram_data(rs)
        name = str(rs.spec)

        rep = rootsys.verify_root_system(rs)
        out.append(CheckResult(f"{name}: root system axioms", rep.ok, detail={"failures": rep.failures}))

        ok, low = rootsys.lemma_nonneg_check(gd)
        off = gd.gram[~np.eye(gd.rank, dtype=bool)]
        gram_ok = bool(off.size == 0 or off.max() <= 1e-10)
        out.append(CheckResult(f"{name}: dual Gram off-diagonals >= 0, Gram off-diagonals <= 0",
                               ok and gram_ok, detail={"min_inverse_offdiag": low,
                                                       "max_gram_offdiag": float(off.max()) if off.size else None}))

        tm = auto_t_max(gd) if t_max is None else t_max
        steps = max(4000, int(100 * tm))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            ic = rootsys.lemma_integral_check(gd, tm, steps)
        out.append(CheckResult(f"{name}: integral of exp(-tA) matches inverse at t_max={tm:g}",
                               ic.deviation < 1e-6 and ic.positive,
                               detail={"deviation": ic.deviation, "min_entry": ic.min_entry,
                                       "tail_bound": ic.tail_bound}))

        group = weyl.enumerate_group(rs)
        closed = _closure(group, rng)
        out.append(CheckResult(f"{name}: group order {group.order} closed under composition", closed,
                               detail={"order": group.order}))

        x = rng.standard_normal((proj_samples, rs.rank))
        p_desc = weyl.project_points(rs, x)
        p_enum, which = weyl.project_points_enumerated(group, rs.simple_span, x)
        recon = np.einsum("kij,kj->ki", group.matrices[which], p_enum)
        inside = np.all(p_desc @ rs.simple_span.T >= -1e-10)
        agree = float(np.max(np.abs(p_desc - p_enum)))
        rec_err = float(np.max(np.abs(recon - x)))
        out.append(CheckResult(f"{name}: descent projection equals enumeration",
                               bool(inside and agree <= 1e-8 and rec_err <= 1e-8),
                               detail={"max_disagreement": agree, "reconstruction_error": rec_err}))

        pts = rng.standard_normal((prop_samples, rs.rank))
        proj = weyl.project_points(rs, pts)
        for i in range(rs.rank):
            orbit = weyl.orbit_of_simple(group, rs, i)
            for eps in (0.05, 0.2):
                c = weyl.proposition_set_check(group, rs, i, eps, points=pts, projected=proj)
                expected_zero = orbit.simple_count == 1
                ok = (c.disagreements == 0) == expected_zero and c.lhs_only == 0
                out.append(CheckResult(
                    f"{name}: slab identity root {i} eps={eps} (simple_count={orbit.simple_count})", ok,
                    detail={"lhs_only": c.lhs_only, "rhs_only": c.rhs_only, "both": c.both}))

        nd = [weyl.normal_decomposition(gd, i, n_check=1000, seed=seed + i) for i in range(rs.rank)]
        out.append(CheckResult(f"{name}: normal decomposition of the dual basis", all(d.ok for d in nd),
                               detail={"max_residual": max(d.residual for d in nd),
                                       "min_coefficient": min(d.min_coefficient for d in nd),
                                       "min_origin_product": min(d.min_origin_product for d in nd)}))
    return out


def _closure(group: weyl.WeylGroup, rng, sample: int = 4000) -> bool:
    mats = group.matrices
    if group.order <= 48:
        pairs = [(a, b) for a in range(group.order) for b in range(group.order)]
    else:
        pairs = list(zip(rng.integers(group.order, size=sample), rng.integers(group.order, size=sample)))
    if not all(group.contains(mats[a] @ mats[b]) for a, b in pairs):
        return False
    return all(group.contains(m.T) for m in mats)


# -- stochastic suites ---------------------------------------------------------------------

def _ensemble(system: str, dt: float, horizon: float, n_paths: int, seed: int, start=None):
    return _cached_ensemble(system, dt, horizon, n_paths, seed, None if start is None else tuple(start))


@lru_cache(maxsize=2)
def _cached_ensemble(system, dt, horizon, n_paths, seed, start):
    rs = rootsys.build_root_system(system)
    gd = rootsys.gram_data(rs)
    cfg = PathConfig(dt=dt, horizon=horizon, seed=seed, start=start)
    paths = run_ensemble(lambda c: simulate_reflected(rs, c), cfg, n_paths)
    return rs, gd, paths


def run_levy(dt=1e-4, horizon=1.0, n_paths=10_000, seed=0) -> list[CheckResult]:
    rep = levy_check_1d(PathConfig(dt=dt, horizon=horizon, seed=seed), n_paths)
    sup = rep.sup_report(0.05)
    return [CheckResult("levy: KS(|B_T|, S_T - B_T) below 5% critical value", rep.ks_passed,
                        detail=rep.to_dict()),
            CheckResult("levy: E[S_T] within 5% of sqrt(2T/pi)", sup.passed, detail=sup.to_dict())]


def run_driving(systems=("B2", "orth2"), dt=1e-4, horizon=1.0, n_paths=200, eps_coeff=5.0,
                seed=0) -> list[CheckResult]:
    out = []
    eps = eps_coeff * math.sqrt(dt)
    for system in systems:
        rs, gd, paths = _ensemble(system, dt, horizon, n_paths, seed)
        ests = [estimate_Y(p, gd, eps) for p in paths]
        for r in verify_driving_bm(ests, horizon):
            gated = r.name.startswith(("qv_over_T", "increment_mean"))
            out.append(CheckResult(f"driving {system}: {r.name}", r.passed, gated=gated, detail=r.to_dict()))
        # same paths, pushing along each wall normal instead of the dual basis
        normal = [estimate_normal_pushing(p, gd, eps) for p in paths]
        for r in verify_driving_bm(normal, horizon):
            if r.name.startswith(("qv_over_T", "increment_mean")):
                out.append(CheckResult(f"driving {system} (normal pushing): {r.name}", r.passed,
                                       gated=False, detail=r.to_dict()))
    return out


def run_support(systems=("B2", "orth2"), dt=1e-4, horizon=1.0, n_paths=200, eps_coeff=5.0,
                seed=0) -> list[CheckResult]:
    out = []
    eps = eps_coeff * math.sqrt(dt)
    for system in systems:
        rs, gd, paths = _ensemble(system, dt, horizon, n_paths, seed)
        worst = {1.0: 0.0, 2.0: 0.0, 0.5: 0.0}
        for p in paths:
            pe = estimate_Y(p, gd, eps)
            mass = verify_support_condition(pe, p, [eps, 2 * eps, 0.5 * eps])
            for f, key in zip((1.0, 2.0, 0.5), mass):
                worst[f] = max(worst[f], mass[key])
        out.append(CheckResult(f"support {system}: violation mass 0 at delta >= eps",
                               worst[1.0] == 0.0 and worst[2.0] == 0.0,
                               detail={"delta=eps": worst[1.0], "delta=2eps": worst[2.0],
                                       "delta=eps/2 (reported)": worst[0.5]}))
    return out


def run_corollary(systems=("orth2", "B2", "I2(3)"), dt=1e-4, horizon=1.0, n_paths=200,
                  eps_coeff=5.0, seed=0, tol=0.10) -> list[CheckResult]:
    out = []
    eps = eps_coeff * math.sqrt(dt)
    for system in systems:
        rs, gd, paths = _ensemble(system, dt, horizon, n_paths, seed)
        group = weyl.enumerate_group(rs)
        for r in corollary_check(rs, group, gd, paths, eps):
            if r.applicable:
                out.append(CheckResult(f"corollary {system} root {r.index}: rel error <= {tol:g}",
                                       r.rel_error <= tol, detail=r.to_dict()))
            else:
                out.append(CheckResult(f"corollary {system} root {r.index}: not applicable",
                                       True, gated=False, detail=r.to_dict()))
    return out


def run_pushing(systems=("B2", "orth2"), dt=1e-4, horizon=1.0, n_paths=200, eps_coeff=5.0,
                seed=0) -> list[CheckResult]:
    out = []
    eps = eps_coeff * math.sqrt(dt)
    for system in systems:
        rs, gd, paths = _ensemble(system, dt, horizon, n_paths, seed)
        exact = all(pushing_identity_check(p, estimate_Y(p, gd, eps), gd).exact for p in paths)
        out.append(CheckResult(f"pushing {system}: L(<s_i, pi>) == 2Y exactly at shared eps", exact))
        for r in pushing_identity_ensemble(paths, gd, eps, 2 * eps):
            out.append(CheckResult(f"pushing {system}: {r.name} at eps vs 2eps within 10%",
                                   r.passed, detail=r.to_dict()))
    return out


def run_skew(dt=1e-4, horizon=1.0, n_paths=200, seed=0, systems=("B2",)) -> list[CheckResult]:
    out = []
    cfg = SkewConfig(p=1.0, dt=dt, horizon=horizon, seed=seed)
    sk = skew_bm_1d(cfg)
    raw = simulate_brownian(PathConfig(dt=dt, horizon=horizon, seed=seed), 1)
    out.append(CheckResult("skew 1d: p=1 equals |B| bitwise", bool(np.array_equal(sk.values, np.abs(raw.theta[:, 0])))))

    half = [skew_bm_1d(SkewConfig(p=0.5, dt=dt, horizon=horizon, seed=seed + k)) for k in range(n_paths)]
    qv, qse = mean_se([np.sum(np.diff(s.values) ** 2) / horizon for s in half])
    sg, sse = mean_se([np.sign(s.values[-1]) for s in half])
    out.append(CheckResult("skew 1d: p=1/2 QV/T in [0.95, 1.05]", abs(qv - 1) <= 0.05,
                           detail={"qv_over_T": qv, "se": qse}))
    out.append(CheckResult("skew 1d: p=1/2 sign of X_T balanced within 3 SE", abs(sg) <= 3 * sse,
                           detail={"mean_sign": sg, "se": sse}))
    for p in (0.25, 0.5, 0.75):
        runs = [skew_bm_1d(SkewConfig(p=p, dt=dt, horizon=horizon, seed=seed + k)) for k in range(n_paths)]
        d = np.concatenate([r.draws for r in runs]).astype(float)
        se = math.sqrt(p * (1 - p) / d.size)
        out.append(CheckResult(f"skew 1d: excursion sign mean within 3 SE of p={p}",
                               abs(d.mean() - p) <= 3 * se,
                               detail={"mean": float(d.mean()), "draws": int(d.size), "se": se}))
    for system in systems:
        rs = rootsys.build_root_system(system)
        cfg = SkewConfig(dt=dt, horizon=horizon, seed=seed)
        proto = skew_multidim_prototype(rs, cfg, np.ones(rs.rank))
        refl = reflect_path(rs, simulate_brownian(PathConfig(dt=dt, horizon=horizon, seed=seed), rs.rank))
        out.append(CheckResult(f"skew {system}: prototype with all p_i = 1 equals reflected path bitwise",
                               bool(np.array_equal(proto.values, refl.pi_theta))))
    return out


def run_sweep(system="B2", dts=(1e-3, 1e-4, 1e-5), n_paths=200, eps_coeff=5.0, seed=0) -> list[CheckResult]:
    sw = convergence_sweep("corollary", dts, eps_coeff=eps_coeff, system=system, n_paths=n_paths, seed=seed)
    return [CheckResult(f"sweep {system}: corollary error non-increasing over dt={list(dts)}",
                        sw.trend_ok, detail=sw.to_dict())]


def run_transience(systems=("B2", "orth2", "I2(3)"), dt=1e-2, horizon=100.0, n_paths=500,
                   seed=0) -> list[CheckResult]:
    out = []
    for system in systems:
        rs = rootsys.build_root_system(system)
        rep = transience_check(rs, PathConfig(dt=dt, horizon=horizon, seed=seed), n_paths)
        out.append(CheckResult(f"transience {system}: norm identity to 1e-8", rep.norm_identity_ok,
                               detail={"max_norm_error": rep.max_norm_error}))
        out.append(CheckResult(f"transience {system}: growth fraction > 0.5", rep.growth_ok,
                               detail=rep.to_dict()))
    return out


def run_check(name: str, **kw) -> list[CheckResult]:
    runners = {"algebra": algebra_suite, "levy": run_levy, "driving": run_driving,
               "support": run_support, "corollary": run_corollary, "pushing": run_pushing,
               "skew": run_skew, "sweep": run_sweep, "transience": run_transience}
    if name not in runners:
        raise KeyError(name)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BandwidthWarning)
        return runners[name](**kw)
