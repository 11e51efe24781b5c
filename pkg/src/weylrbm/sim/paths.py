"""Brownian paths in span coordinates and their chamber-folded images."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from weylrbm.rootsys import GramData, RootSystem
from weylrbm.weyl import CHAMBER_TOL, project_points


@dataclass(frozen=True)
class PathConfig:
    dt: float = 1e-4
    horizon: float = 1.0
    seed: int = 0
    start: tuple | None = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.horizon >= self.dt:
            raise ValueError(f"horizon {self.horizon} shorter than dt {self.dt}")
        if self.start is not None:
            object.__setattr__(self, "start", tuple(float(v) for v in np.atleast_1d(self.start)))

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))

    def start_vector(self, rank: int) -> np.ndarray:
        if self.start is None:
            return np.zeros(rank)
        v = np.asarray(self.start, dtype=float)
        if v.shape != (rank,):
            raise ValueError(f"start has dimension {v.size}, expected {rank}")
        return v

    def with_seed(self, seed: int) -> "PathConfig":
        return replace(self, seed=seed)


@dataclass(frozen=True, eq=False)
class RawPath:
    times: np.ndarray
    theta: np.ndarray
    dt: float


@dataclass(frozen=True, eq=False)
class ReflectedPath:
    times: np.ndarray
    theta: np.ndarray
    pi_theta: np.ndarray
    wall_products: np.ndarray   # <s_i, pi(theta)> per step and wall
    dt: float

    @property
    def wall_distance(self) -> np.ndarray:
        return self.wall_products.min(axis=1)

    @property
    def n_steps(self) -> int:
        return len(self.times) - 1


def brownian_from(rng: np.random.Generator, n_steps: int, rank: int, dt: float, start) -> np.ndarray:
    theta = np.empty((n_steps + 1, rank))
    theta[0] = start
    np.cumsum(rng.standard_normal((n_steps, rank)) * math.sqrt(dt), axis=0, out=theta[1:])
    theta[1:] += start
    return theta


def simulate_brownian(cfg: PathConfig, rank: int) -> RawPath:
    """Gaussian random walk with increments sqrt(dt) N(0, I), reproducible from ``cfg.seed``."""
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n_steps
    theta = brownian_from(rng, n, rank, cfg.dt, cfg.start_vector(rank))
    return RawPath(times=np.arange(n + 1) * cfg.dt, theta=theta, dt=cfg.dt)


def check_start(rs: RootSystem, start) -> None:
    prods = rs.simple_span @ np.asarray(start, dtype=float)
    if np.any(prods < -CHAMBER_TOL):
        raise ValueError(f"start {start} is outside the closed chamber")


def reflect_path(rs: RootSystem, raw: RawPath) -> ReflectedPath:
    pi = project_points(rs, raw.theta)
    return ReflectedPath(times=raw.times, theta=raw.theta, pi_theta=pi,
                         wall_products=pi @ rs.simple_span.T, dt=raw.dt)


def simulate_reflected(rs: RootSystem, cfg: PathConfig) -> ReflectedPath:
    start = cfg.start_vector(rs.rank)
    check_start(rs, start)
    return reflect_path(rs, simulate_brownian(cfg, rs.rank))


def interior_point(gd: GramData, distance: float) -> np.ndarray:
    """Chamber point at Euclidean distance ``distance`` from every wall."""
    norms = np.sqrt(gd.norms2)
    return (distance * norms) @ gd.dual


def run_ensemble(func, cfg: PathConfig, n_paths: int, workers: int = 1) -> list:
    """Apply ``func`` to configs with seeds ``cfg.seed + k``; results keep path order."""
    cfgs = [cfg.with_seed(cfg.seed + k) for k in range(n_paths)]
    if workers <= 1:
        return [func(c) for c in cfgs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, cfgs))
