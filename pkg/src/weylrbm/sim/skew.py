"""Skew Brownian motion from signed excursions, plus an experimental chamber analogue.

Both constructions draw the Brownian increments first and the Bernoulli
variables afterwards from the same generator, so a run shares its noise with
:func:`~weylrbm.sim.paths.simulate_brownian` at the same seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from weylrbm.rootsys import RootSystem, reflection_matrix
from weylrbm.sim.paths import PathConfig, brownian_from, check_start
from weylrbm.weyl import project_points

MIN_EXCURSION_STEPS = 2


@dataclass(frozen=True)
class SkewConfig:
    p: float = 0.5
    dt: float = 1e-4
    horizon: float = 1.0
    seed: int = 0
    start: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        PathConfig(dt=self.dt, horizon=self.horizon, seed=self.seed)

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))

    @property
    def threshold(self) -> float:
        return math.sqrt(self.dt)


def excursion_starts(distance: np.ndarray, threshold: float) -> tuple[np.ndarray, bool]:
    """Start indices of excursions away from zero, and whether the path starts inside one.

    An excursion is a maximal run with ``distance > threshold``; runs shorter
    than two steps are absorbed into the surrounding excursion and get no start
    of their own. A run beginning at index 0 is reported through the flag only.
    """
    above = np.asarray(distance) > threshold
    padded = np.concatenate([[False], above, [False]])
    edges = np.diff(padded.astype(np.int8))
    starts = np.nonzero(edges == 1)[0]
    ends = np.nonzero(edges == -1)[0]
    keep = (ends - starts) >= MIN_EXCURSION_STEPS
    starts = starts[keep]
    initial = bool(starts.size and starts[0] == 0)
    if initial:
        starts = starts[1:]
    return starts, initial


@dataclass(frozen=True, eq=False)
class SkewPath:
    times: np.ndarray
    values: np.ndarray
    reflected: np.ndarray
    starts: np.ndarray
    draws: np.ndarray        # True = excursion sent to the positive side


def skew_bm_1d(cfg: SkewConfig) -> SkewPath:
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n_steps
    b = brownian_from(rng, n, 1, cfg.dt, cfg.start)[:, 0]
    refl = np.abs(b)
    starts, initial = excursion_starts(refl, cfg.threshold)
    draws = rng.random(starts.size) < cfg.p

    signs = np.empty(n + 1)
    if cfg.start != 0.0:
        first = 1.0 if cfg.start > 0 else -1.0
    elif draws.size:
        first = 1.0 if draws[0] else -1.0
    else:
        first = 1.0
    cuts = np.concatenate([[0], starts, [n + 1]])
    seg_signs = np.concatenate([[first], np.where(draws, 1.0, -1.0)])
    for s, lo, hi in zip(seg_signs, cuts[:-1], cuts[1:]):
        signs[lo:hi] = s
    return SkewPath(times=np.arange(n + 1) * cfg.dt, values=signs * refl,
                    reflected=refl, starts=starts, draws=draws)


@dataclass(frozen=True, eq=False)
class MultiSkewPath:
    times: np.ndarray
    values: np.ndarray          # span coordinates
    pi_theta: np.ndarray
    events: list                # (step, wall, reflected?)
    max_boundary_jump: float

    def draws_for(self, wall: int) -> np.ndarray:
        return np.array([r for _, w, r in self.events if w == wall], dtype=bool)


def skew_multidim_prototype(rs: RootSystem, cfg: SkewConfig, p_per_wall) -> MultiSkewPath:
    """Excursion-wise reflect/transmit construction in a Weyl chamber (experimental).

    Each new excursion of the folded path away from wall ``i`` draws
    Bernoulli(p_i): on success the current chamber image is kept, otherwise the
    image is composed with the reflection in ``s_i``. One probability per
    simple root is a modelling choice.
    """
    p = np.asarray(p_per_wall, dtype=float)
    if p.shape != (rs.rank,) or np.any((p < 0) | (p > 1)):
        raise ValueError(f"need {rs.rank} probabilities in [0, 1], got {p_per_wall}")
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n_steps
    start = np.zeros(rs.rank) if np.ndim(cfg.start) == 0 and cfg.start == 0 else np.atleast_1d(cfg.start)
    check_start(rs, start)
    theta = brownian_from(rng, n, rs.rank, cfg.dt, start)
    pi = project_points(rs, theta)
    simple = rs.simple_span
    dist = (pi @ simple.T) / np.linalg.norm(simple, axis=1)

    events = []
    for i in range(rs.rank):
        starts, _ = excursion_starts(dist[:, i], cfg.threshold)
        events.extend((int(k), i) for k in starts)
    events.sort()

    values = pi.copy()
    m = np.eye(rs.rank)
    log = []
    bounds = [e[0] for e in events] + [n + 1]
    jump = 0.0
    for (k, i), hi in zip(events, bounds[1:]):
        keep = bool(rng.random() < p[i])
        if not keep:
            m = m @ reflection_matrix(simple[i])
        log.append((k, i, keep))
        values[k:hi] = pi[k:hi] @ m.T
        jump = max(jump, float(np.linalg.norm(values[k] - values[k - 1])))
    return MultiSkewPath(times=np.arange(n + 1) * cfg.dt, values=values, pi_theta=pi,
                         events=log, max_boundary_jump=jump)
