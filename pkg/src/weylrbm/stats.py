"""Small statistical helpers shared by the simulation checks and the analysis layer."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
import scipy.stats


@dataclass(frozen=True)
class StatReport:
    name: str
    n_paths: int
    estimate: float
    std_error: float
    target: float
    tolerance: float
    passed: bool

    @classmethod
    def evaluate(cls, name, n_paths, estimate, std_error, target, tolerance):
        estimate, std_error = float(estimate), float(std_error)
        tolerance = float(tolerance)
        passed = bool(abs(estimate - target) <= tolerance)
        return cls(name, int(n_paths), estimate, std_error, float(target), tolerance, passed)

    def recheck(self) -> bool:
        """Recompute the pass flag from the stored fields."""
        return abs(self.estimate - self.target) <= self.tolerance and self.std_error >= 0

    def to_dict(self):
        return asdict(self)


def mean_se(samples) -> tuple[float, float]:
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        return float(x.mean()) if x.size else float("nan"), float("nan")
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def ks_two_sample(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    return float(scipy.stats.ks_2samp(a, b).statistic)


def ks_critical(n: int, m: int, coeff: float = 1.36) -> float:
    """Asymptotic critical value of the two-sample KS statistic (1.36 is the 5% level)."""
    return coeff * math.sqrt((n + m) / (n * m))
