from weylrbm.sim.checks import (CorollaryResult, LevyReport, PushingIdentity, corollary_check,
                                levy_check_1d, martingale_part, orbit_local_times, pushing_identity_check,
                                pushing_identity_ensemble, verify_driving_bm, wall_local_time)
from weylrbm.sim.estimators import (BandwidthWarning, PushingEstimate, estimate_local_time_1d,
                                    estimate_normal_pushing, estimate_Y, occupation_local_time, verify_support_condition)
from weylrbm.sim.paths import (PathConfig, RawPath, ReflectedPath, check_start, interior_point,
                               reflect_path, run_ensemble, simulate_brownian, simulate_reflected)
from weylrbm.sim.skew import (MultiSkewPath, SkewConfig, SkewPath, excursion_starts,
                              skew_bm_1d, skew_multidim_prototype)

__all__ = [
    "BandwidthWarning", "CorollaryResult", "LevyReport", "MultiSkewPath", "PathConfig",
    "PushingEstimate", "PushingIdentity", "RawPath", "ReflectedPath", "SkewConfig", "SkewPath",
    "check_start", "corollary_check", "estimate_Y", "estimate_local_time_1d", "excursion_starts",
    "estimate_normal_pushing", "interior_point", "levy_check_1d", "martingale_part", "occupation_local_time", "orbit_local_times",
    "pushing_identity_check", "pushing_identity_ensemble", "reflect_path", "run_ensemble",
    "simulate_brownian", "simulate_reflected", "skew_bm_1d", "skew_multidim_prototype",
    "verify_driving_bm", "verify_support_condition", "wall_local_time",
]
