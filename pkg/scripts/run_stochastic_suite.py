"""Run every named check at its default scale and write a JSON and CSV report."""
import argparse
import time
from pathlib import Path

import numpy as np

from weylrbm import io, suites


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/stochastic_suite")
    ap.add_argument("--checks", default=",".join(suites.CHECKS))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    results, timings = [], {}
    for name in args.checks.split(","):
        t0 = time.perf_counter()
        batch = suites.run_check(name) if name != "algebra" else suites.algebra_suite(t_max=40.0)
        timings[name] = time.perf_counter() - t0
        for r in batch:
            print(r.line())
        print(f"  {name}: {timings[name]:.1f} s")
        results += batch

    failed = [r for r in results if r.gated and not r.passed]
    io.write_json(out / "suite_report.json", {"timings_s": timings, "n_failed": len(failed),
                                              "results": [r.to_dict() for r in results]}, kind="suite")
    io.write_report_csv(out / "suite_report.csv",
                        [{"name": r.name, "passed": r.passed, "gated": r.gated,
                          **{k: v for k, v in r.detail.items() if np.isscalar(v)}} for r in results])
    print(f"{len(results)} checks, {len(failed)} gated failures; reports in {out}")


if __name__ == "__main__":
    main()
