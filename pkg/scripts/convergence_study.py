"""Corollary error on a (dt, eps_coeff) grid for one root system."""
import argparse
import warnings
from pathlib import Path

from weylrbm import io
from weylrbm.analysis import convergence_sweep
from weylrbm.sim import BandwidthWarning


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--system", default="B2")
    ap.add_argument("--dts", default="1e-3,3e-4,1e-4,3e-5,1e-5")
    ap.add_argument("--eps-coeffs", default="2,5,10")
    ap.add_argument("--paths", type=int, default=200)
    ap.add_argument("--check", default="corollary")
    ap.add_argument("--out", default="out/convergence")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dts = [float(x) for x in args.dts.split(",")]

    rows = []
    for c in (float(x) for x in args.eps_coeffs.split(",")):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BandwidthWarning)
            res = convergence_sweep(args.check, dts, eps_coeff=c, system=args.system, n_paths=args.paths)
        for dt, r in zip(res.dts, res.reports):
            rows.append({"eps_coeff": c, "dt": dt, "error": r.estimate, "se": r.std_error})
            print(f"c={c:<5g} dt={dt:<8g} error={r.estimate:.4f} +- {r.std_error:.4f}")
        print(f"c={c:g}: trend {'ok' if res.trend_ok else 'violated'}")
    io.write_report_csv(out / f"{args.check}_{args.system}.csv", rows)


if __name__ == "__main__":
    main()
