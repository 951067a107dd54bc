"""
d3conv - Moment and Ingham Trend Runs
=====================================

Runs three experiments on a grid of N:
  1. First moment   - ratio1 = |sum Delta| / first_moment_main(N,H), H = floor(sqrt(N))
  2. Second moment  - ratio2 = rms(Delta) / mean main term, H = floor(N^theta)
  3. Ingham         - D_2(N,1) / ((6/pi^2) N log^2 N)

and fits an empirical exponent ratio ~ C N^slope to each series. The
first-moment ratio is expected to decay roughly like N^(-1/6).

Usage:
    python scripts/run_trends.py
    python scripts/run_trends.py --ns 10000 100000 1000000 --threads 4

Output:
    - Console: per-N table and fitted exponents
    - scripts/trend_results.json: raw results
    - scripts/trend_ratios.png (optional, if matplotlib available)
"""

import sys
import json
import time
import argparse
import logging
from math import isqrt
from pathlib import Path

import mpmath

# Add project root to path
ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT))

from src.convolution import fit_exponent, ingham_ratio, moment_report, strictly_decreasing, trend_frame
from src.jets import Precision
from src.sieve import SieveConfig
from src.singular import SeriesOptions


DEFAULT_NS = [10**5, 10**6, 10**7]


# ──────────────────────────────────────────────
# Experiments
# ──────────────────────────────────────────────

def run_moments(Ns, theta, opts, cfg):
    first, second = [], []
    for N in Ns:
        t0 = time.time()
        print(f"  N = {N:>10,}  moments ...", end="", flush=True)
        r1 = moment_report(N, isqrt(N), 1, opts, cfg)
        r2 = moment_report(N, max(1, int(N ** theta + 1e-9)), 2, opts, cfg)
        print(f" done ({time.time() - t0:.1f}s)")
        first.append(r1)
        second.append(r2)
    return first, second


def run_ingham(Ns, cfg, prec):
    ratios = []
    for N in Ns:
        print(f"  N = {N:>10,}  ingham ...", end="", flush=True)
        t0 = time.time()
        ratios.append(float(ingham_ratio(N, 1, cfg, prec)))
        print(f" done ({time.time() - t0:.1f}s)")
    return ratios


def summarize(label, Ns, ratios):
    fit = fit_exponent(Ns, ratios)
    return {
        "ratios": ratios,
        "strictly_decreasing": strictly_decreasing(ratios),
        "fitted_exponent": round(fit.slope, 4),
        "fit_r_value": round(fit.r_value, 4),
        "table": trend_frame(Ns, ratios, label).to_dict(orient="records"),
    }


# ──────────────────────────────────────────────
# Main
# ──────────────────────────────────────────────

def main():
    parser = argparse.ArgumentParser(description="d3conv moment and Ingham trends")
    parser.add_argument("--ns", type=int, nargs="+", default=DEFAULT_NS)
    parser.add_argument("--theta", type=float, default=0.4)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--digits", type=int, default=30)
    parser.add_argument("--no-ingham", action="store_true")
    parser.add_argument("--no-plot", action="store_true")
    args = parser.parse_args()

    logging.basicConfig(level=logging.WARNING,
                        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    Ns = sorted(args.ns)
    prec = Precision(args.digits)
    opts = SeriesOptions(workers=args.threads, precision=prec, progress=True)
    cfg = SieveConfig(workers=args.threads)

    print("=" * 70)
    print("  d3conv — Moment and Ingham Trends")
    print("=" * 70)
    print(f"\n  N grid : {Ns}  |  theta: {args.theta}  |  threads: {args.threads}\n")

    first, second = run_moments(Ns, args.theta, opts, cfg)
    ingham = [] if args.no_ingham else run_ingham(Ns, cfg, prec)

    ratio1 = [float(r.ratio1) for r in first]
    ratio2 = [float(r.ratio2) for r in second]
    exceptional = [r.exceptional_fraction for r in second]

    print()
    print("=" * 70)
    print("  RESULTS")
    print("=" * 70)
    print(f"\n  {'N':>12} {'H1':>7} {'ratio1':>12} {'H2':>7} {'ratio2':>12} {'exc':>8} {'ingham':>10}")
    print("  " + "-" * 68)
    for i, N in enumerate(Ns):
        ing = f"{ingham[i]:>10.5f}" if ingham else f"{'-':>10}"
        print(f"  {N:>12,} {first[i].H:>7} {ratio1[i]:>12.6f} {second[i].H:>7} "
              f"{ratio2[i]:>12.6f} {exceptional[i]:>8.4f} {ing}")

    output = {
        "config": {"ns": Ns, "theta": args.theta, "digits": args.digits, "threads": args.threads},
        "first_moment": summarize("ratio1", Ns, ratio1),
        "second_moment": summarize("ratio2", Ns, ratio2),
        "exceptional_fraction": {
            "values": exceptional,
            "strictly_decreasing": strictly_decreasing(exceptional),
        },
        "q_max": {"first": [r.q_max for r in first], "second": [r.q_max for r in second]},
        "sum_delta": [mpmath.nstr(r.sum_delta, 20) for r in first],
    }
    if ingham:
        output["ingham"] = summarize("ingham", Ns, ingham)

    print()
    print("  FITTED EXPONENTS")
    print("  " + "-" * 68)
    print(f"  ratio1 ~ N^{output['first_moment']['fitted_exponent']:+.4f}   (predicted about -1/6)")
    print(f"  ratio2 ~ N^{output['second_moment']['fitted_exponent']:+.4f}")
    if ingham:
        print(f"  |ingham - 1| shrinking: {abs(ingham[-1] - 1) < abs(ingham[0] - 1)}")

    out_path = ROOT / "scripts" / "trend_results.json"
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w") as f:
        json.dump(output, f, indent=2, default=float)
    print(f"\n  Results saved → {out_path}")

    # Optional plot
    if not args.no_plot:
        try:
            import matplotlib
            matplotlib.use("Agg")
            import matplotlib.pyplot as plt

            fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(14, 5))
            fig.suptitle("Moments of Delta(N,h) for d_3", fontsize=12)

            ax1.loglog(Ns, ratio1, "o-", label="ratio1 (H = sqrt N)", color="#27ae60")
            ax1.loglog(Ns, ratio2, "s-", label=f"ratio2 (theta = {args.theta})", color="#2980b9")
            ax1.set_xlabel("N")
            ax1.set_ylabel("ratio")
            ax1.set_title("Normalised moments")
            ax1.legend(fontsize=9)
            ax1.grid(True, which="both", alpha=0.3)

            if ingham:
                ax2.semilogx(Ns, ingham, "o-", color="#e67e22")
                ax2.axhline(y=1, color="gray", linestyle="--", alpha=0.5)
            ax2.set_xlabel("N")
            ax2.set_ylabel("D_2(N,1) / Ingham main term")
            ax2.set_title("Ingham ratio")
            ax2.grid(True, alpha=0.3)

            plt.tight_layout()
            plot_path = ROOT / "scripts" / "trend_ratios.png"
            plt.savefig(plot_path, dpi=150, bbox_inches="tight")
            print(f"  Plot saved   → {plot_path}")
        except ImportError:
            print("  (matplotlib not installed — skipping plot)")

    print()


if __name__ == "__main__":
    main()
