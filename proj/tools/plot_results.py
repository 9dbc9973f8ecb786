#!/usr/bin/env python3
"""Plot curves from sts_sim CSV output.

Usage: plot_results.py results.csv [-o plot.png]

Detects the experiment kind from the CSV header: miss-detection files get
empirical + analytic miss curves per antenna count, multiuser files get
erasure and error curves.
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", help="CSV file written by sts_sim")
    parser.add_argument("-o", "--out", default=None, help="output image (default: <csv>.png)")
    args = parser.parse_args()

    df = pd.read_csv(args.csv, comment="#")
    out = args.out or args.csv.rsplit(".", 1)[0] + ".png"

    fig, ax = plt.subplots(figsize=(7, 5))
    ax.set_xlabel("SIR (dB)")
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)

    if "p_miss_emp" in df.columns:
        for n_rx, group in df.groupby("n_rx"):
            group = group.sort_values("sir_db")
            (line,) = ax.plot(group.sir_db, group.p_miss_emp, "o-", label=f"simulated, N_r={n_rx}")
            ax.fill_between(group.sir_db, group.p_miss_emp_ci_low, group.p_miss_emp_ci_high,
                            alpha=0.2, color=line.get_color())
            ax.plot(group.sir_db, group.p_miss_analytic, "--", color=line.get_color(),
                    label=f"analytic, N_r={n_rx}")
        ax.set_ylabel("tone miss probability")
        ax.set_title("STS tone miss detection")
    else:
        for n_rx, group in df.groupby("n_rx"):
            group = group.sort_values("sir_db")
            (line,) = ax.plot(group.sir_db, group.p_erasure, "o-", label=f"erasure, N_r={n_rx}")
            ax.fill_between(group.sir_db, group.p_erasure_ci_low, group.p_erasure_ci_high,
                            alpha=0.2, color=line.get_color())
            ax.plot(group.sir_db, group.p_error, "s:", color=line.get_color(),
                    label=f"error, N_r={n_rx}")
        ax.set_ylabel("per-user probability")
        ax.set_title("Multi-user coded STS decoding")

    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
