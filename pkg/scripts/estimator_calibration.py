#!/usr/bin/env python3
"""Calibration study for the stochastic rank estimator.

Sweeps filter degree and probe count on random PSD matrices with a known
spectral gap and reports mean absolute error against the exact rank, plus
the worst seed.  Useful for picking (degree, probes) at a given budget.

Usage: python scripts/estimator_calibration.py [--size 128] [--runs 25]
"""

import argparse

import numpy as np

from homology_lab import chebyshev_filter, stochastic_rank


def random_psd(rng, n, gap):
    rank_n = int(rng.integers(1, n))
    eigs = np.concatenate([rng.uniform(gap, 1.0, rank_n), np.zeros(n - rank_n)])
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    a = (q * eigs) @ q.T
    return (a + a.T) / 2, rank_n


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=128)
    ap.add_argument("--gap", type=float, default=0.1)
    ap.add_argument("--runs", type=int, default=25)
    args = ap.parse_args()

    degrees = [16, 32, 64, 128]
    probe_counts = [50, 100, 200, 400]

    print(f"matrix size {args.size}, spectral gap {args.gap}, {args.runs} runs per cell")
    header = "degree \\ probes" + "".join(f"{p:>12}" for p in probe_counts)
    print(header)
    for m in degrees:
        filt = chebyshev_filter(0.9 * args.gap, m)
        cells = []
        for n_v in probe_counts:
            errors = []
            for seed in range(args.runs):
                rng = np.random.default_rng(seed)
                a, true_rank = random_psd(rng, args.size, args.gap)
                est = stochastic_rank(a, filt, n_v=n_v, seed=seed)
                errors.append(abs(est.normalized - true_rank / args.size))
            cells.append(f"{np.mean(errors):8.4f}/{np.max(errors):.3f}")
        print(f"{m:>15}" + "".join(f"{c:>12}" for c in cells))
    print("cells are mean/max absolute error of rank(A)/N over seeds")


if __name__ == "__main__":
    main()
