#!/usr/bin/env python3
"""Writes a simulated lattice fixture: counts, rook adjacency and the true eta."""
import argparse
import pathlib

import numpy as np


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out", type=pathlib.Path)
    ap.add_argument("--nrow", type=int, default=10)
    ap.add_argument("--ncol", type=int, default=10)
    ap.add_argument("--seed", type=int, default=20240601)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    nr, nc = args.nrow, args.ncol
    r, c = np.meshgrid(np.arange(nr), np.arange(nc), indexing="ij")
    eta = 0.5 * np.sin(2 * np.pi * r / nr) * np.cos(np.pi * c / nc) + 0.3 * (c - nc / 2) / nc
    eta = (eta - eta.mean()).ravel()
    e = rng.uniform(50, 200, nr * nc)
    y = rng.poisson(e * np.exp(eta))

    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "counts.csv", "w") as f:
        f.write("region_id,y,e\n")
        for k in range(nr * nc):
            f.write(f"R{k:03d},{y[k]},{e[k]:.6f}\n")
    with open(args.out / "truth.csv", "w") as f:
        f.write("region_id,eta\n")
        for k in range(nr * nc):
            f.write(f"R{k:03d},{eta[k]:.17g}\n")
    with open(args.out / "adjacency.txt", "w") as f:
        f.write(f"# {nr}x{nc} rook lattice\nn={nr * nc}\n")
        for i in range(nr):
            for j in range(nc):
                nb = []
                if i > 0: nb.append((i - 1) * nc + j)
                if j > 0: nb.append(i * nc + j - 1)
                if j + 1 < nc: nb.append(i * nc + j + 1)
                if i + 1 < nr: nb.append((i + 1) * nc + j)
                f.write(f"{i * nc + j}: {' '.join(map(str, nb))}\n")


if __name__ == "__main__":
    main()
