#!/usr/bin/env python3
"""Write a corpus of random polygon files for campaign runs.

Each file holds one polygon as JSON {"vertices": [[x, y], ...]}, the
format the verify-kp1 command consumes.  The draw is deterministic in
the seed.  --flavor picks the sampling profile: "oracle" restricts to
polygons small enough for the brute-force reference, "kp1" draws the
larger ones with a nonvanishing linear strand.
"""
import argparse
import json
import os

from polybetti.corpus import build_corpus, kp1_corpus, oracle_corpus


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir")
    ap.add_argument("--flavor", choices=["oracle", "kp1", "custom"],
                    default="kp1")
    ap.add_argument("--seed", type=int, default=None,
                    help="override the flavor's default seed")
    ap.add_argument("--count", type=int, default=None)
    ap.add_argument("--n-max", type=int, default=12,
                    help="lattice-point cap (custom flavor)")
    args = ap.parse_args()

    if args.flavor == "oracle":
        polys = oracle_corpus(**{k: v for k, v in
                                 [("seed", args.seed),
                                  ("count", args.count)] if v is not None})
    elif args.flavor == "kp1":
        polys = kp1_corpus(**{k: v for k, v in
                              [("seed", args.seed),
                               ("count", args.count)] if v is not None})
    else:
        polys = build_corpus(seed=args.seed or 1, count=args.count or 50,
                             n_min=4, n_max=args.n_max, box=5)
    os.makedirs(args.outdir, exist_ok=True)
    for i, poly in enumerate(polys):
        path = os.path.join(args.outdir, f"poly{i:04d}.json")
        with open(path, "w") as fh:
            json.dump({"vertices": [list(v) for v in poly.vertices]}, fh)
            fh.write("\n")
    print(f"wrote {len(polys)} polygons to {args.outdir}")


if __name__ == "__main__":
    main()
