#!/usr/bin/env python3
"""Sweep the Baumslag-Solitar embedding grid: decide BS(r,s) < BS(m,n) for
all parameters in a box, construct a certificate for every yes, verify it,
and print a route histogram.

Usage: python scripts/embedding_grid.py [BOUND]  (default 12)
"""

import sys
import time
from collections import Counter

from gbs import embed_bs_construct, embeds_bs, verify_embedding_certificate


def main(bound: int = 12) -> int:
    rng = [i for i in range(-bound, bound + 1) if i != 0]
    routes = Counter()
    yes = bad = 0
    t0 = time.time()
    for r in rng:
        for s in rng:
            if abs(r) == 1 and abs(s) == 1:
                continue
            for m in rng:
                for n in rng:
                    if not embeds_bs(r, s, m, n):
                        continue
                    yes += 1
                    cert = embed_bs_construct(r, s, m, n)
                    ok, violations = verify_embedding_certificate(cert)
                    if not ok:
                        bad += 1
                        print(f"FAILED ({r},{s}) in ({m},{n}): {violations[:1]}")
                    routes[cert.provenance.split(";")[0].split(" x=")[0]] += 1
    dt = time.time() - t0
    print(f"bound {bound}: {yes} embeddings, {bad} failures, {dt:.1f}s")
    for route, count in routes.most_common():
        print(f"  {count:6d}  {route}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 12))
