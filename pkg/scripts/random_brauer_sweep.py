#!/usr/bin/env python3
"""Random sweep: declared symbol bases versus the invariants oracle.

For each randomly drawn Galois datum the declared basis of corestricted
symbols is checked for structure match, generation, exact orders and
exponent-two coverage against the brute-force fixed-module computation.
"""

import argparse
import math
import random
import sys
import time
from dataclasses import dataclass

sys.path.insert(0, "src")

from torusbrauer.brauer import representative_independence, symbol_basis, verify_basis
from torusbrauer.groups import GaloisDatum


@dataclass
class SweepConfig:
    count: int = 100
    seed: int = 0
    max_rank: int = 4
    moduli: tuple = (2, 4, 6, 8, 12)
    max_generators: int = 2


def random_datum(rng, cfg: SweepConfig) -> GaloisDatum:
    r = rng.randrange(2, cfg.max_rank + 1)
    M = rng.choice(cfg.moduli)
    units = [u for u in range(1, M) if math.gcd(u, M) == 1]
    pairs = []
    for _ in range(rng.randrange(0, cfg.max_generators + 1)):
        p = list(range(r))
        rng.shuffle(p)
        pairs.append((tuple(p), rng.choice(units)))
    return GaloisDatum.from_generators(r, M, pairs)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-rank", type=int, default=4)
    ap.add_argument("--moduli", default="2,4,6,8,12")
    ap.add_argument("--quiet", action="store_true")
    args = ap.parse_args()
    cfg = SweepConfig(
        count=args.count,
        seed=args.seed,
        max_rank=args.max_rank,
        moduli=tuple(int(x) for x in args.moduli.split(",")),
    )

    rng = random.Random(cfg.seed)
    t0 = time.monotonic()
    failures = 0
    seen_groups: dict = {}
    for i in range(cfg.count):
        d = random_datum(rng, cfg)
        rep = symbol_basis(d)
        v = verify_basis(d)
        indep = representative_independence(d)
        ok = v.ok and indep
        failures += not ok
        seen_groups[rep.group.describe()] = seen_groups.get(rep.group.describe(), 0) + 1
        if not args.quiet or not ok:
            print(
                f"[{i:4d}] r={d.r} M={d.M:2d} |G|={d.group.order:3d} "
                f"group={rep.group.describe():12s} "
                f"{'ok' if ok else 'MISMATCH: ' + str(v)}"
            )
    dt = time.monotonic() - t0
    print(f"\n{cfg.count} data in {dt:.1f}s, {failures} failure(s)")
    for name, cnt in sorted(seen_groups.items()):
        print(f"  {name:14s} x{cnt}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
