"""Seeded move-invariance fuzzing: random machines, long walks, fingerprint checks.

Reuses the generators from tests/ so that the script and the acceptance
suite draw from the same distribution.
"""
from __future__ import annotations

import argparse
import pathlib
import random
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "tests"))

from generators import fuzz_racks, random_machine  # noqa: E402

from tanglemachines import dsl  # noqa: E402
from tanglemachines.invariants import fingerprint  # noqa: E402
from tanglemachines.machine import validate  # noqa: E402
from tanglemachines.rewrite import random_walk  # noqa: E402


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--machines", type=int, default=50)
    ap.add_argument("--steps", type=int, default=1000)
    ap.add_argument("--check-every", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--dump", help="directory for failing machines and traces")
    args = ap.parse_args(argv)
    rs = fuzz_racks()
    t0 = time.perf_counter()
    failures = 0
    for i in range(args.machines):
        rng = random.Random(args.seed + i)
        rack = rs[i % len(rs)]
        m = None
        while m is None:
            m = random_machine(rng, rack)
        fp = fingerprint(m)
        cur, trace, done = m, [], 0
        while done < args.steps:
            n = min(args.check_every, args.steps - done)
            w = random_walk(cur, n, seed=rng.randrange(1 << 30))
            cur, done = w.machine, done + n
            trace += w.trace
            if fingerprint(cur) != fp or not validate(cur).ok:
                failures += 1
                print(f"machine {i} ({rack.describe()}): fingerprint changed after {done} steps")
                if args.dump:
                    d = pathlib.Path(args.dump)
                    d.mkdir(parents=True, exist_ok=True)
                    (d / f"m{i}.tmd").write_text(dsl.serialize(m))
                    (d / f"m{i}.trace").write_text("\n".join(map(str, trace)))
                break
    dt = time.perf_counter() - t0
    print(f"{args.machines} machines x {args.steps} steps: {failures} failures in {dt:.1f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
