"""Print the worked-example values computed from the shipped fixtures."""
from __future__ import annotations

import argparse
import json
import pathlib
import time

from tanglemachines import dsl
from tanglemachines.capacity import capacity
from tanglemachines.factorization import common_refinement, complexity_bounds, maximal_partitions
from tanglemachines.invariants import colour_linking, distinguish, linking, linking_matrix, total_linking_number

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load(name):
    return dsl.load(ROOT / "fixtures" / f"{name}.tmd")


def examples() -> dict:
    out = {}
    m = load("linking_example")
    out["linking"] = {
        "v(x11)": list(linking(m).vector("x11")),
        "framed": linking_matrix(m, True),
        "unframed": linking_matrix(m, False),
    }
    a, b = load("linking_number"), load("linking_number_flipped")
    out["linking_number"] = {
        "all_positive": total_linking_number(a, "r"),
        "one_flipped": total_linking_number(b, "r"),
        "colour_linking": [list(colour_linking(a)["r"]), list(colour_linking(b)["r"])],
    }
    out["capacity"] = capacity(load("trefoil"), 3).to_dict()
    out["square"] = {name: list(complexity_bounds(load(name), 2)) for name in ("square1", "square2")}
    parts = maximal_partitions(load("two_factorizations"))
    out["two_factorizations"] = {
        "factorizations": [[list(b) for b in p] for p in parts],
        "common_refinement": [list(b) for b in common_refinement(*parts)],
        "bounds": list(complexity_bounds(load("two_factorizations"))),
    }
    out["div_pair"] = str(distinguish(load("div_left"), load("div_right"), framed=True))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    res = examples()
    if args.json:
        print(json.dumps(res, indent=2))
    else:
        for k, v in res.items():
            print(f"{k}: {v}")
    print(f"# {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
