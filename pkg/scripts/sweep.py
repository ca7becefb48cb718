"""Seeded sweep: solve each random instance and cross-check against the oracles.

    python scripts/sweep.py --seeds 500 --union-agents 0
"""

import argparse
import time
from collections import Counter

from contractnet.bruteforce import GeneratorConfig, enumerate_metastable, enumerate_stable_oracle, generate
from contractnet.errors import ResourceError
from contractnet.metastable import is_metastable, solve_metastable
from contractnet.reduction import project_system, reduce_to_weak_orders
from contractnet.stability import enumerate_stable


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=500)
    p.add_argument("--union-agents", type=int, default=0)
    args = p.parse_args()

    tally = Counter()
    start = time.perf_counter()
    for seed in range(1, args.seeds + 1):
        inst = generate(GeneratorConfig(seed=seed, union_agents=args.union_agents))
        meta = enumerate_metastable(inst)
        stable = enumerate_stable(inst)
        tally["instances"] += 1
        tally["metastable sets"] += len(meta)
        tally["stable sets"] += len(stable)
        tally["solve in oracle"] += solve_metastable(inst) in meta
        tally["stable = oracle"] += stable == enumerate_stable_oracle(inst)
        tally["stable all meta-stable"] += all(is_metastable(inst, s) for s in stable)
        if args.union_agents:
            try:
                reduced, smap = reduce_to_weak_orders(inst)
                image = {project_system(smap, s) for s in enumerate_stable(reduced)}
            except ResourceError:
                tally["reduced too large"] += 1
                continue
            tally["splits"] += len(smap.steps)
            tally["reduction preserves stable"] += image == set(stable)
    for key, value in tally.items():
        print(f"{key:28s} {value}")
    print(f"{'seconds':28s} {time.perf_counter() - start:.2f}")


if __name__ == "__main__":
    main()
