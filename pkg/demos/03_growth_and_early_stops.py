"""
Path-count growth and the two stop conditions
=============================================

A hub with n - 1 leaves and a link-closing rule admits a(n) unique paths
from the hub to the first leaf, where a(n) = (n - 1) a(n - 1) + 1. The
engine reproduces the count exactly, and because a(n) grows factorially,
real runs need the path cap and the deadline.
"""

import time

from sonarpath import EngineConfig, build_one_depth_tree, one_depth_tree_path_count, traverse

print("branches   closed-form   enumerated      seconds")
for branches in range(2, 9):
    network, scenario = build_one_depth_tree(branches)
    started = time.perf_counter()
    result = traverse(
        network, EngineConfig(start=scenario.start, end=scenario.end, keep_paths=False)
    )
    elapsed = time.perf_counter() - started
    print(f"{branches:8d}   {one_depth_tree_path_count(branches):11d}   "
          f"{result.final_count:10d}   {elapsed:10.3f}")

print()

# a path cap returns exactly that many paths and flags the run partial
network, scenario = build_one_depth_tree(9)
capped = traverse(
    network,
    EngineConfig(start=scenario.start, end=scenario.end, max_paths=500, keep_paths=False),
)
print(f"cap 500: found {capped.final_count} paths, partial = {capped.partial}")

# a deadline stops between candidates, so the partial counts stay consistent
timed = traverse(
    network,
    EngineConfig(start=scenario.start, end=scenario.end, max_seconds=0.2, keep_paths=False),
)
print(f"0.2 s deadline: {timed.final_count} paths in {timed.elapsed:.2f} s, "
      f"partial = {timed.partial}, "
      f"histogram total = {sum(timed.length_histogram.values())}")
