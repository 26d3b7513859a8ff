"""Watch the infection process evolve on a moderate cube.

Runs the base process and its relaxed variants from the same random initial
set, prints the per-step infected counts, and demonstrates that each relaxed
schedule dominates the base process step by step.
"""

import math

from cubeboot import (
    CubeSpec,
    make_schedule,
    run_to_fixpoint,
    sample_initial,
    trace_dominates,
)

n = 10
spec = CubeSpec(n, 1)
r = math.ceil(n ** 0.8)
p = 0.28
seed = 2024

print(f"Q_{n}, base threshold r = {r}, initial infection probability {p}")
a0 = sample_initial(spec, p, seed, trial=0)
print(f"initial set: {len(a0)} of {spec.num_vertices} vertices\n")

schedules = [
    make_schedule("boot", r),
    make_schedule("boot1", r, 2),
    make_schedule("boot2", r, 2),
]
for sched in schedules:
    trace = run_to_fixpoint(spec, a0, sched)
    status = "percolated" if trace.percolated else "stalled"
    print(f"{sched.describe():<22} sizes {trace.sizes}")
    print(f"{'':<22} fixpoint at step {trace.fixpoint_step} ({status})\n")

print("dominance of the relaxed schedules over the base process:")
for sched in schedules[1:]:
    ok = trace_dominates(spec, a0, sched, schedules[0])
    print(f"  {sched.describe():<20} contains boot(r={r}) at every step: {ok}")

# a strict case: relaxation turns a stalling configuration contagious
from cubeboot import VertexSet

spec4 = CubeSpec(4, 1)
pair = VertexSet.from_codes(4, [0b0000, 0b1111])
base = run_to_fixpoint(spec4, pair, make_schedule("boot", 3))
relaxed = run_to_fixpoint(spec4, pair, make_schedule("boot1", 3, 2))
print(f"\nQ_4 from two antipodal seeds: boot(3) percolates: {base.percolated}, "
      f"boot1(3,2) percolates: {relaxed.percolated}")
