"""Estimate critical probabilities, small exactly and larger by Monte Carlo.

On Q_2 the percolation probability has the closed form 2p^2 - p^4 (threshold
2), so the Monte Carlo machinery can be checked against exact enumeration
before trusting it on cubes where enumeration is hopeless.
"""

import math

from cubeboot import (
    CubeSpec,
    TrialPlan,
    estimate_pc,
    exact_percolation_probability,
    make_schedule,
    percolation_probability,
)

q2 = CubeSpec(2, 1)
r2 = make_schedule("boot", 2)

print("exact curve on Q_2 (threshold 2) vs Monte Carlo, 10^5 trials:")
print(f"{'p':>5} {'exact':>10} {'estimate':>10} {'99% CI':>24}")
for p in (0.2, 0.4, 0.5, 0.6, 0.8):
    exact = exact_percolation_probability(q2, r2, p)
    est = percolation_probability(TrialPlan(q2, r2, p, 100_000, seed=1))
    print(f"{p:>5.2f} {exact:>10.6f} {est.p_hat:>10.6f} "
          f"   [{est.ci_low:.6f}, {est.ci_high:.6f}]")

target = math.sqrt(1 - math.sqrt(2) / 2)
pc = estimate_pc(q2, r2, trials_per_point=100_000, p_tolerance=0.01, seed=7)
print(f"\nbisection bracket for p_c(Q_2, 2): [{pc.lo:.5f}, {pc.hi:.5f}]")
print(f"closed-form crossing sqrt(1 - sqrt(2)/2) = {target:.5f}")
print(f"evaluations used: {len(pc.evaluations)}")

print("\nnow a cube out of enumeration reach: Q_14 with r = ceil(14^0.8) = "
      f"{math.ceil(14 ** 0.8)}")
spec = CubeSpec(14, 1)
sched = make_schedule("boot", math.ceil(14 ** 0.8))
pc14 = estimate_pc(spec, sched, trials_per_point=20_000, p_tolerance=0.02,
                   seed=7)
print(f"p_c bracket: [{pc14.lo:.4f}, {pc14.hi:.4f}]  "
      f"(first-order reference 14^-0.2 = {14 ** -0.2:.4f})")
