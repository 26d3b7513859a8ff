"""Tail bounds next to their exact values, plus FKG and independence checks."""

from cubeboot import (
    CubeSpec,
    VertexSet,
    WeightedBinomialSpec,
    chernoff_bound,
    exact_binom_tail,
    fkg_exact_check,
    independence_check,
    make_schedule,
    normal_upper_tail,
    run_to_fixpoint,
    small_p_tail_bound,
    weighted_binom_tail_bound,
    weighted_binom_tail_exact,
)

print("Chernoff bound vs exact binomial tail, n=100, p=0.5:")
for t in (5, 10, 20):
    exact = exact_binom_tail(100, 0.5, 50 + t)
    print(f"  t={t:>2}  bound {chernoff_bound(100, t):.3e}   "
          f"exact {exact:.3e}")

print("\nsparse-regime bound 2 p^(m/2), n=50, p=1e-4 (p n^2 = 0.25):")
for m in (2, 4, 6):
    print(f"  m={m}  bound {small_p_tail_bound(50, 1e-4, m):.3e}   "
          f"exact {exact_binom_tail(50, 1e-4, m):.3e}")

print("\nweighted sum Y = X_1 + 2 X_2, X_i ~ Bin(20, 0.3):")
wspec = WeightedBinomialSpec((20, 20), 0.3)
for t in (4, 8, 12):
    bound = weighted_binom_tail_bound(wspec, t)
    exact = weighted_binom_tail_exact(wspec, wspec.mean + t)
    print(f"  t={t:>2}  bound {bound:.3e}   exact {exact:.3e}")

print("\nnormal upper tail: 1-Phi(1) =", f"{normal_upper_tail(1.0):.6f}")

q2 = CubeSpec(2, 1)
r2 = make_schedule("boot", 2)


def percolates(members: VertexSet) -> bool:
    return run_to_fixpoint(q2, members, r2).percolated


res = fkg_exact_check(2, 0.5, percolates, lambda s: 0 in s)
print(f"\nFKG on Q_2 (percolation vs seed vertex, p=1/2): "
      f"P(A and B) = {res.p_joint} >= P(A)P(B) = {res.p_product}: {res.holds}")

spec4 = CubeSpec(4, 1)
far = independence_check(spec4, r2, 1, (0b0000, 0b1111), 0.3)
near = independence_check(spec4, r2, 1, (0b0000, 0b0011), 0.3)
print(f"\nindependence after one step on Q_4 (threshold 2, p=0.3):")
print(f"  antipodal pair (distance 4): |joint - product| = "
      f"{far.difference:.2e}  -> independent: {far.factorizes}")
print(f"  close pair     (distance 2): |joint - product| = "
      f"{near.difference:.2e}  -> independent: {near.factorizes}")
