"""Distance partitions and 1-factorizations of the k-subsets.

Blocks whose members sit far apart in Hamming distance make infection events
independent; the 1-factorization gives the extremal construction for the
radius-k sphere when k divides n.
"""

from math import comb

from cubeboot import (
    baranyai,
    distance_partition,
    format_factorization,
    hamming,
    sphere,
    sphere_partition,
    verify_factorization,
)

print("1-factorization of the 3-subsets of {0..5} (Baranyai):")
f = baranyai(6, 3)
print(format_factorization(f))
report = verify_factorization(f)
print(f"factors: {f.num_factors} = C(5,2) = {comb(5, 2)}, "
      f"valid: {report.ok}\n")

print("radius-2 sphere of Q_6 split into far-apart blocks:")
p = sphere_partition(6, 2)
print(f"  {p.num_blocks} blocks of {len(p.blocks[0])} "
      f"(bound k*C(n,k-1) = {2 * comb(6, 1)}), method: {p.method}")
b = p.blocks[0]
print(f"  first block {[bin(v) for v in b]}, pairwise distances "
      f"{sorted(hamming(x, y) for i, x in enumerate(b) for y in b[i+1:])}\n")

print("greedy partition of the whole radius-3 sphere of Q_7 at distance 3:")
universe = sphere(7, 0, 3)
g = distance_partition(universe, 3)
sizes = sorted((len(b) for b in g.blocks), reverse=True)
print(f"  {len(universe)} vertices -> {g.num_blocks} blocks, sizes {sizes}")
