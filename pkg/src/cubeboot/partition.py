"""Distance partitions of vertex families and hypergraph 1-factorizations.

Two constructions used throughout the analysis of the process:

* `distance_partition` splits any vertex family into blocks whose members
  are pairwise at Hamming distance >= d (greedy conflict coloring, giving
  at most max_x |{y : d(x,y) <= d-1}| blocks).

* `baranyai` builds a 1-factorization of the complete k-uniform hypergraph
  on ground set {0..n-1} when k divides n: C(n-1, k-1) factors, each a
  perfect matching of n/k disjoint k-subsets, every k-subset appearing in
  exactly one factor.  Identifying a k-subset with the weight-k vertex code
  whose support it is, the factors partition the radius-k sphere into
  blocks with pairwise distance exactly 2k (`sphere_partition`).

The factorization is constructed stage by stage: each factor holds a
multiset of partial subsets, and ground elements are inserted one at a time
by routing an integral flow that decides, per factor, which partial subset
absorbs the new element.  The fractional relaxation is always feasible, so
an integral routing exists at every stage.
"""

from __future__ import annotations

import warnings
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .cube import sphere

BARANYAI_SIZE_CAP = 10**6
BACKTRACK_SIZE_CAP = 10**4


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks covering a vertex universe, with a distance guarantee."""

    blocks: tuple[tuple[int, ...], ...]
    universe: tuple[int, ...]
    min_distance: int
    method: str = "greedy"

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class Factorization:
    """1-factorization of the complete k-uniform hypergraph on {0..n-1}."""

    n: int
    k: int
    factors: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def num_factors(self) -> int:
        return len(self.factors)


@dataclass
class FactorizationReport:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def distance_partition(universe, d: int) -> Partition:
    """Partition a vertex family into blocks pairwise at distance >= d.

    Vertices are processed in ascending code order and placed into the
    lowest-index block with no conflict, so the result is deterministic.
    """
    if d < 1:
        raise ValueError("minimum distance must be >= 1")
    codes = sorted(int(v) for v in universe)
    if len(set(codes)) != len(codes):
        raise ValueError("universe contains duplicate vertices")
    blocks: list[list[int]] = []
    arrays: list[np.ndarray] = []  # mirrors blocks, for vectorized checks
    for v in codes:
        placed = False
        for i, arr in enumerate(arrays):
            if int(np.bitwise_count(arr ^ np.uint64(v)).min()) >= d:
                blocks[i].append(v)
                arrays[i] = np.append(arr, np.uint64(v))
                placed = True
                break
        if not placed:
            blocks.append([v])
            arrays.append(np.array([v], dtype=np.uint64))
    return Partition(tuple(tuple(b) for b in blocks), tuple(codes), d, "greedy")


def verify_partition(p: Partition) -> list[str]:
    """Check disjointness, exact coverage, and the pairwise distance bound."""
    problems = []
    seen: set[int] = set()
    for b in p.blocks:
        for v in b:
            if v in seen:
                problems.append(f"vertex {v} appears in two blocks")
            seen.add(v)
    if seen != set(p.universe):
        problems.append("blocks do not cover the universe exactly")
    for bi, b in enumerate(p.blocks):
        arr = np.array(b, dtype=np.uint64)
        for j, v in enumerate(b):
            if j + 1 < len(b):
                dmin = int(np.bitwise_count(arr[j + 1:] ^ np.uint64(v)).min())
                if dmin < p.min_distance:
                    problems.append(
                        f"block {bi}: pair at distance {dmin} < {p.min_distance}")
                    break
    return problems


# -- Baranyai 1-factorization -------------------------------------------------


class _Dinic:
    """Max-flow on a small integer-capacity network."""

    def __init__(self, num_nodes: int):
        self.adj: list[list[int]] = [[] for _ in range(num_nodes)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, cap: int) -> int:
        eid = len(self.to)
        self.adj[u].append(eid)
        self.to.append(v)
        self.cap.append(cap)
        self.adj[v].append(eid + 1)
        self.to.append(u)
        self.cap.append(0)
        return eid

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        n = len(self.adj)
        while True:
            level = [-1] * n
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for eid in self.adj[u]:
                    v = self.to[eid]
                    if self.cap[eid] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        q.append(v)
            if level[t] < 0:
                return flow
            it = [0] * n

            def dfs(u: int, pushed: int) -> int:
                if u == t:
                    return pushed
                while it[u] < len(self.adj[u]):
                    eid = self.adj[u][it[u]]
                    v = self.to[eid]
                    if self.cap[eid] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[eid]))
                        if got:
                            self.cap[eid] -= got
                            self.cap[eid ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 60)
                if not pushed:
                    break
                flow += pushed


def baranyai(n: int, k: int, method: str = "flow") -> Factorization:
    """1-factorization of the complete k-uniform hypergraph on n elements.

    Exists if and only if k divides n; k not dividing n is rejected.
    """
    if k < 1 or n < 1:
        raise ValueError("need n >= 1 and k >= 1")
    if n % k != 0:
        raise ValueError(f"no 1-factorization exists: {k} does not divide {n}")
    if comb(n, k) > BARANYAI_SIZE_CAP:
        raise ValueError(f"C({n},{k}) exceeds the size cap {BARANYAI_SIZE_CAP}")
    if method == "backtracking":
        return _baranyai_backtracking(n, k)
    if method != "flow":
        raise ValueError(f"unknown method {method!r}")

    num_factors = comb(n - 1, k - 1)
    factors: list[Counter] = [Counter({(): n // k}) for _ in range(num_factors)]
    for e in range(n):
        rem = n - e  # elements still to be placed, including e
        types = sorted({s for f in factors for s in f if len(s) < k})
        type_index = {s: i for i, s in enumerate(types)}
        # Exactly C(rem-1, k-|s|-1) of the partial subsets equal to s must
        # absorb element e; each factor absorbs e into exactly one subset.
        src = 0
        sink = num_factors + len(types) + 1
        net = _Dinic(sink + 1)
        edge_types: list[list[tuple[int, tuple]]] = [[] for _ in range(num_factors)]
        for j, f in enumerate(factors):
            net.add_edge(src, 1 + j, 1)
            for s, mult in f.items():
                if len(s) < k:
                    eid = net.add_edge(1 + j, 1 + num_factors + type_index[s],
                                       mult)
                    edge_types[j].append((eid, s))
        for s, i in type_index.items():
            net.add_edge(1 + num_factors + i, sink,
                         comb(rem - 1, k - len(s) - 1))
        flow = net.max_flow(src, sink)
        if flow != num_factors:
            raise RuntimeError(
                f"integral routing infeasible at element {e} (flow {flow})")
        for j in range(num_factors):
            extended = None
            for eid, s in edge_types[j]:
                sent = net.cap[eid ^ 1]  # flow on the forward edge
                if sent:
                    extended = s
                    break
            assert extended is not None
            factors[j][extended] -= 1
            if factors[j][extended] == 0:
                del factors[j][extended]
            factors[j][tuple(sorted(extended + (e,)))] += 1

    out = []
    for f in factors:
        subsets = []
        for s, mult in f.items():
            subsets.extend([s] * mult)
        out.append(tuple(sorted(subsets)))
    return Factorization(n, k, tuple(sorted(out)))


def _baranyai_backtracking(n: int, k: int) -> Factorization:
    """Exact-cover search over factors; independent of the flow construction."""
    if comb(n, k) > BACKTRACK_SIZE_CAP:
        raise ValueError(
            f"C({n},{k}) exceeds the backtracking cap {BACKTRACK_SIZE_CAP}")
    all_subsets = [tuple(s) for s in combinations(range(n), k)]
    remaining = set(all_subsets)
    factors: list[tuple[tuple[int, ...], ...]] = []
    num_factors = comb(n - 1, k - 1)

    def matchings(covered: int, chosen: list):
        """Yield perfect matchings of {0..n-1} from the remaining subsets."""
        if covered == (1 << n) - 1:
            yield tuple(chosen)
            return
        x = (~covered & (covered + 1)).bit_length() - 1  # lowest uncovered element
        for s in all_subsets:
            if x not in s or s not in remaining:
                continue
            mask = 0
            for el in s:
                mask |= 1 << el
            if mask & covered:
                continue
            remaining.discard(s)
            chosen.append(s)
            yield from matchings(covered | mask, chosen)
            chosen.pop()
            remaining.add(s)

    def solve() -> bool:
        if len(factors) == num_factors:
            return not remaining
        for matching in matchings(0, []):
            for s in matching:
                remaining.discard(s)
            factors.append(tuple(sorted(matching)))
            if solve():
                return True
            factors.pop()
            for s in matching:
                remaining.add(s)
        return False

    if not solve():
        raise RuntimeError("backtracking search failed (should not happen)")
    return Factorization(n, k, tuple(sorted(factors)))


def verify_factorization(f: Factorization) -> FactorizationReport:
    """Check every 1-factorization invariant, naming violations with witnesses."""
    problems = []
    ground = set(range(f.n))
    if f.num_factors != comb(f.n - 1, f.k - 1):
        problems.append(
            f"factor count {f.num_factors} != C({f.n - 1},{f.k - 1}) "
            f"= {comb(f.n - 1, f.k - 1)}")
    multiplicity: Counter = Counter()
    for fi, factor in enumerate(f.factors):
        if len(factor) != f.n // f.k:
            problems.append(f"factor {fi}: {len(factor)} subsets != n/k")
        covered: list[int] = []
        for s in factor:
            if len(s) != f.k:
                problems.append(f"factor {fi}: subset {s} is not a {f.k}-set")
            if any(not 0 <= el < f.n for el in s):
                problems.append(f"factor {fi}: subset {s} leaves the ground set")
            multiplicity[tuple(sorted(s))] += 1
            covered.extend(s)
        if len(set(covered)) != len(covered):
            problems.append(f"factor {fi}: subsets are not pairwise disjoint")
        elif set(covered) != ground:
            problems.append(f"factor {fi}: union misses "
                            f"{sorted(ground - set(covered))}")
    for s in combinations(range(f.n), f.k):
        m = multiplicity.get(s, 0)
        if m == 0:
            problems.append(f"coverage: missing subset {s}")
        elif m > 1:
            problems.append(f"multiplicity: subset {s} appears {m} times")
    return FactorizationReport(not problems, problems)


def support_code(subset) -> int:
    """Weight-|subset| vertex code whose set bits are the subset elements."""
    m = 0
    for el in subset:
        m |= 1 << el
    return m


def sphere_partition(n: int, k: int) -> Partition:
    """Partition S(0, k) into blocks with pairwise distance >= 2k.

    When k divides n the blocks come from a 1-factorization (disjoint
    supports give distance exactly 2k and exactly C(n-1, k-1) blocks,
    within the k*C(n, k-1) bound).  Otherwise a greedy partition is built
    and its block count is soft-checked against the same bound.
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    universe = sphere(n, 0, k)
    bound = k * comb(n, k - 1)
    if n % k == 0:
        fact = baranyai(n, k)
        blocks = tuple(
            tuple(sorted(support_code(s) for s in factor))
            for factor in fact.factors)
        assert len(blocks) <= bound
        return Partition(tuple(sorted(blocks)), tuple(universe), 2 * k,
                         "baranyai")
    part = distance_partition(universe, 2 * k)
    if part.num_blocks > bound:
        warnings.warn(
            f"greedy sphere partition used {part.num_blocks} blocks, above "
            f"the constructive bound k*C(n,k-1) = {bound}", stacklevel=2)
    return part


# -- line-oriented text interchange -------------------------------------------


def format_factorization(f: Factorization) -> str:
    """One factor per line; subsets as comma-separated elements, '|'-joined.

    Factors and subsets are emitted in sorted order, so equal factorizations
    format identically byte for byte.
    """
    lines = []
    for factor in sorted(tuple(sorted(s) for s in factor_) for factor_ in f.factors):
        lines.append("|".join(",".join(str(el) for el in s) for s in factor))
    return "\n".join(lines) + "\n"


def parse_factorization(text: str) -> Factorization:
    """Inverse of format_factorization; ground-set size inferred from content."""
    factors = []
    for line in text.strip().splitlines():
        subsets = tuple(tuple(int(el) for el in part.split(","))
                        for part in line.strip().split("|"))
        factors.append(subsets)
    if not factors:
        raise ValueError("empty factorization text")
    k = len(factors[0][0])
    n = max(el for factor in factors for s in factor for el in s) + 1
    return Factorization(n, k, tuple(sorted(factors)))
