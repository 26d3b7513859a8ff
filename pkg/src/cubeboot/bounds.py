"""Tail inequalities as evaluable functions, each paired with an exact oracle.

Every bound here returns a number that must dominate the exactly computed
probability on its stated precondition region; the test suite enforces
"bound >= truth" against the enumeration/summation oracles in this module.
Also includes exact finite checks of positive correlation for increasing
events (FKG) and of independence of infection events at sufficient Hamming
distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _tinyproc
from .cube import CubeSpec, VertexSet
from .engine import ThresholdSchedule


def chernoff_bound(n: int, t: float) -> float:
    """exp(-2 t^2 / n): bound on both Bin(n, p) tails at offset t from np."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if t <= 0:
        raise ValueError("offset t must be positive")
    return math.exp(-2.0 * t * t / n)


def _log_binom_pmf(n: int, i: int, logp: float, logq: float) -> float:
    return (math.lgamma(n + 1) - math.lgamma(i + 1) - math.lgamma(n - i + 1)
            + i * logp + (n - i) * logq)


def exact_binom_tail(n: int, p: float, m: int) -> float:
    """P(Bin(n, p) >= m), summed in increasing term order for stability."""
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")
    if m <= 0:
        return 1.0
    if m > n:
        return 0.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    logp, logq = math.log(p), math.log1p(-p)
    terms = sorted(math.exp(_log_binom_pmf(n, i, logp, logq))
                   for i in range(m, n + 1))
    return min(1.0, math.fsum(terms))


def small_p_tail_bound(n: int, p: float, m: int) -> float:
    """2 p^(m/2): binomial upper-tail bound in the sparse regime p n^2 < 1."""
    if not 0 < p < 1:
        raise ValueError("p must be in (0, 1)")
    if p * n * n >= 1:
        raise ValueError(f"precondition p*n^2 < 1 violated: {p * n * n:g}")
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    return 2.0 * p ** (m / 2.0)


@dataclass(frozen=True)
class WeightedBinomialSpec:
    """Y = sum_i i * X_i with independent X_i ~ Bin(d_i, p), i = 1..k."""

    d: tuple[int, ...]
    p: float

    def __post_init__(self):
        if not self.d or any(di < 0 for di in self.d):
            raise ValueError("class sizes must be nonnegative, at least one class")
        if not 0 < self.p < 1:
            raise ValueError("p must be in (0, 1)")

    @property
    def k(self) -> int:
        return len(self.d)

    @property
    def variance_scale(self) -> int:
        """D(k) = sum_i i^2 d_i."""
        return sum(i * i * di for i, di in enumerate(self.d, start=1))

    @property
    def mean(self) -> float:
        return self.p * sum(i * di for i, di in enumerate(self.d, start=1))

    @property
    def max_value(self) -> int:
        return sum(i * di for i, di in enumerate(self.d, start=1))


def weighted_binom_tail_bound(spec: WeightedBinomialSpec, t: float) -> float:
    """(2t)^(k-1) exp(-2 t^2 / D(k)): bound on P(Y >= E[Y] + t)."""
    if t <= 0:
        raise ValueError("offset t must be positive")
    D = spec.variance_scale
    if D <= 0:
        raise ValueError("D(k) must be positive")
    return (2.0 * t) ** (spec.k - 1) * math.exp(-2.0 * t * t / D)


WEIGHTED_EXACT_CAP = 10**4


def weighted_binom_tail_exact(spec: WeightedBinomialSpec,
                              threshold: float) -> float:
    """P(Y >= threshold) by convolving the k stretched binomial pmfs."""
    top = spec.max_value
    if top > WEIGHTED_EXACT_CAP:
        raise ValueError(f"support size {top} exceeds cap {WEIGHTED_EXACT_CAP}")
    logp, logq = math.log(spec.p), math.log1p(-spec.p)
    dist = np.array([1.0])
    for i, di in enumerate(spec.d, start=1):
        if di == 0:
            continue
        pmf = np.zeros(i * di + 1)
        pmf[::i] = [math.exp(_log_binom_pmf(di, x, logp, logq))
                    for x in range(di + 1)]
        dist = np.convolve(dist, pmf)
    idx = max(0, math.ceil(threshold))
    if idx >= dist.size:
        return 0.0
    return min(1.0, math.fsum(np.sort(dist[idx:])))


def normal_upper_tail(z: float) -> float:
    """1 - Phi(z) via the complementary error function."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


# -- exact finite checks over all initial configurations ----------------------


@dataclass
class FkgCheck:
    p_joint: float
    p_product: float
    holds: bool


def _config_weight(card: int, total: int, p: float) -> float:
    return p ** card * (1.0 - p) ** (total - card)


def verify_increasing(n: int, event) -> None:
    """Exhaustive single-flip audit that event is increasing; raises if not."""
    if n > 4:
        raise ValueError("exhaustive monotonicity audit supports n <= 4")
    nv = 1 << n
    values = [bool(event(VertexSet.from_codes(n, _mask_codes(m, nv))))
              for m in range(1 << nv)]
    for m in range(1 << nv):
        if not values[m]:
            continue
        for v in range(nv):
            if not (m >> v) & 1 and not values[m | (1 << v)]:
                raise ValueError(
                    f"event is not increasing: holds on {m:#x} but not on "
                    f"{m | (1 << v):#x}")


def _mask_codes(mask: int, nv: int) -> list[int]:
    return [v for v in range(nv) if (mask >> v) & 1]


def fkg_exact_check(n: int, p: float, event_a, event_b,
                    assume_monotone: bool = False) -> FkgCheck:
    """Exact P(A ∩ B) vs P(A)P(B) under the product measure on initial sets.

    Both events must be increasing predicates on the initial VertexSet; for
    n <= 3 this is audited exhaustively, at n = 4 the caller must vouch via
    assume_monotone (the audit would be 2^16 * 16 extra evaluations).
    """
    if n > 4:
        raise ValueError("exact FKG check supports n <= 4")
    if not 0 < p < 1:
        raise ValueError("p must be in (0, 1)")
    if n <= 3:
        verify_increasing(n, event_a)
        verify_increasing(n, event_b)
    elif not assume_monotone:
        raise ValueError("at n = 4 monotonicity must be vouched by the caller")
    nv = 1 << n
    terms_a, terms_b, terms_ab = [], [], []
    for mask in range(1 << nv):
        s = VertexSet.from_codes(n, _mask_codes(mask, nv))
        a, b = bool(event_a(s)), bool(event_b(s))
        if not (a or b):
            continue
        w = _config_weight(mask.bit_count(), nv, p)
        if a:
            terms_a.append(w)
        if b:
            terms_b.append(w)
        if a and b:
            terms_ab.append(w)
    pa = math.fsum(sorted(terms_a))
    pb = math.fsum(sorted(terms_b))
    pab = math.fsum(sorted(terms_ab))
    return FkgCheck(pab, pa * pb, pab >= pa * pb - 1e-12)


@dataclass
class IndependenceReport:
    joint: float
    product: float
    marginals: tuple[float, ...]
    difference: float
    factorizes: bool


@lru_cache(maxsize=64)
def _membership_counts(spec: CubeSpec, schedule: ThresholdSchedule,
                       num_steps: int, vertices: tuple[int, ...]):
    """Per-cardinality counts of initial sets whose A_j hits the targets.

    Returns (joint_counts, marginal_counts) where joint_counts[c] counts
    initial sets of cardinality c with every target in A_j, and
    marginal_counts[y][c] the same for target y alone.  Weighting by
    p^c (1-p)^(2^n - c) then gives exact probabilities for any p.
    """
    nv = spec.num_vertices
    nbrs = _tinyproc.masks_for(spec)
    joint = [0] * (nv + 1)
    marg = [[0] * (nv + 1) for _ in vertices]
    for mask in range(1 << nv):
        final = _tinyproc.tiny_run(nbrs, schedule, mask, num_steps)
        c = mask.bit_count()
        hit_all = True
        for yi, y in enumerate(vertices):
            if (final >> y) & 1:
                marg[yi][c] += 1
            else:
                hit_all = False
        if hit_all:
            joint[c] += 1
    return tuple(joint), tuple(tuple(m) for m in marg)


def independence_check(spec: CubeSpec, schedule: ThresholdSchedule,
                       num_steps: int, vertices, p: float) -> IndependenceReport:
    """Exact test of P(all of S in A_j) = prod_y P(y in A_j).

    Enumerates every initial configuration (so 2^n <= 16 is required) and
    reports whether the joint probability factorizes within 1e-12.  With
    pairwise distances >= 2*num_steps + 1 the events cannot share any
    influencing vertex and the factorization is exact.
    """
    if spec.num_vertices > 16:
        raise ValueError("exact independence check supports 2^n <= 16")
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")
    verts = tuple(int(v) for v in vertices)
    joint_counts, marg_counts = _membership_counts(
        spec, schedule, num_steps, verts)
    nv = spec.num_vertices
    joint = math.fsum(sorted(
        cnt * _config_weight(c, nv, p)
        for c, cnt in enumerate(joint_counts) if cnt))
    marginals = tuple(
        math.fsum(sorted(cnt * _config_weight(c, nv, p)
                         for c, cnt in enumerate(mc) if cnt))
        for mc in marg_counts)
    product = math.prod(marginals)
    diff = abs(joint - product)
    return IndependenceReport(joint, product, marginals, diff, diff <= 1e-12)
