"""Monte Carlo estimation of percolation probabilities and p_c.

Randomness is counter-based: every vertex v of trial i under master seed s
gets a fixed 32-bit uniform lane U(s, i, v) drawn from a Philox stream
keyed by (s, trial group), where the group and the lane position inside it
are fixed functions of (i, v).  A vertex is initially infected iff
U < floor(p * 2^32), so for a fixed (seed, trial) the initial set grows
monotonically with p: percolation indicators are coupled across p exactly,
not just statistically.  Results are pure functions of the plan — batch
sizes, worker counts, and execution order cannot change them.

p_c is located by bisection on p.  The true percolation probability is
strictly increasing where nontrivial, and the coupled empirical curve is
monotone too, so bracket moves are made only when the point estimate is on
one side of 1/2 with high confidence; statistically unresolvable midpoints
trigger one trial widening and then a CI-limited stop.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from statistics import NormalDist

import numpy as np

from . import _kernels, _tinyproc
from .cube import CubeSpec, VertexSet
from .engine import ThresholdSchedule

LANE_SCALE = 1 << 32  # 32-bit uniform lanes


@dataclass(frozen=True)
class TrialPlan:
    """Everything that determines a Monte Carlo run bit-for-bit."""

    spec: CubeSpec
    schedule: ThresholdSchedule
    p: float
    trials: int
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < (1 << 64):
            raise ValueError("seed must fit in 64 bits")


@dataclass
class PercProbEstimate:
    p_hat: float
    successes: int
    trials: int
    ci_low: float
    ci_high: float
    confidence: float = 0.99


@dataclass
class PcEstimate:
    lo: float
    hi: float
    target: float
    evaluations: list[tuple[float, PercProbEstimate]]
    ci_limited: bool
    policy: str
    trials_per_point: int
    seed: int


@dataclass
class StabilizationProfile:
    fixpoint_histogram: dict[int, int]
    frac_a2_eq_a1: PercProbEstimate
    frac_a3_eq_a2: PercProbEstimate
    trials: int


def wilson_interval(successes: int, trials: int,
                    confidence: float = 0.99) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials, trials >= 1")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials
                         + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


# -- coupled counter-based sampling -------------------------------------------
#
# Trials are grouped so one keyed Philox stream serves up to 2^16 lanes; the
# group index and the trial's row inside its group depend only on (n, trial),
# making U(seed, trial, v) a fixed function regardless of how runs are
# chunked or parallelized.


def _rows_per_group(n: int) -> int:
    return max(1, 1 << max(0, 16 - n))


def _group_lanes(n: int, seed: int, group: int) -> np.ndarray:
    """uint32 uniform lanes for one trial group, shape (rows, 2^n)."""
    nv = 1 << n
    rows = _rows_per_group(n)
    key = np.array([seed, group], dtype=np.uint64)
    raw = np.random.Philox(key=key).random_raw(rows * nv // 2)
    return raw.view(np.uint32).reshape(rows, nv)


def _pack_rows(flags: np.ndarray, n: int) -> np.ndarray:
    """(rows, 2^n) booleans -> (rows, W) packed uint64 membership words."""
    nv = 1 << n
    if nv < 64:
        padded = np.zeros((flags.shape[0], 64), dtype=np.uint8)
        padded[:, :nv] = flags
        flags = padded
    return np.packbits(flags.astype(np.uint8), axis=1,
                       bitorder="little").view(np.uint64)


def _sample_words(spec: CubeSpec, p: float, seed: int,
                  t0: int, t1: int) -> np.ndarray:
    """Packed initial sets for trials t0..t1-1, shape (t1-t0, W)."""
    n = spec.n
    count = t1 - t0
    if p <= 0.0:
        return np.zeros((count, spec.num_words), dtype=np.uint64)
    if p >= 1.0:
        return np.tile(VertexSet.full(n).words, (count, 1))
    cut = np.uint32(int(p * LANE_SCALE))
    rows = _rows_per_group(n)
    out = np.empty((count, spec.num_words), dtype=np.uint64)
    t = t0
    while t < t1:
        group, row = divmod(t, rows)
        take = min(t1 - t, rows - row)
        lanes = _group_lanes(n, seed, group)[row:row + take]
        out[t - t0:t - t0 + take] = _pack_rows(lanes < cut, n)
        t += take
    return out


def sample_initial(spec: CubeSpec, p: float, seed: int, trial: int) -> VertexSet:
    """The initial infected set of one trial under the monotone coupling."""
    words = _sample_words(spec, p, seed, trial, trial + 1)
    return VertexSet(spec.n, words[0])


# -- batched trajectory runner -------------------------------------------------


def _batch_rows(spec: CubeSpec) -> int:
    return max(16, min(1 << 16, (1 << 22) // spec.num_words))


def _run_batch(spec: CubeSpec, schedule: ThresholdSchedule,
               words: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Run each row to its fixpoint; returns (percolated, fixpoint_step)."""
    R = words.shape[0]
    full = VertexSet.full(spec.n).words
    fix = np.full(R, -1, dtype=np.int64)
    perc = np.zeros(R, dtype=bool)
    active = np.arange(R)
    cur = words
    already_full = (cur == full).all(axis=1)
    fix[active[already_full]] = 0
    perc[active[already_full]] = True
    keep = ~already_full
    cur, active = cur[keep], active[keep]
    i = 1
    max_steps = spec.num_vertices  # each non-fixpoint step adds a vertex
    while active.size and i <= max_steps:
        out = np.empty_like(cur)
        _kernels.step_rows(cur, spec.n, spec.k, spec.flip_masks,
                           spec.num_planes, schedule.threshold(i), out)
        changed = (out != cur).any(axis=1)
        fix[active[~changed]] = i - 1  # stalled; active rows are never full
        now_full = changed & (out == full).all(axis=1)
        fix[active[now_full]] = i
        perc[active[now_full]] = True
        keep = changed & ~now_full
        cur, active = out[keep], active[keep]
        i += 1
    if active.size:
        raise RuntimeError("fixpoint not reached within 2^n steps")
    return perc, fix


def _run_trials(plan: TrialPlan, workers: int = 1
                ) -> tuple[np.ndarray, np.ndarray]:
    """Percolation flags and fixpoint steps for all trials of a plan."""
    batch = _batch_rows(plan.spec)
    spans = [(t, min(t + batch, plan.trials))
             for t in range(0, plan.trials, batch)]

    def one(span):
        words = _sample_words(plan.spec, plan.p, plan.seed, *span)
        return _run_batch(plan.spec, plan.schedule, words)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, spans))
    else:
        results = [one(s) for s in spans]
    perc = np.concatenate([r[0] for r in results])
    fix = np.concatenate([r[1] for r in results])
    return perc, fix


def percolation_probability(plan: TrialPlan, workers: int = 1,
                            confidence: float = 0.99) -> PercProbEstimate:
    """Fraction of trials whose closure is the full vertex set, with Wilson CI."""
    perc, _ = _run_trials(plan, workers)
    successes = int(perc.sum())
    lo, hi = wilson_interval(successes, plan.trials, confidence)
    return PercProbEstimate(successes / plan.trials, successes, plan.trials,
                            lo, hi, confidence)


def stabilization_profile(plan: TrialPlan, workers: int = 1,
                          confidence: float = 0.99) -> StabilizationProfile:
    """Distribution of fixpoint steps, plus early-stabilization fractions.

    A trial counts toward A_2 = A_1 when its fixpoint step is <= 1 (the
    thresholds are nondecreasing, so a step that adds nothing ends the run),
    and toward A_3 = A_2 when the fixpoint step is <= 2.
    """
    _, fix = _run_trials(plan, workers)
    hist = {int(s): int(c) for s, c in zip(*np.unique(fix, return_counts=True))}
    n21 = int((fix <= 1).sum())
    n32 = int((fix <= 2).sum())
    est = []
    for successes in (n21, n32):
        lo, hi = wilson_interval(successes, plan.trials, confidence)
        est.append(PercProbEstimate(successes / plan.trials, successes,
                                    plan.trials, lo, hi, confidence))
    return StabilizationProfile(hist, est[0], est[1], plan.trials)


# -- exact tiny-instance oracle -------------------------------------------------


@lru_cache(maxsize=32)
def _percolating_histogram(spec: CubeSpec,
                           schedule: ThresholdSchedule) -> tuple[int, ...]:
    """count[c] = number of initial sets of cardinality c whose closure is V."""
    nv = spec.num_vertices
    nbrs = _tinyproc.masks_for(spec)
    full = (1 << nv) - 1
    counts = [0] * (nv + 1)
    for mask in range(1 << nv):
        final, _ = _tinyproc.tiny_closure(nbrs, schedule, mask)
        if final == full:
            counts[mask.bit_count()] += 1
    return tuple(counts)


def exact_percolation_probability(spec: CubeSpec, schedule: ThresholdSchedule,
                                  p: float) -> float:
    """Sum of p^|S| (1-p)^(2^n-|S|) over all percolating initial sets S.

    Enumerates every initial set, so the cube must have 2^n <= 16 vertices.
    """
    if spec.num_vertices > 16:
        raise ValueError("exact enumeration supports 2^n <= 16")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    counts = _percolating_histogram(spec, schedule)
    nv = spec.num_vertices
    return math.fsum(sorted(
        cnt * p ** c * (1.0 - p) ** (nv - c)
        for c, cnt in enumerate(counts) if cnt))


# -- bisection search for the critical probability ------------------------------


def estimate_pc(spec: CubeSpec, schedule: ThresholdSchedule,
                trials_per_point: int, p_tolerance: float, seed: int,
                workers: int = 1, confidence: float = 0.99,
                decision_confidence: float = 0.999,
                widen_factor: int = 4,
                ci_width_floor: float = 0.1) -> PcEstimate:
    """Bracket the p where the percolation probability crosses 1/2.

    All points share the master seed, so the empirical curve is exactly
    monotone in p and bisection decisions are mutually consistent.  A
    midpoint moves an endpoint only when its decision-level Wilson interval
    excludes 1/2; an unresolved midpoint gets widen_factor more trials once,
    and if still unresolved the search stops and reports a CI-limited
    bracket.  A point estimate exactly at 1/2 counts as subcritical.

    The endpoints are never evaluated: with every step threshold >= 1 the
    empty initial set stays empty and the full one is already percolated,
    so the probability is 0 at p = 0 and 1 at p = 1 and the crossing of 1/2
    is always bracketed by [0, 1].
    """
    if trials_per_point < 10**3:
        raise ValueError("trials_per_point must be >= 1000")
    if not 0.0 < p_tolerance < 1.0:
        raise ValueError("p_tolerance must be in (0, 1)")
    lo, hi = 0.0, 1.0
    evaluations: list[tuple[float, PercProbEstimate]] = []
    ci_limited = False
    # no commas: the string is embedded in a CSV field
    policy = (f"bisection(decision_ci={decision_confidence};"
              f"widen={widen_factor}x;tie=subcritical)")

    def resolve(p_mid: float, trials: int):
        plan = TrialPlan(spec, schedule, p_mid, trials, seed)
        est = percolation_probability(plan, workers, confidence)
        evaluations.append((p_mid, est))
        dlo, dhi = wilson_interval(est.successes, est.trials,
                                   decision_confidence)
        if dhi < 0.5:
            return "below"
        if dlo > 0.5:
            return "above"
        return "unresolved"

    while hi - lo > p_tolerance:
        mid = (lo + hi) / 2.0
        side = resolve(mid, trials_per_point)
        if side == "unresolved":
            width = (evaluations[-1][1].ci_high - evaluations[-1][1].ci_low)
            if width < ci_width_floor:
                side = resolve(mid, trials_per_point * widen_factor)
            if side == "unresolved":
                ci_limited = True
                break
        if side == "below":
            lo = mid
        else:
            hi = mid
    return PcEstimate(lo, hi, 0.5, evaluations, ci_limited, policy,
                      trials_per_point, seed)
