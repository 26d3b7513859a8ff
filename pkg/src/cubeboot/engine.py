"""Bootstrap percolation dynamics: threshold schedules and fixpoint iteration.

A vertex outside the infected set joins it as soon as it has at least
`threshold(step)` infected neighbors; infected vertices never recover.  The
base process uses a constant threshold r.  The relaxed variants lower the
bar for the first step or the first two steps:

    boot    r, r, r, ...
    boot1   r-t, r, r, ...
    boot2   r-2t, r-t, r, r, ...
    boot3   same shape as boot2 (used with the majority threshold r)

All four shapes have nondecreasing thresholds, so a step that adds nothing
is a fixpoint of the whole remaining schedule.  Because lowering thresholds
can only add vertices, each relaxed process dominates the base process from
the same initial set; `trace_dominates` checks that step-by-step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .cube import CubeSpec, VertexSet

KINDS = ("boot", "boot1", "boot2", "boot3")


@dataclass(frozen=True)
class ThresholdSchedule:
    """Per-step infection thresholds; step indices start at 1."""

    kind: str
    r: int
    t: int = 0

    def threshold(self, step: int) -> int:
        if step < 1:
            raise ValueError("step index starts at 1")
        if self.kind == "boot":
            return self.r
        if self.kind == "boot1":
            return self.r - self.t if step == 1 else self.r
        # boot2 / boot3
        if step == 1:
            return self.r - 2 * self.t
        if step == 2:
            return self.r - self.t
        return self.r

    def describe(self) -> str:
        if self.kind == "boot":
            return f"boot(r={self.r})"
        return f"{self.kind}(r={self.r}, t={self.t})"


def make_schedule(kind: str, r: int, t: int = 0) -> ThresholdSchedule:
    """Build a schedule, rejecting any step threshold below 1.

    A threshold below 1 would infect every vertex unconditionally; the
    relaxed definitions are only meaningful while r - t (and r - 2t) stay
    positive, so such schedules are rejected rather than clamped.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown schedule kind {kind!r}")
    if r < 1:
        raise ValueError(f"base threshold r={r} must be >= 1")
    if t < 0:
        raise ValueError(f"relaxation t={t} must be >= 0")
    if kind == "boot" and t != 0:
        raise ValueError("boot takes no relaxation parameter")
    if kind == "boot1" and r - t < 1:
        raise ValueError(f"boot1 needs r - t >= 1, got {r - t}")
    if kind in ("boot2", "boot3") and r - 2 * t < 1:
        raise ValueError(f"{kind} needs r - 2t >= 1, got {r - 2 * t}")
    return ThresholdSchedule(kind, r, t)


@dataclass
class Trace:
    """Sizes |A_0|, |A_1|, ... up to the fixpoint, plus run outcome."""

    sizes: list[int]
    fixpoint_step: int | None
    percolated: bool
    final: VertexSet | None = None
    truncated: bool = False


def step(spec: CubeSpec, A: VertexSet, threshold: int) -> VertexSet:
    """A ∪ {v : |N(v) ∩ A| >= threshold}; the input set is not modified."""
    if A.n != spec.n:
        raise ValueError("vertex set is over a different cube")
    rows = A.words.reshape(1, -1)
    out = np.empty_like(rows)
    _kernels.step_rows(rows, spec.n, spec.k, spec.flip_masks,
                       spec.num_planes, threshold, out)
    return VertexSet(spec.n, out[0])


def run_to_fixpoint(spec: CubeSpec, A0: VertexSet,
                    schedule: ThresholdSchedule,
                    max_steps: int | None = None,
                    keep_final: bool = True) -> Trace:
    """Iterate the process from A0 until a step adds no vertex.

    The default step budget 2^n always suffices: every non-fixpoint step
    adds at least one vertex.  A custom budget that runs out first yields a
    truncated trace with fixpoint_step None.
    """
    if max_steps is None:
        max_steps = spec.num_vertices
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    current = A0.copy()
    sizes = [len(current)]
    full = spec.num_vertices
    for i in range(1, max_steps + 1):
        new = step(spec, current, schedule.threshold(i))
        if new == current:
            return Trace(sizes, i - 1, sizes[-1] == full,
                         current if keep_final else None)
        sizes.append(len(new))
        current = new
        if sizes[-1] == full:
            return Trace(sizes, i, True, current if keep_final else None)
    return Trace(sizes, None, sizes[-1] == full,
                 current if keep_final else None, truncated=True)


class DominancePreconditionError(ValueError):
    """The low schedule is not pointwise <= the high schedule."""


def trace_dominates(spec: CubeSpec, A0: VertexSet,
                    sched_lo: ThresholdSchedule,
                    sched_hi: ThresholdSchedule,
                    max_steps: int | None = None) -> bool:
    """Run both schedules from A0 and check A_i(lo) ⊇ A_i(hi) at every step.

    Raises DominancePreconditionError if sched_lo is not pointwise below
    sched_hi over the run; a containment failure (impossible when the
    precondition holds) returns False instead.
    """
    if max_steps is None:
        max_steps = spec.num_vertices
    lo, hi = A0.copy(), A0.copy()
    for i in range(1, max_steps + 1):
        tl, th = sched_lo.threshold(i), sched_hi.threshold(i)
        if tl > th:
            raise DominancePreconditionError(
                f"threshold {tl} > {th} at step {i}")
        new_lo = step(spec, lo, tl)
        new_hi = step(spec, hi, th)
        if not new_hi.issubset(new_lo):
            return False
        if new_lo == lo and new_hi == hi:
            return True
        lo, hi = new_lo, new_hi
    return True
