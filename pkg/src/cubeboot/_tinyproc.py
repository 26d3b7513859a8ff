"""Scalar reference process for tiny cubes (2^n <= 16).

Whole vertex sets fit in one Python int (bit v = vertex v), so exact
enumeration over every one of the 2^(2^n) initial configurations is
practical.  The exact oracles in `estimator` and `bounds` are built on
these loops and stay independent of the bit-parallel production kernel.
"""

from __future__ import annotations

from .cube import CubeSpec, neighbor_bitmasks
from .engine import ThresholdSchedule


def tiny_step(nbr_masks: list[int], members: int, threshold: int) -> int:
    """One update of the set packed into an int: add v with enough infected."""
    out = members
    for v, nbrs in enumerate(nbr_masks):
        if not (members >> v) & 1 and (nbrs & members).bit_count() >= threshold:
            out |= 1 << v
    return out


def tiny_run(nbr_masks: list[int], schedule: ThresholdSchedule,
             members: int, num_steps: int) -> int:
    """A_j after exactly num_steps scheduled updates from A_0 = members."""
    for i in range(1, num_steps + 1):
        members = tiny_step(nbr_masks, members, schedule.threshold(i))
    return members


def tiny_closure(nbr_masks: list[int], schedule: ThresholdSchedule,
                 members: int) -> tuple[int, int]:
    """(final set, fixpoint step): iterate until an update adds nothing."""
    i = 1
    while True:
        new = tiny_step(nbr_masks, members, schedule.threshold(i))
        if new == members:
            return members, i - 1
        members = new
        i += 1


def masks_for(spec: CubeSpec) -> list[int]:
    return neighbor_bitmasks(spec)
