"""Hypercube graph model and the bit-parallel neighbor-counting kernel.

Vertices of the n-dimensional cube are integers in [0, 2^n); bit i of the
code is coordinate i of the {0,1}^n vector.  Q(n) connects codes at Hamming
distance 1; the generalized cube Q(n, k) connects codes at Hamming distance
1..k.  Vertex sets are stored as packed bit vectors (one membership bit per
vertex, 64 vertices per machine word), so a whole set over Q_20 is 128 KiB
and every set operation is a handful of word-wide instructions per word.

The central kernel, `infected_neighbor_counts`, computes |N(v) ∩ A| for all
2^n vertices at once: for each flip mask at distance <= k it forms a shifted
copy of the membership words (XOR-permutation of bit positions) and
accumulates the copies into ceil(log2(N+1)) carry-save counter bit planes.
The result is bit-exact equal to counting neighbors one vertex at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

DEFAULT_N_MAX = 28

# Delta-swap masks: positions whose bit b is 0, for b = 0..5.  Swapping the
# two halves of every 2^(b+1) block permutes bit v -> v XOR 2^b inside a word.
_BUTTERFLY = (
    np.uint64(0x5555555555555555),
    np.uint64(0x3333333333333333),
    np.uint64(0x0F0F0F0F0F0F0F0F),
    np.uint64(0x00FF00FF00FF00FF),
    np.uint64(0x0000FFFF0000FFFF),
    np.uint64(0x00000000FFFFFFFF),
)


@dataclass(frozen=True)
class CubeSpec:
    """Parameters of Q(n) / Q(n, k): dimension n and adjacency radius k."""

    n: int
    k: int = 1
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        if not 1 <= self.k <= self.n <= self.n_max:
            raise ValueError(
                f"require 1 <= k <= n <= n_max, got k={self.k} n={self.n} "
                f"n_max={self.n_max}"
            )

    @property
    def num_vertices(self) -> int:
        return 1 << self.n

    @property
    def num_words(self) -> int:
        return max(1, self.num_vertices >> 6)

    @cached_property
    def degree(self) -> int:
        """N = sum_{i=1..k} C(n, i); every vertex has exactly N neighbors."""
        return sum(comb(self.n, i) for i in range(1, self.k + 1))

    @cached_property
    def num_planes(self) -> int:
        """Counter planes needed so capacity 2^B - 1 >= N."""
        return max(1, (self.degree).bit_length())

    @cached_property
    def flip_masks(self) -> np.ndarray:
        """All XOR masks at weight 1..k, ascending; x ^ mask enumerates N(x)."""
        masks = []
        for w in range(1, self.k + 1):
            for bits in combinations(range(self.n), w):
                m = 0
                for b in bits:
                    m |= 1 << b
                masks.append(m)
        masks.sort()
        return np.asarray(masks, dtype=np.uint64)

    @cached_property
    def _word_tail_mask(self) -> np.uint64:
        # For n < 6 only the low 2^n bits of the single word are in use.
        if self.n >= 6:
            return np.uint64(0xFFFFFFFFFFFFFFFF)
        return np.uint64((1 << self.num_vertices) - 1)


def hamming(u: int, v: int) -> int:
    """Hamming distance between two vertex codes."""
    return (u ^ v).bit_count()


def degree(spec: CubeSpec) -> int:
    """Common degree N of every vertex of Q(n, k)."""
    return spec.degree


def neighbors(spec: CubeSpec, x: int) -> list[int]:
    """All vertices at Hamming distance 1..k from x, in ascending code order."""
    if not 0 <= x < spec.num_vertices:
        raise ValueError(f"vertex {x} out of range for n={spec.n}")
    return sorted(x ^ int(m) for m in spec.flip_masks)


def sphere(n: int, x: int, l: int) -> list[int]:
    """S(x, l): the C(n, l) vertices at Hamming distance exactly l from x."""
    if not 0 <= l <= n:
        raise ValueError(f"radius {l} out of range for n={n}")
    if not 0 <= x < (1 << n):
        raise ValueError(f"vertex {x} out of range for n={n}")
    out = []
    for bits in combinations(range(n), l):
        m = 0
        for b in bits:
            m |= 1 << b
        out.append(x ^ m)
    return sorted(out)


class VertexSet:
    """Membership bit vector over the 2^n vertices of an ambient cube.

    Bit v of the packed words is vertex v.  Instances own their word array;
    set-algebra operations return new sets and never alias inputs.
    """

    __slots__ = ("n", "words")

    def __init__(self, n: int, words: np.ndarray | None = None):
        self.n = n
        nw = max(1, (1 << n) >> 6)
        if words is None:
            self.words = np.zeros(nw, dtype=np.uint64)
        else:
            if words.shape != (nw,) or words.dtype != np.uint64:
                raise ValueError("words array has wrong shape or dtype")
            self.words = words

    # -- constructors -------------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "VertexSet":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        s = cls(n)
        s.words[:] = np.uint64(0xFFFFFFFFFFFFFFFF)
        if n < 6:
            s.words[0] = np.uint64((1 << (1 << n)) - 1)
        return s

    @classmethod
    def from_codes(cls, n: int, codes) -> "VertexSet":
        s = cls(n)
        for v in codes:
            s.add(int(v))
        return s

    @classmethod
    def from_bool_array(cls, n: int, flags: np.ndarray) -> "VertexSet":
        """Pack a boolean array of length 2^n (index = vertex code)."""
        nv = 1 << n
        if flags.shape != (nv,):
            raise ValueError("flag array has wrong length")
        if nv < 64:
            padded = np.zeros(64, dtype=bool)
            padded[:nv] = flags
            flags = padded
        words = np.packbits(flags.astype(np.uint8), bitorder="little").view(np.uint64)
        return cls(n, words.copy())

    # -- element access ------------------------------------------------------

    def add(self, v: int) -> None:
        self._check(v)
        self.words[v >> 6] |= np.uint64(1) << np.uint64(v & 63)

    def discard(self, v: int) -> None:
        self._check(v)
        self.words[v >> 6] &= ~(np.uint64(1) << np.uint64(v & 63))

    def __contains__(self, v: int) -> bool:
        self._check(v)
        return bool((self.words[v >> 6] >> np.uint64(v & 63)) & np.uint64(1))

    def _check(self, v: int) -> None:
        if not 0 <= v < (1 << self.n):
            raise ValueError(f"vertex {v} out of range for n={self.n}")

    # -- set algebra ---------------------------------------------------------

    def copy(self) -> "VertexSet":
        return VertexSet(self.n, self.words.copy())

    def union(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.n, self.words | other.words)

    def intersection(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.n, self.words & other.words)

    def difference(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.n, self.words & ~other.words)

    def complement(self) -> "VertexSet":
        out = self.words ^ np.uint64(0xFFFFFFFFFFFFFFFF)
        if self.n < 6:
            out[0] &= np.uint64((1 << (1 << self.n)) - 1)
        return VertexSet(self.n, out)

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def issubset(self, other: "VertexSet") -> bool:
        return bool(((self.words & ~other.words) == 0).all())

    def __eq__(self, other) -> bool:
        return (isinstance(other, VertexSet) and self.n == other.n
                and bool((self.words == other.words).all()))

    def __hash__(self):
        return hash((self.n, self.words.tobytes()))

    def __len__(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def __iter__(self):
        return iter(self.to_codes())

    def to_codes(self) -> np.ndarray:
        """Member vertex codes, ascending."""
        return np.nonzero(self.to_bool_array())[0]

    def to_bool_array(self) -> np.ndarray:
        bits = np.unpackbits(self.words.view(np.uint8), bitorder="little")
        return bits[: 1 << self.n].astype(bool)

    def __repr__(self):
        card = len(self)
        if card <= 16:
            return f"VertexSet(n={self.n}, {{{', '.join(map(str, self.to_codes()))}}})"
        return f"VertexSet(n={self.n}, |A|={card})"


# -- bit-parallel counting kernel (word-vectorized reference path) -----------
#
# These functions accept word arrays of shape (..., W) so the same code serves
# a single set and a batch of sets (leading axes = independent instances).


def xor_shuffle(words: np.ndarray, mask: int) -> np.ndarray:
    """Permute membership bits by v -> v XOR mask (out-of-place)."""
    hi, lo = mask >> 6, mask & 63
    if hi:
        nw = words.shape[-1]
        out = words[..., np.arange(nw) ^ hi]
    else:
        out = words.copy()
    b = 0
    while lo:
        if lo & 1:
            s = np.uint64(1 << b)
            m = _BUTTERFLY[b]
            out = ((out >> s) & m) | ((out << s) & ~m)
        lo >>= 1
        b += 1
    return out


def count_planes(spec: CubeSpec, words: np.ndarray) -> list[np.ndarray]:
    """Carry-save accumulation of all shifted copies of the membership bits.

    Returns B = ceil(log2(N+1)) bit planes; plane j holds bit j of the
    per-vertex count |N(v) ∩ A|.  Capacity 2^B - 1 >= N, so the saturation
    clamp at the top is unreachable in normal operation and only defends
    against a miscounted plane budget.
    """
    planes = [np.zeros_like(words) for _ in range(spec.num_planes)]
    overflow = np.zeros_like(words)
    for i, mask in enumerate(spec.flip_masks):
        a = xor_shuffle(words, int(mask))
        # After i additions counts are <= i+1: carries above that die early.
        depth = min(spec.num_planes, (i + 1).bit_length())
        for j in range(depth):
            carry = planes[j] & a
            planes[j] ^= a
            a = carry
        overflow |= a
    if overflow.any():  # saturate at capacity: all planes high
        for j in range(spec.num_planes):
            planes[j] |= overflow
    return planes


def planes_ge(planes: list[np.ndarray], threshold: int) -> np.ndarray:
    """Bit vector of vertices whose plane-encoded count is >= threshold."""
    if threshold <= 0:
        out = np.empty_like(planes[0])
        out[:] = np.uint64(0xFFFFFFFFFFFFFFFF)
        return out
    if threshold > (1 << len(planes)) - 1:
        return np.zeros_like(planes[0])
    gt = np.zeros_like(planes[0])
    eq = ~gt
    for j in reversed(range(len(planes))):
        if (threshold >> j) & 1:
            eq = eq & planes[j]
        else:
            gt = gt | (eq & planes[j])
            eq = eq & ~planes[j]
    return gt | eq


def infected_neighbor_counts(spec: CubeSpec, A: VertexSet) -> np.ndarray:
    """|N(v) ∩ A| for every vertex v, as an int32 array indexed by code."""
    if A.n != spec.n:
        raise ValueError("vertex set is over a different cube")
    planes = count_planes(spec, A.words)
    nv = spec.num_vertices
    counts = np.zeros(nv, dtype=np.int32)
    for j, plane in enumerate(planes):
        bits = np.unpackbits(plane.view(np.uint8), bitorder="little")[:nv]
        counts += bits.astype(np.int32) << j
    return counts


def neighbor_bitmasks(spec: CubeSpec) -> list[int]:
    """Per-vertex neighborhood masks for tiny cubes (2^n <= 16).

    Used by exact-enumeration oracles that represent whole vertex sets as
    one Python int.
    """
    if spec.num_vertices > 16:
        raise ValueError("neighbor bitmasks only supported for 2^n <= 16")
    out = []
    for v in range(spec.num_vertices):
        m = 0
        for u in neighbors(spec, v):
            m |= 1 << u
        out.append(m)
    return out
