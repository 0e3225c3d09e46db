"""Homogeneous two-map Cantor sets on an interval.

The generating system is a pair of affine contractions with a common ratio
beta in (0, 1/2): one anchored at the left end of the base interval, one at
the right.  Level i of the construction keeps 2^i closed "bridges" of equal
length and has removed a cumulative family of open "gaps".  Endpoints are
carried in extended precision (x87 80-bit long double where available) so
per-level bookkeeping identities survive rounding to float64.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import ResourceCapError

LD = np.longdouble

DEFAULT_INTERVAL_CAP = 1 << 24


@dataclass(frozen=True)
class CantorSpec:
    """Parameters of a homogeneous Cantor set construction.

    beta is the contraction ratio of both maps; the gap fraction
    alpha = 1 - 2*beta is positive exactly when the two images are disjoint
    (open set condition), hence the (0, 1/2) domain.
    """

    beta: float
    base_lo: float = 0.0
    base_hi: float = 1.0
    depth: int = 0

    def __post_init__(self) -> None:
        if not (0.0 < self.beta < 0.5):
            raise ValueError(f"beta must lie in (0, 1/2), got {self.beta}")
        if not self.base_lo < self.base_hi:
            raise ValueError(f"base interval needs base_lo < base_hi, got [{self.base_lo}, {self.base_hi}]")
        if self.depth < 0 or self.depth != int(self.depth):
            raise ValueError(f"depth must be a nonnegative integer, got {self.depth}")

    @property
    def alpha(self) -> float:
        """Gap fraction; alpha + 2*beta == 1 holds exactly in float64."""
        return 1.0 - 2.0 * self.beta

    @property
    def base_length(self) -> float:
        return self.base_hi - self.base_lo

    def maps(self):
        """The two contractions (left-anchored, right-anchored) as callables."""
        b, lo, hi = LD(self.beta), LD(self.base_lo), LD(self.base_hi)

        def f1(t):
            return lo + b * (t - lo)

        def f2(t):
            return hi - b * (hi - t)

        return f1, f2


@dataclass
class LevelSet:
    """Bridges and cumulative gaps of one construction level.

    bridges is a (2^level, 2) long-double array of [lo, hi] rows in ascending
    order; gap_levels[k] records the level at which the k-th gap (also
    ascending by position within its level) was removed.
    """

    spec: CantorSpec
    level: int
    bridges: np.ndarray
    gap_levels: np.ndarray
    gaps: np.ndarray

    def bridge_lengths(self) -> np.ndarray:
        return self.bridges[:, 1] - self.bridges[:, 0]

    def total_bridge_length(self) -> float:
        """Exact-bookkeeping total: count * beta^level * base length."""
        q = (LD(2.0) * LD(self.spec.beta)) ** self.level
        return float((LD(self.spec.base_hi) - LD(self.spec.base_lo)) * q)

    def distance(self, x: float) -> float:
        """Distance from x to the nearest level-`level` bridge (0 inside).

        This is the depth-truncated membership test: true limit-set
        membership is not decidable for arbitrary reals.
        """
        los = self.bridges[:, 0].astype(np.float64)
        his = self.bridges[:, 1].astype(np.float64)
        j = np.searchsorted(los, x, side="right") - 1
        best = math.inf
        if j >= 0:
            if x <= his[j]:
                return 0.0
            best = x - his[j]
        if j + 1 < los.size:
            best = min(best, los[j + 1] - x)
        return float(best)


def build_levels(spec: CantorSpec, interval_cap: int = DEFAULT_INTERVAL_CAP) -> LevelSet:
    """Construct the level-`spec.depth` pre-Cantor set.

    Children are produced by applying the two maps to the whole bridge list,
    which makes the reconstruction identity (level i+1 equals the union of
    both images of level i) hold bit-for-bit.  New gaps at level i+1 sit
    between the sibling pairs (2k, 2k+1) of the sorted child list.
    """
    if 2**spec.depth > interval_cap:
        raise ResourceCapError(
            f"depth {spec.depth} needs 2^{spec.depth} intervals, above the cap of "
            f"{interval_cap} (= 2^{int(math.log2(interval_cap))}); raise interval_cap "
            f"or use iter_bridges for streaming access"
        )
    f1, f2 = spec.maps()
    los = np.array([spec.base_lo], dtype=LD)
    his = np.array([spec.base_hi], dtype=LD)
    gap_levels: list[int] = []
    gap_los: list = []
    gap_his: list = []
    for lev in range(1, spec.depth + 1):
        los = np.concatenate([f1(los), f2(los)])
        his = np.concatenate([f1(his), f2(his)])
        gap_los.extend(his[0::2])
        gap_his.extend(los[1::2])
        gap_levels.extend([lev] * (len(los) // 2))
    # Collection order is already canonical: ascending level, then position.
    gaps = (
        np.column_stack([np.array(gap_los, dtype=LD), np.array(gap_his, dtype=LD)])
        if gap_los
        else np.empty((0, 2), dtype=LD)
    )
    return LevelSet(
        spec=spec,
        level=spec.depth,
        bridges=np.column_stack([los, his]),
        gap_levels=np.array(gap_levels, dtype=np.int64),
        gaps=gaps,
    )


def iter_bridges(spec: CantorSpec) -> Iterator[tuple[float, float]]:
    """Stream level-`depth` bridges in ascending order without materializing.

    Descends the subdivision tree (each bridge keeps its outer-beta parts),
    so memory is O(depth); useful past the interval cap.
    """
    b = LD(spec.beta)
    stack = [(LD(spec.base_lo), LD(spec.base_hi), 0)]
    while stack:
        lo, hi, lev = stack.pop()
        if lev == spec.depth:
            yield float(lo), float(hi)
            continue
        step = b * (hi - lo)
        stack.append((hi - step, hi, lev + 1))
        stack.append((lo, lo + step, lev + 1))


def dimension(spec: CantorSpec) -> float:
    """Similarity (= box = Hausdorff) dimension log 2 / log(1/beta)."""
    return math.log(2.0) / -math.log(spec.beta)


def removed_length(spec: CantorSpec, upto_level: int) -> float:
    """Total gap length removed through `upto_level`.

    Equals the geometric partial sum alpha*(2 beta)^(i-1), i = 1..upto_level,
    scaled by the base length; evaluated in closed form (extended precision)
    so the per-level conservation identity with total_bridge_length is exact
    after rounding to float64.
    """
    if not (0 <= upto_level <= spec.depth):
        raise ValueError(f"upto_level {upto_level} outside [0, depth={spec.depth}]")
    base = LD(spec.base_hi) - LD(spec.base_lo)
    q = (LD(2.0) * LD(spec.beta)) ** upto_level
    return float(base * (LD(1.0) - q))


@dataclass(frozen=True)
class BoxCountFit:
    """Least-squares dimension estimate from grid counts."""

    estimate: float
    residual: float
    box_sizes: tuple
    counts: tuple


def box_count_estimate(
    spec: CantorSpec,
    grid_exponents: list[int],
    grid_base: float = 2.0,
    interval_cap: int = DEFAULT_INTERVAL_CAP,
) -> BoxCountFit:
    """Box-counting dimension estimate over boxes of size grid_base**-k.

    Counts grid cells whose overlap with the level-`depth` bridge union has
    positive length (touching at a single endpoint does not count, so a grid
    aligned with the construction reproduces the exact counts).  Needs at
    least 3 grid sizes; the finest box should stay above beta**depth, else
    the level set is under-resolved and a warning is emitted.
    """
    if len(grid_exponents) < 3:
        raise ValueError(
            f"box-count fit needs at least 3 grid sizes, got {len(grid_exponents)}"
        )
    finest = float(grid_base) ** -max(grid_exponents)
    if spec.beta**spec.depth >= finest:
        warnings.warn(
            f"level-{spec.depth} bridges (length {spec.beta**spec.depth:.3g}) do not "
            f"resolve the finest grid {finest:.3g}; increase depth",
            stacklevel=2,
        )
    ls = build_levels(spec, interval_cap=interval_cap)
    # Work in coordinates relative to base_lo so grids anchor at the set.
    lo = (ls.bridges[:, 0] - LD(spec.base_lo)).astype(np.float64)
    hi = (ls.bridges[:, 1] - LD(spec.base_lo)).astype(np.float64)
    sizes = []
    counts = []
    for k in grid_exponents:
        h = float(grid_base) ** -k
        q_lo = lo / h
        q_hi = hi / h
        q_lo = _snap(q_lo)
        q_hi = _snap(q_hi)
        m_lo = np.where(q_lo == np.rint(q_lo), q_lo, np.floor(q_lo)).astype(np.int64)
        m_hi = np.where(q_hi == np.rint(q_hi), q_hi - 1, np.floor(q_hi)).astype(np.int64)
        prev_hi = np.concatenate(([np.int64(-1)], m_hi[:-1]))
        eff_lo = np.maximum(m_lo, prev_hi + 1)
        counts.append(int(np.sum(np.maximum(m_hi - eff_lo + 1, 0))))
        sizes.append(h)
    xs = np.log(1.0 / np.asarray(sizes))
    ys = np.log(np.asarray(counts, dtype=np.float64))
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = float(np.sqrt(np.mean((ys - (slope * xs + intercept)) ** 2)))
    return BoxCountFit(
        estimate=float(slope),
        residual=resid,
        box_sizes=tuple(sizes),
        counts=tuple(counts),
    )


def _snap(q: np.ndarray, rel: float = 1e-9) -> np.ndarray:
    """Snap near-integer grid coordinates onto the lattice.

    Rounding noise of order ulp would otherwise push an exactly aligned
    endpoint across a cell boundary and inflate the count.
    """
    r = np.rint(q)
    near = np.abs(q - r) <= rel * np.maximum(1.0, np.abs(q))
    return np.where(near, r, q)


def level_csv_rows(ls: LevelSet):
    """Rows (level, index, kind, lo, hi): bridges first, then gaps by level."""
    for j in range(ls.bridges.shape[0]):
        yield (ls.level, j, "bridge", float(ls.bridges[j, 0]), float(ls.bridges[j, 1]))
    idx = 0
    prev_lev = None
    for k in range(ls.gaps.shape[0]):
        lev = int(ls.gap_levels[k])
        idx = idx + 1 if lev == prev_lev else 0
        prev_lev = lev
        yield (lev, idx, "gap", float(ls.gaps[k, 0]), float(ls.gaps[k, 1]))
