"""Finite unions of disjoint closed intervals on the energy axis."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["BandSet", "merge_intervals"]


def merge_intervals(intervals, gap_tol: float = 0.0) -> list[tuple[float, float]]:
    """Sort intervals and merge overlaps and gaps narrower than ``gap_tol``."""
    ivs = sorted((float(lo), float(hi)) for lo, hi in intervals)
    merged: list[list[float]] = []
    for lo, hi in ivs:
        if hi < lo:
            raise ValueError(f"interval has hi < lo: ({lo}, {hi})")
        if merged and lo <= merged[-1][1] + gap_tol:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


@dataclass
class BandSet:
    """Ordered disjoint closed intervals, e.g. a spectral approximant.

    ``generation`` records the approximant index or refinement depth the
    set came from; it is carried through serialization but not used in
    set arithmetic.
    """

    intervals: list[tuple[float, float]] = field(default_factory=list)
    generation: int = 0

    def __post_init__(self):
        self.intervals = merge_intervals(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    @property
    def measure(self) -> float:
        return float(sum(hi - lo for lo, hi in self.intervals))

    @property
    def min_width(self) -> float:
        """Width of the narrowest band (the set's native resolution)."""
        if not self.intervals:
            raise ValueError("empty band set has no bands")
        return float(min(hi - lo for lo, hi in self.intervals))

    @property
    def native_resolution(self) -> float:
        """Coarsest unresolved feature: the widest band of a multi-band
        approximation.  Below this scale some bands are themselves
        unresolved and box counts drift toward slope 1.  A single
        interval is exact and reports 0.
        """
        if not self.intervals:
            raise ValueError("empty band set has no resolution")
        if len(self.intervals) == 1:
            return 0.0
        return float(max(hi - lo for lo, hi in self.intervals))

    @property
    def extent(self) -> tuple[float, float]:
        if not self.intervals:
            raise ValueError("empty band set has no extent")
        return self.intervals[0][0], self.intervals[-1][1]

    def contains(self, e: float, slack: float = 0.0) -> bool:
        return any(lo - slack <= e <= hi + slack for lo, hi in self.intervals)

    def union(self, other: "BandSet", gap_tol: float = 0.0) -> "BandSet":
        return BandSet(
            merge_intervals(self.intervals + other.intervals, gap_tol),
            generation=max(self.generation, other.generation),
        )

    def intersect_window(self, lo: float, hi: float) -> "BandSet":
        """Restriction to the closed window [lo, hi]."""
        if hi < lo:
            raise ValueError("window has hi < lo")
        clipped = [
            (max(a, lo), min(b, hi))
            for a, b in self.intervals
            if b >= lo and a <= hi
        ]
        return BandSet(clipped, generation=self.generation)

    def merged(self, gap_tol: float) -> "BandSet":
        return BandSet(
            merge_intervals(self.intervals, gap_tol), generation=self.generation
        )

    def sample_points(self, step: float) -> np.ndarray:
        """Grid points with spacing <= step covering every band."""
        pts = []
        for lo, hi in self.intervals:
            n = max(2, int(np.ceil((hi - lo) / step)) + 1)
            pts.append(np.linspace(lo, hi, n))
        return np.concatenate(pts) if pts else np.empty(0)

    def as_array(self) -> np.ndarray:
        return np.array(self.intervals, dtype=float).reshape(-1, 2)
