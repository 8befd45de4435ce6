"""Spectrum computation via the trace recursion and orbit boundedness.

An energy E is in the spectrum of the coupling-V operator iff the
forward orbit of ((E - V)/2, E/2, 1) under the trace map stays bounded.
The half-traces x_k(E) of the Fibonacci-block transfer matrices obey

    x_{k+1} = 2 x_k x_{k-1} - x_{k-2},
    (x_{-1}, x_0, x_1) = (1, E/2, (E - V)/2),

which is exactly that orbit read off coordinate-wise.  Periodic
approximants give band sets {E : |x_k(E)| <= 1} whose consecutive
unions cover the spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .intervals import BandSet, merge_intervals

__all__ = [
    "ALPHA",
    "OrbitRecord",
    "approximant_bands",
    "approximant_chain",
    "band_measure",
    "escape_mask",
    "escape_test",
    "fibonacci",
    "half_trace_oracle",
    "spectrum_cover",
    "trace_sequence",
    "transfer_matrix",
]

ALPHA = (np.sqrt(5.0) - 1.0) / 2.0

#: magnitude cap; values past it are treated as certified-unbounded
OVERFLOW = 1e300

MAX_ORACLE_INDEX = 16


@lru_cache(maxsize=None)
def fibonacci(k: int) -> int:
    """F_0 = F_1 = 1, F_{k+1} = F_k + F_{k-1}."""
    if k < 0:
        raise ValueError("index must be >= 0")
    if k <= 1:
        return 1
    return fibonacci(k - 1) + fibonacci(k - 2)


def transfer_matrix(m: int, E, coupling: float) -> np.ndarray:
    """One-step transfer matrix at site m (phase offset fixed to zero).

    The potential indicator fires when m * alpha mod 1 falls in
    [1 - alpha, 1).  Vectorizes over E; result has shape E.shape + (2, 2).
    """
    if m < 1:
        raise ValueError("site index must be >= 1")
    E = np.asarray(E, dtype=float)
    on = 1.0 if (m * ALPHA) % 1.0 >= 1.0 - ALPHA else 0.0
    top = E - float(coupling) * on
    one = np.ones_like(E)
    zero = np.zeros_like(E)
    return np.stack(
        [
            np.stack([top, -one], axis=-1),
            np.stack([one, zero], axis=-1),
        ],
        axis=-2,
    )


def half_trace_oracle(k: int, E, coupling: float):
    """Half-trace of the ordered product over one Fibonacci block.

    Multiplies the one-step matrices T(F_k) ... T(1) directly, with the
    conventional seeds at k = -1 and k = 0.  Deliberately independent of
    the three-term recursion so the two can cross-check each other.
    """
    if not -1 <= k <= MAX_ORACLE_INDEX:
        raise ValueError(f"oracle index must be in -1..{MAX_ORACLE_INDEX}")
    E = np.asarray(E, dtype=float)
    scalar = E.ndim == 0
    E = np.atleast_1d(E)
    if k == -1:
        out = np.ones_like(E)  # trace of [[1, -V], [0, 1]] is 2
    elif k == 0:
        out = E / 2.0
    else:
        prod = transfer_matrix(1, E, coupling)
        with np.errstate(over="ignore", invalid="ignore"):
            for m in range(2, fibonacci(k) + 1):
                prod = transfer_matrix(m, E, coupling) @ prod
            out = (prod[..., 0, 0] + prod[..., 1, 1]) / 2.0
    return float(out[0]) if scalar else out


def trace_sequence(E: float, coupling: float, k_max: int):
    """Half-traces x_{-1} .. x_{k_max} by the recursion.

    Returns (values, escaped): values may be shorter than requested when
    the recursion overflows, in which case escaped is True.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    E = float(E)
    xs = [1.0, E / 2.0, (E - coupling) / 2.0]
    for _ in range(k_max - 1):
        nxt = 2.0 * xs[-1] * xs[-2] - xs[-3]
        if not np.isfinite(nxt) or abs(nxt) > OVERFLOW:
            return np.array(xs), True
        xs.append(nxt)
    return np.array(xs), False


@dataclass
class OrbitRecord:
    """Outcome of the boundedness test for one energy."""

    start: np.ndarray
    status: str  # "bounded_so_far" or "escaped"
    steps_used: int
    escape_index: int | None
    max_norm: float

    @property
    def escaped(self) -> bool:
        return self.status == "escaped"


def escape_test(
    E: float,
    coupling: float,
    n_max: int = 10000,
    escape_radius: float = 2.0,
) -> OrbitRecord:
    """Iterate the orbit of the line point and look for certified escape.

    Escape is declared once two consecutive half-traces exceed 1 in
    absolute value and the later one also exceeds ``escape_radius``;
    from there the recursion grows super-exponentially and the orbit is
    unbounded.  Otherwise the energy is only "bounded so far".
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if escape_radius <= 1.0:
        raise ValueError("escape_radius must be > 1")
    start = np.array([(E - coupling) / 2.0, E / 2.0, 1.0])
    a, b, c = 1.0, E / 2.0, (E - coupling) / 2.0  # x_{k-2}, x_{k-1}, x_k
    max_norm = float(np.linalg.norm(start))
    for step in range(1, n_max + 1):
        nxt = 2.0 * c * b - a
        if not np.isfinite(nxt) or abs(nxt) > OVERFLOW:
            return OrbitRecord(start, "escaped", step, step, max_norm)
        a, b, c = b, c, nxt
        max_norm = max(max_norm, float(np.sqrt(a * a + b * b + c * c)))
        if abs(b) > 1.0 and abs(c) > 1.0 and abs(c) > escape_radius:
            return OrbitRecord(start, "escaped", step, step, max_norm)
    return OrbitRecord(start, "bounded_so_far", n_max, None, max_norm)


def escape_mask(
    E,
    coupling: float,
    n_max: int = 10000,
    escape_radius: float = 2.0,
) -> np.ndarray:
    """Vectorized escape test: True where the energy certifiably escapes."""
    E = np.asarray(E, dtype=float)
    a = np.ones_like(E)
    b = E / 2.0
    c = (E - coupling) / 2.0
    escaped = np.zeros(E.shape, dtype=bool)
    active = np.ones(E.shape, dtype=bool)
    for _ in range(n_max):
        if not active.any():
            break
        with np.errstate(over="ignore", invalid="ignore"):
            nxt = 2.0 * c * b - a
        blown = active & (~np.isfinite(nxt) | (np.abs(nxt) > OVERFLOW))
        a = np.where(active, b, a)
        b = np.where(active, c, b)
        c = np.where(active & ~blown, nxt, c)
        fired = active & (
            blown
            | ((np.abs(b) > 1.0) & (np.abs(c) > 1.0) & (np.abs(c) > escape_radius))
        )
        escaped |= fired
        active &= ~fired
    return escaped


def _eval_half_trace(E: np.ndarray, coupling: float, k: int) -> np.ndarray:
    """x_k(E) on an energy grid, clipped to avoid overflow artifacts."""
    a = np.ones_like(E)
    b = E / 2.0
    c = (E - coupling) / 2.0
    if k == 0:
        return b
    cap = 1e120  # keeps |x| > 1 decisions valid without reaching inf
    for _ in range(k - 1):
        with np.errstate(over="ignore", invalid="ignore"):
            nxt = 2.0 * c * b - a
        a, b, c = b, c, np.clip(nxt, -cap, cap)
    return c


def _band_edge(
    E_out: float, E_in: float, coupling: float, k: int, tol: float
) -> float:
    """Bisect the boundary of {|x_k| <= 1} between an outside/inside pair."""
    out, ins = E_out, E_in
    for _ in range(60):
        if abs(ins - out) <= tol:
            break
        mid = 0.5 * (out + ins)
        val = _eval_half_trace(np.array([mid]), coupling, k)[0]
        if np.isfinite(val) and abs(val) <= 1.0:
            ins = mid
        else:
            out = mid
    return ins


def _bands_in_domain(
    domain: list[tuple[float, float]],
    coupling: float,
    k: int,
    root_tolerance: float,
    points_per_interval: int = 129,
) -> list[tuple[float, float]]:
    bands: list[tuple[float, float]] = []
    for lo, hi in domain:
        n = points_per_interval
        grid = np.linspace(lo, hi, n)
        vals = _eval_half_trace(grid, coupling, k)
        inside = np.isfinite(vals) & (np.abs(vals) <= 1.0)
        idx = 0
        while idx < n:
            if not inside[idx]:
                idx += 1
                continue
            start = idx
            while idx + 1 < n and inside[idx + 1]:
                idx += 1
            left = grid[start]
            if start > 0:
                left = _band_edge(
                    grid[start - 1], grid[start], coupling, k, root_tolerance
                )
            right = grid[idx]
            if idx + 1 < n:
                right = _band_edge(
                    grid[idx + 1], grid[idx], coupling, k, root_tolerance
                )
            bands.append((left, right))
            idx += 1
    return merge_intervals(bands)


def approximant_chain(
    k: int,
    coupling: float,
    root_tolerance: float = 1e-6,
    points_per_interval: int | None = None,
) -> list[BandSet]:
    """Band sets for approximant indices 1..k, refined level by level.

    Levels 1 and 2 are closed-form; each later level is searched only
    inside the union of the previous two (slightly inflated), which is
    where all of its bands live.
    """
    if not 1 <= k <= 30:
        raise ValueError("approximant index must be in 1..30")
    if root_tolerance <= 0:
        raise ValueError("root_tolerance must be > 0")
    V = float(coupling)
    if points_per_interval is None:
        # band widths shrink per level by a factor ~ 2V at strong
        # coupling, so the sampling density must keep up
        points_per_interval = max(129, 8 * int(np.ceil(V)) + 1)
    sigma0 = [(-2.0, 2.0)]
    chain = [BandSet([(V - 2.0, V + 2.0)], generation=1)]
    prev2 = sigma0
    for j in range(2, k + 1):
        pad = 4.0 * root_tolerance
        domain = merge_intervals(
            [(lo - pad, hi + pad) for lo, hi in chain[-1].intervals + prev2]
        )
        prev2 = chain[-1].intervals
        bands = _bands_in_domain(
            domain, V, j, root_tolerance, points_per_interval
        )
        chain.append(BandSet(bands, generation=j))
    return chain


def approximant_bands(
    k: int, coupling: float, root_tolerance: float = 1e-6
) -> BandSet:
    """The band set {E : |x_k(E)| <= 1} as disjoint closed intervals."""
    return approximant_chain(k, coupling, root_tolerance)[-1]


def spectrum_cover(
    coupling: float, k: int, resolution: float = 1e-4
) -> BandSet:
    """Union of the level-k and level-(k+1) band sets as a spectral cover.

    Gaps narrower than ``resolution`` are merged: below the sampling
    resolution they are indistinguishable from discretization artifacts.
    """
    if k < 1:
        raise ValueError("approximant index must be >= 1")
    chain = approximant_chain(k + 1, coupling, root_tolerance=resolution / 10.0)
    cover = chain[k - 1].union(chain[k], gap_tol=resolution)
    cover.generation = k
    return cover


def band_measure(b: BandSet) -> float:
    return b.measure
