"""Composite ambiguity evaluation and the four waveform quality metrics.

The pulse train transmits x1 or x2 from a complementary pair according to
the sign s_m; the receiver weights pulse m by w_m and a Doppler shift of
theta radians per pulse adds the phase ramp e^{j theta m}. The discrete
composite ambiguity at lag k is then

    R(k, theta) = sum_m w_m R_{x(m)}[k] e^{j theta m}
                = (R1[k]+R2[k])/2 * G(theta) + (R1[k]-R2[k])/2 * F(theta),

with G(theta) = sum w_m e^{j theta m} and F(theta) = sum s_m w_m e^{j theta m}.
Complementarity kills the first term at every nonzero lag, so range
sidelobes are proportional to |F| and the zero-lag Doppler profile to |G|.

Metrics: PRSL (peak range sidelobe level per Doppler bin), RSBA (the
contiguous Doppler interval where PRSL stays below a blanking threshold),
DMBR (percent widening of the -3 dB Doppler mainlobe versus uniform
weights), PDSL (peak Doppler sidelobe of |G|), and NAG (coherent
integration gain loss of the weights).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .design import DesignResult
from .sequences import GolayPair, acf

DB_FLOOR = -300.0
# CAF magnitudes below this fraction of the global peak are float dust from
# cancelled null sums (~1e-12 of peak at most); report them at the floor.
ZERO_LEVEL = 1e-10

BLANKING_THRESHOLD_DB = -60.0


@dataclass(frozen=True)
class DopplerGrid:
    """Uniform Doppler grid over [-pi, pi] that contains theta = 0 exactly."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("grid needs at least two points")
        steps = np.diff(pts)
        if np.any(steps <= 0):
            raise ValueError("grid points must be strictly increasing")
        if np.max(np.abs(steps - steps[0])) > 1e-12:
            raise ValueError("grid must be uniform")
        if pts[0] < -math.pi - 1e-12 or pts[-1] > math.pi + 1e-12:
            raise ValueError("grid must lie within [-pi, pi]")
        if not np.any(pts == 0.0):
            raise ValueError("grid must contain theta = 0 exactly")
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, num_points: int = 8192) -> "DopplerGrid":
        """Even counts cover [-pi, pi) half-open; odd counts close at +pi.
        Both contain 0 exactly."""
        if num_points < 2:
            raise ValueError("num_points must be >= 2")
        if num_points % 2 == 0:
            pts = -math.pi + 2.0 * math.pi * np.arange(num_points) / num_points
            pts[num_points // 2] = 0.0
        else:
            pts = np.linspace(-math.pi, math.pi, num_points)
            pts[num_points // 2] = 0.0
        return cls(points=pts)

    @property
    def resolution(self) -> float:
        return float(self.points[1] - self.points[0])

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def zero_index(self) -> int:
        return int(np.argmin(np.abs(self.points)))

    def index_of(self, theta: float) -> int:
        """Nearest grid index to theta; rejects points off the grid span."""
        idx = int(np.argmin(np.abs(self.points - theta)))
        if abs(self.points[idx] - theta) > 0.5 * self.resolution + 1e-12:
            raise ValueError(f"theta={theta} lies outside the grid")
        return idx


@dataclass(frozen=True)
class CafGrid:
    """Composite ambiguity samples, indexed (lag, doppler point)."""

    lags: np.ndarray
    doppler: DopplerGrid
    values: np.ndarray

    @property
    def n(self) -> int:
        return (len(self.lags) + 1) // 2

    @property
    def zero_lag_index(self) -> int:
        return self.n - 1

    @property
    def peak(self) -> float:
        """Zero-lag zero-Doppler response N * sum(w), the global maximum."""
        return abs(self.values[self.zero_lag_index, self.doppler.zero_index])


def _phase_matrix(grid: DopplerGrid, m: int) -> np.ndarray:
    return np.exp(1j * np.outer(grid.points, np.arange(m)))


def composite_ambiguity(design: DesignResult, pair: GolayPair, grid: DopplerGrid) -> CafGrid:
    """Evaluate R(k, theta) = sum_m w_m R_{x(m)}[k] e^{j theta m} on the grid.

    Vectorized over (lag, pulse, Doppler); matches the elementwise direct
    sum to roundoff.
    """
    if grid.size == 0:
        raise ValueError("empty Doppler grid")
    m = design.m
    r1 = acf(pair.x1).values.astype(float)
    r2 = acf(pair.x2).values.astype(float)
    # per-pulse autocorrelation selected by the transmit order, (m, 2n-1)
    per_pulse = np.where((design.transmit_order == 1)[:, None], r1[None, :], r2[None, :])
    phases = _phase_matrix(grid, m)  # (t, m)
    values = (per_pulse * design.weights[:, None]).T @ phases.T  # (2n-1, t)
    lags = np.arange(-(pair.n - 1), pair.n)
    caf = CafGrid(lags=lags, doppler=grid, values=values)
    peak = caf.values[caf.zero_lag_index, grid.zero_index]
    expected = pair.n * float(np.sum(design.weights))
    if abs(peak - expected) > 1e-9 * max(1.0, expected):
        raise AssertionError("zero-lag zero-Doppler response mismatch")
    return caf


def range_factor(design: DesignResult, grid: DopplerGrid) -> np.ndarray:
    """F(theta) = sum_m s_m w_m e^{j theta m}; shapes the range sidelobes."""
    return _phase_matrix(grid, design.m) @ design.y


def doppler_factor(design: DesignResult, grid: DopplerGrid) -> np.ndarray:
    """G(theta) = sum_m w_m e^{j theta m}; the zero-lag Doppler profile."""
    return _phase_matrix(grid, design.m) @ design.weights


def magnitude_db(values, floor: float = DB_FLOOR) -> np.ndarray:
    """Magnitudes in dB relative to the largest entry, floored for zeros."""
    mag = np.abs(np.asarray(values))
    top = float(mag.max())
    if top == 0.0:
        return np.full(mag.shape, floor)
    rel = mag / top
    out = np.full(mag.shape, floor)
    live = rel > ZERO_LEVEL
    out[live] = 20.0 * np.log10(rel[live])
    return np.maximum(out, floor)


def prsl_curve(caf: CafGrid, normalization: str = "global") -> np.ndarray:
    """Peak range sidelobe level per Doppler bin, in dB.

    ``global`` normalizes by the zero-lag zero-Doppler peak (the blanking
    threshold then guards weak targets against the strongest response);
    ``per-doppler`` normalizes each bin by its own zero-lag magnitude.
    """
    if normalization not in ("global", "per-doppler"):
        raise ValueError(f"unknown normalization {normalization!r}")
    mags = np.abs(caf.values)
    side = np.delete(mags, caf.zero_lag_index, axis=0).max(axis=0)
    if normalization == "global":
        ref = caf.peak
    else:
        ref = mags[caf.zero_lag_index, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = side / ref
    out = np.full(side.shape, DB_FLOOR)
    live = rel > ZERO_LEVEL
    out[live] = 20.0 * np.log10(rel[live])
    return np.maximum(out, DB_FLOOR)


def prsl_at(design: DesignResult, pair: GolayPair, thetas, normalization: str = "global") -> np.ndarray:
    """PRSL evaluated at exact Doppler shifts (no grid snapping).

    Uses the decomposition of R(k, theta): at nonzero lags the summed-ACF
    term cancels exactly (integer complementarity), so the sidelobe column
    is (R1-R2)[k]/2 * F(theta) plus nothing.
    """
    if normalization not in ("global", "per-doppler"):
        raise ValueError(f"unknown normalization {normalization!r}")
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    r1 = acf(pair.x1).values
    r2 = acf(pair.x2).values
    half_diff = 0.5 * (r1 - r2).astype(float)
    half_sum = 0.5 * (r1 + r2).astype(float)
    zero_lag = pair.n - 1
    phase = np.exp(1j * np.outer(thetas, np.arange(design.m)))
    f_vals = phase @ design.y
    g_vals = phase @ design.weights
    side_cols = np.abs(
        np.outer(np.delete(half_sum, zero_lag), g_vals)
        + np.outer(np.delete(half_diff, zero_lag), f_vals)
    )
    side = side_cols.max(axis=0)
    if normalization == "global":
        ref = np.full_like(side, pair.n * float(np.sum(design.weights)))
    else:
        ref = np.abs(half_sum[zero_lag] * g_vals + half_diff[zero_lag] * f_vals)
    rel = side / ref
    out = np.full(side.shape, DB_FLOOR)
    live = rel > ZERO_LEVEL
    out[live] = 20.0 * np.log10(rel[live])
    return np.maximum(out, DB_FLOOR)


@dataclass(frozen=True)
class DopplerInterval:
    """Contiguous Doppler interval [lo, hi] around a center, in radians.
    Empty intervals have lo == hi == center."""

    center: float
    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return self.lo == self.hi

    @property
    def half_width(self) -> float:
        """Symmetric half width: distance to the nearer edge."""
        return min(self.center - self.lo, self.hi - self.center)


def rsba(
    curve: np.ndarray,
    grid: DopplerGrid,
    center: float = 0.0,
    threshold: float = BLANKING_THRESHOLD_DB,
) -> DopplerInterval:
    """Maximal contiguous grid interval containing ``center`` where the
    PRSL curve stays below ``threshold``. Returns an empty interval when
    the center itself is not below threshold."""
    curve = np.asarray(curve, dtype=float)
    if curve.shape != grid.points.shape:
        raise ValueError("curve length does not match grid")
    idx = grid.index_of(center)
    snapped = float(grid.points[idx])
    if not curve[idx] < threshold:
        return DopplerInterval(center=snapped, lo=snapped, hi=snapped)
    below = curve < threshold
    lo = hi = idx
    while lo - 1 >= 0 and below[lo - 1]:
        lo -= 1
    while hi + 1 < grid.size and below[hi + 1]:
        hi += 1
    return DopplerInterval(center=snapped, lo=float(grid.points[lo]), hi=float(grid.points[hi]))


def _crossing_width(mag: np.ndarray, grid: DopplerGrid, level: float) -> float:
    """Width of the region around theta=0 where mag >= level, with the edge
    positions linearly interpolated between bracketing samples."""
    z = grid.zero_index
    pts = grid.points
    i = z
    while i + 1 < len(mag) and mag[i + 1] >= level:
        i += 1
    if i + 1 >= len(mag):
        raise ValueError("mainlobe edge not resolvable on this grid")
    frac = (mag[i] - level) / (mag[i] - mag[i + 1])
    right = pts[i] + frac * (pts[i + 1] - pts[i])
    i = z
    while i - 1 >= 0 and mag[i - 1] >= level:
        i -= 1
    if i - 1 < 0:
        raise ValueError("mainlobe edge not resolvable on this grid")
    frac = (mag[i] - level) / (mag[i] - mag[i - 1])
    left = pts[i] - frac * (pts[i] - pts[i - 1])
    return float(right - left)


def dmbr(g_mag, g_ref_mag, grid: DopplerGrid) -> float:
    """Percent increase of the -3 dB mainlobe width versus the reference."""
    g = np.asarray(g_mag, dtype=float)
    ref = np.asarray(g_ref_mag, dtype=float)
    level = 10.0 ** (-3.0 / 20.0)
    width = _crossing_width(g, grid, level * g[grid.zero_index])
    width_ref = _crossing_width(ref, grid, level * ref[grid.zero_index])
    return (width / width_ref - 1.0) * 100.0


def pdsl(g_mag, grid: DopplerGrid) -> float:
    """Peak Doppler sidelobe level in dB: the largest |G| beyond the first
    local minimum on each side of theta = 0, relative to |G(0)|."""
    g = np.asarray(g_mag, dtype=float)
    z = grid.zero_index
    i = z
    while i + 1 < len(g) and g[i + 1] <= g[i]:
        i += 1
    right_min = i if i + 1 < len(g) else None
    i = z
    while i - 1 >= 0 and g[i - 1] <= g[i]:
        i -= 1
    left_min = i if i - 1 >= 0 else None
    if right_min is None and left_min is None:
        raise ValueError("no Doppler sidelobe region: |G| is monotone to both grid edges")
    peak_side = 0.0
    if right_min is not None:
        peak_side = max(peak_side, float(g[right_min:].max()))
    if left_min is not None:
        peak_side = max(peak_side, float(g[: left_min + 1].max()))
    return 20.0 * math.log10(peak_side / g[z])


def nag(weights) -> float:
    """Normalized accumulation gain 10 log10(sum(w)^2 / (M sum(w^2))), dB.

    Zero for uniform weights, negative otherwise; invariant under positive
    scaling of w.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a nonempty 1-D sequence")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    ssum = float(np.sum(w))
    ssq = float(np.sum(w * w))
    if ssq == 0.0:
        raise ValueError("weights must not be all zero")
    return 10.0 * math.log10(ssum * ssum / (len(w) * ssq))


@dataclass(frozen=True)
class MetricsReport:
    """The four quality metrics plus the PRSL-versus-Doppler curve.

    ``rsba`` holds one interval per requested null center: the zero-Doppler
    center first, then each positive theta null.
    """

    rsba: tuple[DopplerInterval, ...]
    dmbr: float
    pdsl: float
    nag: float
    prsl_curve: np.ndarray


def compute_metrics(
    design: DesignResult,
    pair: GolayPair,
    grid: DopplerGrid,
    prsl_normalization: str = "global",
) -> MetricsReport:
    """Evaluate all metrics for a design against a complementary pair."""
    caf = composite_ambiguity(design, pair, grid)
    curve = prsl_curve(caf, normalization=prsl_normalization)
    centers = [0.0] + [theta for theta, _ in design.provenance.null_spec.nulls]
    intervals = tuple(rsba(curve, grid, center=c) for c in centers)
    g_mag = np.abs(doppler_factor(design, grid))
    g_ref = np.abs(_phase_matrix(grid, design.m) @ np.ones(design.m))
    try:
        pdsl_db = pdsl(g_mag, grid)
    except ValueError:
        # profiles with no local minimum (e.g. binomial weights) have no
        # Doppler sidelobes at all; report the floor
        pdsl_db = DB_FLOOR
    return MetricsReport(
        rsba=intervals,
        dmbr=dmbr(g_mag, g_ref, grid),
        pdsl=pdsl_db,
        nag=nag(design.weights),
        prsl_curve=curve,
    )
