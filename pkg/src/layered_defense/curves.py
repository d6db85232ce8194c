"""Concave nondecreasing piecewise-linear detection curves.

A curve maps a resource amount ``r`` to a detection probability in [0, 1].
The canonical representation is a list of ``(budget, value)`` breakpoints;
a curve given as the pointwise minimum of affine lines is converted on
construction and clamped at 1.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    AtBreakpoint,
    EmptyLines,
    InvalidCurve,
    NegativeAtZero,
    NotConcaveRepresentable,
    OutOfDomain,
)

SLOPE_TOL = 1e-12
# slopes recomputed from float breakpoints carry ~ulp/segment-length noise
CONCAVITY_TOL = 1e-9
DOMAIN_TOL = 1e-9


class ClampWarning(UserWarning):
    """Emitted when a min-of-lines curve exceeds 1 inside its domain."""


@dataclass(frozen=True)
class AffineLine:
    slope: float
    intercept: float

    def __post_init__(self):
        if not (math.isfinite(self.slope) and math.isfinite(self.intercept)):
            raise InvalidCurve(f"non-finite line {self}")
        if self.slope < 0 or self.intercept < 0:
            raise InvalidCurve(f"line needs slope >= 0 and intercept >= 0, got {self}")

    def __call__(self, r):
        return self.slope * r + self.intercept


@dataclass(frozen=True)
class PWLCurve:
    """Breakpoint form of a detection curve.

    ``breakpoints`` is a tuple of ``(budget, value)`` pairs starting at
    budget 0; the last budget is the domain end.
    """

    breakpoints: tuple[tuple[float, float], ...]
    _budgets: np.ndarray = field(init=False, repr=False, compare=False)
    _values: np.ndarray = field(init=False, repr=False, compare=False)
    _slopes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple((float(b), float(v)) for b, v in self.breakpoints)
        pts = _validate_and_merge(pts)
        object.__setattr__(self, "breakpoints", pts)
        budgets = np.array([b for b, _ in pts])
        values = np.array([v for _, v in pts])
        slopes = np.diff(values) / np.diff(budgets)
        for arr in (budgets, values, slopes):
            arr.setflags(write=False)
        object.__setattr__(self, "_budgets", budgets)
        object.__setattr__(self, "_values", values)
        object.__setattr__(self, "_slopes", slopes)

    @property
    def domain_max(self) -> float:
        return self.breakpoints[-1][0]

    @property
    def budgets(self) -> np.ndarray:
        return self._budgets

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def slopes(self) -> np.ndarray:
        return self._slopes

    def __call__(self, r):
        return curve_eval(self, r)

    def segments(self):
        """Yield ``(start, length, slope)`` for each linear piece."""
        for k, s in enumerate(self._slopes):
            start = self._budgets[k]
            yield float(start), float(self._budgets[k + 1] - start), float(s)

    def slope_at(self, r: float) -> float:
        """Slope of the segment containing ``r``; raises at interior breakpoints."""
        interior = self._budgets[1:-1]
        if interior.size and np.min(np.abs(interior - r)) <= SLOPE_TOL:
            raise AtBreakpoint(f"r={r} sits on a breakpoint")
        k = int(np.searchsorted(self._budgets, r, side="right")) - 1
        k = min(max(k, 0), len(self._slopes) - 1)
        return float(self._slopes[k])


def _validate_and_merge(pts):
    if len(pts) < 2:
        raise InvalidCurve("a curve needs at least two breakpoints")
    if any(not (math.isfinite(b) and math.isfinite(v)) for b, v in pts):
        raise InvalidCurve("non-finite breakpoint")
    if pts[0][0] != 0.0:
        raise InvalidCurve(f"first breakpoint must have budget 0, got {pts[0][0]}")
    if pts[0][1] < 0:
        raise NegativeAtZero(f"value at zero budget is {pts[0][1]}")
    for (b0, v0), (b1, v1) in itertools.pairwise(pts):
        if b1 <= b0:
            raise InvalidCurve(f"budgets must be strictly increasing ({b0} then {b1})")
        if v1 < v0:
            raise InvalidCurve(f"values must be nondecreasing ({v0} then {v1})")
    if any(v > 1.0 for _, v in pts):
        raise InvalidCurve("detection values must lie in [0, 1]")

    slopes = [(v1 - v0) / (b1 - b0) for (b0, v0), (b1, v1) in zip(pts, pts[1:])]
    for s0, s1 in zip(slopes, slopes[1:]):
        if s1 > s0 + CONCAVITY_TOL:
            raise NotConcaveRepresentable(f"slope increases from {s0} to {s1}")

    merged = [pts[0]]
    for k in range(1, len(pts) - 1):
        if abs(slopes[k - 1] - slopes[k]) > SLOPE_TOL:
            merged.append(pts[k])
    merged.append(pts[-1])
    return tuple(merged)


def curve_from_lines(lines: Sequence[AffineLine], domain_max: float) -> PWLCurve:
    """Breakpoint form of ``r -> min(1, min(line(r) for line in lines))``."""
    lines = [ln if isinstance(ln, AffineLine) else AffineLine(*ln) for ln in lines]
    if not lines:
        raise EmptyLines("at least one line is required")
    if not (domain_max > 0 and math.isfinite(domain_max)):
        raise InvalidCurve(f"domain_max must be positive, got {domain_max}")

    def envelope(r):
        return min(ln(r) for ln in lines)

    if envelope(0.0) < 0:
        raise NegativeAtZero("pointwise minimum is negative at zero budget")

    if envelope(domain_max) > 1.0:
        warnings.warn(
            f"detection curve exceeds 1 before budget {domain_max}; clamping",
            ClampWarning,
            stacklevel=2,
        )

    # Kinks of the clamped envelope can only sit where two lines (or a line
    # and the constant 1) cross.
    cands = [ln for ln in lines] + [AffineLine(0.0, 1.0)]
    xs = {0.0, float(domain_max)}
    for p, q in itertools.combinations(cands, 2):
        if p.slope != q.slope:
            r = (q.intercept - p.intercept) / (p.slope - q.slope)
            if 0.0 < r < domain_max:
                xs.add(r)
    grid = _dedupe(sorted(xs))

    # Keep only the points where the active piece changes.
    def active(lo, hi):
        mid = 0.5 * (lo + hi)
        return min(range(len(cands)), key=lambda k: cands[k](mid))

    keep = [grid[0]]
    prev = active(grid[0], grid[1])
    for lo, hi in zip(grid[1:-1], grid[2:]):
        cur = active(lo, hi)
        if cands[cur] != cands[prev]:
            keep.append(lo)
        prev = cur
    keep.append(grid[-1])
    pts = [(r, min(1.0, envelope(r))) for r in keep]
    return PWLCurve(tuple(pts))


def _dedupe(xs: list[float]) -> list[float]:
    # keeps both endpoints exact
    out = [xs[0]]
    for r in xs[1:]:
        if r - out[-1] > SLOPE_TOL:
            out.append(r)
    out[-1] = xs[-1]
    return out


def curve_eval(curve: PWLCurve, r):
    """Evaluate by linear interpolation; accepts scalars or arrays."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr < -DOMAIN_TOL) or np.any(arr > curve.domain_max + DOMAIN_TOL):
        raise OutOfDomain(f"budget {r} outside [0, {curve.domain_max}]")
    out = np.interp(arr, curve.budgets, curve.values)
    return float(out) if out.ndim == 0 else out


def curve_max_slope(curve: PWLCurve) -> float:
    return float(curve.slopes[0])


def identity_curve(domain_max: float = 1.0) -> PWLCurve:
    """D(r) = r on [0, domain_max] (clamped at 1)."""
    return curve_from_lines([AffineLine(1.0, 0.0)], domain_max)


def constant_curve(value: float, domain_max: float = 1.0) -> PWLCurve:
    return PWLCurve(((0.0, value), (domain_max, value)))
