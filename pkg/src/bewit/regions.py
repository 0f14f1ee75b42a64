"""Closed-form classification of the (x, y) parameter plane.

Inside the family domain D = {x, y > 0, delta > 0} three nested open regions
are characterized by explicit inequalities:

  * Bell-nonlocal (x-side):  x > r_plus * y  and
      (y ztilde + y^2 - x^2/(d-1))^2 / (x^2 + (d-1) y^2)
        < (x - r_plus y)(x + r_minus y) / (d-1)^2,
    with r_pm = d sqrt((d-1)(d-2)) +- (d-1)^2.
  * Steerable (x-side):  x > y  and
      ((d-1) x + y)/2 * (1 + sqrt(y/x)) < ztilde + 2 y.
  * Witness-detected entangled:  piecewise in r = sqrt(x/y),
      z/sqrt(d-2) > ((d-1)^2 x + (d-2)^2 y) / (2 (d-1)(d-2))  if r < (d-2)/(d-1),
      z/sqrt(d-2) > sqrt(x y)                                 in the middle band,
      z/sqrt(d-2) > ((d-1)^2 y + (d-2)^2 x) / (2 (d-1)(d-2))  if r > (d-1)/(d-2).

The y-side variants swap x and y.  All memberships are strict open-set
comparisons; the signed slack of every inequality is reported so callers can
see how close a point sits to a boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .util import fmt_float, parallel_map

#: CSV header of the region scan (fixed external format).
SCAN_HEADER = "x,y,in_D,in_DNx,in_DNy,in_DSx,in_DSy,in_DE"


@dataclass(frozen=True)
class RegionBounds:
    """Upper bounds on x for each region, and the triangle slopes."""

    bell_x_max: float  # sqrt((d-2)/(d^2-d-1))
    steer_x_max: float  # 2 sqrt((d-2)/(d^2+2d-7))
    witness_x_max: float  # 2(d-1)/sqrt(d^3-2d^2+4d-4)
    ratio_plus: float  # d sqrt((d-1)(d-2)) + (d-1)^2
    ratio_minus: float  # d sqrt((d-1)(d-2)) - (d-1)^2


def bounds(d: int) -> RegionBounds:
    if not isinstance(d, (int, np.integer)) or d < 3:
        raise ValueError(f"dimension must be an integer >= 3, got {d!r}")
    root = d * math.sqrt((d - 1) * (d - 2))
    return RegionBounds(
        bell_x_max=math.sqrt((d - 2) / (d * d - d - 1)),
        steer_x_max=2.0 * math.sqrt((d - 2) / (d * d + 2 * d - 7)),
        witness_x_max=2.0 * (d - 1) / math.sqrt(d**3 - 2 * d**2 + 4 * d - 4),
        ratio_plus=root + (d - 1) ** 2,
        ratio_minus=root - (d - 1) ** 2,
    )


@dataclass(frozen=True)
class RegionLabel:
    """Membership flags for one parameter point, with signed slacks."""

    d: int
    x: float
    y: float
    in_domain: bool
    nonlocal_x: bool
    nonlocal_y: bool
    steerable_x: bool
    steerable_y: bool
    entangled: bool
    margins: dict[str, float]


def _bell_margin(d: int, x: float, y: float, ztilde: float, rb: RegionBounds) -> float:
    """min(gate, inequality) slack of the Bell x-side condition."""
    gate = x - rb.ratio_plus * y
    lhs = (y * ztilde + y * y - x * x / (d - 1)) ** 2 / (x * x + (d - 1) * y * y)
    rhs = (x - rb.ratio_plus * y) * (x + rb.ratio_minus * y) / (d - 1) ** 2
    return min(gate, rhs - lhs)


def _steer_margin(d: int, x: float, y: float, ztilde: float) -> float:
    gate = x - y
    lhs = ((d - 1) * x + y) / 2.0 * (1.0 + math.sqrt(y / x))
    return min(gate, ztilde + 2.0 * y - lhs)


def _witness_margin(d: int, x: float, y: float, z: float) -> float:
    r = math.sqrt(x / y)
    lo = (d - 2) / (d - 1)
    hi = (d - 1) / (d - 2)
    lhs = z / math.sqrt(d - 2)
    if r < lo:
        bound = ((d - 1) ** 2 * x + (d - 2) ** 2 * y) / (2.0 * (d - 1) * (d - 2))
    elif r > hi:
        bound = ((d - 1) ** 2 * y + (d - 2) ** 2 * x) / (2.0 * (d - 1) * (d - 2))
    else:
        bound = math.sqrt(x * y)
    return lhs - bound


def classify(d: int, x: float, y: float) -> RegionLabel:
    """Open-set membership of (x, y) in every region (strict comparisons)."""
    if not isinstance(d, (int, np.integer)) or d < 3:
        raise ValueError(f"dimension must be an integer >= 3, got {d!r}")
    x = float(x)
    y = float(y)
    rb = bounds(d)
    z2 = 1.0 - x * x - y * y
    delta = z2 / (d - 2) - x * y
    margins: dict[str, float] = {"domain": min(x, y, delta)}
    in_domain = x > 0.0 and y > 0.0 and delta > 0.0
    if not in_domain or z2 <= 0.0:
        nan = float("nan")
        for key in ("nonlocal_x", "nonlocal_y", "steerable_x", "steerable_y", "entangled"):
            margins[key] = nan
        return RegionLabel(d, x, y, in_domain, False, False, False, False, False, margins)
    z = math.sqrt(z2)
    ztilde = z * math.sqrt(d - 2)
    margins["nonlocal_x"] = _bell_margin(d, x, y, ztilde, rb)
    margins["nonlocal_y"] = _bell_margin(d, y, x, ztilde, rb)
    margins["steerable_x"] = _steer_margin(d, x, y, ztilde)
    margins["steerable_y"] = _steer_margin(d, y, x, ztilde)
    margins["entangled"] = _witness_margin(d, x, y, z)
    return RegionLabel(
        d=d,
        x=x,
        y=y,
        in_domain=True,
        nonlocal_x=margins["nonlocal_x"] > 0.0,
        nonlocal_y=margins["nonlocal_y"] > 0.0,
        steerable_x=margins["steerable_x"] > 0.0,
        steerable_y=margins["steerable_y"] > 0.0,
        entangled=margins["entangled"] > 0.0,
        margins=margins,
    )


def blue_curve(d: int, n: int) -> np.ndarray:
    """n samples (x, y) of the inner boundary curve y ztilde + y^2 = x^2/(d-1),
    restricted to 0 < y < x / ratio_plus; every sample lies in the Bell region.

    Solved for x at fixed y by bisection (the left side is strictly decreasing
    in x on (0, sqrt(1-y^2))).
    """
    if n < 1:
        raise ValueError("need n >= 1 samples")
    rb = bounds(d)
    dt_plus = rb.ratio_plus / math.sqrt(d - 1)
    y_top = 1.0 / math.sqrt(
        (dt_plus**2 - 1.0) ** 2 / (d - 2) + (d - 1) * dt_plus**2 + 1.0
    )

    def residual(xx: float, yy: float) -> float:
        zt = math.sqrt(max(0.0, (d - 2) * (1.0 - xx * xx - yy * yy)))
        return yy * zt + yy * yy - xx * xx / (d - 1)

    pts = np.empty((n, 2))
    for i in range(1, n + 1):
        y = y_top * i / (n + 1)
        lo, hi = 0.0, math.sqrt(1.0 - y * y)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if residual(mid, y) > 0.0:
                lo = mid
            else:
                hi = mid
        pts[i - 1] = (0.5 * (lo + hi), y)
    return pts


@dataclass(frozen=True)
class ScanResult:
    """Arrays of the in-domain grid points and their region flags."""

    d: int
    grid_n: int
    x: np.ndarray
    y: np.ndarray
    nonlocal_x: np.ndarray
    nonlocal_y: np.ndarray
    steerable_x: np.ndarray
    steerable_y: np.ndarray
    entangled: np.ndarray

    def counts(self) -> dict[str, int]:
        return {
            "in_D": int(self.x.size),
            "in_DNx": int(self.nonlocal_x.sum()),
            "in_DNy": int(self.nonlocal_y.sum()),
            "in_DSx": int(self.steerable_x.sum()),
            "in_DSy": int(self.steerable_y.sum()),
            "in_DE": int(self.entangled.sum()),
        }


def scan_grid(d: int, grid_n: int, workers: int = 1) -> ScanResult:
    """Classify the grid of cell centers ((i+1/2)/n, (j+1/2)/n) inside (0,1)^2.

    Row-major: x varies slowest.  Only in-domain points are kept.
    """
    if grid_n < 1:
        raise ValueError("need grid_n >= 1")
    centers = (np.arange(grid_n) + 0.5) / grid_n

    def column(cx: float):
        rows = []
        for cy in centers:
            lab = classify(d, float(cx), float(cy))
            if lab.in_domain:
                rows.append(
                    (
                        lab.x,
                        lab.y,
                        lab.nonlocal_x,
                        lab.nonlocal_y,
                        lab.steerable_x,
                        lab.steerable_y,
                        lab.entangled,
                    )
                )
        return rows

    columns = parallel_map(column, centers, workers)
    flat = [row for col in columns for row in col]
    if flat:
        arr = np.array(flat, dtype=float)
    else:
        arr = np.zeros((0, 7))
    return ScanResult(
        d=d,
        grid_n=grid_n,
        x=arr[:, 0],
        y=arr[:, 1],
        nonlocal_x=arr[:, 2].astype(bool),
        nonlocal_y=arr[:, 3].astype(bool),
        steerable_x=arr[:, 4].astype(bool),
        steerable_y=arr[:, 5].astype(bool),
        entangled=arr[:, 6].astype(bool),
    )


def write_scan_csv(result: ScanResult, path: str) -> None:
    """One CSV row per in-domain point; header and formats are fixed."""
    with open(path, "w", newline="") as fh:
        fh.write(SCAN_HEADER + "\n")
        for i in range(result.x.size):
            fh.write(
                ",".join(
                    (
                        fmt_float(result.x[i]),
                        fmt_float(result.y[i]),
                        "1",
                        "1" if result.nonlocal_x[i] else "0",
                        "1" if result.nonlocal_y[i] else "0",
                        "1" if result.steerable_x[i] else "0",
                        "1" if result.steerable_y[i] else "0",
                        "1" if result.entangled[i] else "0",
                    )
                )
                + "\n"
            )


def region_scan(d: int, grid_n: int, path: str, workers: int = 1) -> dict[str, int]:
    """Scan the grid, write the CSV report, return the region counts."""
    result = scan_grid(d, grid_n, workers)
    write_scan_csv(result, path)
    return result.counts()
