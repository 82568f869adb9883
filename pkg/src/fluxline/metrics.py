"""Dimensionless light-speed profiles for 1+1-D spacetime sections.

A section is modeled as ds^2 = -c(r,t)^2 dt^2 + dr^2, so all of its geometry
is carried by the local light speed c(r,t) = background_c * sqrt(speed_sq),
where speed_sq(r, t) is dimensionless and equals 1 wherever the section is
flat. Values above 1 mark regions that are effectively superluminal with
respect to the background; negative values mark radii where the reduced
section admits no real light speed at all (the ergoregion of a rotating
hole). Negative values are returned as-is so downstream feasibility checks
can flag them instead of masking the obstruction here.

Built-in profiles:

  flat          speed_sq == 1 everywhere
  alcubierre    a bubble of radius R around a center moving at vs_over_c
                times the background speed, with tanh walls of steepness
                sigma (or the sharp-wall limit)
  godel         rotating universe, speed_sq = 1 + (r / 2a)^2
  kerr_extreme  maximally spinning hole; speed_sq vanishes at the horizon
                r = M and is negative inside the ergoregion of off-axis
                slices
  tabulated     linear interpolation between user samples, hard domain edges

All evaluators are pure and hold no mutable state, so profiles are safe to
share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

__all__ = [
    "ProfileDomainError",
    "ProfileEvaluationError",
    "AlcubierreParams",
    "GodelParams",
    "KerrExtremeParams",
    "SpeedProfile",
    "shape_function",
    "alcubierre_speed_sq",
    "godel_speed_sq",
    "kerr_extreme_speed_sq",
    "ricci_scalar",
    "flat_profile",
    "alcubierre_profile",
    "godel_profile",
    "kerr_extreme_profile",
    "tabulated_profile",
]

ArrayLike = Union[float, np.ndarray]

FULL_LINE = (-math.inf, math.inf)
HALF_LINE = (0.0, math.inf)


class ProfileDomainError(ValueError):
    """An evaluation point (or a stencil around it) left the valid range."""


class ProfileEvaluationError(ValueError):
    """The profile value cannot be used here, e.g. speed_sq <= 0 under a sqrt."""


@dataclass(frozen=True)
class AlcubierreParams:
    """Moving-bubble parameters.

    vs_over_c is the bubble velocity in units of the background light speed;
    nothing forbids values above 1. The bubble has radius bubble_radius_R
    around the center x_s0 + vs_over_c * background_c * t, with wall
    steepness sigma (inverse length). top_hat selects the sharp-wall limit,
    in which sigma is ignored and may be omitted.
    """

    vs_over_c: float
    bubble_radius_R: float
    sigma: Optional[float] = None
    x_s0: float = 0.0
    top_hat: bool = False

    def __post_init__(self):
        if self.vs_over_c < 0:
            raise ValueError("vs_over_c must be >= 0")
        if self.bubble_radius_R <= 0:
            raise ValueError("bubble_radius_R must be > 0")
        if not self.top_hat:
            if self.sigma is None or self.sigma <= 0:
                raise ValueError("sigma must be > 0 for a smooth-wall bubble")


@dataclass(frozen=True)
class GodelParams:
    """Rotating-universe length scale a > 0."""

    a: float

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("a must be > 0")


@dataclass(frozen=True)
class KerrExtremeParams:
    """Maximal-spin hole of geometric mass M, sliced at fixed polar angle.

    theta is a parameter of the slice, not a coordinate; it must lie in
    [0, pi/2]. The spin is pinned to the mass, so the two horizons merge
    at r = M.
    """

    mass_M: float
    theta: float = 0.0

    def __post_init__(self):
        if self.mass_M <= 0:
            raise ValueError("mass_M must be > 0")
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError("theta must lie in [0, pi/2]")


def shape_function(r_s: ArrayLike, params: AlcubierreParams) -> ArrayLike:
    """Bubble wall shape f(r_s) in [0, 1].

    Smooth form: [tanh(sigma (r_s + R)) - tanh(sigma (r_s - R))] / (2 tanh(sigma R)).
    Sharp-wall limit: 1 for r_s <= R, 0 beyond.
    """
    rs = np.asarray(r_s, dtype=float)
    if params.top_hat:
        out = np.where(rs <= params.bubble_radius_R, 1.0, 0.0)
    else:
        s = params.sigma
        R = params.bubble_radius_R
        out = (np.tanh(s * (rs + R)) - np.tanh(s * (rs - R))) / (2.0 * math.tanh(s * R))
    return float(out) if np.ndim(r_s) == 0 else out


def alcubierre_speed_sq(
    x: ArrayLike, t: float, params: AlcubierreParams, background_c: float = 1.0
) -> ArrayLike:
    """Squared speed (1 + vs_over_c * f(r_s))^2 around the moving center.

    The center travels at vs_over_c * background_c in coordinate units, so
    lab-frame runs at a reduced background see the bubble move at the
    correspondingly reduced velocity.
    """
    xs = params.x_s0 + params.vs_over_c * background_c * t
    r_s = np.abs(np.asarray(x, dtype=float) - xs)
    c_rel = 1.0 + params.vs_over_c * shape_function(r_s, params)
    out = c_rel * c_rel
    return float(out) if np.ndim(x) == 0 else out


def godel_speed_sq(r: ArrayLike, params: GodelParams) -> ArrayLike:
    """Squared speed 1 + (r / 2a)^2; even in r and independent of time."""
    u = np.asarray(r, dtype=float) / (2.0 * params.a)
    out = 1.0 + u * u
    return float(out) if np.ndim(r) == 0 else out


def kerr_extreme_speed_sq(r: ArrayLike, params: KerrExtremeParams) -> ArrayLike:
    """Squared speed (1 - 2Mr/Sigma) (M - r)^2 / Sigma, Sigma = r^2 + M^2 cos^2(theta).

    Negative inside the ergoregion band (theta > 0); exactly zero at the
    horizon r = M. On the axis (theta = 0) it collapses to
    ((r - M)^2 / (r^2 + M^2))^2, which stays in [0, 1].
    """
    M = params.mass_M
    rr = np.asarray(r, dtype=float)
    sigma = rr * rr + (M * math.cos(params.theta)) ** 2
    out = (1.0 - 2.0 * M * rr / sigma) * (M - rr) ** 2 / sigma
    return float(out) if np.ndim(r) == 0 else out


@dataclass(frozen=True)
class SpeedProfile:
    """A dimensionless squared-speed field speed_sq(r, t) with its domain.

    kind is one of flat / alcubierre / godel / kerr_extreme / tabulated.
    Only the alcubierre profile is time dependent. valid_range is the r
    interval callers may rely on; tabulated profiles enforce it hard, the
    analytic ones use it to bound solvers and ray tracers.
    """

    kind: str
    params: object
    time_dependent: bool
    valid_range: tuple[float, float]
    table_r: Optional[np.ndarray] = None
    table_speed_sq: Optional[np.ndarray] = None

    def speed_sq(self, r: ArrayLike, t: float = 0.0, background_c: float = 1.0) -> ArrayLike:
        """Evaluate the profile; may return negative values (see module doc)."""
        if self.kind == "flat":
            out = np.ones_like(np.asarray(r, dtype=float))
            return float(out) if np.ndim(r) == 0 else out
        if self.kind == "alcubierre":
            return alcubierre_speed_sq(r, t, self.params, background_c)
        if self.kind == "godel":
            return godel_speed_sq(r, self.params)
        if self.kind == "kerr_extreme":
            return kerr_extreme_speed_sq(r, self.params)
        if self.kind == "tabulated":
            return self._interp_table(r)
        raise ValueError(f"unknown profile kind {self.kind!r}")

    def _interp_table(self, r: ArrayLike) -> ArrayLike:
        rr = np.asarray(r, dtype=float)
        lo, hi = self.valid_range
        if np.any(rr < lo) or np.any(rr > hi):
            raise ProfileDomainError(
                f"tabulated profile evaluated outside [{lo}, {hi}]"
            )
        out = np.interp(rr, self.table_r, self.table_speed_sq)
        return float(out) if np.ndim(r) == 0 else out

    def contains(self, r: float) -> bool:
        lo, hi = self.valid_range
        return lo <= r <= hi

    def sup_speed_sq(self, window: tuple[float, float]) -> float:
        """Supremum of speed_sq on the window, over all times.

        Used for CFL bounds, so the estimate is conservative: the bubble
        profile reports its interior maximum whether or not the bubble is
        inside the window at any sampled instant.
        """
        lo, hi = window
        if self.kind == "flat":
            return 1.0
        if self.kind == "alcubierre":
            v = self.params.vs_over_c
            return (1.0 + v) ** 2
        if self.kind == "godel":
            edge = max(abs(lo), abs(hi))
            return godel_speed_sq(edge, self.params)
        if self.kind == "kerr_extreme":
            rs = np.linspace(lo, hi, 4097)
            return float(np.max(kerr_extreme_speed_sq(rs, self.params)))
        if self.kind == "tabulated":
            rs = np.linspace(lo, hi, max(len(self.table_r) * 4, 4097))
            return float(np.max(self._interp_table(rs)))
        raise ValueError(f"unknown profile kind {self.kind!r}")


def flat_profile(valid_range: tuple[float, float] = FULL_LINE) -> SpeedProfile:
    return SpeedProfile("flat", None, False, valid_range)


def alcubierre_profile(
    params: AlcubierreParams, valid_range: tuple[float, float] = FULL_LINE
) -> SpeedProfile:
    return SpeedProfile("alcubierre", params, True, valid_range)


def godel_profile(
    params: GodelParams, valid_range: tuple[float, float] = FULL_LINE
) -> SpeedProfile:
    # The radial formula is even in r, so the even extension over the full
    # line is used; this keeps centered stencils at the axis inside range.
    return SpeedProfile("godel", params, False, valid_range)


def kerr_extreme_profile(
    params: KerrExtremeParams, valid_range: tuple[float, float] = HALF_LINE
) -> SpeedProfile:
    return SpeedProfile("kerr_extreme", params, False, valid_range)


def tabulated_profile(r_samples, speed_sq_samples) -> SpeedProfile:
    """Profile interpolating linearly between samples; rejects evaluation outside."""
    r = np.asarray(r_samples, dtype=float).copy()
    v = np.asarray(speed_sq_samples, dtype=float).copy()
    if r.ndim != 1 or r.shape != v.shape or len(r) < 2:
        raise ValueError("need two equal-length 1-D sample arrays with >= 2 points")
    if np.any(np.diff(r) <= 0):
        raise ValueError("r samples must be strictly increasing")
    if not (np.all(np.isfinite(r)) and np.all(np.isfinite(v))):
        raise ValueError("samples must be finite")
    r.setflags(write=False)
    v.setflags(write=False)
    return SpeedProfile(
        "tabulated", None, False, (float(r[0]), float(r[-1])), table_r=r, table_speed_sq=v
    )


def ricci_scalar(
    profile: SpeedProfile,
    background_c: float,
    r: float,
    t: float = 0.0,
    h: Optional[float] = None,
) -> float:
    """Scalar curvature -2 c''(r, t) / c(r, t) of the reduced section.

    c'' is a centered second difference with step h, second-order accurate.
    Default h is the valid-range span / 1e4, falling back to
    1e-4 * max(1, |r|) when the range is unbounded.
    """
    lo, hi = profile.valid_range
    if h is None:
        span = hi - lo
        h = span / 1e4 if math.isfinite(span) else 1e-4 * max(1.0, abs(r))
    if h <= 0:
        raise ValueError("h must be > 0")
    if r - h < lo or r + h > hi:
        raise ProfileDomainError(f"stencil [{r - h}, {r + h}] leaves [{lo}, {hi}]")
    stencil = np.array([r - h, r, r + h])
    s2 = profile.speed_sq(stencil, t, background_c)
    if np.any(s2 <= 0):
        raise ProfileEvaluationError("speed_sq <= 0 in the curvature stencil")
    c = background_c * np.sqrt(s2)
    c_dd = (c[0] - 2.0 * c[1] + c[2]) / (h * h)
    return -2.0 * c_dd / c[1]
