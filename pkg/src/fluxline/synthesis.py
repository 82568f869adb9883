"""Flux <-> speed algebra for the SQUID-array transmission line.

Angles are flux angles theta = pi * phi_external / phi_quantum, in radians,
everywhere in this package. A cell biased at total angle theta propagates at
c0^2 |cos theta|. A spatially uniform DC bias sets the simulated flat
background, c^2 = c0^2 cos(theta_dc); the AC angle on top of it shapes the
dimensionless profile through

    speed_sq(r, t) * cos(theta_dc) = cos(theta_dc + theta_ac(r, t)).

Synthesis inverts this with the principal arccos branch in [0, pi]. The
admissible window keeps both the DC part and the total inside [-pi/2, pi/2].
Cells whose total sits within window_epsilon of pi/2 have effectively
diverging inductance ("hot" cells, e.g. the horizon cell of the extreme
rotating hole, where the total is exactly pi/2); they are reported as
impedance warnings and budgeted per time sample rather than refused
outright, since a single hot SQUID is the physically interesting case.

Feasibility statuses, in order of precedence (highest wins) and with their
CSV status codes:

    4  negative_speed_sq   speed_sq < 0, no real flux exists (ergoregion)
    3  arccos_infeasible   speed_sq * cos(theta_dc) > 1, DC bias too weak
    2  window_violation    the DC bias itself sits at/outside +-pi/2, or the
                           total would leave the admissible window
    1  impedance_warning   |total| above the impedance margin (includes the
                           hot cells pinned at pi/2)
    0  feasible
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional, Sequence

import numpy as np

from .metrics import SpeedProfile

__all__ = [
    "Status",
    "SynthesisError",
    "NegativeSpeedSquared",
    "ArccosInfeasible",
    "WindowViolation",
    "SynthesisFailed",
    "HotCellBudgetExceeded",
    "ArrayConfig",
    "FluxProgram",
    "FeasibilityReport",
    "speed_sq_from_flux",
    "dc_calibration",
    "synthesize_flux",
    "dc_feasibility_boundary",
    "godel_max_radius",
    "kerr_forbidden_band",
    "classify_point",
    "cell_midpoints",
    "synthesize_program",
    "feasibility_scan",
]

HALF_PI = math.pi / 2.0

# One-ulp slack for the arccos argument: products like 2 * cos(pi/3) land a
# rounding error above 1 even though the exact value is feasible.
ARCCOS_SLACK = 1e-12


class Status(IntEnum):
    FEASIBLE = 0
    IMPEDANCE_WARNING = 1
    WINDOW_VIOLATION = 2
    ARCCOS_INFEASIBLE = 3
    NEGATIVE_SPEED_SQ = 4


class SynthesisError(Exception):
    """Base class for synthesis failures."""


class NegativeSpeedSquared(SynthesisError):
    """Requested speed_sq < 0: no real flux angle exists."""


class ArccosInfeasible(SynthesisError):
    """speed_sq * cos(theta_dc) > 1: the DC bias leaves no headroom."""


class WindowViolation(SynthesisError):
    """The total flux angle falls at/outside the admissible +-pi/2 window."""

    def __init__(self, msg: str, theta_total: float):
        super().__init__(msg)
        self.theta_total = theta_total


class SynthesisFailed(SynthesisError):
    """A program entry is infeasible; carries the first offending entry."""

    def __init__(self, cell: int, time_index: int, status: Status):
        super().__init__(
            f"synthesis failed at cell {cell}, time index {time_index}: {status.name}"
        )
        self.cell = cell
        self.time_index = time_index
        self.status = status


class HotCellBudgetExceeded(SynthesisError):
    """More cells pinned at the pi/2 window than the configuration allows."""

    def __init__(self, time_index: int, count: int, budget: int):
        super().__init__(
            f"{count} hot cells at time index {time_index}, budget {budget}"
        )
        self.time_index = time_index
        self.count = count
        self.budget = budget


@dataclass(frozen=True)
class ArrayConfig:
    """Hardware abstraction of the SQUID array.

    impedance_margin is the |total| angle beyond which the low-impedance
    approximation is considered strained (warning, not failure).
    window_epsilon is the numerical guard below pi/2 that defines hot cells;
    max_hot_cells caps how many may occur per time sample.
    """

    n_cells: int = 64
    cell_pitch: float = 1.0
    c0: float = 1.0
    impedance_margin: float = 0.44 * math.pi
    max_hot_cells: int = 1
    window_epsilon: float = 1e-9

    def __post_init__(self):
        if self.n_cells < 2:
            raise ValueError("n_cells must be >= 2")
        if self.cell_pitch <= 0:
            raise ValueError("cell_pitch must be > 0")
        if self.c0 <= 0:
            raise ValueError("c0 must be > 0")
        if not 0.0 < self.impedance_margin < HALF_PI:
            raise ValueError("impedance_margin must lie in (0, pi/2)")
        if self.max_hot_cells < 0:
            raise ValueError("max_hot_cells must be >= 0")
        if not 0.0 < self.window_epsilon < 1e-3:
            raise ValueError("window_epsilon must lie in (0, 1e-3)")


def speed_sq_from_flux(theta_total, c0: float = 1.0):
    """Line speed squared c0^2 |cos theta| at total flux angle theta."""
    out = c0 * c0 * np.abs(np.cos(theta_total))
    return float(out) if np.ndim(theta_total) == 0 else out


def dc_calibration(c_over_c0_sq: float, sign: int = 1) -> float:
    """DC angle that reduces the background to c^2 = c0^2 * c_over_c0_sq.

    sign picks which side of zero the bias sits on; the speed is even in it.
    """
    if not 0.0 < c_over_c0_sq <= 1.0:
        raise ValueError("c_over_c0_sq must lie in (0, 1]")
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    return sign * math.acos(c_over_c0_sq)


def synthesize_flux(
    speed_sq: float, theta_dc: float, window_epsilon: float = 1e-9
) -> tuple[float, float]:
    """Invert speed_sq -> (theta_ac, theta_total) for one cell.

    theta_total = arccos(speed_sq * cos(theta_dc)) on the principal branch,
    theta_ac = theta_total - theta_dc. Raises NegativeSpeedSquared,
    ArccosInfeasible, or WindowViolation when the request is not
    representable; WindowViolation carries the computed total so callers may
    budget hot cells instead of failing.
    """
    if not math.isfinite(speed_sq):
        raise ValueError("speed_sq must be finite")
    if abs(theta_dc) >= HALF_PI:
        raise ValueError("theta_dc must lie strictly inside (-pi/2, pi/2)")
    if speed_sq < 0.0:
        raise NegativeSpeedSquared(f"speed_sq = {speed_sq} < 0")
    arg = speed_sq * math.cos(theta_dc)
    if arg > 1.0:
        if arg > 1.0 + ARCCOS_SLACK:
            raise ArccosInfeasible(
                f"arccos argument {arg} > 1 (speed_sq={speed_sq}, theta_dc={theta_dc})"
            )
        arg = 1.0
    theta_total = math.acos(arg)
    if theta_total > HALF_PI - window_epsilon:
        raise WindowViolation(
            f"total flux angle {theta_total} within {window_epsilon} of pi/2",
            theta_total=theta_total,
        )
    return theta_total - theta_dc, theta_total


def dc_feasibility_boundary(speed_sq_max: float) -> float:
    """Smallest |theta_dc| for which the profile maximum is representable.

    cos(theta_dc) must not exceed 1 / speed_sq_max, so the boundary is
    arccos(1 / speed_sq_max).
    """
    if speed_sq_max < 1.0:
        raise ValueError("speed_sq_max must be >= 1")
    return math.acos(1.0 / speed_sq_max)


def godel_max_radius(theta_dc: float) -> float:
    """Largest representable r / (2a) of the rotating-universe profile.

    The profile 1 + (r/2a)^2 stays representable while it is below
    sec|theta_dc|, so the boundary radius is sqrt(sec|theta_dc| - 1).
    Returns 0 at theta_dc = 0.
    """
    if abs(theta_dc) >= HALF_PI:
        raise ValueError("theta_dc must lie strictly inside (-pi/2, pi/2)")
    sec = 1.0 / math.cos(theta_dc)
    return math.sqrt(max(sec - 1.0, 0.0))


def kerr_forbidden_band(theta: float, mass_M: float = 1.0) -> Optional[tuple[float, float]]:
    """Radius band with negative speed_sq on a fixed-angle slice, or None.

    The sign of the profile follows r^2 - 2 M r + M^2 cos^2(theta), whose
    roots are M (1 +- sin theta); on the axis the band degenerates to the
    single horizon point and None is returned.
    """
    s = math.sin(theta)
    if s <= 0.0:
        return None
    return mass_M * (1.0 - s), mass_M * (1.0 + s)


def _classify_grid(speed_sq, theta_dc, config: ArrayConfig):
    """Vectorized precedence classification.

    Returns (status int array, theta_total float array); theta_total is NaN
    where no principal-branch total exists (negative speed_sq, arccos
    infeasible). Broadcasting rules are numpy's.
    """
    s = np.asarray(speed_sq, dtype=float)
    d = np.asarray(theta_dc, dtype=float)
    arg = s * np.cos(d)
    negative = s < 0.0
    infeasible = arg > 1.0 + ARCCOS_SLACK
    theta = np.arccos(np.clip(arg, -1.0, 1.0))
    bad_dc = np.abs(d) >= HALF_PI - config.window_epsilon
    beyond = arg < -ARCCOS_SLACK
    window = bad_dc | beyond
    hot = theta >= HALF_PI - config.window_epsilon
    warn = (theta > config.impedance_margin) | hot
    status = np.select(
        [negative, infeasible, window, warn],
        [
            int(Status.NEGATIVE_SPEED_SQ),
            int(Status.ARCCOS_INFEASIBLE),
            int(Status.WINDOW_VIOLATION),
            int(Status.IMPEDANCE_WARNING),
        ],
        default=int(Status.FEASIBLE),
    )
    theta = np.where(negative | infeasible, np.nan, theta)
    return status, theta


def classify_point(speed_sq: float, theta_dc: float, config: ArrayConfig) -> Status:
    """Feasibility status of one (speed_sq, theta_dc) point."""
    status, _ = _classify_grid(speed_sq, theta_dc, config)
    return Status(int(status))


def cell_midpoints(coord_window: tuple[float, float], n_cells: int) -> np.ndarray:
    """Cell i sits at window_start + (i + 1/2) * span / n_cells."""
    lo, hi = coord_window
    if not hi > lo:
        raise ValueError("coord_window must have positive span")
    width = (hi - lo) / n_cells
    return lo + (np.arange(n_cells) + 0.5) * width


@dataclass(frozen=True)
class FluxProgram:
    """Synthesized per-cell, per-time flux angles plus feasibility notes.

    theta_total is always theta_dc + theta_ac entrywise. background_c is the
    simulated flat-spacetime speed c0 sqrt(cos theta_dc). annotations holds
    one Status code per entry (shape cells x times); a program produced by
    synthesize_program contains only FEASIBLE and IMPEDANCE_WARNING entries.
    """

    theta_dc: float
    theta_ac: np.ndarray
    cell_coords: np.ndarray
    times: np.ndarray
    speed_sq: np.ndarray
    annotations: np.ndarray
    background_c: float
    c0: float
    coord_window: tuple[float, float]

    @property
    def theta_total(self) -> np.ndarray:
        return self.theta_dc + self.theta_ac

    @property
    def n_cells(self) -> int:
        return len(self.cell_coords)

    def hot_cell_counts(self, window_epsilon: float = 1e-9) -> np.ndarray:
        """Number of cells pinned at the pi/2 window, per time sample."""
        return np.count_nonzero(self.theta_total >= HALF_PI - window_epsilon, axis=0)


def synthesize_program(
    profile: SpeedProfile,
    theta_dc: float,
    config: ArrayConfig,
    coord_window: tuple[float, float],
    time_samples: Sequence[float] = (0.0,),
) -> FluxProgram:
    """Synthesize the whole array program over the coordinate window.

    Fails with SynthesisFailed on the first negative or arccos-infeasible
    entry (time-major order), or with HotCellBudgetExceeded when a time
    sample pins more than max_hot_cells cells at the window. Hot cells
    within budget are kept and annotated as impedance warnings.
    """
    if abs(theta_dc) >= HALF_PI - config.window_epsilon:
        raise ValueError("theta_dc must lie strictly inside the admissible window")
    lo, hi = coord_window
    vlo, vhi = profile.valid_range
    if lo < vlo or hi > vhi:
        raise ValueError(
            f"coord_window [{lo}, {hi}] not contained in profile range [{vlo}, {vhi}]"
        )
    times = np.asarray(list(time_samples), dtype=float)
    if times.size == 0:
        raise ValueError("need at least one time sample")
    r = cell_midpoints(coord_window, config.n_cells)
    background_c = config.c0 * math.sqrt(math.cos(theta_dc))

    n, m = config.n_cells, len(times)
    speed = np.empty((n, m))
    theta_total = np.empty((n, m))
    annotations = np.empty((n, m), dtype=int)
    for j, t in enumerate(times):
        s = np.asarray(profile.speed_sq(r, float(t), background_c=background_c), dtype=float)
        status, theta = _classify_grid(s, theta_dc, config)
        fatal = (status == int(Status.NEGATIVE_SPEED_SQ)) | (
            status == int(Status.ARCCOS_INFEASIBLE)
        )
        if np.any(fatal):
            i = int(np.argmax(fatal))
            raise SynthesisFailed(i, j, Status(int(status[i])))
        hot = int(np.count_nonzero(theta >= HALF_PI - config.window_epsilon))
        if hot > config.max_hot_cells:
            raise HotCellBudgetExceeded(j, hot, config.max_hot_cells)
        speed[:, j] = s
        theta_total[:, j] = theta
        annotations[:, j] = status

    theta_ac = theta_total - theta_dc
    theta_ac.setflags(write=False)
    speed.setflags(write=False)
    annotations.setflags(write=False)
    r.setflags(write=False)
    times.setflags(write=False)
    return FluxProgram(
        theta_dc=theta_dc,
        theta_ac=theta_ac,
        cell_coords=r,
        times=times,
        speed_sq=speed,
        annotations=annotations,
        background_c=background_c,
        c0=config.c0,
        coord_window=(float(lo), float(hi)),
    )


@dataclass(frozen=True)
class FeasibilityReport:
    """Dense classification over (metric parameter) x (theta_dc) x (r).

    status and theta_total have shape (P, D, R); theta_total is NaN where no
    principal-branch total exists. rows() yields the flat CSV rows
    (param, theta_dc, r, status_code, theta_total_or_nan) in deterministic
    nested order.
    """

    param_name: str
    param_values: np.ndarray
    theta_dc_values: np.ndarray
    r_values: np.ndarray
    status: np.ndarray
    theta_total: np.ndarray

    def rows(self):
        for i, p in enumerate(self.param_values):
            for j, d in enumerate(self.theta_dc_values):
                for k, r in enumerate(self.r_values):
                    yield (
                        float(p),
                        float(d),
                        float(r),
                        int(self.status[i, j, k]),
                        float(self.theta_total[i, j, k]),
                    )


def _scan_slab(profile: SpeedProfile, theta_dc_values, r_values, t, config):
    s = np.asarray(profile.speed_sq(np.asarray(r_values, dtype=float), t), dtype=float)
    d = np.asarray(theta_dc_values, dtype=float)
    return _classify_grid(s[None, :], d[:, None], config)


def feasibility_scan(
    profiles: Sequence[tuple[float, SpeedProfile]],
    theta_dc_values,
    r_values,
    config: ArrayConfig,
    t: float = 0.0,
    param_name: str = "param",
    workers: Optional[int] = None,
) -> FeasibilityReport:
    """Classify every grid point of a profile family.

    profiles is a sequence of (parameter value, profile) pairs; the scan is
    dense over parameters x theta_dc_values x r_values at fixed time t.
    Chunks fan out over a process pool when workers > 1 (default from
    FLUXLINE_WORKERS, else sequential); results merge in parameter order, so
    the report is identical either way.
    """
    if len(profiles) == 0:
        raise ValueError("need at least one (param, profile) pair")
    d = np.asarray(theta_dc_values, dtype=float)
    r = np.asarray(r_values, dtype=float)
    if d.size == 0 or r.size == 0:
        raise ValueError("grid axes must be nonempty")
    if workers is None:
        workers = int(os.environ.get("FLUXLINE_WORKERS", "1"))
    params = np.array([p for p, _ in profiles], dtype=float)
    profs = [prof for _, prof in profiles]

    if workers > 1 and len(profs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            slabs = list(pool.map(_scan_slab, profs, [d] * len(profs), [r] * len(profs), [t] * len(profs), [config] * len(profs)))
    else:
        slabs = [_scan_slab(prof, d, r, t, config) for prof in profs]

    status = np.stack([s for s, _ in slabs])
    theta = np.stack([th for _, th in slabs])
    return FeasibilityReport(
        param_name=param_name,
        param_values=params,
        theta_dc_values=d,
        r_values=r,
        status=status,
        theta_total=theta,
    )
