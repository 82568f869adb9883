"""Telegrapher LC ladder with flux-tunable cell inductance.

Cells i = 0..n-1 carry series inductors L_i = L0 / |cos theta_i| between
nodes i and i+1; every node has capacitance C to ground. Leapfrog staggers
node voltages (integer steps) against branch fluxes (half steps):

    flux_i   += dt * (V_i - V_{i+1})      inductor branch, flux variable
    I_i       = flux_i / L_i(t)           time-varying L enters here
    C dV_i/dt = I_{i-1} - I_i             charge balance at node i

Driving the inductor through its branch flux (rather than L dI/dt) keeps the
energy bookkeeping consistent when theta_i changes during a run. The lattice
dispersion is omega(k) = 2 sin(k d / 2) / sqrt(L C); long wavelengths travel
at d / sqrt(L C), i.e. c0 sqrt|cos theta| in coordinate units.

Stability requires dt < sqrt(L_min C). Since L_i >= L0 for any flux, the
bound never tightens below sqrt(L0 C) during a run. Cells with
|cos theta_i| < 1e-9 have effectively infinite inductance and are rejected
(SingularInductance).

Boundaries: "reflecting" leaves the end nodes open-circuited; "absorbing"
terminates both ends with the matched impedance sqrt(L0 / C).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .continuum import GaussianPulse
from .fronts import Snapshot

__all__ = [
    "COS_FLOOR",
    "StabilityViolation",
    "SingularInductance",
    "LadderState",
    "LadderSim",
    "ladder_step",
]

COS_FLOOR = 1e-9
BOUNDARIES = ("reflecting", "absorbing")


class StabilityViolation(RuntimeError):
    """dt at or above the leapfrog bound sqrt(L_min C)."""


class SingularInductance(RuntimeError):
    """A cell sits at the pi/2 window where the inductance diverges."""


@dataclass(frozen=True)
class LadderState:
    """User-facing view of the simulator state at one instant."""

    voltages: np.ndarray
    currents: np.ndarray
    cell_inductance: np.ndarray
    cell_capacitance: float
    time: float


def ladder_step(voltages, branch_flux, inductance, capacitance, dt, boundary="reflecting", z_load=None):
    """One leapfrog step; pure kernel shared by the simulator class.

    Returns (voltages', branch_flux', currents at the new half step).
    """
    flux = branch_flux + dt * (voltages[:-1] - voltages[1:])
    currents = flux / inductance
    v = voltages.copy()
    v[1:-1] += (dt / capacitance) * (currents[:-1] - currents[1:])
    if boundary == "reflecting":
        v[0] += (dt / capacitance) * (-currents[0])
        v[-1] += (dt / capacitance) * currents[-1]
    else:
        v[0] += (dt / capacitance) * (-currents[0] - voltages[0] / z_load)
        v[-1] += (dt / capacitance) * (currents[-1] - voltages[-1] / z_load)
    return v, flux, currents


class LadderSim:
    """Flux-driven LC ladder on n_cells cells.

    Geometry: node i sits at r_start + i * pitch; cell midpoints halfway
    between. L0 is derived from pitch and c0 so that the flux-free line
    carries long wavelengths at speed c0 in coordinate units.
    """

    def __init__(
        self,
        n_cells: int,
        pitch: float = 1.0,
        r_start: float = 0.0,
        c0: float = 1.0,
        capacitance: float = 1.0,
        inductance_L0: float | None = None,
        dt: float | None = None,
        stability_factor: float = 0.5,
        boundary: str = "reflecting",
    ):
        if n_cells < 2:
            raise ValueError("n_cells must be >= 2")
        if boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")
        if not 0.0 < stability_factor < 1.0:
            raise ValueError("stability_factor must lie in (0, 1)")
        self.n_cells = n_cells
        self.pitch = pitch
        self.c0 = c0
        self.capacitance = capacitance
        self.boundary = boundary
        # explicit L0 works in per-cell units (flux-free speed
        # pitch / sqrt(L0 C)); otherwise L0 is derived so the flux-free line
        # carries long wavelengths at c0 in coordinate units
        if inductance_L0 is not None:
            self.L0 = inductance_L0
        else:
            self.L0 = pitch * pitch / (c0 * c0 * capacitance)
        self.z0 = math.sqrt(self.L0 / capacitance)
        self.node_r = r_start + np.arange(n_cells + 1) * pitch
        self.cell_r = 0.5 * (self.node_r[:-1] + self.node_r[1:])
        self.dt = dt if dt is not None else stability_factor * math.sqrt(self.L0 * capacitance)
        if self.dt >= math.sqrt(self.L0 * capacitance):
            raise StabilityViolation(
                f"dt = {self.dt} at or above the bound sqrt(L0 C) = {math.sqrt(self.L0 * capacitance)}"
            )
        self.theta = np.zeros(n_cells)
        self.inductance = np.full(n_cells, self.L0)
        self.voltages = np.zeros(n_cells + 1)
        self.branch_flux = np.zeros(n_cells)
        self._v_prev = np.zeros(n_cells + 1)
        self.time = 0.0

    def set_flux(self, theta_total):
        """Apply total flux angles per cell (scalar broadcasts)."""
        theta = np.broadcast_to(np.asarray(theta_total, dtype=float), (self.n_cells,)).copy()
        cos = np.abs(np.cos(theta))
        if np.any(cos < COS_FLOOR):
            i = int(np.argmin(cos))
            raise SingularInductance(
                f"|cos theta| = {cos[i]} < {COS_FLOOR} at cell {i}"
            )
        self.theta = theta
        self.inductance = self.L0 / cos
        if self.dt >= math.sqrt(float(self.inductance.min()) * self.capacitance):
            raise StabilityViolation("dt at or above sqrt(L_min C) after flux update")

    def initialize_pulse(self, pulse: GaussianPulse, direction: int = 1):
        """Launch a one-directional voltage pulse.

        Branch fluxes are seeded at the first half step with the matched
        current V/Z of a one-way wave, evaluated at the shifted midpoint.
        """
        self.voltages = pulse(self.node_r)
        z = np.sqrt(self.inductance / self.capacitance)
        c_local = self.pitch / np.sqrt(self.inductance * self.capacitance)
        shifted = self.cell_r - direction * 0.5 * self.dt * c_local
        currents = direction * pulse(shifted) / z
        self.branch_flux = currents * self.inductance
        self._v_prev = self.voltages.copy()
        self.time = 0.0

    def step(self, flux_schedule=None):
        """Advance one step; flux_schedule(t) may retune the cells first.

        The schedule is sampled at the half step where the branch currents
        live.
        """
        if flux_schedule is not None:
            self.set_flux(flux_schedule(self.time + 0.5 * self.dt))
        self._v_prev = self.voltages
        self.voltages, self.branch_flux, _ = ladder_step(
            self.voltages,
            self.branch_flux,
            self.inductance,
            self.capacitance,
            self.dt,
            self.boundary,
            self.z0,
        )
        self.time += self.dt

    def state(self) -> LadderState:
        return LadderState(
            voltages=self.voltages.copy(),
            currents=self.branch_flux / self.inductance,
            cell_inductance=self.inductance.copy(),
            cell_capacitance=self.capacitance,
            time=self.time,
        )

    def snapshot(self) -> Snapshot:
        return Snapshot(time=self.time, r=self.node_r.copy(), values=self.voltages.copy())

    def run(self, n_steps: int, snapshot_stride: int = 10, flux_schedule=None) -> list[Snapshot]:
        """Step n_steps times, collecting voltage snapshots."""
        snaps = [self.snapshot()]
        for k in range(1, n_steps + 1):
            self.step(flux_schedule)
            if k % snapshot_stride == 0:
                snaps.append(self.snapshot())
        if snaps[-1].time < self.time:
            snaps.append(self.snapshot())
        return snaps

    def energy(self) -> float:
        """1/2 C sum V^2 + 1/2 sum L I^2 in the staggered product form.

        The capacitor term multiplies the voltages of the two integer steps
        around the half step where the currents live; that combination is
        conserved exactly by the leapfrog update for static fluxes and
        reflecting ends.
        """
        cap = 0.5 * self.capacitance * float(np.sum(self._v_prev * self.voltages))
        ind = 0.5 * float(np.sum(self.branch_flux**2 / self.inductance))
        return cap + ind
