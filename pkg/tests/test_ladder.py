"""Flux-tunable LC ladder: dispersion, tuning law, energy, guards."""

import math

import numpy as np
import pytest

from fluxline.metrics import GodelParams, godel_profile
from fluxline.synthesis import ArrayConfig, synthesize_program
from fluxline.wavelab import (
    ContinuumGrid,
    ContinuumSolver,
    GaussianPulse,
    LadderSim,
    SingularInductance,
    StabilityViolation,
    measure_front_speed,
)
from fluxline.wavelab.fronts import front_trajectory
from fluxline.wavelab.ladder import ladder_step


def uniform_speed(theta, n_cells=700, width=10.0):
    sim = LadderSim(n_cells=n_cells, pitch=1.0, boundary="absorbing")
    sim.set_flux(theta)
    sim.initialize_pulse(GaussianPulse(80.0, width), 1)
    travel = (n_cells - 200) * math.sqrt(abs(math.cos(theta)))
    n_steps = int(0.8 * travel / (math.sqrt(abs(math.cos(theta))) * sim.dt))
    snaps = sim.run(n_steps, max(1, n_steps // 60))
    return measure_front_speed(snaps).mean


def test_flux_free_group_speed_is_c0_times_pitch():
    v = uniform_speed(0.0)
    assert v == pytest.approx(1.0, abs=0.02)


def test_group_speed_is_pitch_per_cell_time_in_normalized_units():
    # with L0 = C = 1 fixed, long wavelengths cover one cell per unit time,
    # i.e. pitch/sqrt(L0 C) in coordinate units
    sim = LadderSim(n_cells=500, pitch=0.5, inductance_L0=1.0, boundary="absorbing")
    sim.initialize_pulse(GaussianPulse(40.0, 5.0), 1)
    n_steps = int(0.8 * 250 / 0.5 / sim.dt)
    snaps = sim.run(n_steps, max(1, n_steps // 50))
    v = measure_front_speed(snaps).mean
    assert v == pytest.approx(0.5, abs=0.01)


def test_group_speed_follows_sqrt_cos_law():
    v0 = uniform_speed(0.0)
    v3 = uniform_speed(math.pi / 3)
    assert v3 / v0 == pytest.approx(math.sqrt(0.5), rel=0.02)


def test_energy_drift_static_flux_reflecting():
    sim = LadderSim(n_cells=300, pitch=1.0, boundary="reflecting", stability_factor=0.4)
    sim.set_flux(math.pi / 5)
    sim.initialize_pulse(GaussianPulse(150.0, 8.0), 1)
    sim.step()
    e0 = sim.energy()
    worst = 0.0
    for k in range(10_000):
        sim.step()
        if k % 250 == 0:
            worst = max(worst, abs(sim.energy() - e0) / abs(e0))
    worst = max(worst, abs(sim.energy() - e0) / abs(e0))
    assert worst < 1e-3  # contract bound
    assert worst < 1e-10  # staggered product form conserves to rounding


def test_singular_inductance_at_window():
    sim = LadderSim(n_cells=16)
    with pytest.raises(SingularInductance):
        sim.set_flux(math.pi / 2)


def test_stability_violation_for_oversized_dt():
    with pytest.raises(StabilityViolation):
        LadderSim(n_cells=16, dt=1.5)  # bound sqrt(L0 C) = 1


def test_inductance_tuning_law():
    sim = LadderSim(n_cells=8)
    sim.set_flux(np.array([0.0, math.pi / 3, -math.pi / 3, 0.2, 0.44 * math.pi, 0.1, 0.0, 0.3]))
    np.testing.assert_allclose(sim.inductance, sim.L0 / np.abs(np.cos(sim.theta)), rtol=1e-14)
    assert sim.inductance[1] == pytest.approx(2.0 * sim.L0, rel=1e-12)


def test_ladder_step_kernel_matches_manual_kcl():
    rng = np.random.default_rng(11)
    v = rng.normal(size=6)
    flux = rng.normal(size=5)
    L = rng.uniform(1.0, 2.0, size=5)
    C, dt = 1.3, 0.07
    v2, flux2, cur = ladder_step(v, flux, L, C, dt, "reflecting")
    flux_want = flux + dt * (v[:-1] - v[1:])
    np.testing.assert_allclose(flux2, flux_want, rtol=1e-14)
    cur_want = flux_want / L
    np.testing.assert_allclose(cur, cur_want, rtol=1e-14)
    for i in range(1, 5):
        assert v2[i] == pytest.approx(v[i] + dt / C * (cur_want[i - 1] - cur_want[i]), rel=1e-13)
    assert v2[0] == pytest.approx(v[0] - dt / C * cur_want[0], rel=1e-13)
    assert v2[-1] == pytest.approx(v[-1] + dt / C * cur_want[-1], rel=1e-13)


def test_time_varying_flux_enters_through_branch_flux():
    # retuning a cell must rescale its current at fixed branch flux
    sim = LadderSim(n_cells=4)
    sim.branch_flux = np.array([0.5, 0.5, 0.5, 0.5])
    i_before = sim.state().currents.copy()
    sim.set_flux(math.pi / 3)
    i_after = sim.state().currents
    np.testing.assert_allclose(i_after, i_before * math.cos(math.pi / 3), rtol=1e-12)


def test_ladder_agrees_with_continuum_on_static_profile():
    prof = godel_profile(GodelParams(a=1.0))
    theta_dc = 0.45 * math.pi
    window = (0.0, 3.8)
    cfg = ArrayConfig(n_cells=256)
    program = synthesize_program(prof, theta_dc, cfg, window)
    bg = program.background_c

    pitch = (window[1] - window[0]) / cfg.n_cells
    sim = LadderSim(n_cells=cfg.n_cells, pitch=pitch, r_start=window[0], boundary="absorbing")
    sim.set_flux(program.theta_total[:, 0])
    sim.initialize_pulse(GaussianPulse(0.4, 0.12), 1)
    n_steps = int(4.4 / sim.dt)
    lad_snaps = sim.run(n_steps, max(1, n_steps // 100))

    n_pts = 700
    grid = ContinuumGrid(n_points=n_pts, dx=(window[1] - window[0]) / (n_pts - 1), r_start=window[0])
    solver = ContinuumSolver(prof, grid, background_c=bg)
    solver.initialize_pulse(GaussianPulse(0.4, 0.12), 1)
    cont_snaps = solver.run(4.4, 20)

    lt, lr = front_trajectory(lad_snaps, 0.05, 1, r_stop=3.1)
    ct, cr = front_trajectory(cont_snaps, 0.05, 1, r_stop=3.1)
    t_lo, t_hi = max(lt[0], ct[0]), min(lt[-1], ct[-1])
    ts = np.linspace(t_lo, t_hi, 60)
    lad_at = np.interp(ts, lt, lr)
    con_at = np.interp(ts, ct, cr)
    travel = con_at - con_at[0]
    mask = travel > 0.25 * travel[-1]
    rel = np.abs(lad_at - con_at)[mask] / travel[mask]
    assert np.max(rel) < 0.03


def test_ladder_constructor_validation():
    with pytest.raises(ValueError):
        LadderSim(n_cells=1)
    with pytest.raises(ValueError):
        LadderSim(n_cells=8, boundary="sponge")
    with pytest.raises(ValueError):
        LadderSim(n_cells=8, stability_factor=1.2)
