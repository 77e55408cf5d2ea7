"""Independent oracle machinery: residuals, shooting, route agreement."""

import math

import numpy as np
import pytest

from vwave.series import build_series, interior_zeros, u_plus
from vwave.units import AtomSpec, derive_state
from vwave.verify import (
    SpaceTimeGrid,
    energy_closed_form,
    make_residual_grid,
    ode_residual,
    pde_residual_free,
    route_agreement,
    run_suite,
    shoot_inward,
    shooting_deviation,
    u_minus_crossings,
)
from vwave.wronskian import RadialGrid, u_minus


def _grid_for(sol):
    return make_residual_grid(
        sol.state, interior_zeros(sol) + u_minus_crossings(sol)
    )


def test_u_plus_residual_small_and_second_order(solutions):
    sol = solutions[1]
    rep = ode_residual(lambda r: u_plus(r, sol), sol.state, _grid_for(sol))
    assert rep.max_rel_residual < 1e-6
    assert 1.7 <= rep.order_estimate <= 2.3


def test_perturbed_solution_detected(solutions):
    sol = solutions[1]
    grid = _grid_for(sol)
    clean = ode_residual(lambda r: u_plus(r, sol), sol.state, grid)
    noisy = ode_residual(
        lambda r: u_plus(r, sol) + 1e-3 * np.asarray(r), sol.state, grid
    )
    assert noisy.max_rel_residual > 1e3 * clean.max_rel_residual


def test_residual_rejects_coarse_grid(solutions):
    sol = solutions[1]
    grid = RadialGrid(
        samples=np.linspace(0.5, 5.0, 30), exclusion_zones=(), r_max=5.0
    )
    with pytest.raises(ValueError):
        ode_residual(lambda r: u_plus(r, sol), sol.state, grid)


def test_residual_rejects_nonuniform_grid(solutions):
    sol = solutions[1]
    samples = np.sort(np.concatenate([np.linspace(3.0, 5.0, 60), [5.5]]))
    grid = RadialGrid(samples=samples, exclusion_zones=(), r_max=6.0)
    with pytest.raises(ValueError):
        ode_residual(lambda r: u_plus(r, sol), sol.state, grid)


def test_pde_residual_free_wave():
    grid = SpaceTimeGrid(x_lo=0.0, x_hi=3.0, t_lo=0.0, t_hi=2.0, dx=1e-3, dt=7e-4)
    rep = pde_residual_free(1.0, grid)
    assert rep.max_rel_residual < 1e-6
    assert 1.7 <= rep.order_estimate <= 2.3


def test_pde_residual_detects_wrong_speed():
    grid = SpaceTimeGrid(x_lo=0.0, x_hi=3.0, t_lo=0.0, t_hi=2.0, dx=1e-3, dt=7e-4)
    rep = pde_residual_free(1.0, grid, operator_speed=1.1)
    assert rep.max_rel_residual > 1e-3


def test_pde_residual_zero_amplitude():
    grid = SpaceTimeGrid(x_lo=0.0, x_hi=1.0, t_lo=0.0, t_hi=1.0, dx=1e-2, dt=7e-3)
    rep = pde_residual_free(1.0, grid, amplitude=0.0)
    assert rep.max_rel_residual == 0.0


def test_shoot_inward_validation():
    e1 = energy_closed_form(AtomSpec(1, 1))
    with pytest.raises(ValueError):
        shoot_inward(0.5, 1, 20.0, 3.0)  # positive energy
    with pytest.raises(ValueError):
        shoot_inward(e1, 1, 4.0, 2.5)  # r_start < 3*r_o
    with pytest.raises(ValueError):
        shoot_inward(e1, 1, 20.0, 1.0)  # r_stop left of the pole


@pytest.mark.parametrize("n", [1, 2, 3])
def test_shooting_matches_wronskian(solutions, waves, n):
    assert shooting_deviation(solutions[n], waves[n]) < 1e-4


def test_shot_profile_is_decaying(solutions):
    sol = solutions[1]
    st = sol.state
    prof = shoot_inward(st.energy, 1, 8 * st.r_o, 1.5 * st.r_o)
    assert np.all(np.diff(prof.r) > 0)
    u = prof.evaluate(np.linspace(1.5 * st.r_o, 4 * st.r_o, 50))
    assert np.all(np.abs(u[1:]) < np.abs(u[:-1]))


@pytest.mark.parametrize("z", [1, 2, 3])
@pytest.mark.parametrize("n", range(1, 7))
def test_energy_closed_form_values(z, n):
    assert energy_closed_form(AtomSpec(z, n)) == pytest.approx(
        -(z**2) / (2.0 * n**2), rel=1e-14
    )


def test_route_agreement():
    assert route_agreement(1, 3) < 1e-9


def test_u_minus_crossings_found(solutions):
    assert u_minus_crossings(solutions[1]) == []
    c2 = u_minus_crossings(solutions[2])
    assert len(c2) == 1
    # crossing sits between the interior zero (6) and r_o (8)
    assert 6.0 < c2[0] < 8.0
    assert len(u_minus_crossings(solutions[3])) == 2


def test_run_suite_passes():
    report = run_suite(1, 3)
    assert report["passed"], [c for c in report["checks"] if not c["passed"]]
    names = {c["name"] for c in report["checks"]}
    assert "energy_route_agreement" in names
    assert "shooting_vs_wronskian_n3" in names
