import math

import numpy as np
import pytest
from pydantic import ValidationError

from apps.ou_kernel.schemas import OUKernelQuery
from apps.ou_kernel.utils.managers import OUKernelManager
from apps.solver.schemas import Field, Grid, InitialData
from apps.solver.utils.managers import InitialDataManager, SolverManager
from apps.stable_kernel.schemas import StableLaw
from core.exc import GridHeadroomError, GridMismatch, TailBudgetExceeded


@pytest.fixture(scope='module')
def solver():
    return SolverManager()


@pytest.fixture(scope='module')
def initial():
    return InitialDataManager()


def gaussian(sigma: float, mean: float = 0.0) -> InitialData:
    return InitialData(kind='gaussian-mixture', weights=[1.0], means=[(mean,)], sigmas=[sigma])


def test_grid_validation():
    with pytest.raises(ValidationError):
        Grid(half_width=1.0, points=24)
    with pytest.raises(ValidationError):
        Grid(half_width=1.0, points=8)
    grid = Grid(half_width=2.0, points=16)
    assert grid.spacing == 0.25
    assert grid.nodes[0] == -2.0 and grid.nodes[-1] == pytest.approx(1.75)


def test_initial_data_validation():
    with pytest.raises(ValidationError):
        InitialData(kind='indicator-box', centre=(0.0,))
    with pytest.raises(ValidationError):
        InitialData(kind='gaussian-mixture', weights=[1.0, 1.0], means=[(0.0,)], sigmas=[1.0])
    with pytest.raises(ValidationError):
        InitialData(kind='custom-samples', samples=[1.0, 2.0], sample_half_width=1.0)
    with pytest.raises(ValidationError):
        InitialData(kind='spike')


def test_discretize_has_unit_mass(initial: InitialDataManager):
    law = StableLaw(alpha=1.5, dim=2)
    grid = Grid(dim=2, half_width=8.0, points=64)
    box = InitialData(kind='indicator-box', dim=2, centre=(0.3, -0.1), half_widths=(1.0, 0.5))
    field = initial.discretize(law, box, grid)
    assert field.mass == pytest.approx(1.0, abs=1e-13)
    assert field.values.min() >= 0.0
    stable = initial.discretize(law, InitialData(kind='stable', dim=2), grid)
    assert stable.mass == pytest.approx(1.0, abs=1e-13)


def test_custom_samples_zero_extension(initial: InitialDataManager):
    law = StableLaw(alpha=1.0)
    samples = list(np.linspace(0.0, 1.0, 9) * np.linspace(1.0, 0.0, 9))
    u0 = InitialData(kind='custom-samples', samples=samples, sample_half_width=1.0)
    field = initial.discretize(law, u0, Grid(half_width=4.0, points=64))
    outside = np.abs(field.grid.nodes) > 1.0 + field.grid.spacing
    assert np.all(field.values[outside] == 0.0)
    assert field.mass == pytest.approx(1.0, abs=1e-13)


def test_continuity_set(initial: InitialDataManager):
    box = InitialData(kind='indicator-box', centre=(0.0,), half_widths=(1.0,))
    assert initial.is_continuous_at(box, 0.0)
    assert not initial.is_continuous_at(box, 1.0)
    assert not initial.is_continuous_at(box, -1.0)
    assert initial.is_continuous_at(box, 3.0)
    assert initial.is_continuous_at(gaussian(1.0), 0.0)


def test_heat_propagate_semigroup(solver: SolverManager):
    law = StableLaw(alpha=1.3)
    grid = Grid(half_width=10.0, points=64)
    rng = np.random.default_rng(3)
    field = Field(grid=grid, values=rng.uniform(0.0, 1.0, 64))
    composed = solver.heat_propagate(law, solver.heat_propagate(law, field, 0.3), 0.5)
    direct = solver.heat_propagate(law, field, 0.8)
    assert np.max(np.abs(composed.values - direct.values)) < 1e-13
    assert direct.mass == pytest.approx(field.mass, rel=1e-13)
    # tau → 0
    tiny = solver.heat_propagate(law, field, 1e-14)
    assert np.max(np.abs(tiny.values - field.values)) < 1e-10


def test_spike_matches_cauchy(solver: SolverManager):
    law = StableLaw(alpha=1.0)
    grid = Grid(half_width=200.0, points=4096)
    values = np.zeros(grid.points)
    values[grid.points // 2] = 1.0 / grid.spacing
    spread = solver.heat_propagate(law, Field(grid=grid, values=values), 1.0)
    near = np.abs(grid.nodes) <= 10.0
    x = grid.nodes[near]
    # 주기 image 기여는 1e-5 아래
    assert np.max(np.abs(spread.values[near] - 1.0 / (math.pi * (1.0 + x ** 2)))) < 1e-5


def test_headroom_grid(solver: SolverManager):
    grid = Grid(half_width=5.0, points=64)
    headroom = solver.headroom_grid(grid, 1.0)
    assert headroom.points == 256
    assert headroom.half_width == pytest.approx(5.0 * math.e)
    with pytest.raises(GridHeadroomError):
        solver.headroom_grid(Grid(dim=3, half_width=5.0, points=128), 1.0)


def test_ou_solve_requires_headroom(solver: SolverManager, initial: InitialDataManager):
    law = StableLaw(alpha=1.5)
    grid = Grid(half_width=5.0, points=64)
    field = initial.discretize(law, gaussian(0.5), grid)
    with pytest.raises(GridHeadroomError) as exc:
        solver.ou_solve(law, field, 1.0, grid)
    assert exc.value.suggested_half_width == pytest.approx(5.0 * math.e)
    with pytest.raises(GridMismatch):
        solver.ou_solve(law, field, 1.0, Grid(dim=2, half_width=1.0, points=16))


def test_gaussian_variance_recursion(solver: SolverManager):
    law = StableLaw(alpha=2.0)
    grid = Grid(half_width=10.0, points=256)
    sigma0, t = 0.5, 0.7
    field = solver.solve(law, gaussian(sigma0), t, grid)
    variance = sigma0 ** 2 * math.exp(-2 * t) - math.expm1(-2 * t)
    expected = np.exp(-grid.nodes ** 2 / (2 * variance)) / math.sqrt(2 * math.pi * variance)
    assert np.max(np.abs(field.values - expected)) < 1e-6
    assert field.mass == pytest.approx(1.0, abs=1e-4)
    assert field.time == t


@pytest.mark.parametrize('t', [0.5, 1.0, 5.0])
def test_stationary_fixed_point(solver: SolverManager, t):
    law = StableLaw(alpha=1.5)
    grid = Grid(half_width=40.0, points=256)
    field = solver.solve(law, InitialData(kind='stable'), t, grid, tail_tol=None)
    assert np.max(np.abs(field.values - solver.stationary_field(law, grid))) < 1e-4


def test_two_routes_agree(solver: SolverManager, initial: InitialDataManager):
    law = StableLaw(alpha=1.0)
    grid = Grid(half_width=60.0, points=2048)
    t = 0.5
    box = InitialData(kind='indicator-box', centre=(0.0,), half_widths=(1.0,))
    u0 = initial.discretize(law, box, solver.headroom_grid(grid, t))
    spectral = solver.ou_solve(law, u0, t, grid)
    rng = np.random.default_rng(5)
    for j in rng.choice(np.flatnonzero(np.abs(grid.nodes) < 5.0), 20, replace=False):
        direct = solver.ou_solve_direct(law, u0, t, grid.nodes[j])
        assert abs(direct - spectral.values[j]) < 5e-5


def test_direct_against_point_mass(solver: SolverManager):
    law = StableLaw(alpha=1.0)
    grid = Grid(half_width=4.0, points=32)
    values = np.zeros(32)
    values[20] = 1.0 / grid.spacing
    u0 = Field(grid=grid, values=values)
    expected = OUKernelManager().ou_kernel(law, OUKernelQuery(t=0.4, x=0.3, y=grid.nodes[20]))
    assert solver.ou_solve_direct(law, u0, 0.4, 0.3) == pytest.approx(expected, abs=1e-12)


def test_flow_composition(solver: SolverManager, initial: InitialDataManager):
    law = StableLaw(alpha=1.5)
    out = Grid(half_width=10.0, points=128)
    t1, t2 = 0.3, 0.4
    middle = solver.headroom_grid(out, t2)
    u0 = initial.discretize(law, gaussian(0.5), solver.headroom_grid(middle, t1))
    stepped = solver.ou_solve(law, solver.ou_solve(law, u0, t1, middle), t2, out)
    direct = solver.solve(law, gaussian(0.5), t1 + t2, out, tail_tol=None)
    assert np.max(np.abs(stepped.values - direct.values)) < 1e-6


def test_exact_gaussian_contraction_matches_grid(solver: SolverManager):
    law = StableLaw(alpha=1.5)
    grid = Grid(half_width=40.0, points=512)
    t = 0.5
    field = solver.solve(law, gaussian(0.5), t, grid)
    for j in (256, 264):
        exact = solver.ou_solve_exact(law, gaussian(0.5), t, grid.nodes[j])
        assert field.values[j] == pytest.approx(exact, abs=1e-5)


def test_exact_stable_kind_is_stationary(solver: SolverManager):
    law = StableLaw(alpha=1.2)
    u0 = InitialData(kind='stable')
    stationary = OUKernelManager().stationary_density(law, 0.7)
    assert solver.ou_solve_exact(law, u0, 2.0, 0.7) == pytest.approx(stationary, abs=1e-10)


def test_tail_budget(solver: SolverManager):
    law = StableLaw(alpha=1.0)
    box = InitialData(kind='indicator-box', centre=(0.0,), half_widths=(1.0,))
    grid = Grid(half_width=3.0, points=64)
    s = -math.expm1(-1.0)
    expected = 1.0 - 2.0 / math.pi * math.atan((3.0 - math.exp(-1.0)) / s)
    assert solver.tail_budget(law, box, 1.0, grid) == pytest.approx(expected, abs=1e-12)
    with pytest.raises(TailBudgetExceeded) as exc:
        solver.solve(law, box, 1.0, grid)
    assert exc.value.suggested_half_width > 3.0
    sized = solver.recommended_grid(law, box, 1.0, 64)
    assert solver.tail_budget(law, box, 1.0, sized) <= 5e-2 * (1 + 1e-3)


def test_pde_residual_second_order_in_time(solver: SolverManager):
    law = StableLaw(alpha=2.0)
    grid = Grid(half_width=10.0, points=512)
    coarse = solver.pde_residual(law, gaussian(0.5), 0.5, 0.04, grid)
    fine = solver.pde_residual(law, gaussian(0.5), 0.5, 0.02, grid)
    assert 3.5 < coarse.residual / fine.residual < 4.5
    small = solver.pde_residual(law, gaussian(0.5), 0.5, 1e-3, grid)
    assert small.residual < 1e-4
    with pytest.raises(ValueError):
        solver.pde_residual(law, gaussian(0.5), 0.01, 0.02, grid)


@pytest.mark.parametrize('alpha', [1.0, 2.0, 1.5])
def test_pde_residual_falls_under_refinement(solver: SolverManager, alpha: float):
    law = StableLaw(alpha=alpha)
    u0 = gaussian(0.25)
    coarse = solver.pde_residual(law, u0, 0.5, 1e-3, Grid(half_width=20.0, points=64))
    fine = solver.pde_residual(law, u0, 0.5, 1e-3, Grid(half_width=20.0, points=128))
    assert fine.points == 128
    assert fine.residual < 0.5 * coarse.residual


def test_pde_residual_stationary_terms_vanish(solver: SolverManager):
    law = StableLaw(alpha=2.0)
    residual = solver.pde_residual(law, InitialData(kind='stable'), 1.0, 1e-3, Grid(half_width=10.0, points=256))
    assert residual.time_term < 1e-4
    assert residual.spatial_term < 1e-4


def test_max_principle(solver: SolverManager, initial: InitialDataManager):
    law = StableLaw(alpha=0.8)
    grid = Grid(half_width=20.0, points=256)
    u0 = initial.discretize(law, gaussian(0.7), grid)
    assert solver.heat_solve(law, gaussian(0.7), 0.5, grid).values.max() <= u0.values.max()


def test_stationary_decay(solver: SolverManager):
    law = StableLaw(alpha=1.5)
    fit = solver.stationary_decay(law, gaussian(0.5, mean=2.0), [1.0, 2.0, 3.0], Grid(half_width=30.0, points=256))
    assert all(b < a for a, b in zip(fit.distances[:-1], fit.distances[1:]))
    assert fit.rate > 0.5
