import math

import numpy as np
import pytest
from pydantic import ValidationError

from apps.mc_oracle.schemas import Ensemble
from apps.mc_oracle.utils.managers import MonteCarloManager
from apps.mc_oracle.utils.queries.ensemble_storage_query import EnsembleStorageQuery
from apps.solver.schemas import Field, Grid, InitialData
from apps.solver.utils.managers import SolverManager
from apps.stable_kernel.schemas import StableLaw
from core.exc import GridMismatch, OutOfGridMassWarning


@pytest.fixture(scope='module')
def manager():
    return MonteCarloManager()


@pytest.fixture(scope='module')
def box():
    return InitialData(kind='indicator-box', centre=(0.0,), half_widths=(1.0,))


def test_seed_determinism_across_workers(manager: MonteCarloManager, box: InitialData):
    law = StableLaw(alpha=1.5)
    one = manager.simulate_ensemble(law, box, 1.0, 50_000, seed=42, workers=1, chunk_size=8192)
    four = manager.simulate_ensemble(law, box, 1.0, 50_000, seed=42, workers=4, chunk_size=8192)
    again = manager.simulate_ensemble(law, box, 1.0, 50_000, seed=42, workers=1, chunk_size=8192)
    other = manager.simulate_ensemble(law, box, 1.0, 50_000, seed=43, workers=1, chunk_size=8192)
    assert np.array_equal(one.positions, four.positions)
    assert np.array_equal(one.positions, again.positions)
    assert not np.array_equal(one.positions, other.positions)
    assert one.n == 50_000


def test_time_zero_returns_initial_sample(manager: MonteCarloManager, box: InitialData):
    ensemble = manager.simulate_ensemble(StableLaw(alpha=1.0), box, 0.0, 20_000, seed=1)
    assert np.all(np.abs(ensemble.positions) <= 1.0)
    assert ensemble.positions.mean() == pytest.approx(0.0, abs=0.03)


def test_ensemble_shape_validation():
    with pytest.raises(ValidationError, match='dim과 다릅니다'):
        Ensemble(positions=[[0.0, 1.0]], time=0.0, seed=0, alpha=1.0, dim=1)
    with pytest.raises(ValidationError, match='하나 이상'):
        Ensemble(positions=np.zeros((0, 1)), time=0.0, seed=0, alpha=1.0)
    with pytest.raises(ValidationError, match='음수일 수 없습니다'):
        Ensemble(positions=[[0.0]], time=-1.0, seed=0, alpha=1.0)


def test_single_particle_histogram(manager: MonteCarloManager):
    grid = Grid(half_width=2.0, points=16)
    ensemble = Ensemble(positions=[[0.0]], time=0.0, seed=0, alpha=1.0)
    density = manager.empirical_density(ensemble, grid)
    assert density.field.values[8] == pytest.approx(1.0 / grid.spacing)
    assert np.count_nonzero(density.field.values) == 1
    assert density.errors[0] == pytest.approx(1.0 / grid.spacing)
    assert density.outside == 0.0


def test_compare_identical_and_shifted(manager: MonteCarloManager):
    grid = Grid(half_width=2.0, points=16)
    values = np.zeros(16)
    values[5] = 1.0 / grid.spacing
    a = Field(grid=grid, values=values)
    errors = np.full(16, 0.1)
    same = manager.compare_densities(a, a, errors)
    assert same.sup == 0.0 and same.l1 == 0.0 and same.passed
    shifted = manager.compare_densities(a, Field(grid=grid, values=np.roll(values, 1)), errors)
    assert shifted.l1 == pytest.approx(2.0)
    assert shifted.exceed == 2 and not shifted.passed
    with pytest.raises(GridMismatch):
        manager.compare_densities(a, Field(grid=Grid(half_width=3.0, points=16), values=values), errors)


def test_out_of_grid_mass_matches_cauchy_tail(manager: MonteCarloManager):
    law = StableLaw(alpha=1.0)
    n = 200_000
    grid = Grid(half_width=10.0, points=64)
    ensemble = manager.simulate_ensemble(law, 0.0, 1.0, n, seed=5)
    with pytest.warns(OutOfGridMassWarning):
        density = manager.empirical_density(ensemble, grid)
    s = -math.expm1(-1.0)
    edges = manager.cell_edges(grid)
    expected = 1.0 - (math.atan(edges[-1] / s) - math.atan(edges[0] / s)) / math.pi
    assert density.outside == pytest.approx(expected, abs=5.0 * math.sqrt(expected * (1 - expected) / n))


@pytest.mark.filterwarnings('ignore::core.exc.OutOfGridMassWarning')
def test_stationary_sampler_is_invariant(manager: MonteCarloManager):
    law = StableLaw(alpha=1.5)
    grid = Grid(half_width=10.0, points=64)
    ensemble = manager.simulate_ensemble(law, InitialData(kind='stable'), 2.0, 100_000, seed=9)
    density = manager.empirical_density(ensemble, grid)
    stationary = Field(grid=grid, values=SolverManager().stationary_field(law, grid))
    assert manager.compare_densities(density.field, stationary, density.errors).passed


@pytest.mark.filterwarnings('ignore::core.exc.OutOfGridMassWarning')
@pytest.mark.parametrize('alpha', [1.0, 1.5])
def test_histogram_matches_solver(manager: MonteCarloManager, box: InitialData, alpha):
    law = StableLaw(alpha=alpha)
    grid = Grid(half_width=20.0, points=128)
    ensemble = manager.simulate_ensemble(law, box, 1.0, 200_000, seed=42)
    density = manager.empirical_density(ensemble, grid)
    reference = manager.reference_density(law, box, 1.0, grid)
    comparison = manager.compare_densities(density.field, reference, density.errors)
    assert comparison.passed
    predicted = manager.tail_budget(law, box, 1.0, grid)
    assert predicted / 3.0 <= density.outside <= 3.0 * predicted


def test_ensemble_storage_round_trip(manager: MonteCarloManager, tmp_path):
    law = StableLaw(alpha=0.8, dim=2)
    u0 = InitialData(kind='gaussian-mixture', dim=2, weights=[1.0], means=[(0.0, 0.0)], sigmas=[1.0])
    ensemble = manager.simulate_ensemble(law, u0, 0.5, 500, seed=3)
    path = str(tmp_path / 'ensemble.csv')
    query = EnsembleStorageQuery()
    query.create(path, ensemble)
    loaded = query.read(path)
    assert np.array_equal(loaded.positions, ensemble.positions)
    assert (loaded.seed, loaded.alpha, loaded.dim, loaded.time) == (3, 0.8, 2, 0.5)
