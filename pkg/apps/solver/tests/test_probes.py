import math

import numpy as np
import pytest

from apps.solver.schemas import Grid, InitialData
from apps.solver.utils.managers import InitialDataManager, SolverManager
from apps.solver.utils.queries.field_storage_query import FieldStorageQuery
from apps.stable_kernel.schemas import StableLaw
from core.exc import NotContinuityPoint, UnsupportedDimension


@pytest.fixture(scope='module')
def solver():
    return SolverManager()


@pytest.fixture(scope='module')
def initial():
    return InitialDataManager()


@pytest.fixture(scope='module')
def box():
    return InitialData(kind='indicator-box', centre=(0.0,), half_widths=(1.0,))


@pytest.mark.parametrize('alpha', [0.6, 1.0, 1.5, 2.0])
def test_continuity_at_box_centre(solver: SolverManager, box: InitialData, alpha: float):
    check = solver.initial_continuity_check(StableLaw(alpha=alpha), box, 0.0)
    assert check.target == 0.5
    assert [row.level for row in check.rows] == list(range(3, 11))
    assert check.monotone
    assert all(row.deviation < 1e-2 for row in check.rows if row.level >= 8)
    assert check.max_tail_deviation < 5e-2
    # 격자 위 직접 contraction 과 해석적 contraction
    assert all(abs(row.value - row.exact) < 1e-4 for row in check.rows)


def test_continuity_off_centre(solver: SolverManager, box: InitialData):
    check = solver.initial_continuity_check(StableLaw(alpha=1.5), box, 0.3)
    grid = solver.continuity_grid(StableLaw(alpha=1.5), box, 0.3)
    assert np.min(np.abs(grid.nodes - 0.3)) < 1e-12
    assert check.monotone
    assert check.rows[-1].deviation < check.rows[2].deviation
    assert check.rows[-1].deviation < 1e-2


def test_continuity_without_analytic_route(solver: SolverManager):
    samples = [0.0, 0.2, 1.0, 1.0, 1.0, 0.2, 0.0]
    u0 = InitialData(kind='custom-samples', samples=samples, sample_half_width=1.5)
    check = solver.initial_continuity_check(StableLaw(alpha=1.5), u0, 0.0)
    assert all(row.exact is None for row in check.rows)
    assert check.rows[-1].deviation < check.rows[0].deviation


def test_cell_contraction_resolves_narrow_kernel(solver: SolverManager, initial: InitialDataManager,
                                                 box: InitialData):
    law = StableLaw(alpha=1.5)
    field = initial.discretize(law, box, Grid(half_width=4.0, points=256))
    # kernel 폭 ~ 1e-4 ≪ h = 1/32
    assert solver.ou_solve_direct(law, field, 1e-6, 0.2, cells=True) == pytest.approx(0.5, abs=1e-4)
    for t in (0.1, 0.5):
        cells = solver.ou_solve_direct(law, field, t, 0.3, cells=True)
        assert cells == pytest.approx(solver.ou_solve_exact(law, box, t, 0.3), abs=1e-4)
    # kernel 이 여러 셀에 걸치면 점 합과도 맞는다
    assert solver.ou_solve_direct(law, field, 0.5, 0.3, cells=True) == pytest.approx(
        solver.ou_solve_direct(law, field, 0.5, 0.3), abs=1e-3)
    plane_law = StableLaw(alpha=1.5, dim=2)
    u0 = InitialData(kind='indicator-box', dim=2, centre=(0.0, 0.0), half_widths=(1.0, 1.0))
    plane = initial.discretize(plane_law, u0, Grid(dim=2, half_width=4.0, points=16))
    with pytest.raises(UnsupportedDimension):
        solver.ou_solve_direct(plane_law, plane, 0.5, [0.0, 0.0], cells=True)


def test_continuity_rejects_box_edge(solver: SolverManager, box: InitialData):
    with pytest.raises(NotContinuityPoint):
        solver.initial_continuity_check(StableLaw(alpha=1.0), box, 1.0)


def test_continuity_is_one_dimensional(solver: SolverManager):
    u0 = InitialData(kind='indicator-box', dim=2, centre=(0.0, 0.0), half_widths=(1.0, 1.0))
    with pytest.raises(UnsupportedDimension):
        solver.initial_continuity_check(StableLaw(alpha=1.0, dim=2), u0, 0.0)


def test_box_contraction_matches_density_limit(solver: SolverManager, box: InitialData):
    # 작은 t에서 상자 내부 값은 1/2에 가깝고 경계에서는 절반값
    law = StableLaw(alpha=1.2)
    assert solver.ou_solve_exact(law, box, 1e-6, 0.2) == pytest.approx(0.5, abs=1e-4)
    # 경계의 상 e^{-t} 에서
    assert solver.ou_solve_exact(law, box, 1e-6, math.exp(-1e-6)) == pytest.approx(0.25, abs=1e-3)
    assert InitialDataManager().density(law, box, 0.2) == 0.5


def test_smoothness_classical(solver: SolverManager, box: InitialData):
    rows = solver.smoothness_probe(StableLaw(alpha=2.0), box, 0.5, [1, 2, 3, 4], Grid(half_width=2.0, points=128))
    assert [row.order for row in rows] == [1, 2, 3, 4]
    assert all(row.stable for row in rows)


def test_smoothness_supercritical(solver: SolverManager):
    law = StableLaw(alpha=0.6)
    rows = solver.smoothness_probe(law, InitialData(kind='indicator-box', centre=(0.0,), half_widths=(0.5,)),
                                   0.5, [1, 2, 3, 4], Grid(half_width=2.0, points=512))
    assert [row.order for row in rows] == [1, 2, 3, 4]
    # n = 512 -> 1024 에서 5% 이내
    assert all(row.stable for row in rows)
    assert all(abs(row.sup_fine / row.sup_coarse - 1.0) < 0.05 for row in rows)


def test_smoothing_needs_positive_time(solver: SolverManager, box: InitialData):
    law = StableLaw(alpha=1.5)
    grid = Grid(half_width=4.0, points=256)
    late = solver.smoothness_probe(law, box, 0.5, [1], grid)[0]
    early = solver.smoothness_probe(law, box, 0.01, [1], grid)[0]
    assert early.sup_coarse > 5.0 * late.sup_coarse
    with pytest.raises(ValueError):
        solver.smoothness_probe(law, box, 0.5, [5], grid)


def test_field_storage_round_trip(solver: SolverManager, tmp_path):
    law = StableLaw(alpha=1.5, dim=2)
    u0 = InitialData(kind='gaussian-mixture', dim=2, weights=[1.0], means=[(0.0, 0.5)], sigmas=[0.8])
    field = solver.solve(law, u0, 0.3, Grid(dim=2, half_width=12.0, points=32))
    root = str(tmp_path / 'field')
    query = FieldStorageQuery()
    query.create(root, field, metadata={'alpha': 1.5})
    loaded = query.read(root)
    assert loaded.grid == field.grid
    assert loaded.time == field.time and loaded.raw_min == field.raw_min
    assert np.array_equal(loaded.values, field.values)
    with pytest.raises(AssertionError):
        query.create(root, field)
    query.destroy(root)
    assert query.read(root) is None
