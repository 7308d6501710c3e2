import logging
import os

from apps.solver.utils.managers import SolverManager
from apps.solver.utils.queries.field_storage_query import FieldStorageQuery
from architecture.router.command_router import CommandRouter
from core.schemas import RunConfig

logger = logging.getLogger(__name__)

solve_router = (
    CommandRouter('solve', help='solve the drift equation on a periodic grid')
    .argument('--alpha', type=float, help='stability index in (0, 2]')
    .argument('--dim', type=int, help='space dimension (1, 2, 3)')
    .argument('--t', dest='times', type=float, nargs='+', help='snapshot times (0 = discretized u0)')
    .argument('--half-width', dest='half_width', type=float, help='output grid half width L')
    .argument('--points', type=int, help='points per axis (power of two)')
    .argument('--initial', type=RunConfig.parse_initial, help='initial data as JSON, e.g. {"kind": "stable"}')
    .argument('--tail-tol', dest='tail_tol', type=float, help='out-of-grid tail budget')
)


class SolveView:
    """
    solve --alpha --t t1 t2 ... --half-width --points [--initial JSON]

    snapshot 마다 field_t<k>.csv / .json, stdout 에 mass 와 최솟값
    """

    @staticmethod
    @solve_router.command
    def solve(config: RunConfig, out: str) -> int:
        solver = SolverManager()
        law, grid, u0 = config.law, config.grid, config.initial_data()
        storage = FieldStorageQuery()
        for k, t in enumerate(config.times):
            if t == 0:
                field = solver.initial().discretize(law, u0, grid)
            else:
                field = solver.solve(law, u0, t, grid, tail_tol=config.tail_tol)
            storage.create(os.path.join(out, f'field_t{k}'), field, metadata={'alpha': law.alpha, 't': t})
            raw_min = field.raw_min if field.raw_min is not None else field.minimum
            print(f't={t:g} mass={field.mass:.12f} min={field.minimum:.6e} raw_min={raw_min:.6e}')
        return 0
