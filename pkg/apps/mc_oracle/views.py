import logging
import os
import warnings

from apps.mc_oracle.utils.managers import MonteCarloManager
from apps.mc_oracle.utils.queries.ensemble_storage_query import EnsembleStorageQuery
from apps.solver.schemas import Field
from apps.solver.utils.queries.field_storage_query import FieldStorageQuery
from architecture.router.command_router import CommandRouter
from core.schemas import RunConfig

logger = logging.getLogger(__name__)

simulate_router = (
    CommandRouter('simulate', help='exact-transition particle ensemble and its histogram')
    .argument('--alpha', type=float, help='stability index in (0, 2]')
    .argument('--dim', type=int, help='space dimension (1, 2, 3)')
    .argument('--t', dest='times', type=float, nargs='+', help='times (0 = sample of u0)')
    .argument('--samples', type=int, help='number of particles')
    .argument('--seed', type=int, help='master seed')
    .argument('--workers', type=int, help='threads (results do not depend on it)')
    .argument('--half-width', dest='half_width', type=float, help='histogram grid half width L')
    .argument('--points', type=int, help='histogram cells per axis (power of two)')
    .argument('--initial', type=RunConfig.parse_initial, help='initial data as JSON')
)


class SimulateView:
    """
    simulate --alpha --t ... --samples --seed

    time 마다 ensemble_t<k>.csv, histogram_t<k>.csv/.json, histogram_errors_t<k>.csv/.json
    """

    @staticmethod
    @simulate_router.command
    def simulate(config: RunConfig, out: str) -> int:
        mc = MonteCarloManager()
        law, grid, u0 = config.law, config.grid, config.initial_data()
        fields = FieldStorageQuery()
        for k, t in enumerate(config.times):
            ensemble = mc.simulate_ensemble(law, u0, t, config.sample_count, config.seed, workers=config.workers)
            EnsembleStorageQuery().create(os.path.join(out, f'ensemble_t{k}.csv'), ensemble)
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter('always')
                density = mc.empirical_density(ensemble, grid)
            for w in caught:
                logger.warning('t=%g: %s', t, w.message)
            metadata = {
                'alpha': law.alpha, 't': t, 'samples': density.n, 'seed': config.seed, 'outside': density.outside,
            }
            fields.create(os.path.join(out, f'histogram_t{k}'), density.field, metadata=metadata)
            errors = Field(grid=grid, values=density.errors, time=t)
            fields.create(os.path.join(out, f'histogram_errors_t{k}'), errors, metadata=metadata)
            print(f't={t:g} samples={density.n} outside={density.outside:.6e}')
        return 0
