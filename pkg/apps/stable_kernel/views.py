import logging
import math
import os
from typing import Dict, List

import numpy as np

from apps.ou_kernel.schemas import OUKernelQuery
from apps.ou_kernel.utils.managers import OUKernelManager
from apps.stable_kernel.utils.managers import StableKernelManager, default_tol
from apps.stable_kernel.utils.queries.kernel_table_query import KernelTableQuery
from architecture.router.command_router import CommandRouter
from core.exc import UsageError
from core.schemas import RunConfig

logger = logging.getLogger(__name__)

kernel_router = (
    CommandRouter('kernel', help='heat kernel / OU kernel values on a (t, x) lattice')
    .argument('--alpha', type=float, help='stability index in (0, 2]')
    .argument('--dim', type=int, help='space dimension (1, 2, 3)')
    .argument('--t', dest='times', type=float, nargs='+', help='times')
    .argument('--x-range', dest='x_range', help='a:b:n along the first axis')
    .argument('--ou', action='store_true', help='OU drift kernel p(t, x, y) instead of p̂(t, x)')
    .argument('--y', type=float, nargs='+', help='source point for --ou')
    .argument('--profile', choices=['kernel', 'both'], help='both: add bound and ratio columns')
    .argument('--tol', type=float, help='absolute tolerance')
)


class KernelView:
    """
    kernel --alpha --dim --t ... --x-range a:b:n [--ou --y ...] [--profile both]

    kernel.csv (t, x, value[, bound, ratio]) 와 kernel.json
    """

    @staticmethod
    @kernel_router.command
    def kernel(config: RunConfig, out: str) -> int:
        law = config.law
        tol = config.tol or default_tol(law)
        xs = config.x_values()
        points = np.zeros((len(xs), law.dim))
        points[:, 0] = xs
        if config.ou:
            if config.y is None or len(config.y) != law.dim:
                raise UsageError(f'--ou needs --y with {law.dim} coordinate(s)')
        kernel, ou = StableKernelManager(), OUKernelManager()
        columns: Dict[str, List[float]] = {'t': [], 'x': [], 'value': []}
        if config.profile == 'both':
            columns.update(bound=[], ratio=[])
        for t in config.times:
            if config.ou:
                y = np.asarray(config.y, dtype=float)
                values = np.array([
                    ou.ou_kernel(law, OUKernelQuery(t=t, x=point, y=y, tol=tol)) for point in points
                ])
                # p(t, x, y) = p̂(s, x - e^{-t} y)
                heat_time = ou.effective_time(law.alpha, t)
                radii = np.linalg.norm(points - math.exp(-t) * y, axis=1)
            else:
                values = kernel.heat_kernel_values(law, t, points, tol)
                heat_time = t
                radii = np.abs(xs)
            columns['t'] += [t] * len(xs)
            columns['x'] += list(xs)
            columns['value'] += list(values)
            if config.profile == 'both':
                bounds = np.array([kernel.sharp_bound(law, heat_time, float(r)).value for r in radii])
                columns['bound'] += list(bounds)
                columns['ratio'] += list(values / bounds)
            logger.info('t=%g: %d values, max %.6g', t, len(xs), float(values.max()))
        metadata = {
            'alpha': law.alpha, 'dim': law.dim, 'times': config.times, 'x_range': config.x_range,
            'ou': config.ou, 'y': config.y, 'tol': tol, 'profile': config.profile,
        }
        KernelTableQuery().create(os.path.join(out, 'kernel'), columns, metadata)
        return 0
