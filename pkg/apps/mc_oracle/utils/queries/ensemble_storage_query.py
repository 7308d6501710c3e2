import os
from typing import Optional

import numpy as np

from apps.mc_oracle.schemas import Ensemble
from architecture.query.crud import (
    QueryCRUD,
    QueryCreator,
    QueryDestroyer,
    QueryReader,
)

_HEADER_KEYS = ('seed', 'n', 'alpha', 'dim', 't')


class EnsembleStorageQueryCreator(QueryCreator):
    def __call__(self, path: str, ensemble: Ensemble) -> str:
        """
        '#' 헤더 (seed, n, alpha, dim, t) 와 입자 좌표 CSV
        """
        assert not os.path.exists(path)
        header = '\n'.join([
            f'seed={ensemble.seed}',
            f'n={ensemble.n}',
            f'alpha={ensemble.alpha!r}',
            f'dim={ensemble.dim}',
            f't={ensemble.time!r}',
            ','.join(f'x{i + 1}' for i in range(ensemble.dim)),
        ])
        np.savetxt(path, ensemble.positions, fmt='%.17g', delimiter=',', header=header)
        return path


class EnsembleStorageQueryReader(QueryReader):
    def __call__(self, path: str) -> Optional[Ensemble]:
        if not os.path.isfile(path):
            return None
        meta = {}
        with open(path) as f:
            for line in f:
                if not line.startswith('#'):
                    break
                key, sep, value = line[1:].strip().partition('=')
                if sep and key in _HEADER_KEYS:
                    meta[key] = value
        positions = np.loadtxt(path, delimiter=',', comments='#', ndmin=2)
        return Ensemble(
            positions=positions,
            time=float(meta['t']),
            seed=int(meta['seed']),
            alpha=float(meta['alpha']),
            dim=int(meta['dim']),
        )


class EnsembleStorageQueryDestroyer(QueryDestroyer):
    def __call__(self, path: str):
        if os.path.isfile(path):
            os.remove(path)


class EnsembleStorageQuery(QueryCRUD):
    creator = EnsembleStorageQueryCreator
    reader = EnsembleStorageQueryReader
    destroyer = EnsembleStorageQueryDestroyer
