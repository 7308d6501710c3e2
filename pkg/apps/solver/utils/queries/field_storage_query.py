import json
import os
from typing import Dict, Optional

import numpy as np

from apps.solver.schemas import Field, Grid
from architecture.query.crud import (
    QueryCRUD,
    QueryCreator,
    QueryDestroyer,
    QueryReader,
)


def _paths(root: str):
    return f'{root}.csv', f'{root}.json'


class FieldStorageQueryCreator(QueryCreator):
    def __call__(self, root: str, field: Field, metadata: Optional[Dict] = None) -> str:
        """
        CSV (좌표..., value) 와 JSON 헤더 저장
        같은 이름의 파일이 이미 있으면 AssertionError

        :param root: 확장자를 뺀 경로
        :return: CSV 경로
        """
        csv_path, json_path = _paths(root)
        assert not os.path.exists(csv_path)
        grid = field.grid
        columns = [f'x{i + 1}' for i in range(grid.dim)] + ['value']
        table = np.column_stack([grid.coordinates(), field.values.ravel()])
        np.savetxt(csv_path, table, fmt='%.17g', delimiter=',', header=','.join(columns), comments='')
        header = {
            'grid': grid.dict(),
            'time': field.time,
            'mass': field.mass,
            'raw_min': field.raw_min,
        }
        if metadata:
            header['metadata'] = metadata
        with open(json_path, 'w') as f:
            json.dump(header, f, indent=2, sort_keys=True)
        return csv_path


class FieldStorageQueryReader(QueryReader):
    def __call__(self, root: str) -> Optional[Field]:
        csv_path, json_path = _paths(root)
        if not (os.path.isfile(csv_path) and os.path.isfile(json_path)):
            return None
        with open(json_path) as f:
            header = json.load(f)
        table = np.loadtxt(csv_path, delimiter=',', skiprows=1, ndmin=2)
        return Field(
            grid=Grid(**header['grid']),
            values=table[:, -1],
            time=header['time'],
            raw_min=header['raw_min'],
        )


class FieldStorageQueryDestroyer(QueryDestroyer):
    def __call__(self, root: str):
        for path in _paths(root):
            if os.path.isfile(path):
                os.remove(path)


class FieldStorageQuery(QueryCRUD):
    creator = FieldStorageQueryCreator
    reader = FieldStorageQueryReader
    destroyer = FieldStorageQueryDestroyer
