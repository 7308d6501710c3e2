import json
import os
from typing import Dict, Optional, Tuple

import numpy as np

from architecture.query.crud import (
    QueryCRUD,
    QueryCreator,
    QueryReader,
)


def _paths(root: str):
    return f'{root}.csv', f'{root}.json'


class KernelTableQueryCreator(QueryCreator):
    def __call__(self, root: str, columns: Dict[str, np.ndarray], metadata: Dict) -> str:
        """
        열 이름 순서대로 CSV, 실행 파라미터는 JSON sidecar

        :return: CSV 경로
        """
        csv_path, json_path = _paths(root)
        assert not os.path.exists(csv_path)
        names = list(columns)
        table = np.column_stack([np.asarray(columns[name], dtype=float) for name in names])
        np.savetxt(csv_path, table, fmt='%.17g', delimiter=',', header=','.join(names), comments='')
        with open(json_path, 'w') as f:
            json.dump({'columns': names, 'rows': int(table.shape[0]), 'metadata': metadata}, f, indent=2, sort_keys=True)
            f.write('\n')
        return csv_path


class KernelTableQueryReader(QueryReader):
    def __call__(self, root: str) -> Optional[Tuple[Dict[str, np.ndarray], Dict]]:
        csv_path, json_path = _paths(root)
        if not os.path.isfile(csv_path):
            return None
        with open(json_path) as f:
            header = json.load(f)
        table = np.loadtxt(csv_path, delimiter=',', skiprows=1, ndmin=2)
        columns = {name: table[:, i] for i, name in enumerate(header['columns'])}
        return columns, header['metadata']


class KernelTableQuery(QueryCRUD):
    creator = KernelTableQueryCreator
    reader = KernelTableQueryReader
