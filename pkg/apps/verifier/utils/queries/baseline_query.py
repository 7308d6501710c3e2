import json
import os
from typing import Dict, Optional

from architecture.query.crud import (
    QueryCRUD,
    QueryCreator,
    QueryReader,
)

CONVENTION = (
    'constants frozen from a first correct run; a repository convention for regression, '
    'not analytic ground truth'
)


def empty_baselines() -> Dict:
    return {'convention': CONVENTION, 'checks': {}, 'subordinator-scale': None}


class BaselineQueryReader(QueryReader):
    def __call__(self, path: str) -> Dict:
        """
        파일이 없으면 빈 baseline (모든 check "not frozen")
        """
        if not os.path.isfile(path):
            return empty_baselines()
        with open(path) as f:
            data = json.load(f)
        baselines = empty_baselines()
        baselines.update(data)
        return baselines


class BaselineQueryCreator(QueryCreator):
    def __call__(self, path: str, constants: Dict[str, Dict[str, float]],
                 calibration: Optional[Dict] = None) -> str:
        """
        freeze: 기존 파일을 통째로 교체 (임시 파일 + rename)
        """
        data = empty_baselines()
        data['checks'] = {name: dict(sorted(values.items())) for name, values in sorted(constants.items())}
        if calibration is not None:
            data['subordinator-scale'] = calibration
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        staging = f'{path}.tmp'
        with open(staging, 'w') as f:
            json.dump(data, f, indent=2)
            f.write('\n')
        os.replace(staging, path)
        return path


class BaselineQuery(QueryCRUD):
    creator = BaselineQueryCreator
    reader = BaselineQueryReader
