import json
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, root_validator, validator

from apps.solver.schemas import Grid, InitialData
from apps.stable_kernel.schemas import StableLaw
from core.exc import UsageError
from settings.base import SOLVER

COMMAND_NAMES = ('kernel', 'solve', 'simulate', 'verify')

_DEFAULT_SAMPLES = {'simulate': 100_000, 'quick': 200_000, 'full': 1_000_000}


def parse_range(text: str) -> Tuple[float, float, int]:
    """
    'a:b:n' -> (a, b, n), a < b, n ≥ 1
    """
    parts = text.split(':')
    if len(parts) != 3:
        raise ValueError(f'range must look like a:b:n, got {text!r}')
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f'range must look like a:b:n, got {text!r}')
    if count < 1 or (count > 1 and not start < stop):
        raise ValueError(f'range {text!r} needs a < b and n ≥ 1')
    return start, stop, count


class RunConfig(BaseModel):
    """
    CLI 실행 설정 (flags > --config 파일 > 기본값)

    출력 디렉토리에 resolved_config.json 으로 그대로 남고, 그 파일만으로 재실행할 수 있다.
    """
    command: str
    alpha: float = 1.5
    alphas: Optional[List[float]] = None
    dim: int = 1
    half_width: float = 20.0
    points: int = 512
    times: List[float] = [1.0]
    initial: Dict[str, Any] = {'kind': 'indicator-box'}
    x_range: str = '-5:5:101'
    y: Optional[List[float]] = None
    ou: bool = False
    profile: str = 'kernel'
    samples: Optional[int] = None
    seed: int = 42
    workers: int = 1
    tol: Optional[float] = None
    tail_tol: Optional[float] = SOLVER['tail-tol']
    suite: str = 'quick'
    negative_control: bool = False
    freeze_baselines: bool = False
    out: Optional[str] = None

    @validator('command')
    def validate_command(cls, command: str):
        if command not in COMMAND_NAMES:
            raise ValueError(f'unknown command {command}')
        return command

    @validator('alpha')
    def validate_alpha(cls, alpha: float):
        if not (0.0 < alpha <= 2.0):
            raise ValueError('alpha는 (0, 2] 범위여야 합니다.')
        return alpha

    @validator('dim')
    def validate_dim(cls, dim: int):
        if dim not in (1, 2, 3):
            raise ValueError('dim은 1, 2, 3 중 하나여야 합니다.')
        return dim

    @validator('points')
    def validate_points(cls, points: int):
        if points < SOLVER['min-points'] or points & (points - 1):
            raise ValueError('points는 16 이상의 2의 거듭제곱이어야 합니다.')
        return points

    @validator('x_range')
    def validate_x_range(cls, x_range: str):
        parse_range(x_range)
        return x_range

    @validator('profile')
    def validate_profile(cls, profile: str):
        if profile not in ('kernel', 'both'):
            raise ValueError('profile은 kernel 또는 both 입니다.')
        return profile

    @validator('suite')
    def validate_suite(cls, suite: str):
        if suite not in ('quick', 'full'):
            raise ValueError('suite는 quick 또는 full 입니다.')
        return suite

    @validator('seed')
    def validate_seed(cls, seed: int):
        if not 0 <= seed < 2 ** 64:
            raise ValueError('seed는 [0, 2^64) 범위여야 합니다.')
        return seed

    @validator('samples', 'workers')
    def validate_positive(cls, v: Optional[int]):
        if v is not None and v < 1:
            raise ValueError('양수여야 합니다.')
        return v

    @root_validator(skip_on_failure=True)
    def validate_times(cls, values):
        times = values['times']
        if values['command'] != 'verify' and not times:
            raise ValueError('t list is empty')
        if any(t < 0 for t in times):
            raise ValueError('times must be nonnegative')
        if values['command'] == 'kernel' and any(t == 0 for t in times):
            raise ValueError('kernel times must be positive')
        return values

    @staticmethod
    def parse_initial(text: str) -> Dict[str, Any]:
        # --initial '{"kind": "gaussian-mixture", "weights": [1], "means": [[0]], "sigmas": [0.5]}'
        data = json.loads(text)
        if not isinstance(data, dict) or 'kind' not in data:
            raise ValueError('initial must be a JSON object with a kind')
        return data

    @classmethod
    def resolve(cls, flags: Dict[str, Any], config_path: Optional[str] = None) -> 'RunConfig':
        """
        기본값 위에 config 파일, 그 위에 명시된 flag
        """
        data: Dict[str, Any] = {}
        if config_path:
            try:
                with open(config_path) as f:
                    data.update(json.load(f))
            except (OSError, json.JSONDecodeError) as e:
                raise UsageError(f'cannot read config {config_path}: {e}')
        data.update({k: v for k, v in flags.items() if k in cls.__fields__})
        return cls(**data)

    @property
    def law(self) -> StableLaw:
        return StableLaw(alpha=self.alpha, dim=self.dim)

    @property
    def grid(self) -> Grid:
        return Grid(dim=self.dim, half_width=self.half_width, points=self.points)

    @property
    def sample_count(self) -> int:
        if self.samples is not None:
            return self.samples
        return _DEFAULT_SAMPLES['simulate' if self.command == 'simulate' else self.suite]

    def initial_data(self) -> InitialData:
        data = dict(self.initial)
        data.setdefault('dim', self.dim)
        if data['kind'] == 'indicator-box':
            data.setdefault('centre', [0.0] * self.dim)
            data.setdefault('half_widths', [1.0] * self.dim)
        return InitialData(**data)

    def x_values(self) -> np.ndarray:
        return np.linspace(*parse_range(self.x_range))
