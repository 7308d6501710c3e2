import math
from typing import Tuple

from pydantic import BaseModel, root_validator, validator

from apps.stable_kernel.schemas import _as_point


class TimeChange(BaseModel):
    """
    물리 시간 t에 대응하는 heat 시간들
    dilated: (e^{alpha t} - 1) / alpha, effective: (1 - e^{-alpha t}) / alpha
    """
    t: float
    alpha: float
    dilated: float
    effective: float

    class Config:
        allow_mutation = False

    @validator('t')
    def validate_t(cls, t: float):
        if not t > 0:
            raise ValueError('t는 양수여야 합니다.')
        return t

    @root_validator(skip_on_failure=True)
    def validate_identity(cls, values):
        alpha, t = values['alpha'], values['t']
        effective, dilated = values['effective'], values['dilated']
        if not (0.0 < effective <= 1.0 / alpha) or not dilated > 0:
            raise ValueError('effective time must lie in (0, 1/alpha]')
        # e^{alpha t} 가 overflow 되지 않는 범위에서만 항등식 확인
        if alpha * t < 700.0:
            expected = math.exp(alpha * t) * effective
            if abs(dilated - expected) > 1e-12 * max(dilated, expected):
                raise ValueError('dilated != e^{alpha t} * effective')
        return values


class OUKernelQuery(BaseModel):
    """
    p(t, x, y): y에서 출발해 시간 t 후 x에 있을 밀도 (x에 대해 적분하면 1)
    """
    t: float
    x: Tuple[float, ...]
    y: Tuple[float, ...]
    tol: float = 1e-10

    @validator('x', 'y', pre=True)
    def validate_point(cls, v):
        return _as_point(v)

    @validator('t')
    def validate_t(cls, t: float):
        if not t > 0:
            raise ValueError('t는 양수여야 합니다.')
        return t

    @validator('tol')
    def validate_tol(cls, tol: float):
        if not tol > 0:
            raise ValueError('tol은 양수여야 합니다.')
        return tol

    @root_validator(skip_on_failure=True)
    def validate_dims(cls, values):
        if len(values['x']) != len(values['y']):
            raise ValueError('x and y must have the same dimension')
        return values
