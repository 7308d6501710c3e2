from typing import Tuple, Union

import numpy as np
from pydantic import BaseModel, validator


class StableLaw(BaseModel):
    """
    isotropic alpha-stable semigroup, symbol e^{-t|xi|^alpha}
    """
    alpha: float
    dim: int = 1

    class Config:
        allow_mutation = False

    @validator('alpha')
    def validate_alpha(cls, alpha: float):
        if not (0.0 < alpha <= 2.0):
            raise ValueError('alpha는 (0, 2] 범위여야 합니다.')
        return float(alpha)

    @validator('dim')
    def validate_dim(cls, dim: int):
        if dim not in (1, 2, 3):
            raise ValueError('dim은 1, 2, 3 중 하나여야 합니다.')
        return dim

    @property
    def is_closed_form(self) -> bool:
        return self.alpha in (1.0, 2.0)

    def __hash__(self):
        return hash((self.alpha, self.dim))


def _as_point(x: Union[float, Tuple[float, ...], np.ndarray]) -> Tuple[float, ...]:
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1:
        raise ValueError('point must be a flat vector')
    return tuple(float(v) for v in arr)


class KernelQuery(BaseModel):
    t: float
    x: Tuple[float, ...]
    tol: float = 1e-10

    @validator('x', pre=True)
    def validate_x(cls, x):
        return _as_point(x)

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

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.x))


class BoundValue(BaseModel):
    value: float
    branch: str

    @validator('value')
    def validate_value(cls, value: float):
        if value < 0:
            raise ValueError('bound value must be nonnegative')
        return value

    @validator('branch')
    def validate_branch(cls, branch: str):
        if branch not in ('tail', 'bulk', 'crossover'):
            raise ValueError(f'unknown branch {branch}')
        return branch
