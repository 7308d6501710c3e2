import numpy as np
from pydantic import BaseModel, root_validator, validator

from apps.solver.schemas import Field


class RNGStreamSpec(BaseModel):
    """
    master seed + stream 번호 → 서로 겹치지 않는 PCG64 stream
    """
    seed: int
    stream: int = 0

    class Config:
        allow_mutation = False

    @validator('seed')
    def validate_seed(cls, seed: int):
        if not 0 <= seed < 2 ** 64:
            raise ValueError('seed는 64비트 부호 없는 정수여야 합니다.')
        return seed

    @validator('stream')
    def validate_stream(cls, stream: int):
        if stream < 0:
            raise ValueError('stream은 음수일 수 없습니다.')
        return stream

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(sequence))


class Ensemble(BaseModel):
    positions: np.ndarray
    time: float
    seed: int
    alpha: float
    dim: int = 1

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @validator('positions', pre=True)
    def validate_positions(cls, positions):
        arr = np.array(positions, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        arr.flags.writeable = False
        return arr

    @validator('time')
    def validate_time(cls, time: float):
        if time < 0:
            raise ValueError('time은 음수일 수 없습니다.')
        return time

    @root_validator(skip_on_failure=True)
    def validate_shape(cls, values):
        positions = values['positions']
        if positions.shape[0] < 1:
            raise ValueError('ensemble에는 입자가 하나 이상 있어야 합니다.')
        if positions.shape[1] != values['dim']:
            raise ValueError('positions의 열 수가 dim과 다릅니다.')
        return values

    @property
    def n(self) -> int:
        return int(self.positions.shape[0])


class EmpiricalDensity(BaseModel):
    """
    격자 셀 히스토그램 (전체 입자 수 n으로 정규화) 과 셀별 표준오차
    """
    field: Field
    errors: np.ndarray
    outside: float
    n: int

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False


class DensityComparison(BaseModel):
    sup: float
    l1: float
    exceed: int
    k: float
    bins: int
    passed: bool


class KSResult(BaseModel):
    statistic: float
    pvalue: float
    level: float
    passed: bool
