from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, root_validator, validator

from settings.base import SOLVER

INITIAL_KINDS = ('indicator-box', 'gaussian-mixture', 'uniform', 'custom-samples', 'stable')


class Grid(BaseModel):
    """
    [-L, L)^d 주기 격자, 축당 n개 노드 x_j = -L + j h
    """
    dim: int = 1
    half_width: float
    points: int

    class Config:
        allow_mutation = False

    @validator('dim')
    def validate_dim(cls, dim: int):
        if dim not in (1, 2, 3):
            raise ValueError('dim은 1, 2, 3 중 하나여야 합니다.')
        return dim

    @validator('half_width')
    def validate_half_width(cls, half_width: float):
        if not half_width > 0:
            raise ValueError('half_width는 양수여야 합니다.')
        return float(half_width)

    @validator('points')
    def validate_points(cls, points: int):
        if points < SOLVER['min-points'] or points & (points - 1):
            raise ValueError(f'points는 {SOLVER["min-points"]} 이상의 2의 거듭제곱이어야 합니다.')
        return points

    def __hash__(self):
        return hash((self.dim, self.half_width, self.points))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dim

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points,) * self.dim

    @property
    def nodes(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.points)

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.points, self.spacing)

    def axes(self) -> List[np.ndarray]:
        """
        meshgrid(indexing='ij') 좌표 배열
        """
        return np.meshgrid(*([self.nodes] * self.dim), indexing='ij')

    def coordinates(self) -> np.ndarray:
        """
        (n^d, d) 노드 좌표 (C order)
        """
        return np.stack([a.ravel() for a in self.axes()], axis=1)

    def frequency_norm(self) -> np.ndarray:
        """
        fftn 순서의 |ξ|, shape == self.shape
        """
        k = np.meshgrid(*([self.wavenumbers] * self.dim), indexing='ij')
        return np.sqrt(sum(ki ** 2 for ki in k))

    def inner_mask(self, fraction: float = 0.5) -> np.ndarray:
        """
        모든 축에서 |x_i| ≤ fraction * L 인 노드
        """
        mask = np.ones(self.shape, dtype=bool)
        for a in self.axes():
            mask &= np.abs(a) <= fraction * self.half_width
        return mask


class Field(BaseModel):
    """
    격자 위의 밀도 값. 생성 후 값은 읽기 전용이다.

    :param raw_min: clamp 전 최솟값 (clamp를 거치지 않았으면 None)
    """
    grid: Grid
    values: np.ndarray
    time: float = 0.0
    raw_min: Optional[float] = None

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @validator('time')
    def validate_time(cls, time: float):
        if time < 0:
            raise ValueError('time은 음수일 수 없습니다.')
        return time

    @validator('values', pre=True)
    def validate_values(cls, values):
        arr = np.array(values, dtype=float)
        arr.flags.writeable = False
        return arr

    @root_validator(skip_on_failure=True)
    def validate_shape(cls, values):
        grid, arr = values['grid'], values['values']
        if arr.size != grid.points ** grid.dim:
            raise ValueError('values size does not match the grid')
        if arr.shape != grid.shape:
            arr = arr.reshape(grid.shape)
            arr.flags.writeable = False
            values['values'] = arr
        if not np.all(np.isfinite(arr)):
            raise ValueError('values must be finite')
        return values

    @property
    def mass(self) -> float:
        # 주기 격자에서 사다리꼴 규칙 = 노드 합
        return float(self.values.sum() * self.grid.cell_volume)

    @property
    def minimum(self) -> float:
        return float(self.values.min())


class InitialData(BaseModel):
    """
    초기값 u0 설명

    indicator-box: centre, half_widths (상자 위 상수)
    uniform: half_widths (원점 중심 상자, 생략 시 격자 전체)
    gaussian-mixture: weights, means, sigmas (성분별 등방 정규분포)
    custom-samples: samples (sample_half_width 위 등간격 노드 값, 밖은 0)
    stable: tau, centre (p̂(tau, · - centre)); tau 생략 시 1/alpha 정상 밀도
    """
    kind: str
    dim: int = 1
    centre: Optional[Tuple[float, ...]] = None
    half_widths: Optional[Tuple[float, ...]] = None
    weights: Optional[List[float]] = None
    means: Optional[List[Tuple[float, ...]]] = None
    sigmas: Optional[List[float]] = None
    samples: Optional[List[float]] = None
    sample_half_width: Optional[float] = None
    tau: Optional[float] = None

    class Config:
        allow_mutation = False

    @validator('kind')
    def validate_kind(cls, kind: str):
        if kind not in INITIAL_KINDS:
            raise ValueError(f'kind는 {", ".join(INITIAL_KINDS)} 중 하나여야 합니다.')
        return kind

    @validator('dim')
    def validate_dim(cls, dim: int):
        if dim not in (1, 2, 3):
            raise ValueError('dim은 1, 2, 3 중 하나여야 합니다.')
        return dim

    @validator('half_widths', 'sigmas', each_item=True)
    def validate_positive(cls, v: float):
        if not v > 0:
            raise ValueError('widths must be positive')
        return v

    @validator('tau', 'sample_half_width')
    def validate_scale(cls, v: Optional[float]):
        if v is not None and not v > 0:
            raise ValueError('scale must be positive')
        return v

    @root_validator(skip_on_failure=True)
    def validate_parameters(cls, values):
        kind, dim = values['kind'], values['dim']
        centre = values.get('centre')
        if centre is not None and len(centre) != dim:
            raise ValueError('centre dimension mismatch')
        widths = values.get('half_widths')
        if kind == 'indicator-box':
            if centre is None or widths is None:
                raise ValueError('indicator-box needs centre and half_widths')
        if widths is not None and len(widths) != dim:
            raise ValueError('half_widths dimension mismatch')
        if kind == 'gaussian-mixture':
            weights, means, sigmas = values.get('weights'), values.get('means'), values.get('sigmas')
            if not weights or means is None or sigmas is None:
                raise ValueError('gaussian-mixture needs weights, means and sigmas')
            if not len(weights) == len(means) == len(sigmas):
                raise ValueError('gaussian-mixture components must have equal length')
            if any(w < 0 for w in weights) or sum(weights) <= 0:
                raise ValueError('mixture weights must be nonnegative with positive sum')
            if any(len(m) != dim for m in means):
                raise ValueError('mean dimension mismatch')
        if kind == 'custom-samples':
            samples = values.get('samples')
            if not samples or values.get('sample_half_width') is None:
                raise ValueError('custom-samples needs samples and sample_half_width')
            count = round(len(samples) ** (1.0 / dim))
            if count ** dim != len(samples) or count < 4:
                raise ValueError('samples must form a cube of at least 4 points per axis')
            if min(samples) < 0 or not np.all(np.isfinite(samples)):
                raise ValueError('samples must be finite and nonnegative')
        return values

    @property
    def location(self) -> np.ndarray:
        return np.zeros(self.dim) if self.centre is None else np.asarray(self.centre, dtype=float)

    @property
    def is_smooth(self) -> bool:
        return self.kind in ('gaussian-mixture', 'stable')


class ContinuityRow(BaseModel):
    level: int
    t: float
    x: float
    value: float
    deviation: float
    exact: Optional[float] = None


class ContinuityProbe(BaseModel):
    """
    (t_k, x_k) → (0, x0) 수열 위의 |u(t_k, x_k) - u0(x0)|
    """
    x0: float
    target: float
    rows: List[ContinuityRow]
    max_tail_deviation: float
    monotone: bool


class SmoothnessRow(BaseModel):
    order: int
    sup_coarse: float
    sup_fine: float
    ratio: float
    stable: bool


class PDEResidual(BaseModel):
    """
    max-norm (내부 50%) of ∂t u - (Δ^{alpha/2} u + ∇·(x u))
    """
    residual: float
    time_term: float
    spatial_term: float
    dt_probe: float
    points: int


class DecayFit(BaseModel):
    times: List[float]
    distances: List[float]
    rate: float
