import logging
import math
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy import fft, ndimage

from apps.ou_kernel.utils.managers import OUKernelManager
from apps.solver.schemas import (
    ContinuityProbe,
    ContinuityRow,
    DecayFit,
    Field,
    Grid,
    InitialData,
    PDEResidual,
    SmoothnessRow,
)
from apps.stable_kernel.schemas import KernelQuery, StableLaw
from apps.stable_kernel.utils.managers import StableKernelManager
from apps.stable_kernel.utils.quadrature import ShiftedCosine, cutoff, oscillatory_integral
from architecture.manager.base_manager import BackendManager
from core.differences import periodic_derivative
from core.exc import (
    GridHeadroomError,
    GridMismatch,
    NotContinuityPoint,
    TailBudgetExceeded,
    UnsupportedDimension,
)
from settings.base import SOLVER

logger = logging.getLogger(__name__)

_ALIGN_TOL = 1e-6


def _fftn(values: np.ndarray) -> np.ndarray:
    return fft.fftn(values, workers=SOLVER['fft-workers'])


def _ifftn(coefficients: np.ndarray) -> np.ndarray:
    return fft.ifftn(coefficients, workers=SOLVER['fft-workers']).real


class InitialDataManager(BackendManager):
    """
    초기값 u0의 격자 이산화와 점 평가
    """

    def discretize(self, law: StableLaw, u0: InitialData, grid: Grid) -> Field:
        """
        격자 위 u0, 질량은 여기서 한 번만 1로 맞춘다.

        불연속 kind (상자)는 셀 평균, 매끄러운 kind는 점 값,
        stable kind는 스펙트럼으로 (주기화된) 값을 만든다.
        """
        if u0.dim != grid.dim:
            raise GridMismatch()
        if u0.kind in ('indicator-box', 'uniform'):
            values = self._box_cell_average(u0, grid)
        elif u0.kind == 'gaussian-mixture':
            values = self._mixture_samples(u0, grid.coordinates()).reshape(grid.shape)
        elif u0.kind == 'stable':
            values = self._stable_spectral(law, u0, grid)
        else:
            values = np.clip(self._custom_interpolate(u0, grid.coordinates()), 0.0, None).reshape(grid.shape)
        mass = values.sum() * grid.cell_volume
        if not mass > 0:
            raise ValueError('initial data has no mass on the grid')
        return Field(grid=grid, values=values / mass, time=0.0)

    @staticmethod
    def _box(u0: InitialData, grid: Optional[Grid] = None):
        if u0.half_widths is not None:
            widths = np.asarray(u0.half_widths, dtype=float)
        elif grid is not None:
            widths = np.full(u0.dim, grid.half_width)
        else:
            raise ValueError('uniform data without half_widths needs a grid')
        return u0.location - widths, u0.location + widths

    def _box_cell_average(self, u0: InitialData, grid: Grid) -> np.ndarray:
        lo, hi = self._box(u0, grid)
        h = grid.spacing
        x = grid.nodes
        factors = []
        for axis in range(grid.dim):
            overlap = np.minimum(x + h / 2, hi[axis]) - np.maximum(x - h / 2, lo[axis])
            factors.append(np.clip(overlap, 0.0, None) / h)
        values = factors[0]
        for f in factors[1:]:
            values = np.multiply.outer(values, f)
        return values / float(np.prod(hi - lo))

    @staticmethod
    def _mixture_samples(u0: InitialData, points: np.ndarray) -> np.ndarray:
        total = np.zeros(len(points))
        weights = np.asarray(u0.weights, dtype=float)
        weights = weights / weights.sum()
        for w, mean, sigma in zip(weights, u0.means, u0.sigmas):
            sq = np.sum((points - np.asarray(mean)) ** 2, axis=1)
            total += w * np.exp(-sq / (2.0 * sigma ** 2)) / (2.0 * math.pi * sigma ** 2) ** (u0.dim / 2)
        return total

    @staticmethod
    def _stable_scale(law: StableLaw, u0: InitialData) -> float:
        return u0.tau if u0.tau is not None else 1.0 / law.alpha

    def _stable_spectral(self, law: StableLaw, u0: InitialData, grid: Grid) -> np.ndarray:
        # x_j = -L + j h 이므로 위상 e^{-iξ(L + μ)} 를 곱한 뒤 ifftn / h^d
        tau = self._stable_scale(law, u0)
        k = np.meshgrid(*([grid.wavenumbers] * grid.dim), indexing='ij')
        phase = sum(ki * (grid.half_width + mu) for ki, mu in zip(k, u0.location))
        coefficients = np.exp(-tau * grid.frequency_norm() ** law.alpha - 1j * phase)
        return np.clip(_ifftn(coefficients) / grid.cell_volume, 0.0, None)

    @staticmethod
    def _custom_interpolate(u0: InitialData, points: np.ndarray) -> np.ndarray:
        count = round(len(u0.samples) ** (1.0 / u0.dim))
        samples = np.asarray(u0.samples, dtype=float).reshape((count,) * u0.dim)
        spacing = 2.0 * u0.sample_half_width / (count - 1)
        coords = (points.T + u0.sample_half_width) / spacing
        # 표본 영역 밖은 0
        return ndimage.map_coordinates(samples, coords, order=3, mode='constant', cval=0.0)

    def density(self, law: StableLaw, u0: InitialData, x, grid: Optional[Grid] = None) -> float:
        """
        정규화된 u0(x) (격자 이산화 없이)

        :param grid: half_widths 없는 uniform 의 범위
        """
        point = np.atleast_1d(np.asarray(x, dtype=float))
        if u0.kind in ('indicator-box', 'uniform'):
            lo, hi = self._box(u0, grid)
            inside = np.all(point >= lo) and np.all(point <= hi)
            return float(inside) / float(np.prod(hi - lo))
        if u0.kind == 'gaussian-mixture':
            return float(self._mixture_samples(u0, point[None, :])[0])
        if u0.kind == 'stable':
            return StableKernelManager().heat_kernel(
                law, KernelQuery(t=self._stable_scale(law, u0), x=point - u0.location)
            )
        count = round(len(u0.samples) ** (1.0 / u0.dim))
        spacing = 2.0 * u0.sample_half_width / (count - 1)
        mass = float(np.sum(u0.samples)) * spacing ** u0.dim
        return float(np.clip(self._custom_interpolate(u0, point[None, :]), 0.0, None)[0]) / mass

    def is_continuous_at(self, u0: InitialData, x0) -> bool:
        """
        상자 계열은 경계면 위에서, custom은 표본 영역 경계에서 불연속으로 본다.
        """
        point = np.atleast_1d(np.asarray(x0, dtype=float))
        if u0.is_smooth:
            return True
        if u0.kind == 'custom-samples':
            lo = np.full(u0.dim, -u0.sample_half_width)
            hi = -lo
        else:
            if u0.kind == 'uniform' and u0.half_widths is None:
                # 격자 전체 위 상수
                return True
            lo, hi = self._box(u0)
        scale = 1e-12 * max(1.0, float(np.max(np.abs(hi))))
        inside = np.all(point >= lo - scale) and np.all(point <= hi + scale)
        on_face = np.any(np.abs(point - lo) <= scale) or np.any(np.abs(point - hi) <= scale)
        return not (inside and on_face)

    def support_radius(self, law: StableLaw, u0: InitialData, grid: Optional[Grid] = None) -> float:
        """
        tail 예산 계산에 쓰는 u0 질량의 (대략적) 반경
        """
        if u0.kind in ('indicator-box', 'uniform'):
            lo, hi = self._box(u0, grid)
            return float(np.linalg.norm(np.maximum(np.abs(lo), np.abs(hi))))
        if u0.kind == 'gaussian-mixture':
            return max(float(np.linalg.norm(m)) + 6.0 * s for m, s in zip(u0.means, u0.sigmas))
        if u0.kind == 'stable':
            return float(np.linalg.norm(u0.location))
        return u0.sample_half_width * math.sqrt(u0.dim)


class SolverManager(BackendManager):
    """
    OU drift 분수 Fokker-Planck 방정식의 격자 해

    u(t, x) = e^{dt} (e^{t̃ Δ^{alpha/2}} u0)(e^t x): 시간 적분 없이 한 번의 스펙트럼 곱과 보간으로 끝난다.
    """
    initial = InitialDataManager
    ou = OUKernelManager
    kernel = StableKernelManager

    def heat_propagate(self, law: StableLaw, field: Field, tau: float) -> Field:
        """
        Fourier 계수에 e^{-tau |ξ|^alpha} 를 곱한다. zero mode (질량) 보존.
        """
        if not tau > 0:
            raise ValueError('tau must be positive')
        multiplier = np.exp(-tau * field.grid.frequency_norm() ** law.alpha)
        values = _ifftn(_fftn(field.values) * multiplier)
        return Field(grid=field.grid, values=values, time=field.time + tau)

    def fractional_laplacian(self, law: StableLaw, field: Field) -> np.ndarray:
        """
        Δ^{alpha/2} u, multiplier -|ξ|^alpha
        """
        return _ifftn(-_fftn(field.values) * field.grid.frequency_norm() ** law.alpha)

    @staticmethod
    def gradient(field: Field) -> List[np.ndarray]:
        """
        축별 스펙트럼 편미분 (Nyquist 성분은 0)
        """
        grid = field.grid
        coefficients = _fftn(field.values)
        k = grid.wavenumbers.copy()
        k[grid.points // 2] = 0.0
        out = []
        for axis in range(grid.dim):
            shape = [1] * grid.dim
            shape[axis] = grid.points
            out.append(_ifftn(1j * k.reshape(shape) * coefficients))
        return out

    @staticmethod
    def headroom_grid(grid: Grid, t: float) -> Grid:
        """
        L_in = e^t L_out, n_in = n_out 2^{ceil(log2 e^t)}: 출력 노드의 e^t 배가 입력 노드에 정확히 놓인다.

        :raises GridHeadroomError: 입력 격자가 점 예산을 넘을 때
        """
        if not t > 0:
            raise ValueError('t must be positive')
        ratio = 2 ** max(1, math.ceil(t / math.log(2.0) - 1e-12))
        points = grid.points * ratio
        half_width = math.exp(t) * grid.half_width
        if points ** grid.dim > SOLVER['max-grid-points']:
            raise GridHeadroomError(
                f'headroom grid for t={t} needs {points}^{grid.dim} points '
                f'(budget {SOLVER["max-grid-points"]})',
                suggested_half_width=half_width,
            )
        return Grid(dim=grid.dim, half_width=half_width, points=points)

    @staticmethod
    def _output_grid(grid_in: Grid, t: float) -> Grid:
        ratio = 2 ** max(1, math.ceil(t / math.log(2.0) - 1e-12))
        if grid_in.points // ratio < SOLVER['min-points']:
            raise GridHeadroomError(f'input grid of {grid_in.points} points is too coarse for t={t}')
        return Grid(dim=grid_in.dim, half_width=math.exp(-t) * grid_in.half_width, points=grid_in.points // ratio)

    def _sample_dilated(self, field: Field, grid: Grid, factor: float) -> np.ndarray:
        """
        heat 해를 factor * x_j (출력 노드) 에서 읽는다. 노드가 맞으면 그대로, 아니면 3차 보간.
        """
        source = field.grid
        positions = (factor * grid.nodes + source.half_width) / source.spacing
        index = np.rint(positions)
        if np.max(np.abs(positions - index)) < _ALIGN_TOL:
            idx = index.astype(int) % source.points
            return field.values[np.ix_(*([idx] * grid.dim))]
        mesh = np.meshgrid(*([positions] * grid.dim), indexing='ij')
        return ndimage.map_coordinates(field.values, mesh, order=3, mode='grid-wrap')

    def ou_solve(self, law: StableLaw, u0: Field, t: float, grid: Optional[Grid] = None) -> Field:
        """
        u(t, ·) on the output grid

        :param u0: 입력 격자 (headroom_grid) 위의 초기값
        :param grid: 출력 격자, None 이면 headroom 규칙의 역으로 정한다
        :raises GridHeadroomError: e^t L_out > L_in
        """
        if not t > 0:
            raise ValueError('t must be positive')
        grid = grid or self._output_grid(u0.grid, t)
        if grid.dim != u0.grid.dim:
            raise GridMismatch()
        needed = math.exp(t) * grid.half_width
        if u0.grid.half_width < needed * (1.0 - 1e-12):
            raise GridHeadroomError(
                f'input half-width {u0.grid.half_width:.6g} is below e^t L_out', suggested_half_width=needed
            )
        tilde = self.ou.time_dilation(law.alpha, t)
        heat = self.heat_propagate(law, u0, tilde)
        values = math.exp(grid.dim * t) * self._sample_dilated(heat, grid, math.exp(t))
        raw_min = float(values.min())
        if raw_min < -SOLVER['clamp']:
            logger.warning('spectral ringing %.3e below clamp threshold at t=%g', raw_min, t)
        values = np.clip(values, 0.0, None)
        field = Field(grid=grid, values=values, time=u0.time + t, raw_min=raw_min)
        if abs(field.mass - 1.0) > SOLVER['mass-tol']:
            logger.warning('output mass %.8f deviates from 1 at t=%g', field.mass, t)
        return field

    def solve(self, law: StableLaw, u0: InitialData, t: float, grid: Grid,
              tail_tol: Optional[float] = SOLVER['tail-tol']) -> Field:
        """
        초기값 설명에서 바로 출력 격자 위의 해를 만든다.

        :param tail_tol: None 이면 tail 예산 확인 생략
        """
        if tail_tol is not None:
            self.check_tail_budget(law, u0, t, grid, tail_tol)
        field = self.initial().discretize(law, u0, self.headroom_grid(grid, t))
        return self.ou_solve(law, field, t, grid)

    def heat_solve(self, law: StableLaw, u0: InitialData, tau: float, grid: Grid) -> Field:
        """
        drift 없는 분수 heat 방정식 u_t = Δ^{alpha/2} u
        """
        return self.heat_propagate(law, self.initial().discretize(law, u0, grid), tau)

    def ou_solve_direct(self, law: StableLaw, u0: Field, t: float, x, cells: bool = False) -> float:
        """
        Σ_j p(t, x, y_j) u0(y_j) h^d (kernel contraction, oracle 경로)

        :param cells: d=1 에서 p를 셀마다 정확히 적분한다 (stable CDF 차이).
            kernel 폭이 h보다 좁은 작은 t에서도 piecewise-constant u0 에 대해 정확하다.
        """
        weights = u0.values.ravel()
        mask = weights > 0
        if cells:
            if u0.grid.dim != 1:
                raise UnsupportedDimension(u0.grid.dim, 'ou_solve_direct(cells=True)')
            s = self.ou.effective_time(law.alpha, t)
            shrink = math.exp(-t)
            z = float(np.asarray(x, dtype=float).ravel()[0]) - shrink * u0.grid.nodes[mask]
            half = 0.5 * shrink * u0.grid.spacing
            kernel = self.kernel()
            upper = np.array([kernel.stable_cdf(law, s, float(v)) for v in z + half])
            lower = np.array([kernel.stable_cdf(law, s, float(v)) for v in z - half])
            return float(np.dot(upper - lower, weights[mask]) / shrink)
        ys = u0.grid.coordinates()[mask]
        kernel = self.ou().ou_kernel_values(law, t, np.atleast_1d(np.asarray(x, dtype=float)), ys)
        return float(np.dot(kernel, weights[mask]) * u0.grid.cell_volume)

    def ou_solve_exact(self, law: StableLaw, u0: InitialData, t: float, x) -> float:
        """
        연속 초기값에 대한 해석적 contraction

        stable kind: 모든 d에서 p̂(s + tau e^{-alpha t}, x - e^{-t} mu)
        상자/uniform: d=1, stable CDF 차이
        gaussian-mixture: d=1, 1차원 Fourier 적분
        """
        if not t > 0:
            raise ValueError('t must be positive')
        point = np.atleast_1d(np.asarray(x, dtype=float))
        s = self.ou.effective_time(law.alpha, t)
        shrink = math.exp(-t)
        kernel = self.kernel()
        if u0.kind == 'stable':
            tau = InitialDataManager._stable_scale(law, u0)
            return kernel.heat_kernel(
                law, KernelQuery(t=s + tau * math.exp(-law.alpha * t), x=point - shrink * u0.location)
            )
        if u0.dim != 1:
            raise UnsupportedDimension(u0.dim, 'ou_solve_exact')
        if u0.kind in ('indicator-box', 'uniform'):
            lo, hi = InitialDataManager._box(u0)
            lo, hi = float(lo[0]), float(hi[0])
            upper = kernel.stable_cdf(law, s, float(point[0]) - shrink * lo)
            lower = kernel.stable_cdf(law, s, float(point[0]) - shrink * hi)
            return (upper - lower) / (shrink * (hi - lo))
        if u0.kind == 'gaussian-mixture':
            weights = np.asarray(u0.weights, dtype=float)
            weights = weights / weights.sum()
            return float(sum(
                w * self._gaussian_contraction(law.alpha, s, shrink * sigma, float(point[0]) - shrink * mean[0])
                for w, mean, sigma in zip(weights, u0.means, u0.sigmas)
            ))
        raise ValueError('no analytic contraction for custom-samples')

    @staticmethod
    def _gaussian_contraction(alpha: float, s: float, sigma: float, z: float, tol: float = 1e-11) -> float:
        """
        (1/π) ∫_0^∞ e^{-s k^alpha - sigma^2 k^2 / 2} cos(k z) dk
        """
        if alpha == 2.0:
            variance = 2.0 * s + sigma ** 2
            return math.exp(-z ** 2 / (2.0 * variance)) / math.sqrt(2.0 * math.pi * variance)

        def amplitude(k):
            k = np.asarray(k, dtype=float)
            return np.exp(-s * k ** alpha - 0.5 * sigma ** 2 * k ** 2)

        eps = tol * 1e-2
        k_max = cutoff(0.0, alpha, s, eps)
        if sigma > 0:
            # ∫_K^∞ e^{-sigma^2 k^2 / 2} dk ≤ eps
            k_max = min(k_max, math.sqrt(2.0 * max(math.log(1.0 / (eps * sigma)), 1.0)) / sigma)
        value, _ = oscillatory_integral(amplitude, ShiftedCosine(0.0), abs(z), k_max, tol * math.pi)
        return value / math.pi

    def tail_budget(self, law: StableLaw, u0: InitialData, t: float, grid: Grid) -> float:
        """
        출력 격자 [-L, L]^d 밖으로 나가는 질량의 상한 (반경 L - e^{-t} R 밖의 stable 꼬리)
        """
        spread = math.exp(-t) * self.initial().support_radius(law, u0, grid)
        radius = grid.half_width - spread
        if radius <= 0:
            return 1.0
        return self.kernel().tail_mass(law, self.ou.effective_time(law.alpha, t), radius)

    def check_tail_budget(self, law: StableLaw, u0: InitialData, t: float, grid: Grid,
                          tol: Optional[float] = None) -> float:
        """
        :raises TailBudgetExceeded: 예산 초과, 권장 L을 함께 알려준다
        """
        tol = tol or SOLVER['tail-tol']
        tail = self.tail_budget(law, u0, t, grid)
        if tail > tol:
            s = self.ou.effective_time(law.alpha, t)
            spread = math.exp(-t) * self.initial().support_radius(law, u0, grid)
            raise TailBudgetExceeded(tail, tol, self.kernel().recommended_half_width(law, s, tol) + spread)
        return tail

    def recommended_grid(self, law: StableLaw, u0: InitialData, t: float, points: int,
                         tol: Optional[float] = None) -> Grid:
        """
        tail 예산을 만족하는 가장 작은 L의 출력 격자
        """
        tol = tol or SOLVER['tail-tol']
        s = self.ou.effective_time(law.alpha, t)
        spread = self.initial().support_radius(law, u0)
        half_width = self.kernel().recommended_half_width(law, s, tol) + math.exp(-t) * spread
        return Grid(dim=u0.dim, half_width=half_width, points=points)

    def pde_residual(self, law: StableLaw, u0: InitialData, t: float, dt_probe: float, grid: Grid) -> PDEResidual:
        """
        ∂t u (중심 차분) 와 Δ^{alpha/2} u + d u + x·∇u 의 차이, 격자 내부 50% 에서의 max-norm
        """
        if not t > dt_probe > 0:
            raise ValueError('need t > dt_probe > 0')
        plus = self.solve(law, u0, t + dt_probe, grid, tail_tol=None)
        minus = self.solve(law, u0, t - dt_probe, grid, tail_tol=None)
        current = self.solve(law, u0, t, grid, tail_tol=None)
        time_term = (plus.values - minus.values) / (2.0 * dt_probe)
        spatial = self.fractional_laplacian(law, current) + grid.dim * current.values
        for x, du in zip(grid.axes(), self.gradient(current)):
            spatial = spatial + x * du
        inner = grid.inner_mask(0.5)
        return PDEResidual(
            residual=float(np.max(np.abs(time_term - spatial)[inner])),
            time_term=float(np.max(np.abs(time_term)[inner])),
            spatial_term=float(np.max(np.abs(spatial)[inner])),
            dt_probe=dt_probe,
            points=grid.points,
        )

    def continuity_grid(self, law: StableLaw, u0: InitialData, x0: float) -> Grid:
        """
        x0 가 노드에 오도록 L을 고른 d=1 격자 (|x0| < L/n 이면 맞추지 않는다)
        """
        points = SOLVER['continuity-points']
        reach = SOLVER['continuity-half-width']
        if not (u0.kind == 'uniform' and u0.half_widths is None):
            reach = max(reach, self.initial().support_radius(law, u0) + 1.0)
        offset = abs(x0) * points / (2.0 * reach)
        if offset >= 1.0:
            reach = abs(x0) * points / (2.0 * math.floor(offset))
        return Grid(half_width=reach, points=points)

    def initial_continuity_check(self, law: StableLaw, u0: InitialData, x0: float) -> ContinuityProbe:
        """
        t_k = 2^{-k}, x_k = x0 + t_k^{1/alpha}/2 (k = 3..10) 위의 |u(t_k, x_k) - u0(x0)|

        u 는 continuity_grid 위 u0 의 직접 contraction (셀 적분), 해석적 contraction 이 있으면 함께 기록한다.

        :raises NotContinuityPoint: x0가 u0의 불연속점 (예: 상자 경계)
        """
        if u0.dim != 1:
            raise UnsupportedDimension(u0.dim, 'initial_continuity_check')
        initial = self.initial()
        if not initial.is_continuous_at(u0, x0):
            raise NotContinuityPoint(x0)
        grid = self.continuity_grid(law, u0, x0)
        field = initial.discretize(law, u0, grid)
        target = initial.density(law, u0, x0, grid)
        analytic = u0.kind != 'custom-samples' and not (u0.kind == 'uniform' and u0.half_widths is None)
        first, last = SOLVER['continuity-levels']
        rows = []
        for level in range(first, last + 1):
            t = 2.0 ** -level
            x = x0 + t ** (1.0 / law.alpha) / 2.0
            value = self.ou_solve_direct(law, field, t, x, cells=True)
            exact = self.ou_solve_exact(law, u0, t, x) if analytic else None
            rows.append(ContinuityRow(level=level, t=t, x=x, value=value, exact=exact, deviation=abs(value - target)))
        tail = [row.deviation for row in rows if row.level >= SOLVER['continuity-tail-start']]
        monotone = all(b <= a + 1e-14 for a, b in zip(tail[:-1], tail[1:]))
        return ContinuityProbe(
            x0=x0, target=target, rows=rows, max_tail_deviation=max(tail), monotone=monotone,
        )

    def smoothness_probe(self, law: StableLaw, u0: InitialData, t: float, orders: Sequence[int],
                         grid: Grid) -> List[SmoothnessRow]:
        """
        n, 2n 격자 (같은 L) 위 유한 차분 도함수 sup-norm 비교

        두 해상도가 같은 L을 쓰므로 tail wrap은 양쪽에 공통이다.
        """
        if not set(orders) <= {1, 2, 3, 4}:
            raise ValueError('orders must be a subset of {1, 2, 3, 4}')
        fine_grid = Grid(dim=grid.dim, half_width=grid.half_width, points=2 * grid.points)
        coarse = self.solve(law, u0, t, grid, tail_tol=None)
        fine = self.solve(law, u0, t, fine_grid, tail_tol=None)
        rows = []
        for m in orders:
            sup_coarse = float(np.max(np.abs(
                periodic_derivative(coarse.values, grid.spacing, m, accuracy=SOLVER['fd-accuracy'])
            )))
            sup_fine = float(np.max(np.abs(
                periodic_derivative(fine.values, fine_grid.spacing, m, accuracy=SOLVER['fd-accuracy'])
            )))
            ratio = sup_fine / sup_coarse
            rows.append(SmoothnessRow(
                order=m, sup_coarse=sup_coarse, sup_fine=sup_fine, ratio=ratio,
                stable=abs(ratio - 1.0) <= SOLVER['smoothness-stable-ratio'],
            ))
        return rows

    @staticmethod
    def restrict(field: Field, grid: Grid) -> Field:
        """
        같은 간격의 더 작은 격자로 잘라낸다.
        """
        source = field.grid
        offset = (grid.nodes[0] - source.nodes[0]) / source.spacing
        start = int(round(offset))
        if (grid.dim != source.dim or abs(grid.spacing - source.spacing) > 1e-12 * source.spacing
                or abs(offset - start) > _ALIGN_TOL or start < 0 or start + grid.points > source.points):
            raise GridMismatch()
        window = tuple(slice(start, start + grid.points) for _ in range(grid.dim))
        return Field(grid=grid, values=field.values[window], time=field.time, raw_min=field.raw_min)

    def stationary_field(self, law: StableLaw, grid: Grid) -> np.ndarray:
        return self.kernel().heat_kernel_values(law, 1.0 / law.alpha, grid.coordinates()).reshape(grid.shape)

    def stationary_decay(self, law: StableLaw, u0: InitialData, times: Iterable[float], grid: Grid) -> DecayFit:
        """
        ‖u(t) - p_∞‖_{L¹} 과 지수 감소율 (log 거리의 최소제곱 기울기)
        """
        times = [float(t) for t in times]
        stationary = self.stationary_field(law, grid)
        distances = []
        for t in times:
            field = self.solve(law, u0, t, grid, tail_tol=None)
            distances.append(float(np.sum(np.abs(field.values - stationary)) * grid.cell_volume))
        slope = np.polyfit(times, np.log(distances), 1)[0]
        return DecayFit(times=times, distances=distances, rate=float(-slope))
