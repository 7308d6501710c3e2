import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence, Union

import numpy as np
from scipy import stats

from apps.mc_oracle.schemas import (
    DensityComparison,
    EmpiricalDensity,
    Ensemble,
    KSResult,
    RNGStreamSpec,
)
from apps.ou_kernel.utils.managers import OUKernelManager
from apps.solver.schemas import Field, Grid, InitialData
from apps.solver.utils.managers import SolverManager
from apps.stable_kernel.schemas import StableLaw
from architecture.manager.base_manager import BackendManager
from core.exc import GridMismatch, OutOfGridMassWarning, UnsupportedStabilityIndex
from settings.base import MONTE_CARLO

logger = logging.getLogger(__name__)

Start = Union[InitialData, Sequence[float], float]


class MonteCarloManager(BackendManager):
    """
    stable OU 과정의 정확한 전이 샘플링

    X_{t+dt} = e^{-dt} X_t + s(dt)^{1/alpha} S, S는 표준 등방 stable (특성함수 e^{-|ξ|^alpha})
    """
    ou = OUKernelManager
    solver = SolverManager

    @staticmethod
    def sample_positive_stable(a: float, rng: np.random.Generator, size: int) -> np.ndarray:
        """
        Laplace 변환 e^{-λ^a} 를 갖는 양의 a-stable 변수 (Kanter 표현)
        """
        if not 0.0 < a < 1.0:
            raise ValueError('a must lie in (0, 1)')
        u = rng.uniform(0.0, math.pi, size)
        e = rng.standard_exponential(size)
        return np.sin(a * u) / np.sin(u) ** (1.0 / a) * (np.sin((1.0 - a) * u) / e) ** ((1.0 - a) / a)

    def sample_standard_stable(self, alpha: float, rng: np.random.Generator, size: int = 1,
                               dim: int = 1) -> np.ndarray:
        """
        표준 등방 alpha-stable 표본

        d=1: 대칭 Chambers-Mallows-Stuck, alpha=2는 분산 2 정규분포
        d>1: √A · N(0, 2I), A는 Laplace e^{-λ^{alpha/2}} 를 갖는 양의 (alpha/2)-stable

        :return: d=1 이면 (size,), 아니면 (size, dim)
        """
        if not 0.0 < alpha <= 2.0:
            raise UnsupportedStabilityIndex(alpha)
        if dim == 1:
            if alpha == 2.0:
                return rng.normal(0.0, math.sqrt(2.0), size)
            phi = rng.uniform(-math.pi / 2, math.pi / 2, size)
            w = rng.standard_exponential(size)
            if alpha == 1.0:
                return np.tan(phi)
            return np.sin(alpha * phi) / np.cos(phi) ** (1.0 / alpha) \
                * (np.cos((1.0 - alpha) * phi) / w) ** ((1.0 - alpha) / alpha)
        if alpha == 2.0:
            return rng.normal(0.0, math.sqrt(2.0), (size, dim))
        subordinator = self.sample_positive_stable(alpha / 2.0, rng, size)
        gaussian = rng.normal(0.0, math.sqrt(2.0), (size, dim))
        return MONTE_CARLO['subordinator-scale'] * np.sqrt(subordinator)[:, None] * gaussian

    def ou_step(self, law: StableLaw, x: np.ndarray, dt: float, rng: np.random.Generator) -> np.ndarray:
        """
        한 번의 정확한 전이, x는 (n, d)
        """
        if not dt > 0:
            raise ValueError('dt must be positive')
        x = np.asarray(x, dtype=float).reshape(-1, law.dim)
        s = self.ou.effective_time(law.alpha, dt)
        noise = self.sample_standard_stable(law.alpha, rng, len(x), law.dim).reshape(-1, law.dim)
        return math.exp(-dt) * x + s ** (1.0 / law.alpha) * noise

    def initial_positions(self, law: StableLaw, u0: Start, n: int, rng: np.random.Generator) -> np.ndarray:
        """
        X_0 ~ u0 (점이 주어지면 그 점에서 출발)
        """
        if not isinstance(u0, InitialData):
            point = np.atleast_1d(np.asarray(u0, dtype=float))
            if len(point) != law.dim:
                raise GridMismatch()
            return np.repeat(point[None, :], n, axis=0)
        if u0.dim != law.dim:
            raise GridMismatch()
        if u0.kind in ('indicator-box', 'uniform'):
            if u0.half_widths is None:
                raise ValueError('uniform data needs half_widths to be sampled')
            widths = np.asarray(u0.half_widths)
            return u0.location + rng.uniform(-1.0, 1.0, (n, u0.dim)) * widths
        if u0.kind == 'gaussian-mixture':
            weights = np.asarray(u0.weights, dtype=float)
            component = rng.choice(len(weights), size=n, p=weights / weights.sum())
            means = np.asarray(u0.means, dtype=float)[component]
            sigmas = np.asarray(u0.sigmas, dtype=float)[component]
            return means + sigmas[:, None] * rng.standard_normal((n, u0.dim))
        if u0.kind == 'stable':
            tau = u0.tau if u0.tau is not None else 1.0 / law.alpha
            noise = self.sample_standard_stable(law.alpha, rng, n, law.dim).reshape(-1, law.dim)
            return u0.location + tau ** (1.0 / law.alpha) * noise
        # custom-samples: 표본 노드를 가중치로 고르고 셀 안에서 균등하게
        count = round(len(u0.samples) ** (1.0 / u0.dim))
        spacing = 2.0 * u0.sample_half_width / (count - 1)
        weights = np.asarray(u0.samples, dtype=float)
        index = rng.choice(len(weights), size=n, p=weights / weights.sum())
        nodes = np.stack(np.unravel_index(index, (count,) * u0.dim), axis=1) * spacing - u0.sample_half_width
        jitter = rng.uniform(-0.5, 0.5, (n, u0.dim)) * spacing
        return np.clip(nodes + jitter, -u0.sample_half_width, u0.sample_half_width)

    def _simulate_chunk(self, law: StableLaw, u0: Start, t: float, size: int, seed: int, chunk: int) -> np.ndarray:
        rng = RNGStreamSpec(seed=seed, stream=chunk).generator()
        x = self.initial_positions(law, u0, size, rng)
        return self.ou_step(law, x, t, rng) if t > 0 else x

    def simulate_ensemble(self, law: StableLaw, u0: Start, t: float, n: int, seed: int,
                          workers: Optional[int] = None, chunk_size: Optional[int] = None) -> Ensemble:
        """
        n개 입자를 u0에서 뽑아 한 번의 ou_step(t)

        chunk마다 독립된 stream을 쓰고 chunk 순서대로 이어 붙이므로 worker 수와 무관하게 같은 결과
        """
        if n < 1:
            raise ValueError('n must be positive')
        if t < 0:
            raise ValueError('t must be nonnegative')
        workers = workers or MONTE_CARLO['workers']
        chunk_size = chunk_size or MONTE_CARLO['chunk-size']
        sizes = [min(chunk_size, n - start) for start in range(0, n, chunk_size)]
        logger.debug('simulating %d particles in %d chunks on %d workers', n, len(sizes), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(
                lambda item: self._simulate_chunk(law, u0, t, item[1], seed, item[0]),
                enumerate(sizes),
            ))
        return Ensemble(positions=np.concatenate(parts), time=t, seed=seed, alpha=law.alpha, dim=law.dim)

    @staticmethod
    def cell_edges(grid: Grid) -> np.ndarray:
        # 노드 중심 셀
        return grid.nodes[0] - grid.spacing / 2 + grid.spacing * np.arange(grid.points + 1)

    def empirical_density(self, ensemble: Ensemble, grid: Grid) -> EmpiricalDensity:
        """
        셀 히스토그램 / (n h^d), 표준오차 √(p(1-p)/n) / h^d (빈 셀은 한 개 기준 1/(n h^d))
        """
        if ensemble.dim != grid.dim:
            raise GridMismatch()
        edges = self.cell_edges(grid)
        counts, _ = np.histogramdd(ensemble.positions, bins=[edges] * grid.dim)
        n = ensemble.n
        p = counts / n
        volume = grid.cell_volume
        errors = np.sqrt(p * (1.0 - p) / n) / volume
        errors[counts == 0] = 1.0 / (n * volume)
        outside = 1.0 - counts.sum() / n
        if outside > MONTE_CARLO['outside-warn']:
            warnings.warn(OutOfGridMassWarning(outside, MONTE_CARLO['outside-warn']))
        field = Field(grid=grid, values=p / volume, time=ensemble.time)
        return EmpiricalDensity(field=field, errors=errors, outside=float(outside), n=n)

    @staticmethod
    def compare_densities(a: Field, b: Field, errors: np.ndarray, k: Optional[float] = None) -> DensityComparison:
        """
        sup-norm, L1 거리, k 표준오차를 넘는 셀 수
        """
        if a.grid != b.grid:
            raise GridMismatch()
        k = k or MONTE_CARLO['error-bars']
        diff = np.abs(a.values - b.values)
        exceed = int(np.count_nonzero(diff > k * np.asarray(errors).reshape(diff.shape)))
        return DensityComparison(
            sup=float(diff.max()),
            l1=float(diff.sum() * a.grid.cell_volume),
            exceed=exceed,
            k=k,
            bins=int(diff.size),
            passed=exceed == 0,
        )

    def reference_density(self, law: StableLaw, u0: InitialData, t: float, grid: Grid,
                          enlarge: int = 4) -> Field:
        """
        같은 간격으로 enlarge배 넓힌 격자에서 푼 뒤 grid로 잘라낸 solver 해 (주기 wrap을 비교 영역 밖으로 밀어낸다)
        """
        wide = Grid(dim=grid.dim, half_width=enlarge * grid.half_width, points=enlarge * grid.points)
        solver = self.solver()
        return solver.restrict(solver.solve(law, u0, t, wide), grid)

    def tail_budget(self, law: StableLaw, u0: InitialData, t: float, grid: Grid) -> float:
        """
        격자 밖 질량의 예측치 (solver의 stable 꼬리 예산)
        """
        return self.solver().tail_budget(law, u0, t, grid)

    def ks_composition(self, law: StableLaw, x0: float, dt: float, k: int, n: int, seed: int,
                       level: Optional[float] = None) -> KSResult:
        """
        dt 한 번 vs dt/k 를 k번 (첫 좌표의 2-표본 KS)
        """
        level = level or MONTE_CARLO['ks-level']
        start = np.zeros((n, law.dim))
        start[:, 0] = x0
        one = self.ou_step(law, start, dt, RNGStreamSpec(seed=seed, stream=0).generator())
        rng = RNGStreamSpec(seed=seed, stream=1).generator()
        many = start
        for _ in range(k):
            many = self.ou_step(law, many, dt / k, rng)
        result = stats.ks_2samp(one[:, 0], many[:, 0])
        return KSResult(
            statistic=float(result.statistic), pvalue=float(result.pvalue),
            level=level, passed=bool(result.pvalue > level),
        )

    @staticmethod
    def characteristic_function(samples: np.ndarray, xi) -> complex:
        """
        E[e^{i ξ·X}] 표본 평균
        """
        samples = np.asarray(samples, dtype=float)
        if samples.ndim == 1:
            samples = samples[:, None]
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        return complex(np.mean(np.exp(1j * samples @ xi)))

    def calibrate_subordinator_scale(self, alpha: float, dim: int, n: int, seed: int,
                                     probes: Optional[Sequence[float]] = None) -> float:
        """
        경험 특성함수에서 구한 척도: e^{-kappa |ξ|^alpha} 에 맞는 kappa^{-1/alpha}, 1이면 보정 불필요
        """
        probes = probes or MONTE_CARLO['char-probes']
        rng = RNGStreamSpec(seed=seed).generator()
        samples = self.sample_standard_stable(alpha, rng, n, dim).reshape(-1, dim)
        kappas = []
        for radius in probes:
            xi = np.zeros(dim)
            xi[0] = radius
            phi = self.characteristic_function(samples, xi).real
            kappas.append(-math.log(phi) / radius ** alpha)
        return float(np.mean(kappas)) ** (-1.0 / alpha)
