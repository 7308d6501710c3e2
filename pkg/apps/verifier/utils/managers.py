import logging
import math
import platform
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy
from scipy import integrate

from apps.mc_oracle.utils.managers import MonteCarloManager
from apps.ou_kernel.schemas import OUKernelQuery
from apps.ou_kernel.utils.managers import OUKernelManager
from apps.solver.schemas import Grid, InitialData
from apps.solver.utils.managers import SolverManager
from apps.stable_kernel.schemas import KernelQuery, StableLaw
from apps.stable_kernel.utils.managers import StableKernelManager, sweep_points
from apps.verifier.schemas import CheckRecord, SuiteConfig, VerificationReport
from apps.verifier.utils.queries.baseline_query import BaselineQuery
from architecture.manager.backend_manager import CheckManager
from architecture.manager.base_manager import FrontendManager
from architecture.query.criterion import Criterion
from core.criteria import IsAtLeast, IsBelow, IsFinite, IsPositive, IsTrue, WithinDrift
from core.differences import richardson_derivative
from core.exc import TailBudgetExceeded
from settings.base import KERNEL, MONTE_CARLO, SOLVER, VERIFIER

logger = logging.getLogger(__name__)


def record_name(check: str, law: StableLaw, **extra) -> str:
    """
    baseline key 로도 쓰이는 check 이름, 예) two-sided-estimate[alpha=1.5,d=1]
    """
    parts = [f'alpha={law.alpha:g}', f'd={law.dim}'] + [f'{k}={v}' for k, v in extra.items()]
    return f"{check}[{','.join(parts)}]"


def sweep_axes(suite: str, refine: int = 1) -> Tuple[List[float], List[float]]:
    """
    t ∈ [1e-2, 1e2], |x| ∈ {0} ∪ [1e-2, 1e2] log 격자

    :param refine: 2 이면 간격을 절반으로 (점 개수 2k - 1)
    """
    n_times, n_radii = VERIFIER['sweep'][suite]
    n_times = refine * (n_times - 1) + 1
    n_radii = refine * (n_radii - 1) + 1
    return list(np.logspace(-2, 2, n_times)), [0.0] + list(np.logspace(-2, 2, n_radii))


def suite_grid(law: StableLaw, points: int, earliest: Optional[float] = None) -> Grid:
    """
    정상 밀도의 주기 image 가 image-density 이하, spectral 절단이 spectral-floor 이하가 되는 1차원 격자

    tail 상수는 d=1 stable 밀도의 점근식 p(1, x) ~ Γ(1+α) sin(πα/2) / π · |x|^{-1-α}

    :param earliest: 주어지면 과도 check 용. 절단을 출력 좌표의 smoothing s(earliest) < 1/α 로 잡는다
    """
    alpha, tau = law.alpha, 1.0 / law.alpha
    image = VERIFIER['image-density']
    if alpha == 2.0:
        half_width = max(math.sqrt(4.0 * tau * math.log(1.0 / (image * math.sqrt(4.0 * math.pi * tau)))), 8.0)
    else:
        c = math.gamma(1.0 + alpha) * math.sin(math.pi * alpha / 2.0) / math.pi
        half_width = (c * tau / image) ** (1.0 / (1.0 + alpha))
    smoothing = tau if earliest is None else OUKernelManager.effective_time(alpha, earliest)
    xi = (math.log(1.0 / VERIFIER['spectral-floor']) / smoothing) ** (1.0 / alpha)
    needed = 2 ** math.ceil(math.log2(2.0 * half_width * xi / math.pi))
    # 정상 격자는 t=5 headroom (2^8 배), 과도 격자는 t ≤ 1 headroom (2^2 배) 이 max-grid-points 안에
    cap = SOLVER['max-grid-points'] // 2 ** (8 if earliest is None else 2)
    return Grid(dim=1, half_width=half_width, points=int(min(max(points, needed), cap)))


def verdict(criterion: Criterion) -> str:
    return 'pass' if criterion else 'fail'


def drift_criterion(constants: Dict[str, float], baseline: Optional[Dict[str, float]]) -> Criterion:
    criterion = IsTrue(True)
    for key, value in constants.items():
        frozen = None if baseline is None else baseline.get(key)
        criterion = criterion & WithinDrift(value, frozen, VERIFIER['baseline-drift'])
    return criterion


def drift_notes(constants: Dict[str, float], baseline: Optional[Dict[str, float]]) -> List[str]:
    if baseline is None:
        return ['constants not frozen']
    notes = []
    for key, value in constants.items():
        frozen = baseline.get(key)
        if frozen is not None and not WithinDrift(value, frozen, VERIFIER['baseline-drift']):
            logger.error('%s drifted from frozen baseline %r to %r', key, frozen, value)
            notes.append(f'{key} drifted from frozen baseline {frozen!r}')
    return notes


class TwoSidedEstimateCheck(CheckManager):
    """
    p̂ / min(t r^{-d-α}, t^{-d/α}) 가 sweep 전체에서 [c1, c2] 안에 있고
    r t^{-1/α} 의 함수로 모이는지 (λ = 2 scaling 짝을 축소 없이 직접 계산해 비교)
    """
    name = 'two-sided-estimate'
    anchor = 'p̂(t, x) is comparable to min(t/|x|^{d+α}, t^{-d/α}) with constants independent of t and x'
    kernel = StableKernelManager
    scaling = 2.0

    def _partner(self, law: StableLaw, t: float, point: np.ndarray, tol: float) -> float:
        kernel = self.kernel()
        if law.alpha == 2.0:
            return kernel.heat_kernel_closed_form(law, t, point)
        return kernel.heat_kernel_quadrature(law, t, point, tol)

    def run(self, law: StableLaw, suite: str = 'quick', baseline: Optional[Dict[str, float]] = None) -> CheckRecord:
        kernel = self.kernel()
        times, radii = sweep_axes(suite)
        rtol, floor = VERIFIER['ratio-rtol'], KERNEL['tol-floor']
        lam = self.scaling
        ratios, collapse, skipped = [], 0.0, 0
        for t, r in sweep_points(law, times, radii):
            point = np.zeros(law.dim)
            point[0] = r
            bound = kernel.sharp_bound(law, t, r).value
            value = kernel.heat_kernel(law, KernelQuery(t=t, x=point, tol=max(rtol * bound, floor)))
            ratio = value / bound
            ratios.append(ratio)
            partner_t = lam ** law.alpha * t
            partner_bound = kernel.sharp_bound(law, partner_t, lam * r).value
            # floor 가 ratio 오차를 지배하는 점은 collapse 비교에서 뺀다
            if floor > 0.1 * VERIFIER['collapse-tol'] * partner_bound:
                skipped += 1
                continue
            partner = self._partner(law, partner_t, lam * point, max(rtol * partner_bound, floor))
            collapse = max(collapse, abs(partner / partner_bound - ratio))
        c1, c2 = float(min(ratios)), float(max(ratios))
        notes = []
        constants = {'c1': c1, 'c2': c2}
        criterion = IsFinite(c2) & IsPositive(c2) & IsBelow(collapse, VERIFIER['collapse-tol'])
        if law.alpha == 2.0:
            # Gaussian 꼬리는 다항 bound 아래로 떨어지므로 하한은 확인하지 않는다
            notes.append('alpha=2 lies outside the jump regime of the estimate; only the upper bound is checked')
            constants = {'c2': c2}
        else:
            criterion = criterion & IsFinite(c1) & IsPositive(c1)
        if skipped:
            notes.append(f'{skipped} scaling pairs below the quadrature floor were not compared')
        criterion = criterion & drift_criterion(constants, baseline)
        notes += drift_notes(constants, baseline)
        return CheckRecord(
            name=record_name(self.name, law),
            anchor=self.anchor,
            sweep={'t': [min(times), max(times), len(times)], 'r': [0.0, max(radii), len(radii)],
                   'max_reduced_radius': 1e2, 'points': len(ratios)},
            measured={'constants': constants, 'collapse': collapse},
            tolerance={'collapse': VERIFIER['collapse-tol'], 'baseline_drift': VERIFIER['baseline-drift']},
            verdict=verdict(criterion),
            notes=notes,
            baseline=baseline,
        )


class DerivativeEstimateCheck(CheckManager):
    """
    |∂^m p̂| ≤ C Σ r^{m-2n} min(...) 의 최소 C, sweep 밀도를 두 배로 해도 10% 안에서 안정
    """
    name = 'derivative-estimate'
    anchor = '|∂^m p̂(t, x)| is bounded by a constant times Σ_n |x|^{m-2n} min(t/|x|^{d+α+2(m-n)}, t^{-(d+2(m-n))/α})'
    kernel = StableKernelManager

    def constant(self, law: StableLaw, m: int, times: Sequence[float], radii: Sequence[float]) -> float:
        kernel = self.kernel()
        best = 0.0
        for t, r in sweep_points(law, times, radii):
            bound = kernel.derivative_bound(law, m, t, r)
            if bound == 0.0:
                continue
            point = np.zeros(law.dim)
            point[0] = r
            tol = max(VERIFIER['ratio-rtol'] * bound, KERNEL['tol-floor'])
            best = max(best, abs(kernel.kernel_derivative(law, t, point, m, tol)) / bound)
        return float(best)

    def run(self, law: StableLaw, m: int, suite: str = 'quick',
            baseline: Optional[Dict[str, float]] = None) -> CheckRecord:
        if m not in (0, 1, 2):
            raise ValueError('m must be 0, 1 or 2')
        coarse = self.constant(law, m, *sweep_axes(suite))
        fine = self.constant(law, m, *sweep_axes(suite, refine=2))
        change = abs(fine - coarse) / coarse if coarse > 0 else math.inf
        constants = {'C': coarse}
        criterion = (
            IsFinite(coarse) & IsPositive(coarse)
            & IsBelow(change, VERIFIER['derivative-drift'])
            & drift_criterion(constants, baseline)
        )
        notes = ['only the upper bound is checked; signed derivatives change sign']
        if law.alpha == 2.0:
            notes.append('alpha=2 lies outside the jump regime of the estimate')
        notes += drift_notes(constants, baseline)
        return CheckRecord(
            name=record_name(self.name, law, m=m),
            anchor=self.anchor,
            sweep={'suite': suite, 'refined': True},
            measured={'constants': constants, 'refined_C': fine, 'relative_change': change},
            tolerance={'relative_change': VERIFIER['derivative-drift'], 'baseline_drift': VERIFIER['baseline-drift']},
            verdict=verdict(criterion),
            notes=notes,
            baseline=baseline,
        )


class GradientTransformCheck(CheckManager):
    """
    ∇_x^m p(t, x, y) = e^{dt} e^{mt} ∇^m p̂(t̃, e^t x - y) 와 ou_kernel 의 Richardson 차분 비교
    """
    name = 'gradient-transform'
    anchor = 'x-derivatives of the drift kernel equal e^{(d+m)t} times derivatives of the dilated heat kernel'
    ou = OUKernelManager
    points = ((0.5, 0.3, -0.2), (1.0, 1.5, 0.5), (2.0, -0.7, 1.2), (0.5, 0.2, 0.1))

    def deviation(self, law: StableLaw, t: float, x: float, y: float, m: int) -> float:
        ou = self.ou()
        e1 = np.zeros(law.dim)
        e1[0] = 1.0
        xs, ys = x * e1, y * e1
        step = 0.1 * min(1.0, ou.effective_time(law.alpha, t) ** (1.0 / law.alpha))

        def f(h):
            return ou.ou_kernel(law, OUKernelQuery(t=t, x=xs + h * e1, y=ys, tol=1e-13), check_routes=False)

        fd, _ = richardson_derivative(f, m, step, levels=4)
        exact = ou.ou_kernel_gradient(law, OUKernelQuery(t=t, x=xs, y=ys, tol=1e-12), m)
        scale = max(abs(fd), f(0.0))
        return abs(exact - fd) / scale

    def run(self, law: StableLaw, points: Optional[Sequence[Tuple[float, float, float]]] = None) -> CheckRecord:
        points = points or self.points
        deviations = {
            f'm={m}': max(self.deviation(law, t, x, y, m) for t, x, y in points) for m in (1, 2)
        }
        worst = max(deviations.values())
        return CheckRecord(
            name=record_name(self.name, law),
            anchor=self.anchor,
            sweep={'points': [list(p) for p in points], 'orders': [1, 2]},
            measured={'relative_deviation': deviations},
            tolerance={'relative_deviation': VERIFIER['gradient-tol']},
            verdict=verdict(IsFinite(worst) & IsBelow(worst, VERIFIER['gradient-tol'])),
        )


def _box(dim: int = 1) -> InitialData:
    return InitialData(kind='indicator-box', dim=dim, centre=(0.0,) * dim, half_widths=(1.0,) * dim)


def _gaussian(mean: float = 0.0, sigma: float = 0.5) -> InitialData:
    return InitialData(kind='gaussian-mixture', weights=[1.0], means=[(mean,)], sigmas=[sigma])


class SolutionSuiteCheck(CheckManager):
    """
    격자 solver 의 성질들 (d=1)

    mass 보존, 두 경로 일치, 정상 밀도 고정점, 초기 연속성, smoothness, PDE residual, flow 합성
    """
    name = 'solution-suite'
    anchor = 'u(t) = p ∗ u0 solves the drift equation, is smooth for t > 0 and tends to u0 at continuity points'
    solver = SolverManager

    def _mass(self, law: StableLaw, grid: Grid) -> Tuple[Dict, Criterion]:
        solver = self.solver()
        deviation = max(abs(solver.solve(law, _box(), t, grid, tail_tol=None).mass - 1.0) for t in (0.5, 1.0))
        return {'mass_deviation': deviation}, IsBelow(deviation, SOLVER['mass-tol'])

    def _routes(self, law: StableLaw, grid: Grid) -> Tuple[Dict, Criterion]:
        solver = self.solver()
        t = 0.5
        u0 = solver.initial().discretize(law, _box(), solver.headroom_grid(grid, t))
        spectral = solver.ou_solve(law, u0, t, grid)
        probes = np.flatnonzero(np.abs(grid.nodes) < 5.0)
        probes = probes[np.linspace(0, len(probes) - 1, 9).astype(int)]
        gap = max(abs(solver.ou_solve_direct(law, u0, t, grid.nodes[j]) - spectral.values[j]) for j in probes)
        return {'route_gap': gap}, IsBelow(gap, VERIFIER['route-tol'])

    def _stationarity(self, law: StableLaw, grid: Grid, times: Sequence[float]) -> Tuple[Dict, Criterion]:
        solver = self.solver()
        inner = np.flatnonzero(np.abs(grid.nodes) <= grid.half_width / 2)
        probes = inner[np.linspace(0, len(inner) - 1, 64).astype(int)]
        stationary = solver.kernel().heat_kernel_values(law, 1.0 / law.alpha, grid.nodes[probes])
        gap = 0.0
        for t in times:
            field = solver.solve(law, InitialData(kind='stable'), t, grid, tail_tol=None)
            gap = max(gap, float(np.max(np.abs(field.values[probes] - stationary))))
        return {'stationary_gap': gap}, IsBelow(gap, VERIFIER['stationary-tol'])

    def _continuity(self, law: StableLaw) -> Tuple[Dict, Criterion]:
        probe = self.solver().initial_continuity_check(law, _box(), 0.0)
        late = max(row.deviation for row in probe.rows if row.level >= VERIFIER['continuity-level'])
        measured = {'continuity_deviation': late, 'continuity_monotone': probe.monotone}
        return measured, IsTrue(probe.monotone) & IsBelow(late, VERIFIER['continuity-tol'])

    def _smoothness(self, law: StableLaw, points: int) -> Tuple[Dict, Criterion]:
        u0 = InitialData(kind='indicator-box', centre=(0.0,), half_widths=(0.5,))
        rows = self.solver().smoothness_probe(law, u0, 0.5, [1, 2, 3, 4], Grid(half_width=2.0, points=points))
        measured = {'smoothness_ratios': {f'order={row.order}': row.ratio for row in rows}}
        return measured, IsTrue(all(row.stable for row in rows))

    def _residual(self, law: StableLaw, grid: Grid) -> Tuple[Dict, Criterion]:
        solver = self.solver()
        t = 0.5
        coarse = solver.pde_residual(law, _gaussian(), t, 0.08, grid).residual
        fine = solver.pde_residual(law, _gaussian(), t, 0.04, grid).residual
        order = math.log2(coarse / fine) if fine > 0 else math.inf
        small = solver.pde_residual(law, _gaussian(), t, 1e-3, grid).residual
        stationary = solver.pde_residual(law, InitialData(kind='stable'), t, 1e-2, grid)
        measured = {
            'residual_order': order,
            'residual': small,
            'stationary_time_term': stationary.time_term,
            'stationary_spatial_term': stationary.spatial_term,
        }
        tol = VERIFIER['stationary-residual-tol']
        criterion = (
            IsAtLeast(order, VERIFIER['residual-order'])
            & IsBelow(small, VERIFIER['residual-tol'])
            & IsBelow(stationary.time_term, tol)
            & IsBelow(stationary.spatial_term, tol)
        )
        return measured, criterion

    def _composition(self, law: StableLaw, grid: Grid) -> Tuple[Dict, Criterion]:
        solver = self.solver()
        t1, t2 = 0.3, 0.4
        middle = solver.headroom_grid(grid, t2)
        u0 = solver.initial().discretize(law, _gaussian(), solver.headroom_grid(middle, t1))
        stepped = solver.ou_solve(law, solver.ou_solve(law, u0, t1, middle), t2, grid)
        direct = solver.solve(law, _gaussian(), t1 + t2, grid, tail_tol=None)
        gap = float(np.max(np.abs(stepped.values - direct.values)))
        return {'composition_gap': gap}, IsBelow(gap, VERIFIER['composition-tol'])

    def run(self, law: StableLaw, config: SuiteConfig) -> CheckRecord:
        if law.dim != 1:
            raise ValueError('the solution suite runs in d=1')
        grid = suite_grid(law, config.points)
        transient = suite_grid(law, config.points, earliest=VERIFIER['transient-start'])
        times = [0.5, 1.0, 5.0] if config.is_full else [0.5, 1.0]
        measured: Dict = {}
        criterion = IsTrue(True)
        parts: List[Callable[[], tuple]] = [
            lambda: self._mass(law, transient),
            lambda: self._routes(law, transient),
            lambda: self._stationarity(law, grid, times),
            lambda: self._continuity(law),
            lambda: self._smoothness(law, config.points),
            lambda: self._residual(law, transient),
            lambda: self._composition(law, transient),
        ]
        for part in parts:
            result = part()
            measured.update(result[0])
            criterion = criterion & result[1]
        # 격자 밖 질량은 주기 image 로 격자 안에 남는다. 예산은 기록만 한다
        measured['tail_budget'] = self.solver().tail_budget(law, _box(), 1.0, transient)
        notes = [f"mass outside the transient grid at t=1 is {measured['tail_budget']:.2e}; "
                 'it wraps back periodically, so mass and routes are compared on the inner grid']
        return CheckRecord(
            name=record_name(self.name, law),
            anchor=self.anchor,
            sweep={'grid': grid.dict(), 'transient_grid': transient.dict(), 'stationary_times': times,
                   'smoothness_grid': [2.0, config.points], 'smoothness_orders': [1, 2, 3, 4]},
            measured=measured,
            tolerance={
                'mass': SOLVER['mass-tol'], 'route': VERIFIER['route-tol'],
                'stationary': VERIFIER['stationary-tol'], 'continuity': VERIFIER['continuity-tol'],
                'smoothness_ratio': SOLVER['smoothness-stable-ratio'],
                'residual_order': VERIFIER['residual-order'], 'residual': VERIFIER['residual-tol'],
                'stationary_terms': VERIFIER['stationary-residual-tol'],
                'composition': VERIFIER['composition-tol'],
            },
            verdict=verdict(criterion),
            notes=notes,
        )

    def negative_control(self, law: StableLaw, config: SuiteConfig) -> CheckRecord:
        """
        L이 너무 작은 격자: tail 예산 초과가 보고되어야 한다 (expected-fail)
        """
        grid = Grid(half_width=2.0, points=config.points)
        measured = {}
        try:
            measured['tail'] = self.solver().check_tail_budget(law, _box(), 1.0, grid)
            result, notes = 'fail', ['tail budget was not exceeded on a grid that is too small']
        except TailBudgetExceeded as e:
            measured.update(tail=e.tail, suggested_half_width=e.suggested_half_width)
            result, notes = 'expected-fail', [str(e)]
        return CheckRecord(
            name=record_name('negative-control', law),
            anchor='a grid that truncates the stable tail is rejected',
            sweep={'grid': grid.dict(), 't': 1.0},
            measured=measured,
            tolerance={'tail': SOLVER['tail-tol']},
            verdict=result,
            notes=notes,
        )


class MonteCarloAgreementCheck(CheckManager):
    """
    정확 전이 입자 ensemble 히스토그램 vs solver 해 (5 표준오차), 격자 밖 질량 vs tail 예산 (3배 이내)
    """
    name = 'mc-agreement'
    anchor = 'the law of the drift process started from u0 equals the solution u(t) = p ∗ u0'
    mc = MonteCarloManager

    def run(self, law: StableLaw, config: SuiteConfig) -> CheckRecord:
        mc = self.mc()
        t = 1.0
        grid = Grid(dim=law.dim, half_width=20.0, points=128)
        ensemble = mc.simulate_ensemble(law, _box(law.dim), t, config.mc_samples, config.seed, workers=config.workers)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            density = mc.empirical_density(ensemble, grid)
        notes = [str(w.message) for w in caught]
        reference = mc.reference_density(law, _box(law.dim), t, grid)
        comparison = mc.compare_densities(density.field, reference, density.errors)
        predicted = mc.tail_budget(law, _box(law.dim), t, grid)
        factor = VERIFIER['tail-factor']
        n = config.mc_samples
        if predicted * n < 10.0:
            # 기대 개수가 너무 작으면 비율 대신 개수로
            tail = IsBelow(density.outside * n, 10.0 + 1e-12)
            notes.append('predicted out-of-grid count below 10; compared as counts')
        else:
            tail = IsAtLeast(density.outside, predicted / factor) & IsBelow(density.outside, factor * predicted)
        criterion = IsTrue(comparison.passed) & tail
        return CheckRecord(
            name=record_name(self.name, law),
            anchor=self.anchor,
            sweep={'grid': grid.dict(), 't': t, 'samples': n, 'seed': config.seed},
            measured={
                'sup': comparison.sup, 'l1': comparison.l1, 'exceed': comparison.exceed,
                'outside': density.outside, 'predicted_outside': predicted,
            },
            tolerance={'error_bars': comparison.k, 'tail_factor': factor},
            verdict=verdict(criterion),
            notes=notes,
        )


class DerivativeIntegrabilityCheck(CheckManager):
    """
    ∫ |∂^m p̂(1, x)| dx 가 유한 (반경 R/2..R 구간 기여가 1% 미만) 하고 bound 적분과 같은 규모
    """
    name = 'derivative-integrability'
    anchor = 'm-th derivatives of the heat kernel are integrable in space, as their bound is'
    kernel = StableKernelManager
    radius = 100.0

    def run(self, law: StableLaw, m: int) -> CheckRecord:
        if law.dim != 1:
            raise ValueError('integrability is checked in d=1')
        kernel = self.kernel()
        r = np.concatenate([np.linspace(0.0, 1.0, 201)[:-1], np.logspace(0.0, math.log10(self.radius), 400)])
        values = np.array([abs(kernel.kernel_derivative(law, 1.0, x, m)) for x in r])
        bounds = np.array([kernel.derivative_bound(law, m, 1.0, x) for x in r])
        half = r >= self.radius / 2
        total = 2.0 * float(integrate.trapezoid(values, r))
        outer = 2.0 * float(integrate.trapezoid(values[half], r[half]))
        bound_total = 2.0 * float(integrate.trapezoid(bounds, r))
        share = outer / total
        ratio = total / bound_total
        criterion = IsFinite(total) & IsPositive(total) & IsBelow(share, 1e-2) & IsFinite(ratio)
        return CheckRecord(
            name=record_name(self.name, law, m=m),
            anchor=self.anchor,
            sweep={'t': 1.0, 'radius': self.radius, 'nodes': int(r.size)},
            measured={'integral': total, 'bound_integral': bound_total, 'ratio': ratio, 'outer_share': share},
            tolerance={'outer_share': 1e-2},
            verdict=verdict(criterion),
        )


class StationaryDecayCheck(CheckManager):
    name = 'stationary-decay'
    anchor = 'solutions converge exponentially fast in L1 to the stationary density p̂(1/α, ·)'
    solver = SolverManager

    def run(self, law: StableLaw, points: int) -> CheckRecord:
        grid = suite_grid(law, points)
        fit = self.solver().stationary_decay(law, _gaussian(mean=2.0), [1.0, 2.0, 3.0], grid)
        return CheckRecord(
            name=record_name(self.name, law),
            anchor=self.anchor,
            sweep={'times': fit.times, 'grid': grid.dict()},
            measured={'distances': fit.distances, 'rate': fit.rate},
            tolerance={'rate': 0.0},
            verdict=verdict(IsFinite(fit.rate) & IsPositive(fit.rate)),
        )


class SubordinatorCalibrationCheck(CheckManager):
    name = 'subordinator-calibration'
    anchor = 'the subordinated Gaussian sampler has characteristic function e^{-|ξ|^α}'
    mc = MonteCarloManager

    def run(self, alpha: float, dim: int, n: int, seed: int) -> CheckRecord:
        scale = self.mc().calibrate_subordinator_scale(alpha, dim, n, seed)
        configured = MONTE_CARLO['subordinator-scale']
        tol = VERIFIER['calibration-tol']
        criterion = IsBelow(abs(scale - 1.0), tol) & IsBelow(abs(scale - configured), tol)
        return CheckRecord(
            name=f'{self.name}[alpha={alpha:g},d={dim}]',
            anchor=self.anchor,
            sweep={'samples': n, 'seed': seed, 'probes': list(MONTE_CARLO['char-probes'])},
            measured={'scale': scale, 'configured': configured},
            tolerance={'scale': tol},
            verdict=verdict(criterion),
        )


class VerifierManager(FrontendManager):
    """
    suite 구성과 report 조립

    check 들은 서로 독립이므로 thread pool 에서 돌리고, 결과는 제출 순서대로 모은다.
    """
    baselines = BaselineQuery

    def __init__(self, baseline_path: Optional[str] = None):
        self.baseline_path = baseline_path or VERIFIER['baselines']

    def load_baselines(self) -> Dict:
        return self.baselines().read(self.baseline_path)

    def plan(self, config: SuiteConfig, frozen: Dict[str, Dict[str, float]]) -> List[Callable[[], CheckRecord]]:
        jobs: List[Callable[[], CheckRecord]] = []
        for alpha in config.alphas:
            law = StableLaw(alpha=alpha, dim=config.dim)
            line = StableLaw(alpha=alpha)
            jobs.append(lambda law=law: TwoSidedEstimateCheck().run(
                law, config.suite, frozen.get(record_name(TwoSidedEstimateCheck.name, law))))
            for m in (1, 2):
                jobs.append(lambda law=law, m=m: DerivativeEstimateCheck().run(
                    law, m, config.suite, frozen.get(record_name(DerivativeEstimateCheck.name, law, m=m))))
            jobs.append(lambda law=law: GradientTransformCheck().run(law))
            jobs.append(lambda law=line: SolutionSuiteCheck().run(law, config))
            jobs.append(lambda law=line: MonteCarloAgreementCheck().run(law, config))
            if config.negative_control:
                jobs.append(lambda law=line: SolutionSuiteCheck().negative_control(law, config))
            if config.is_full:
                for m in (1, 2):
                    jobs.append(lambda law=line, m=m: DerivativeIntegrabilityCheck().run(law, m))
                jobs.append(lambda law=line: StationaryDecayCheck().run(law, config.points))
        dims = (2, 3) if config.is_full else (2,)
        for dim in dims:
            jobs.append(lambda dim=dim: SubordinatorCalibrationCheck().run(
                1.5, dim, config.mc_samples, config.seed))
        return jobs

    def run_suite(self, config: SuiteConfig, use_baselines: bool = True) -> VerificationReport:
        """
        :param use_baselines: False 면 frozen 값과 비교하지 않는다 (freeze 실행용)
        """
        started = time.perf_counter()
        frozen = self.load_baselines()['checks'] if use_baselines else {}
        jobs = self.plan(config, frozen)
        logger.info('running %d checks (%s suite) on %d workers', len(jobs), config.suite, config.workers)
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(lambda job: job(), jobs))
        for record in records:
            log = logger.info if record.ok else logger.error
            log('%s: %s', record.name, record.verdict)
        environment = {
            'seed': config.seed,
            'alphas': config.alphas,
            'dim': config.dim,
            'points': config.points,
            'mc_samples': config.mc_samples,
            'python': platform.python_version(),
            'numpy': np.__version__,
            'scipy': scipy.__version__,
            'runtime_seconds': round(time.perf_counter() - started, 3),
        }
        return VerificationReport(suite=config.suite, records=records, environment=environment)

    def freeze(self, report: VerificationReport) -> str:
        """
        측정 상수와 subordinator 보정값을 baseline 파일로 기록
        """
        data = self.load_baselines()
        constants = dict(data['checks'])
        constants.update(report.frozen_constants())
        calibration = data.get('subordinator-scale') or {}
        measured = {
            record.name: record.measured['scale']
            for record in report.records
            if record.name.startswith(SubordinatorCalibrationCheck.name)
        }
        if measured:
            calibration = dict(calibration, value=MONTE_CARLO['subordinator-scale'], measured=measured)
        logger.info('freezing %d baselines into %s', len(constants), self.baseline_path)
        return self.baselines().create(self.baseline_path, constants, calibration or None)
