import math
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import hermite_e
from scipy import special

from apps.stable_kernel.schemas import BoundValue, KernelQuery, StableLaw
from apps.stable_kernel.utils.quadrature import (
    NormalizedBessel,
    ShiftedCosine,
    cutoff,
    oscillatory_integral,
    power_exponential,
    radial_constant,
)
from apps.stable_kernel.utils.series import density_series, tail_series
from architecture.manager.backend_manager import KernelManager
from core.differences import richardson_derivative
from core.exc import (
    DerivativeMismatch,
    NotClosedForm,
    QuadratureNonConvergence,
    UnsupportedStabilityIndex,
)
from settings.base import KERNEL

_CROSSOVER_RTOL = 1e-12


def default_tol(law: StableLaw) -> float:
    return KERNEL['tol-1d'] if law.dim == 1 else KERNEL['tol-nd']


def _check_quadrature_range(alpha: float):
    if not (KERNEL['min-alpha'] <= alpha < 2.0):
        raise UnsupportedStabilityIndex(alpha)


@lru_cache(maxsize=KERNEL['cache-size'])
def _radial(alpha: float, n: int, tau: float, r: float, tol: float, series: bool = True) -> float:
    """
    n차원 반경 커널 f_n(tau, r) = c_n ∫ k^{n-1} e^{-tau k^alpha} Λ_{n/2-1}(k r) dk

    n은 공간 차원이 아니라 반경 역변환의 차원이다 (도함수 recursion에서 d+2j까지 쓰인다).
    """
    c = radial_constant(n)
    if r == 0.0:
        return c * math.gamma(n / alpha) / (alpha * tau ** (n / alpha))
    if series and n == 1 and tau == 1.0 and r >= KERNEL['series-radius']:
        value = density_series(alpha, r, 0, tol)
        if value is not None:
            return value
    inner_tol = tol / c
    k_max = cutoff(n - 1.0, alpha, tau, inner_tol * 1e-2)
    oscillator = ShiftedCosine(0.0) if n == 1 else NormalizedBessel(n / 2.0 - 1.0)
    value, _ = oscillatory_integral(
        power_exponential(n - 1.0, alpha, tau), oscillator, r, k_max, inner_tol
    )
    return c * value


@lru_cache(maxsize=KERNEL['cache-size'])
def _derivative_1d(alpha: float, m: int, x: float, tol: float) -> float:
    """
    unit-time d=1 커널의 m계 도함수
    (1/π) ∫ k^m e^{-k^alpha} cos(k|x| + mπ/2) dk, x < 0 은 parity (-1)^m
    """
    sign = (-1.0) ** m if x < 0 else 1.0
    r = abs(x)
    if r == 0.0:
        if m % 2:
            return 0.0
        return (-1.0) ** (m // 2) * math.gamma((m + 1.0) / alpha) / (alpha * math.pi)
    if r >= KERNEL['series-radius']:
        value = density_series(alpha, r, m, tol)
        if value is not None:
            return sign * value
    inner_tol = tol * math.pi
    k_max = cutoff(float(m), alpha, 1.0, inner_tol * 1e-2)
    value, _ = oscillatory_integral(
        power_exponential(float(m), alpha, 1.0), ShiftedCosine(m * math.pi / 2.0), r, k_max, inner_tol
    )
    return sign * value / math.pi


class StableKernelManager(KernelManager):
    """
    isotropic alpha-stable heat kernel p̂(t, x)와 bound 함수들
    """

    def evaluate(self, law: StableLaw, q: KernelQuery) -> float:
        return self.heat_kernel(law, q)

    def derivative(self, law: StableLaw, t: float, x, m: int, tol: Optional[float] = None) -> float:
        return self.kernel_derivative(law, t, x, m, tol)

    @staticmethod
    def _point(law: StableLaw, x) -> np.ndarray:
        point = np.atleast_1d(np.asarray(x, dtype=float))
        if point.shape != (law.dim,):
            raise ValueError(f'point of shape {point.shape} does not match dim={law.dim}')
        return point

    def self_similar_reduce(self, law: StableLaw, t: float, x) -> Tuple[np.ndarray, float]:
        """
        p̂(t, x) = t^{-d/alpha} p̂(1, t^{-1/alpha} x)

        :return: (unit-time 점, factor)
        """
        if not t > 0:
            raise ValueError('t must be positive')
        point = self._point(law, x)
        return point * t ** (-1.0 / law.alpha), t ** (-law.dim / law.alpha)

    def heat_kernel_closed_form(self, law: StableLaw, t: float, x) -> float:
        """
        alpha=2: Gaussian, alpha=1: Cauchy
        """
        r = float(np.linalg.norm(self._point(law, x)))
        return float(self._closed_form_radial(law, t, np.asarray(r)))

    @staticmethod
    def _closed_form_radial(law: StableLaw, t: float, r: np.ndarray) -> np.ndarray:
        d = law.dim
        if law.alpha == 2.0:
            return (4.0 * math.pi * t) ** (-d / 2.0) * np.exp(-r ** 2 / (4.0 * t))
        if law.alpha == 1.0:
            c = math.gamma((d + 1.0) / 2.0) / math.pi ** ((d + 1.0) / 2.0)
            return c * t / (t ** 2 + r ** 2) ** ((d + 1.0) / 2.0)
        raise NotClosedForm(law.alpha)

    def heat_kernel_quadrature(self, law: StableLaw, t: float, x, tol: float) -> float:
        """
        radial Fourier 역변환을 t에서 바로 계산 (축소 없이)
        """
        _check_quadrature_range(law.alpha)
        if not t > 0:
            raise ValueError('t must be positive')
        r = float(np.linalg.norm(self._point(law, x)))
        value = _radial(law.alpha, law.dim, float(t), r, max(tol, KERNEL['tol-floor']), series=False)
        return self._clamp(value, tol)

    @staticmethod
    def _clamp(value: float, tol: float) -> float:
        if value >= 0.0:
            return value
        if value > -tol:
            return 0.0
        raise QuadratureNonConvergence(abs(value), tol)

    def heat_kernel(self, law: StableLaw, q: KernelQuery) -> float:
        """
        closed form (alpha ∈ {1, 2}) 또는 self-similar 축소 후 quadrature

        :return: 절대 오차 q.tol 이내의 p̂(t, x)
        """
        if law.is_closed_form:
            return self.heat_kernel_closed_form(law, q.t, q.x)
        _check_quadrature_range(law.alpha)
        reduced, factor = self.self_similar_reduce(law, q.t, q.x)
        unit_tol = max(q.tol / factor, KERNEL['tol-floor'])
        value = factor * _radial(law.alpha, law.dim, 1.0, float(np.linalg.norm(reduced)), unit_tol)
        return self._clamp(value, q.tol)

    def heat_kernel_values(self, law: StableLaw, t: float, points, tol: Optional[float] = None) -> np.ndarray:
        """
        여러 점에서의 p̂(t, ·)

        :param points: (N, d) 또는 d=1 이면 (N,)
        """
        tol = tol or default_tol(law)
        pts = np.asarray(points, dtype=float).reshape(-1, law.dim)
        r = np.linalg.norm(pts, axis=1)
        if law.is_closed_form:
            return self._closed_form_radial(law, t, r)
        _check_quadrature_range(law.alpha)
        factor = t ** (-law.dim / law.alpha)
        scale = t ** (-1.0 / law.alpha)
        unit_tol = max(tol / factor, KERNEL['tol-floor'])
        values = np.array([
            _radial(law.alpha, law.dim, 1.0, float(radius * scale), unit_tol) for radius in r
        ])
        values = factor * values
        values[(values < 0) & (values > -tol)] = 0.0
        return values

    def sharp_bound(self, law: StableLaw, t: float, r: float) -> BoundValue:
        """
        min(t / r^{d+alpha}, t^{-d/alpha})
        """
        if not t > 0 or r < 0:
            raise ValueError('t must be positive and r nonnegative')
        bulk = t ** (-law.dim / law.alpha)
        if r == 0:
            return BoundValue(value=bulk, branch='bulk')
        tail = t / r ** (law.dim + law.alpha)
        if abs(tail - bulk) <= _CROSSOVER_RTOL * bulk:
            return BoundValue(value=min(tail, bulk), branch='crossover')
        if tail < bulk:
            return BoundValue(value=tail, branch='tail')
        return BoundValue(value=bulk, branch='bulk')

    def derivative_bound(self, law: StableLaw, m: int, t: float, r: float) -> float:
        """
        Σ_{n=0}^{floor(m/2)} r^{m-2n} min(t / r^{d+alpha+2(m-n)}, t^{-(d+2(m-n))/alpha}), 모든 C_n = 1
        """
        if m < 0 or int(m) != m:
            raise ValueError('m must be a nonnegative integer')
        if not t > 0 or r < 0:
            raise ValueError('t must be positive and r nonnegative')
        d, alpha = law.dim, law.alpha
        total = 0.0
        for n in range(m // 2 + 1):
            power = m - 2 * n
            bulk = t ** (-(d + 2.0 * (m - n)) / alpha)
            if r == 0:
                # r^{power}은 power > 0 이면 0, min은 bulk 쪽
                total += bulk if power == 0 else 0.0
                continue
            tail = t / r ** (d + alpha + 2.0 * (m - n))
            total += r ** power * min(tail, bulk)
        return total

    def kernel_derivative(
        self,
        law: StableLaw,
        t: float,
        x,
        m: int,
        tol: Optional[float] = None,
        method: str = 'quadrature',
        cross_check: bool = False,
    ) -> float:
        """
        ∂^m p̂ / ∂x_1^m (t, x)

        :param method: 'quadrature' (적분식 미분) 또는 'finite-difference' (Richardson)
        :param cross_check: 두 방법을 모두 계산하고 불일치 시 DerivativeMismatch
        """
        if m not in (0, 1, 2, 3, 4):
            raise ValueError('m must be in {0, 1, 2, 3, 4}')
        if not t > 0:
            raise ValueError('t must be positive')
        tol = tol or default_tol(law)
        point = self._point(law, x)
        if method == 'finite-difference':
            return self._derivative_fd(law, t, point, m, tol)[0]
        if method != 'quadrature':
            raise ValueError(f'unknown method {method}')
        value = self._derivative_quadrature(law, t, point, m, tol)
        if cross_check and m > 0:
            fd, fd_error = self._derivative_fd(law, t, point, m, tol)
            if abs(value - fd) > max(10.0 * tol, 2.0 * fd_error):
                raise DerivativeMismatch(value, fd, tol)
        return value

    def _derivative_quadrature(self, law: StableLaw, t: float, point: np.ndarray, m: int, tol: float) -> float:
        d, alpha = law.dim, law.alpha
        if m == 0:
            return self.heat_kernel(law, KernelQuery(t=t, x=point, tol=tol))
        if alpha == 2.0:
            base = self.heat_kernel_closed_form(law, t, point)
            u = point[0] / math.sqrt(2.0 * t)
            coeffs = np.zeros(m + 1)
            coeffs[m] = 1.0
            return float((-1.0) ** m * (2.0 * t) ** (-m / 2.0) * hermite_e.hermeval(u, coeffs) * base)
        _check_quadrature_range(alpha)
        scale = t ** (-1.0 / alpha)
        factor = t ** (-(d + m) / alpha)
        unit_tol = max(tol / factor, KERNEL['tol-floor'])
        reduced = point * scale
        if d == 1:
            return factor * _derivative_1d(alpha, m, float(reduced[0]), unit_tol)
        # ∂_r f_n = -2π r f_{n+2} 를 이용한 Hermite형 전개
        r = float(np.linalg.norm(reduced))
        x1 = float(reduced[0])
        total = 0.0
        for j in range(m // 2 + 1):
            coef = math.factorial(m) / (math.factorial(j) * math.factorial(m - 2 * j) * 2 ** j)
            weight = coef * x1 ** (m - 2 * j) * (-2.0 * math.pi) ** (m - j)
            if weight == 0.0:
                continue
            n = d + 2 * (m - j)
            total += weight * _radial(alpha, n, 1.0, r, max(unit_tol / abs(weight), KERNEL['tol-floor']))
        return factor * total

    def _derivative_fd(self, law: StableLaw, t: float, point: np.ndarray, m: int, tol: float) -> Tuple[float, float]:
        e1 = np.zeros(law.dim)
        e1[0] = 1.0
        step = 0.05 * (t ** (1.0 / law.alpha) + 0.2 * float(np.linalg.norm(point)))
        fd_tol = max(min(tol, 1e-13), KERNEL['tol-floor'])

        def f(h):
            return self.heat_kernel(law, KernelQuery(t=t, x=point + h * e1, tol=fd_tol))

        return richardson_derivative(f, m, step, levels=3)

    def tail_mass(self, law: StableLaw, t: float, radius: float, tol: Optional[float] = None) -> float:
        """
        P(|X_t| > radius)
        """
        if not t > 0:
            raise ValueError('t must be positive')
        if radius <= 0:
            return 1.0
        tol = tol or default_tol(law)
        d, alpha = law.dim, law.alpha
        if alpha == 2.0:
            return float(special.gammaincc(d / 2.0, radius ** 2 / (4.0 * t)))
        if alpha == 1.0 and d == 1:
            return 1.0 - 2.0 / math.pi * math.atan(radius / t)
        _check_quadrature_range(alpha)
        r1 = radius * t ** (-1.0 / alpha)
        return _unit_tail(alpha, d, r1, max(tol, KERNEL['tol-floor']))

    def stable_cdf(self, law: StableLaw, t: float, x: float, tol: Optional[float] = None) -> float:
        """
        d=1 누적분포함수
        """
        if law.dim != 1:
            raise ValueError('stable_cdf is one-dimensional')
        if x == 0:
            return 0.5
        if law.alpha == 2.0:
            return float(special.ndtr(x / math.sqrt(2.0 * t)))
        if law.alpha == 1.0:
            return 0.5 + math.atan(x / t) / math.pi
        tail = self.tail_mass(law, t, abs(x), tol)
        return 0.5 + math.copysign(1.0 - tail, x) / 2.0

    def recommended_half_width(self, law: StableLaw, t: float, tol: float) -> float:
        """
        tail_mass(t, L) ≤ tol 인 가장 작은 L (상대 1e-3 정밀도)
        """
        lo, hi = 0.0, max(t ** (1.0 / law.alpha), 1e-3)
        while self.tail_mass(law, t, hi) > tol:
            lo, hi = hi, 2.0 * hi
        while hi - lo > 1e-3 * hi:
            mid = 0.5 * (lo + hi)
            if self.tail_mass(law, t, mid) > tol:
                lo = mid
            else:
                hi = mid
        return hi

    def radial_profile(self, law: StableLaw, t: float, radii: Iterable[float], tol: Optional[float] = None) -> np.ndarray:
        """
        e_1 방향 ray 위의 p̂(t, r e_1)
        """
        radii = np.asarray(list(radii), dtype=float)
        points = np.zeros((len(radii), law.dim))
        points[:, 0] = radii
        return self.heat_kernel_values(law, t, points, tol)


@lru_cache(maxsize=KERNEL['cache-size'])
def _unit_tail(alpha: float, d: int, r: float, tol: float) -> float:
    """
    unit-time 꼬리 확률 = 1 - (2^{1-d} r^d / (Γ(d/2)Γ(d/2+1))) ∫ k^{d-1} e^{-k^alpha} Λ_{d/2}(k r) dk
    """
    if d == 1 and r >= KERNEL['series-radius']:
        value = tail_series(alpha, r, tol)
        if value is not None:
            return min(max(value, 0.0), 1.0)
    coef = 2.0 ** (1 - d) * r ** d / (math.gamma(d / 2.0) * math.gamma(d / 2.0 + 1.0))
    inner_tol = tol / coef
    k_max = cutoff(d - 1.0, alpha, 1.0, inner_tol * 1e-2)
    value, _ = oscillatory_integral(
        power_exponential(d - 1.0, alpha, 1.0), NormalizedBessel(d / 2.0), r, k_max, inner_tol
    )
    return min(max(1.0 - coef * value, 0.0), 1.0)


def sweep_points(law: StableLaw, times: Sequence[float], radii: Sequence[float], max_reduced: float = 1e2):
    """
    (t, r) 격자 중 r t^{-1/alpha} ≤ max_reduced 인 점들
    """
    for t in times:
        for r in radii:
            if r * t ** (-1.0 / law.alpha) <= max_reduced:
                yield float(t), float(r)
