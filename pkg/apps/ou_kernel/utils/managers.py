import math
from typing import Optional, Type

import numpy as np

from apps.ou_kernel.schemas import OUKernelQuery, TimeChange
from apps.stable_kernel.schemas import KernelQuery, StableLaw
from apps.stable_kernel.utils.managers import StableKernelManager, default_tol
from architecture.manager.backend_manager import KernelManager
from core.exc import RouteMismatch
from settings.base import OU


class OUKernelManager(KernelManager):
    """
    OU drift 분수 Fokker-Planck 커널

    p(t, x, y) = e^{dt} p̂(t̃, e^t x - y) = p̂(s, x - e^{-t} y)
    t̃ = (e^{alpha t} - 1)/alpha, s = (1 - e^{-alpha t})/alpha
    """
    kernel: Type[StableKernelManager] = StableKernelManager

    def evaluate(self, law: StableLaw, q: OUKernelQuery) -> float:
        return self.ou_kernel(law, q)

    def derivative(self, law: StableLaw, q: OUKernelQuery, m: int) -> float:
        return self.ou_kernel_gradient(law, q, m)

    @staticmethod
    def time_dilation(alpha: float, t: float) -> float:
        """
        (e^{alpha t} - 1) / alpha, 작은 alpha t 에서도 expm1로 정확하게 계산
        """
        if not t > 0:
            raise ValueError('t must be positive')
        try:
            return math.expm1(alpha * t) / alpha
        except OverflowError:
            return math.inf

    @staticmethod
    def effective_time(alpha: float, t: float) -> float:
        """
        (1 - e^{-alpha t}) / alpha
        """
        if not t > 0:
            raise ValueError('t must be positive')
        return -math.expm1(-alpha * t) / alpha

    def time_change(self, alpha: float, t: float) -> TimeChange:
        return TimeChange(
            t=t,
            alpha=alpha,
            dilated=self.time_dilation(alpha, t),
            effective=self.effective_time(alpha, t),
        )

    @staticmethod
    def reduced_only(law: StableLaw, t: float) -> bool:
        """
        t > 30/alpha 이면 e^{dt}, t̃ 가 너무 커서 reduced route만 쓴다.
        """
        return law.alpha * t > OU['switch-alpha-t']

    def ou_kernel_dilated(self, law: StableLaw, q: OUKernelQuery) -> float:
        d = law.dim
        factor = math.exp(d * q.t)
        z = math.exp(q.t) * np.asarray(q.x) - np.asarray(q.y)
        tilde = self.time_dilation(law.alpha, q.t)
        return factor * self.kernel().heat_kernel(law, KernelQuery(t=tilde, x=z, tol=q.tol / factor))

    def ou_kernel_reduced(self, law: StableLaw, q: OUKernelQuery) -> float:
        z = np.asarray(q.x) - math.exp(-q.t) * np.asarray(q.y)
        s = self.effective_time(law.alpha, q.t)
        return self.kernel().heat_kernel(law, KernelQuery(t=s, x=z, tol=q.tol))

    def ou_kernel(self, law: StableLaw, q: OUKernelQuery, check_routes: bool = True) -> float:
        """
        두 route를 모두 계산해서 2 tol 이내로 같은지 확인한 뒤 dilation route 값을 돌려준다.

        :param check_routes: False면 reduced route 하나만 계산
        :raises RouteMismatch: 두 route가 다를 때
        """
        reduced = self.ou_kernel_reduced(law, q)
        if not check_routes or self.reduced_only(law, q.t):
            return reduced
        dilated = self.ou_kernel_dilated(law, q)
        if abs(dilated - reduced) > 2.0 * q.tol:
            raise RouteMismatch(dilated, reduced, q.tol)
        return dilated

    def ou_kernel_values(self, law: StableLaw, t: float, x, ys, tol: Optional[float] = None) -> np.ndarray:
        """
        고정된 x에서 여러 출발점 ys 에 대한 p(t, x, y_j) (reduced route)
        """
        ys = np.asarray(ys, dtype=float).reshape(-1, law.dim)
        z = np.asarray(x, dtype=float).reshape(1, law.dim) - math.exp(-t) * ys
        s = self.effective_time(law.alpha, t)
        return self.kernel().heat_kernel_values(law, s, z, tol or default_tol(law))

    def ou_kernel_gradient(self, law: StableLaw, q: OUKernelQuery, m: int, route: str = 'dilation') -> float:
        """
        ∂^m p / ∂x_1^m = e^{dt} e^{mt} (∂^m p̂)(t̃, e^t x - y)
        e^t x - y 에서 계산하므로 별도의 (-1)^m 부호가 필요 없다.
        """
        if m not in (1, 2):
            raise ValueError('m must be 1 or 2')
        if route not in ('dilation', 'reduced'):
            raise ValueError(f'unknown route {route}')
        kernel = self.kernel()
        if route == 'reduced' or self.reduced_only(law, q.t):
            z = np.asarray(q.x) - math.exp(-q.t) * np.asarray(q.y)
            s = self.effective_time(law.alpha, q.t)
            return kernel.kernel_derivative(law, s, z, m, q.tol)
        factor = math.exp((law.dim + m) * q.t)
        z = math.exp(q.t) * np.asarray(q.x) - np.asarray(q.y)
        tilde = self.time_dilation(law.alpha, q.t)
        return factor * kernel.kernel_derivative(law, tilde, z, m, q.tol / factor)

    def stationary_density(self, law: StableLaw, x, tol: Optional[float] = None) -> float:
        """
        t → ∞ 에서 s → 1/alpha 이므로 불변 밀도는 p̂(1/alpha, ·)
        """
        return self.kernel().heat_kernel(law, KernelQuery(t=1.0 / law.alpha, x=x, tol=tol or default_tol(law)))
