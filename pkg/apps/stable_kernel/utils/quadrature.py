"""
반경 방향 Fourier 역변환 적분기

I = ∫_0^∞ A(k) w(k r) dk 를 진동 인자 w의 연속된 영점 사이 구간(panel)으로 나누어 적분하고,
교대 부분합 수열은 Wynn epsilon 외삽으로 가속한다.
첫 panel은 k^alpha 의 원점 특이성 때문에 scipy quad로, 나머지는 Gauss-Legendre로 계산한다.
"""
import math
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from scipy import integrate, special

from core.exc import QuadratureNonConvergence
from settings.base import KERNEL

Amplitude = Callable[[np.ndarray], np.ndarray]

_GL_NODES, _GL_WEIGHTS = special.roots_legendre(KERNEL['gauss-nodes'])


def sphere_area(n: int) -> float:
    """
    R^n 단위구면 넓이 |S^{n-1}|
    """
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def radial_constant(n: int) -> float:
    """
    f_n(r) = c_n ∫ k^{n-1} e^{-k^alpha} Λ_{n/2-1}(kr) dk 의 상수 c_n = |S^{n-1}| / (2π)^n
    """
    return sphere_area(n) / (2.0 * math.pi) ** n


def normalized_bessel(nu: float, z: np.ndarray) -> np.ndarray:
    """
    Λ_ν(z) = Γ(ν+1) (2/z)^ν J_ν(z), Λ_ν(0) = 1
    """
    z = np.asarray(z, dtype=float)
    if nu == -0.5:
        return np.cos(z)
    if nu == 0.5:
        return np.sinc(z / np.pi)
    out = np.ones_like(z)
    small = np.abs(z) < 1e-6
    out[small] = 1.0 - z[small] ** 2 / (4.0 * (nu + 1.0))
    zz = z[~small]
    out[~small] = special.gamma(nu + 1.0) * (2.0 / zz) ** nu * special.jv(nu, zz)
    return out


class Oscillator:
    """
    진동 인자 w(z)와 그 양의 영점들
    """

    def weight(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, start: int, count: int) -> np.ndarray:
        raise NotImplementedError


class ShiftedCosine(Oscillator):
    """
    w(z) = cos(z + shift)
    """

    def __init__(self, shift: float = 0.0):
        self.shift = shift

    def weight(self, z):
        return np.cos(np.asarray(z, dtype=float) + self.shift)

    def zeros(self, start, count):
        # (j + 1/2)π − shift > 0 인 가장 작은 j 부터
        first = math.floor(self.shift / math.pi - 0.5) + 1
        j = np.arange(first + start, first + start + count, dtype=float)
        return (j + 0.5) * math.pi - self.shift


class NormalizedBessel(Oscillator):
    """
    w(z) = Λ_ν(z); 영점은 McMahon 근사에서 Newton 보정
    """

    def __init__(self, nu: float):
        self.nu = nu

    def weight(self, z):
        return normalized_bessel(self.nu, z)

    def zeros(self, start, count):
        return _bessel_zeros(self.nu, start, count)


@lru_cache(maxsize=256)
def _bessel_zeros(nu: float, start: int, count: int) -> np.ndarray:
    m = np.arange(start + 1, start + count + 1, dtype=float)
    z = (m + nu / 2.0 - 0.25) * math.pi
    if nu in (-0.5, 0.5):
        return z
    for _ in range(6):
        z = z - special.jv(nu, z) / special.jvp(nu, z)
    z.flags.writeable = False
    return z


def power_exponential(power: float, alpha: float, tau: float) -> Amplitude:
    """
    A(k) = k^power e^{-tau k^alpha}
    """
    def amplitude(k):
        k = np.asarray(k, dtype=float)
        with np.errstate(divide='ignore', invalid='ignore', under='ignore'):
            out = np.exp(-tau * k ** alpha)
            if power:
                out = out * k ** power
        return np.where(k > 0, out, 1.0 if power == 0 else 0.0)
    return amplitude


@lru_cache(maxsize=4096)
def cutoff(power: float, alpha: float, tau: float, eps: float) -> float:
    """
    ∫_K^∞ k^power e^{-tau k^alpha} dk ≤ eps 를 만족하는 K
    u = tau k^alpha 치환으로 상위 불완전 감마함수가 된다.
    """
    a = (power + 1.0) / alpha
    log_y = math.log(eps) + math.log(alpha) + a * math.log(tau) - special.gammaln(a)
    if log_y >= 0.0:
        return 0.0
    y = max(math.exp(log_y), 1e-300)
    u = float(special.gammainccinv(a, y))
    return (u / tau) ** (1.0 / alpha)


def wynn_epsilon(partial_sums) -> Tuple[float, float]:
    """
    부분합 수열의 극한을 epsilon 알고리즘으로 추정

    :return: (추정값, 오차 추정) 짝수 열 중 인접한 두 추정이 가장 가까운 것을 고른다.
    """
    s = np.asarray(partial_sums, dtype=float)
    if len(s) < 3:
        return float(s[-1]), math.inf
    previous = np.zeros(len(s) + 1)
    current = s.copy()
    estimates = [s[-1]]
    for k in range(1, len(s)):
        diff = np.diff(current)
        if not np.all(np.isfinite(diff)) or np.any(np.abs(diff) < 1e-300):
            break
        following = previous[1:len(current)] + 1.0 / diff
        previous, current = current, following
        if k % 2 == 0:
            estimates.append(current[-1])
        if len(current) < 2:
            break
    estimates = np.asarray(estimates)
    if len(estimates) < 2:
        return float(s[-1]), float(abs(s[-1] - s[-2]))
    gaps = np.abs(np.diff(estimates))
    best = int(np.argmin(gaps))
    error = gaps[best] + 8.0 * np.finfo(float).eps * abs(estimates[best + 1])
    return float(estimates[best + 1]), float(error)


def finite_integral(f: Callable[[float], float], a: float, b: float, tol: float) -> Tuple[float, float]:
    """
    [a, b] 위의 적분 (비진동 구간)
    원점 근처는 기하급수적으로 구간을 나눠서 k^alpha 특이성을 quad가 처리하게 한다.
    """
    if b <= a:
        return 0.0, 0.0
    edges = [a, min(b, 1.0)] if a == 0.0 else [a]
    while edges[-1] < b:
        edges.append(min(b, 2.0 * edges[-1]))
    pieces = len(edges) - 1
    total, error = 0.0, 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, err = integrate.quad(
            f, lo, hi, epsabs=tol / (4.0 * pieces), epsrel=1e-13, limit=200
        )
        total += value
        error += err
    return total, error


def oscillatory_integral(
    amplitude: Amplitude,
    oscillator: Oscillator,
    r: float,
    k_max: float,
    tol: float,
) -> Tuple[float, float]:
    """
    ∫_0^∞ amplitude(k) w(k r) dk

    :param k_max: 이 너머의 amplitude 적분은 tol에 비해 무시 가능
    :return: (값, 오차 추정)
    :raises QuadratureNonConvergence: panel 예산 안에서 tol에 도달하지 못한 경우
    """
    def integrand(k):
        return float(amplitude(k) * oscillator.weight(k * r))

    if r <= 0.0:
        value, error = finite_integral(lambda k: float(amplitude(k)), 0.0, k_max, tol)
        return value * float(oscillator.weight(0.0)), error

    block = KERNEL['panel-block']
    window = KERNEL['epsilon-window']
    max_panels = KERNEL['max-panels']

    zeros = oscillator.zeros(0, block) / r
    if zeros[0] >= k_max:
        return finite_integral(integrand, 0.0, k_max, tol)

    head, head_error = finite_integral(integrand, 0.0, zeros[0], tol / 4.0)
    sums = [head]
    last_estimate, error = math.nan, math.inf
    start = 0
    while start < max_panels:
        edges = zeros if start == 0 else oscillator.zeros(start, block + 1) / r
        lo, hi = edges[:-1], edges[1:]
        truncated = hi >= k_max
        if np.any(truncated):
            stop = int(np.argmax(truncated))
            lo, hi = lo[:stop + 1], hi[:stop + 1].copy()
            hi[-1] = k_max
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        values = amplitude(nodes) * oscillator.weight(nodes * r)
        panels = half * (values @ _GL_WEIGHTS)
        sums.extend(sums[-1] + np.cumsum(panels))
        if np.any(truncated):
            # k_max 까지 직접 합산 완료
            return float(sums[-1]), head_error + tol * 1e-2
        start += len(panels)
        if len(sums) >= 8:
            estimate, error = wynn_epsilon(sums[-window:])
            if error < tol and abs(estimate - last_estimate) < tol:
                return estimate, error + head_error
            last_estimate = estimate
    raise QuadratureNonConvergence(error, tol)
