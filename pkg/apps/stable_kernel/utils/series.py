"""
d=1 대칭 stable 분포의 큰 |x| 전개

f^{(m)}(x) = (1/π) Σ_k (-1)^{k+1+m} Γ(αk+m+1)/k! sin(kπα/2) x^{-αk-1-m}
P(|X| > x) = (2/π) Σ_k (-1)^{k+1} Γ(αk)/k! sin(kπα/2) x^{-αk}

alpha < 1 이면 수렴, alpha > 1 이면 점근 급수이므로 항이 tol 아래로 떨어질 때만 사용한다.
"""
import math
from typing import Optional

from scipy import special

_MAX_TERMS = 80


def _sum_series(alpha: float, x: float, tol: float, shift: float, weight, power_offset: float) -> Optional[float]:
    total = 0.0
    previous = math.inf
    log_x = math.log(x)
    for k in range(1, _MAX_TERMS + 1):
        s = math.sin(k * math.pi * alpha / 2.0)
        log_mag = special.gammaln(alpha * k + shift) - special.gammaln(k + 1.0) \
            - (alpha * k + power_offset) * log_x
        magnitude = math.exp(log_mag) if log_mag > -745.0 else 0.0
        term = weight(k) * s * magnitude
        total += term
        bound = magnitude
        if bound < tol:
            return total
        if bound > previous:
            # 점근 급수가 발산하기 시작
            return None
        previous = bound
    return None


def density_series(alpha: float, x: float, m: int, tol: float) -> Optional[float]:
    """
    unit-time 밀도의 m계 도함수, x > 0

    :return: tol에 도달하지 못하면 None
    """
    value = _sum_series(
        alpha, x, tol * math.pi,
        shift=m + 1.0,
        weight=lambda k: (-1.0) ** (k + 1 + m),
        power_offset=1.0 + m,
    )
    return None if value is None else value / math.pi


def tail_series(alpha: float, x: float, tol: float) -> Optional[float]:
    """
    unit-time 양측 꼬리 확률 P(|X| > x)
    """
    value = _sum_series(
        alpha, x, tol * math.pi / 2.0,
        shift=0.0,
        weight=lambda k: (-1.0) ** (k + 1),
        power_offset=0.0,
    )
    return None if value is None else 2.0 * value / math.pi
