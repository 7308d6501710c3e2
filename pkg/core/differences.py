"""
유한 차분 도구

커널 도함수 cross-check (Richardson 외삽)과 격자 위 도함수 (smoothness probe)에서 공통으로 쓴다.
"""
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np


def fornberg_weights(z: float, x: np.ndarray, m: int) -> np.ndarray:
    """
    임의 노드 x 위에서 z 지점의 m계 도함수 가중치

    :param z: 도함수를 구할 위치
    :param x: stencil 노드
    :param m: 도함수 차수
    :return: len(x) 길이의 가중치
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    c = np.zeros((n, m + 1))
    c1, c4 = 1.0, x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2, c5, c4 = 1.0, c4, x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


@lru_cache(maxsize=64)
def central_weights(order: int, accuracy: int = 2) -> Tuple[np.ndarray, np.ndarray]:
    """
    정수 offset 위의 중심 차분 가중치

    :param order: 도함수 차수
    :param accuracy: 정확도 차수 (짝수)
    :return: (offsets, weights)
    """
    if accuracy % 2:
        raise ValueError('accuracy must be even')
    points = 2 * ((order + 1) // 2) - 1 + accuracy
    half = points // 2
    offsets = np.arange(-half, half + 1)
    weights = fornberg_weights(0.0, offsets.astype(float), order)
    # 대칭 stencil의 반올림 잡음 제거
    weights[np.abs(weights) < 1e-13 * np.abs(weights).max()] = 0.0
    return offsets, weights


def periodic_derivative(values: np.ndarray, spacing: float, order: int, axis: int = 0,
                        accuracy: int = 8) -> np.ndarray:
    """
    주기 격자 위 중심 차분 도함수
    """
    offsets, weights = central_weights(order, accuracy)
    out = np.zeros_like(values, dtype=float)
    for offset, weight in zip(offsets, weights):
        if weight:
            out += weight * np.roll(values, -int(offset), axis=axis)
    return out / spacing ** order


def richardson_derivative(f: Callable[[float], float], order: int, step: float,
                          levels: int = 3) -> Tuple[float, float]:
    """
    f(h)의 h=0에서의 order계 도함수를 2차 중심 차분 + Richardson 외삽으로 계산

    :param f: offset h를 받는 스칼라 함수
    :param step: 시작 step
    :param levels: step 절반 횟수 (외삽 단계 수)
    :return: (값, 오차 추정)
    """
    offsets, weights = central_weights(order, 2)
    table = []
    for level in range(levels):
        h = step / 2 ** level
        row = [sum(w * f(o * h) for o, w in zip(offsets, weights) if w) / h ** order]
        # 오차는 h^2, h^4, ... 로 전개됨
        for j in range(1, level + 1):
            factor = 4 ** j
            row.append((factor * row[j - 1] - table[level - 1][j - 1]) / (factor - 1))
        table.append(row)
    best = table[-1][-1]
    if levels > 1:
        error = abs(best - table[-2][-1])
    else:
        error = float('inf')
    return float(best), float(error)
