import math

from architecture.query.criterion import Criterion


class IsFinite(Criterion):
    """
    유한한 값인지 체크 (nan, inf 제외)
    """
    func = lambda _, __, v: v is not None and math.isfinite(v)


class IsPositive(Criterion):
    """
    0보다 큰 값인지 체크
    """
    func = lambda _, __, v: v is not None and v > 0


class IsBelow(Criterion):
    """
    기준값보다 작은지 체크
    """
    func = lambda _, limit, v: v is not None and v < limit

    def __init__(self, v: float, limit: float):
        self.ref_v = limit
        super().__init__(v)


class IsAtLeast(Criterion):
    """
    기준값 이상인지 체크
    """
    func = lambda _, limit, v: v is not None and v >= limit

    def __init__(self, v: float, limit: float):
        self.ref_v = limit
        super().__init__(v)


class WithinDrift(Criterion):
    """
    baseline 대비 상대 변화량이 허용치 이내인지 체크
    baseline이 없으면 (아직 freeze 전) 통과
    """
    func = lambda _, ref, v: ref[0] is None or abs(v - ref[0]) <= ref[1] * abs(ref[0])

    def __init__(self, v: float, baseline, drift: float):
        self.ref_v = (baseline, drift)
        super().__init__(v)


class IsTrue(Criterion):
    func = lambda _, __, v: bool(v)
