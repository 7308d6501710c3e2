from typing import Any, Dict, List, Optional

from pydantic import BaseModel, validator

VERDICTS = ('pass', 'fail', 'expected-fail')
SUITES = ('quick', 'full')


class CheckRecord(BaseModel):
    """
    check 하나의 결과

    :param anchor: 확인하는 주장
    :param sweep: 파라미터 sweep 설명
    :param measured: 측정 상수 (frozen baseline 비교 대상 포함)
    :param tolerance: 판정 기준
    :param baseline: freeze된 값 (없으면 None, report에는 "not frozen")
    """
    name: str
    anchor: str
    sweep: Dict[str, Any] = {}
    measured: Dict[str, Any] = {}
    tolerance: Dict[str, Any] = {}
    verdict: str
    notes: List[str] = []
    baseline: Optional[Dict[str, float]] = None

    @validator('verdict')
    def validate_verdict(cls, verdict: str):
        if verdict not in VERDICTS:
            raise ValueError(f'verdict는 {VERDICTS} 중 하나여야 합니다.')
        return verdict

    @property
    def ok(self) -> bool:
        # expected-fail 은 negative control 이 제대로 실패했다는 뜻
        return self.verdict != 'fail'


class VerificationReport(BaseModel):
    suite: str
    records: List[CheckRecord]
    environment: Dict[str, Any] = {}

    @property
    def passed(self) -> bool:
        return all(record.ok for record in self.records)

    def frozen_constants(self) -> Dict[str, Dict[str, float]]:
        """
        check 이름별 baseline 후보 (measured 중 'constants'에 올라간 값)
        """
        return {
            record.name: dict(record.measured['constants'])
            for record in self.records
            if record.measured.get('constants')
        }


class SuiteConfig(BaseModel):
    """
    verify 실행 설정

    quick: 성긴 sweep, MC 표본 적게
    full: 모든 check, smoothness 1..4계
    """
    suite: str = 'quick'
    alphas: List[float] = [0.6, 1.0, 1.5, 2.0]
    dim: int = 1
    points: int = 512
    mc_samples: int = 200_000
    seed: int = 42
    negative_control: bool = False
    workers: int = 1

    @validator('suite')
    def validate_suite(cls, suite: str):
        if suite not in SUITES:
            raise ValueError(f'suite는 {SUITES} 중 하나여야 합니다.')
        return suite

    @validator('alphas', each_item=True)
    def validate_alpha(cls, alpha: float):
        if not (0.3 <= alpha <= 2.0):
            raise ValueError('alpha는 [0.3, 2] 범위여야 합니다.')
        return float(alpha)

    @validator('points')
    def validate_points(cls, points: int):
        if points < 16 or points & (points - 1):
            raise ValueError('points는 16 이상의 2의 거듭제곱이어야 합니다.')
        return points

    @validator('mc_samples', 'workers')
    def validate_positive(cls, v: int):
        if v < 1:
            raise ValueError('양수여야 합니다.')
        return v

    @property
    def is_full(self) -> bool:
        return self.suite == 'full'
