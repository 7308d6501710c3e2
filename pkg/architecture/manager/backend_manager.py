from abc import ABC, abstractmethod
from typing import Any

from architecture.manager.base_manager import BackendManager


class KernelManager(BackendManager, ABC):
    """
    커널 평가용 백엔드 매니저

    점 단위 평가(evaluate)와 첫 번째 좌표 방향 m계 도함수(derivative)를 제공해야 한다.
    """

    @abstractmethod
    def evaluate(self, *args, **kwargs) -> float:
        pass

    @abstractmethod
    def derivative(self, *args, **kwargs) -> float:
        pass


class CheckManager(BackendManager, ABC):
    """
    검증 항목 하나를 실행하는 매니저

    :param name: report에 기록되는 check 이름
    :param anchor: check가 확인하는 주장 (report에 그대로 기록)
    """
    name: str
    anchor: str

    @abstractmethod
    def run(self, *args, **kwargs) -> Any:
        pass
