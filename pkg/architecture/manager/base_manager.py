from abc import ABC, ABCMeta


class BaseManager(metaclass=ABCMeta):
    """
    모든 Manager의 최상위
    """
    pass

class FrontendManager(BaseManager, ABC):
    """
    CLI command가 직접 호출하는 Manager
    설정 검증, 여러 BackendManager의 조합을 담당한다.
    """
    pass

class BackendManager(BaseManager, ABC):
    """
    수치 계산을 담당하는 Manager
    상태를 갖지 않으며 (pure) 여러 thread에서 동시에 호출되어도 된다.
    """
    pass
