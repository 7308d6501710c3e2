from abc import ABCMeta
from typing import Any, Callable


class Criterion(metaclass=ABCMeta):
    """
    판정 조건

    &, |, ~ 로 조합하며 최종 bool 값이 check의 verdict가 된다.
    """
    checked: bool
    func: Callable
    ref_v: Any = None

    def __init__(self, v: Any):
        self.checked = bool(self.func(self.ref_v, v))

    def __bool__(self):
        return self.checked

    def __and__(self, o):
        if bool(self) is False:
            o.checked = False
        return o

    def __or__(self, o):
        if bool(self):
            o.checked = True
        return o

    def __invert__(self):
        self.checked = not self.checked
        return self
