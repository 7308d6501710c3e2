import argparse
from typing import Callable, List, Optional, Tuple


class CommandRouter:
    """
    subcommand 하나의 인자와 handler 묶음

    views.py 에서 만들고 apps/routers.py 에 등록한다.
    handler 는 (RunConfig, 출력 디렉토리) 를 받아 exit code 를 돌려준다.
    """

    def __init__(self, name: str, help: str):
        self.name = name
        self.help = help
        self.arguments: List[Tuple[tuple, dict]] = []
        self.handler: Optional[Callable] = None

    def argument(self, *flags, **kwargs) -> 'CommandRouter':
        self.arguments.append((flags, kwargs))
        return self

    def command(self, func: Callable) -> Callable:
        if self.handler is not None:
            raise RuntimeError(f'{self.name}: handler already registered')
        self.handler = func
        return func

    def register(self, subparsers, parents: List[argparse.ArgumentParser]) -> argparse.ArgumentParser:
        # 주지 않은 flag 는 namespace 에 남기지 않는다 (config 파일 값이 살아남도록)
        parser = subparsers.add_parser(
            self.name, help=self.help, parents=parents, argument_default=argparse.SUPPRESS,
        )
        for flags, kwargs in self.arguments:
            parser.add_argument(*flags, **kwargs)
        parser.set_defaults(handler=self.handler, command=self.name)
        return parser
