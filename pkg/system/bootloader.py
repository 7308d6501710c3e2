import logging
import os

from core.schemas import RunConfig
from settings.base import LOGGING, OUTPUT


class Bootloader:

    """
    CLI 실행 시 기본적인 세팅을 담당한다.
    Pytest에서도 쓰인다.

    Directory Setting
    $FRACOU_OUTPUT_DIR (기본 runs)
        kernel
            resolved_config.json
            kernel.csv, kernel.json
        solve
            resolved_config.json
            field_t0.csv, field_t0.json, ...
        simulate
        verify
    """

    @staticmethod
    def init_logging(level: str = None):
        """
        root logger 설정 (stderr), 데이터 출력은 stdout 을 쓴다.
        """
        logging.basicConfig(level=(level or LOGGING['level']).upper(), format=LOGGING['format'], force=True)

    @staticmethod
    def output_dir(config: RunConfig) -> str:
        """
        --out 이 없으면 $FRACOU_OUTPUT_DIR/<command>
        """
        return config.out or os.path.join(OUTPUT['root'], config.command)

    @staticmethod
    def write_resolved_config(directory: str, config: RunConfig) -> str:
        """
        실행 시각 같은 비결정적 값은 넣지 않는다.
        """
        path = os.path.join(directory, 'resolved_config.json')
        with open(path, 'w') as f:
            # --out 은 빼서 --config 로 다시 실행할 수 있게
            f.write(config.json(exclude={'out'}, indent=2, sort_keys=True))
            f.write('\n')
        return path
