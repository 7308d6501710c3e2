import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv
load_dotenv()

from core.exc import (
    DerivativeMismatch,
    GridHeadroomError,
    GridMismatch,
    NotContinuityPoint,
    QuadratureNonConvergence,
    RouteMismatch,
    TailBudgetExceeded,
    UnsupportedDimension,
    UnsupportedStabilityIndex,
    UsageError,
)
from core.init import init_app
from core.schemas import RunConfig
from middlewares.atomic_output import atomic_output
from system.bootloader import Bootloader

logger = logging.getLogger('fracou')

NUMERICAL_ERRORS = (
    GridHeadroomError,
    TailBudgetExceeded,
    QuadratureNonConvergence,
    RouteMismatch,
    DerivativeMismatch,
    UnsupportedStabilityIndex,
    UnsupportedDimension,
    NotContinuityPoint,
    GridMismatch,
)


def main(argv: Optional[List[str]] = None) -> int:
    """
    COMMAND LIST

    kernel: stable heat kernel / OU kernel 표
    solve: 격자 위의 해 snapshot
    simulate: 입자 ensemble 과 히스토그램
    verify: 검증 suite, report

    exit code
        0: 성공
        1: verify 에서 실패한 check 가 있음
        2: 잘못된 입력 (flag, config 파일, 출력 디렉토리)
        3: 수치 오류 (격자 여유, tail 예산, quadrature 수렴 등)
    """
    parser = init_app()
    try:
        args = vars(parser.parse_args(argv))
    except SystemExit as e:
        return int(e.code or 0)

    handler = args.pop('handler')
    Bootloader.init_logging(args.pop('log_level', None))
    config_path = args.pop('config_path', None)

    try:
        config = RunConfig.resolve(args, config_path)
        with atomic_output(Bootloader.output_dir(config)) as staging:
            Bootloader.write_resolved_config(staging, config)
            code = handler(config, staging)
    except NUMERICAL_ERRORS as e:
        logger.error('%s: %s', type(e).__name__, e)
        return 3
    except (UsageError, ValueError) as e:
        # pydantic ValidationError 도 ValueError
        logger.error('%s', e)
        return 2
    return code


if __name__ == '__main__':
    sys.exit(main())
