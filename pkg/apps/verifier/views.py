import logging
import os

from apps.verifier.schemas import SuiteConfig
from apps.verifier.utils.managers import VerifierManager
from apps.verifier.utils.queries.report_storage_query import ReportStorageQuery, render_table
from architecture.router.command_router import CommandRouter
from core.schemas import RunConfig

logger = logging.getLogger(__name__)

verify_router = (
    CommandRouter('verify', help='run the verification suite and write a report')
    .argument('--suite', choices=['quick', 'full'], help='quick or full')
    .argument('--alphas', type=float, nargs='+', help='stability indices to check')
    .argument('--dim', type=int, help='dimension for the kernel estimate checks')
    .argument('--points', type=int, help='grid points for the solution suite')
    .argument('--samples', type=int, help='Monte Carlo particles')
    .argument('--seed', type=int, help='master seed')
    .argument('--workers', type=int, help='checks run in parallel')
    .argument('--negative-control', dest='negative_control', action='store_true',
              help='add the too-small grid whose tail failure is expected')
    .argument('--freeze-baselines', dest='freeze_baselines', action='store_true',
              help='write the measured constants as regression baselines')
)


class VerifyView:
    """
    verify --suite quick|full [--negative-control] [--freeze-baselines]

    report.json / report.txt, 실패한 check 가 있으면 exit 1
    """

    @staticmethod
    @verify_router.command
    def verify(config: RunConfig, out: str) -> int:
        suite = SuiteConfig(
            suite=config.suite,
            alphas=config.alphas or SuiteConfig.__fields__['alphas'].default,
            dim=config.dim,
            points=config.points,
            mc_samples=config.sample_count,
            seed=config.seed,
            negative_control=config.negative_control,
            workers=config.workers,
        )
        manager = VerifierManager()
        # freeze 할 때는 기존 baseline 과 비교하지 않는다
        report = manager.run_suite(suite, use_baselines=not config.freeze_baselines)
        ReportStorageQuery().create(os.path.join(out, 'report'), report)
        print(render_table(report), end='')
        if config.freeze_baselines:
            if report.passed:
                path = manager.freeze(report)
                logger.info('baselines written to %s', path)
            else:
                logger.error('not freezing baselines from a failing report')
        return 0 if report.passed else 1
