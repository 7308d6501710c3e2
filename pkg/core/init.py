import argparse

from apps.routers import COMMANDS


def init_app() -> argparse.ArgumentParser:
    """
    CLI 실행기

    apps/routers.py 에 등록된 command 마다 subparser 를 만든다.
    """
    parser = argparse.ArgumentParser(
        prog='fracou',
        description='stable heat kernels, the OU fractional Fokker-Planck kernel and its verification',
    )
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument('--config', dest='config_path', help='JSON RunConfig (flags override it)')
    common.add_argument('--out', help='output directory (default $FRACOU_OUTPUT_DIR/<command>)')
    common.add_argument('--log-level', dest='log_level', help='logging level')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for router in COMMANDS:
        router.register(subparsers, [common])
    return parser
