import logging
import os
import shutil
import tempfile
from contextlib import contextmanager

from core.exc import UsageError

logger = logging.getLogger(__name__)


@contextmanager
def atomic_output(target: str):
    """
    staging 디렉토리에 쓰고 성공했을 때만 target 으로 rename

    예외가 나면 staging 을 지우고 다시 던지므로 target 에는 부분 결과가 남지 않는다.
    """
    target = os.path.abspath(target)
    if os.path.exists(target) and os.listdir(target):
        raise UsageError(f'output directory {target} already exists and is not empty')
    parent = os.path.dirname(target)
    os.makedirs(parent, exist_ok=True)
    staging = tempfile.mkdtemp(prefix=f'.{os.path.basename(target)}.', dir=parent)
    os.chmod(staging, 0o755)
    try:
        yield staging
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    if os.path.isdir(target):
        os.rmdir(target)
    os.replace(staging, target)
    logger.debug('committed %s', target)
