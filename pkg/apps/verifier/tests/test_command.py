import json

import pytest

from apps.verifier.utils.queries.baseline_query import BaselineQuery
from apps.verifier.utils.queries.report_storage_query import ReportStorageQuery
from main import main
from settings.base import VERIFIER


@pytest.fixture(scope='module')
def gaussian_run(tmp_path_factory):
    root = tmp_path_factory.mktemp('verify')
    config = root / 'config.json'
    config.write_text(json.dumps({'alphas': [2.0], 'points': 512, 'samples': 200000}))
    out = root / 'report'
    code = main(['verify', '--config', str(config), '--points', '128', '--negative-control', '--out', str(out)])
    return code, out


def test_verify_writes_report(gaussian_run):
    code, out = gaussian_run
    report = ReportStorageQuery().read(str(out / 'report'))
    assert report is not None
    assert code == 0
    assert report.passed
    assert all(record.ok for record in report.records), [r.name for r in report.records if not r.ok]
    assert 'suite=quick result=' in (out / 'report.txt').read_text()
    names = [record.name for record in report.records]
    assert 'negative-control[alpha=2,d=1]' in names


def test_verify_default_quick_suite_passes(tmp_path):
    out = tmp_path / 'quick'
    assert main(['verify', '--out', str(out)]) == 0
    report = ReportStorageQuery().read(str(out / 'report'))
    assert report.suite == 'quick'
    assert all(record.verdict == 'pass' for record in report.records), [
        (record.name, record.measured) for record in report.records if record.verdict != 'pass'
    ]
    names = {record.name for record in report.records}
    for alpha in ('0.6', '1', '1.5', '2'):
        assert f'solution-suite[alpha={alpha},d=1]' in names
    assert 'result=PASS' in (out / 'report.txt').read_text()


def test_verify_flags_override_config(gaussian_run):
    _, out = gaussian_run
    resolved = json.loads((out / 'resolved_config.json').read_text())
    assert resolved['points'] == 128
    assert resolved['alphas'] == [2.0]
    assert resolved['samples'] == 200000
    report = ReportStorageQuery().read(str(out / 'report'))
    assert report.environment['points'] == 128
    assert report.environment['mc_samples'] == 200000


def test_verify_rejects_bad_suite(tmp_path):
    assert main(['verify', '--suite', 'tiny', '--out', str(tmp_path / 'v')]) == 2


def test_verify_rejects_bad_alpha(tmp_path):
    # kernel 은 (0, 2] 이지만 verify 는 [0.3, 2]
    assert main(['verify', '--alphas', '0.1', '--out', str(tmp_path / 'v')]) == 2


def test_freeze_baselines_file(tmp_path, monkeypatch):
    path = tmp_path / 'golden' / 'baselines.json'
    monkeypatch.setitem(VERIFIER, 'baselines', str(path))
    out = tmp_path / 'v'
    code = main(['verify', '--alphas', '2', '--points', '64', '--samples', '200000',
                 '--freeze-baselines', '--out', str(out)])
    report = ReportStorageQuery().read(str(out / 'report'))
    if report.passed:
        assert code == 0
        frozen = BaselineQuery().read(str(path))
        assert 'two-sided-estimate[alpha=2,d=1]' in frozen['checks']
    else:
        assert code == 1
        assert not path.exists()
