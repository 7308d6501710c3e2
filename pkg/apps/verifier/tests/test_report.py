import json
import math

import pytest
from pydantic import ValidationError

from apps.stable_kernel.schemas import StableLaw
from apps.verifier.schemas import CheckRecord, SuiteConfig, VerificationReport
from apps.verifier.utils.managers import TwoSidedEstimateCheck, VerifierManager
from apps.verifier.utils.queries.baseline_query import CONVENTION, BaselineQuery
from apps.verifier.utils.queries.report_storage_query import ReportStorageQuery, render_table


def make_record(name: str, verdict: str = 'pass', constants=None, baseline=None) -> CheckRecord:
    measured = {'constants': constants} if constants else {'gap': 1e-7}
    return CheckRecord(name=name, anchor='claim', measured=measured, verdict=verdict, baseline=baseline)


@pytest.fixture(scope='module')
def report():
    return VerificationReport(
        suite='quick',
        records=[
            make_record('two-sided-estimate[alpha=1,d=1]', constants={'c1': 0.159, 'c2': 0.318}),
            make_record('derivative-estimate[alpha=1,d=1,m=1]', constants={'C': 0.6366},
                        baseline={'C': 0.6366}),
            make_record('negative-control[alpha=1,d=1]', verdict='expected-fail'),
        ],
        environment={'seed': 42},
    )


def test_record_verdicts():
    with pytest.raises(ValidationError):
        make_record('x', verdict='maybe')
    assert make_record('x', verdict='expected-fail').ok
    assert not make_record('x', verdict='fail').ok


def test_suite_config_validation():
    assert SuiteConfig().alphas == [0.6, 1.0, 1.5, 2.0]
    assert SuiteConfig(suite='full').is_full
    with pytest.raises(ValidationError):
        SuiteConfig(suite='tiny')
    with pytest.raises(ValidationError):
        SuiteConfig(points=500)
    with pytest.raises(ValidationError):
        SuiteConfig(alphas=[0.1])


def test_report_passes_with_expected_failure(report: VerificationReport):
    assert report.passed
    failing = VerificationReport(suite='quick', records=report.records + [make_record('x', verdict='fail')])
    assert not failing.passed


def test_frozen_constants(report: VerificationReport):
    assert report.frozen_constants() == {
        'two-sided-estimate[alpha=1,d=1]': {'c1': 0.159, 'c2': 0.318},
        'derivative-estimate[alpha=1,d=1,m=1]': {'C': 0.6366},
    }


def test_render_table(report: VerificationReport):
    table = render_table(report)
    lines = table.splitlines()
    assert lines[0].split() == ['check', 'verdict', 'measured', 'baseline']
    assert 'not frozen' in lines[2]
    assert 'C=0.6366' in lines[3]
    assert 'expected-fail' in lines[4]
    assert 'suite=quick result=PASS' in table


def test_report_storage(report: VerificationReport, tmp_path):
    root = str(tmp_path / 'report')
    query = ReportStorageQuery()
    path = query.create(root, report)
    with open(path) as f:
        data = json.load(f)
    assert data['suite'] == 'quick'
    assert len(data['records']) == 3
    loaded = query.read(root)
    assert loaded == report
    with pytest.raises(AssertionError):
        query.create(root, report)
    query.destroy(root)
    assert query.read(root) is None


def test_missing_baseline_file(tmp_path):
    baselines = BaselineQuery().read(str(tmp_path / 'none.json'))
    assert baselines['checks'] == {}
    assert baselines['convention'] == CONVENTION


def test_freeze_then_detect_drift(tmp_path):
    path = str(tmp_path / 'golden' / 'baselines.json')
    manager = VerifierManager(path)
    law = StableLaw(alpha=1.0)
    record = TwoSidedEstimateCheck().run(law)
    manager.freeze(VerificationReport(suite='quick', records=[record]))
    frozen = manager.load_baselines()['checks'][record.name]
    assert frozen['c1'] == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-9)
    # 같은 실행은 재현되고, 값을 바꾼 baseline 은 실패
    again = TwoSidedEstimateCheck().run(law, baseline=frozen)
    assert again.verdict == 'pass' and again.notes == []
    tampered = dict(frozen, c2=1.1 * frozen['c2'])
    assert TwoSidedEstimateCheck().run(law, baseline=tampered).verdict == 'fail'


def test_freeze_keeps_calibration(tmp_path):
    path = str(tmp_path / 'baselines.json')
    manager = VerifierManager(path)
    calibration = make_record('subordinator-calibration[alpha=1.5,d=2]')
    calibration.measured['scale'] = 1.003
    manager.freeze(VerificationReport(suite='quick', records=[calibration]))
    data = manager.load_baselines()
    assert data['checks'] == {}
    assert data['subordinator-scale']['measured'] == {'subordinator-calibration[alpha=1.5,d=2]': 1.003}


def test_plan_size(tmp_path):
    manager = VerifierManager(str(tmp_path / 'baselines.json'))
    quick = manager.plan(SuiteConfig(alphas=[1.0], negative_control=True), {})
    # two-sided, derivative m=1,2, gradient, solution suite, mc, negative control, calibration d=2
    assert len(quick) == 8
    full = manager.plan(SuiteConfig(suite='full', alphas=[1.0, 1.5]), {})
    assert len(full) == 2 * 9 + 2
