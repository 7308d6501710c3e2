import json
import math
import os

import pytest

from apps.stable_kernel.utils.queries.kernel_table_query import KernelTableQuery
from main import main
from settings.base import OUTPUT


@pytest.fixture(scope='module')
def table():
    return KernelTableQuery()


def test_kernel_cauchy_table(tmp_path, table: KernelTableQuery):
    out = str(tmp_path / 'kernel')
    code = main(['kernel', '--alpha', '1', '--dim', '1', '--t', '1', '--x-range', '-5:5:101', '--out', out])
    assert code == 0
    columns, metadata = table.read(os.path.join(out, 'kernel'))
    assert len(columns['x']) == 101
    assert columns['x'][50] == 0.0
    assert columns['value'][50] == pytest.approx(1.0 / math.pi, rel=1e-12)
    assert metadata['alpha'] == 1.0
    assert os.path.isfile(os.path.join(out, 'resolved_config.json'))


def test_kernel_profile_both(tmp_path, table: KernelTableQuery):
    out = str(tmp_path / 'kernel')
    code = main(['kernel', '--alpha', '1', '--t', '0.5', '2', '--x-range', '0:4:5', '--profile', 'both', '--out', out])
    assert code == 0
    columns, _ = table.read(os.path.join(out, 'kernel'))
    assert len(columns['t']) == 10
    assert (columns['ratio'] > 0).all()
    assert (columns['ratio'] <= 1.0 / math.pi + 1e-12).all()


def test_kernel_ou_needs_source_point(tmp_path):
    out = tmp_path / 'kernel'
    assert main(['kernel', '--alpha', '1', '--ou', '--out', str(out)]) == 2
    assert not out.exists()


def test_kernel_ou_table(tmp_path, table: KernelTableQuery):
    out = str(tmp_path / 'ou')
    code = main(['kernel', '--alpha', '2', '--ou', '--y', '0.5', '--t', '1', '--x-range', '-1:1:3', '--out', out])
    assert code == 0
    columns, metadata = table.read(os.path.join(out, 'kernel'))
    # alpha=2: p(t, x, y) = N(e^{-t} y, 2 s), s = (1 - e^{-2t}) / 2
    s = -math.expm1(-2.0) / 2.0
    x = columns['x'][1]
    expected = math.exp(-(x - 0.5 * math.exp(-1.0)) ** 2 / (4.0 * s)) / math.sqrt(4.0 * math.pi * s)
    assert columns['value'][1] == pytest.approx(expected, rel=1e-8)
    assert metadata['y'] == [0.5]


def test_malformed_range_is_usage_error(tmp_path):
    out = tmp_path / 'kernel'
    assert main(['kernel', '--x-range', '5:-5:10', '--out', str(out)]) == 2
    assert main(['kernel', '--x-range', 'abc', '--out', str(out)]) == 2
    assert not out.exists()


def test_unknown_flag_is_usage_error():
    assert main(['kernel', '--no-such-flag']) == 2


def test_flags_override_config_file(tmp_path):
    config = tmp_path / 'config.json'
    config.write_text(json.dumps({'alpha': 2.0, 'times': [0.5], 'x_range': '-1:1:3', 'seed': 5}))
    out = tmp_path / 'kernel'
    code = main(['kernel', '--config', str(config), '--alpha', '1', '--out', str(out)])
    assert code == 0
    resolved = json.loads((out / 'resolved_config.json').read_text())
    assert resolved['alpha'] == 1.0
    assert resolved['times'] == [0.5]
    assert resolved['seed'] == 5
    assert resolved['command'] == 'kernel'


def test_unreadable_config_file(tmp_path):
    assert main(['kernel', '--config', str(tmp_path / 'missing.json'), '--out', str(tmp_path / 'k')]) == 2


def test_existing_output_directory(tmp_path):
    out = tmp_path / 'kernel'
    out.mkdir()
    (out / 'old.txt').write_text('keep')
    assert main(['kernel', '--alpha', '1', '--x-range', '0:1:2', '--out', str(out)]) == 2
    assert (out / 'old.txt').read_text() == 'keep'


def test_replay_resolved_config(tmp_path, monkeypatch):
    monkeypatch.setitem(OUTPUT, 'root', str(tmp_path / 'runs'))
    first = tmp_path / 'kernel'
    assert main(['kernel', '--alpha', '1.5', '--t', '0.5', '--x-range', '-1:1:5', '--out', str(first)]) == 0
    resolved = json.loads((first / 'resolved_config.json').read_text())
    assert 'out' not in resolved
    # --config 만으로 다시 실행하면 기본 출력 위치에 같은 표가 생긴다
    assert main(['kernel', '--config', str(first / 'resolved_config.json')]) == 0
    again = tmp_path / 'runs' / 'kernel'
    assert (again / 'kernel.csv').read_bytes() == (first / 'kernel.csv').read_bytes()
    assert (again / 'resolved_config.json').read_text() == (first / 'resolved_config.json').read_text()
