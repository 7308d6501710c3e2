import json
import os

import pytest

from apps.solver.utils.queries.field_storage_query import FieldStorageQuery
from main import main


@pytest.fixture(scope='module')
def storage():
    return FieldStorageQuery()


def test_solve_snapshots(tmp_path, capsys, storage: FieldStorageQuery):
    out = str(tmp_path / 'solve')
    code = main([
        'solve', '--alpha', '1.5', '--t', '0', '0.5', '1', '--half-width', '20', '--points', '512', '--out', out,
    ])
    assert code == 0
    for k, t in enumerate([0.0, 0.5, 1.0]):
        field = storage.read(os.path.join(out, f'field_t{k}'))
        assert field.time == t
        assert field.mass == pytest.approx(1.0, abs=5e-2)
        assert field.minimum >= 0.0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    assert lines[1].startswith('t=0.5 mass=')


def test_solve_gaussian_initial(tmp_path, storage: FieldStorageQuery):
    out = str(tmp_path / 'solve')
    initial = json.dumps({'kind': 'gaussian-mixture', 'weights': [1.0], 'means': [[0.0]], 'sigmas': [0.5]})
    code = main(['solve', '--alpha', '2', '--t', '1', '--half-width', '10', '--points', '256',
                 '--initial', initial, '--out', out])
    assert code == 0
    field = storage.read(os.path.join(out, 'field_t0'))
    assert field.mass == pytest.approx(1.0, abs=1e-8)


def test_solve_empty_times(tmp_path):
    config = tmp_path / 'config.json'
    config.write_text(json.dumps({'times': []}))
    out = tmp_path / 'solve'
    assert main(['solve', '--config', str(config), '--out', str(out)]) == 2
    assert not out.exists()


def test_solve_bad_initial_json(tmp_path):
    assert main(['solve', '--initial', '{not json', '--out', str(tmp_path / 'solve')]) == 2


def test_solve_tail_budget_is_numerical_error(tmp_path):
    out = tmp_path / 'solve'
    code = main(['solve', '--alpha', '1', '--t', '1', '--half-width', '2', '--points', '64', '--out', str(out)])
    assert code == 3
    # 실패한 실행은 출력 디렉토리를 남기지 않는다
    assert not out.exists()
    assert not [p for p in os.listdir(tmp_path) if p.startswith('.solve')]
