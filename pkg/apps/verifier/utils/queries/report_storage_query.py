import json
import os
from typing import Optional

from apps.verifier.schemas import VerificationReport
from architecture.query.crud import (
    QueryCRUD,
    QueryCreator,
    QueryDestroyer,
    QueryReader,
)


def _paths(root: str):
    return f'{root}.json', f'{root}.txt'


def _format_value(value) -> str:
    if isinstance(value, float):
        return f'{value:.6g}'
    return str(value)


def render_table(report: VerificationReport) -> str:
    """
    사람이 읽는 요약 표
    """
    rows = [('check', 'verdict', 'measured', 'baseline')]
    for record in report.records:
        constants = record.measured.get('constants') or {}
        measured = ', '.join(f'{k}={_format_value(v)}' for k, v in sorted(constants.items())) or '-'
        if not constants:
            baseline = '-'
        elif record.baseline is None:
            baseline = 'not frozen'
        else:
            baseline = ', '.join(f'{k}={_format_value(v)}' for k, v in sorted(record.baseline.items()))
        rows.append((record.name, record.verdict, measured, baseline))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = ['  '.join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, '  '.join('-' * width for width in widths))
    lines.append('')
    lines.append(f"suite={report.suite} result={'PASS' if report.passed else 'FAIL'}")
    for record in report.records:
        for note in record.notes:
            lines.append(f'note [{record.name}]: {note}')
    return '\n'.join(lines) + '\n'


class ReportStorageQueryCreator(QueryCreator):
    def __call__(self, root: str, report: VerificationReport) -> str:
        """
        root.json (전체 record) 와 root.txt (요약 표)

        :return: JSON 경로
        """
        json_path, text_path = _paths(root)
        assert not os.path.exists(json_path)
        with open(json_path, 'w') as f:
            json.dump(json.loads(report.json()), f, indent=2, sort_keys=True)
            f.write('\n')
        with open(text_path, 'w') as f:
            f.write(render_table(report))
        return json_path


class ReportStorageQueryReader(QueryReader):
    def __call__(self, root: str) -> Optional[VerificationReport]:
        json_path, _ = _paths(root)
        if not os.path.isfile(json_path):
            return None
        return VerificationReport.parse_file(json_path)


class ReportStorageQueryDestroyer(QueryDestroyer):
    def __call__(self, root: str):
        for path in _paths(root):
            if os.path.isfile(path):
                os.remove(path)


class ReportStorageQuery(QueryCRUD):
    creator = ReportStorageQueryCreator
    reader = ReportStorageQueryReader
    destroyer = ReportStorageQueryDestroyer
