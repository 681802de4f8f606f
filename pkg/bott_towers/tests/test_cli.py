"""Tests for the cli module."""
import io
import json
import logging
import sys
from pathlib import Path
from unittest.mock import Mock, patch

import pandas as pd
import pytest

# Add the project root to the Python path
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from bott_towers import cli
from bott_towers.catalog import SPIN_CENSUS_4
from bott_towers.exceptions import ConsistencyError

REAL_CONFIGURE_LOGGING = cli.configure_logging


@pytest.fixture(autouse=True)
def no_log_file():
    with patch('bott_towers.cli.configure_logging'):
        yield


def run(argv):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(argv)
    return excinfo.value.code


def test_read_matrix_text_inline_and_file(tmp_path):
    assert cli.read_matrix_text("2 11 01") == "2\n11\n01"
    assert cli.read_matrix_text("2;11;01") == "2\n11\n01"
    path = tmp_path / 'klein.txt'
    path.write_text("2\n11\n01\n", encoding='utf-8')
    assert cli.read_matrix_text(str(path)) == "2\n11\n01\n"


def test_analyze_inline(capsys):
    assert run(['analyze', '2 11 01']) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "total: 1 + y1" in out
    assert "H1: Z^1 + (Z/2)^1" in out


def test_analyze_stdin_machine(monkeypatch, capsys):
    monkeypatch.setattr('sys.stdin', io.StringIO("2\n11\n01\n"))
    assert run(['analyze', '-', '--format', 'machine']) == cli.EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload['sw']['orientable'] is False
    assert payload['presentation'] == "gen: a3 a4 ; rel: a3 a4^-1 a3^-1 a4^-1"


def test_analyze_rejects_bad_matrix(capsys):
    assert run(['analyze', '2 12 01']) == cli.EXIT_ERROR
    assert capsys.readouterr().err.startswith("error:")
    assert run(['analyze', '2 11 11']) == cli.EXIT_ERROR


def test_missing_file_is_reported_by_name(tmp_path, capsys):
    missing = tmp_path / 'matrix.txt'
    assert run(['analyze', str(missing)]) == cli.EXIT_ERROR
    err = capsys.readouterr().err
    assert "matrix file not found" in err
    assert str(missing) in err
    assert "malformed dimension line" not in err


def test_read_matrix_text_rejects_paths_that_do_not_exist():
    with pytest.raises(FileNotFoundError):
        cli.read_matrix_text('matrix.txt')
    assert cli.read_matrix_text("2\n11\n01") == "2\n11\n01"


def test_enumerate_spin_list(capsys):
    assert run(['enumerate', '4', '--filter', 'spin', '--list', '--quiet']) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "total: 64" in out
    assert "matched (spin): 8" in out
    for text in SPIN_CENSUS_4:
        assert text in out


def test_enumerate_machine_and_csv(tmp_path, capsys):
    output = tmp_path / 'census.csv'
    code = run(['enumerate', '3', '--quiet', '--format', 'machine', '--output', str(output)])
    assert code == cli.EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload['total'] == 8
    assert len(pd.read_csv(output)) == 8


def test_enumerate_above_cap(capsys):
    assert run(['enumerate', '9', '--quiet']) == cli.EXIT_ERROR
    assert run(['enumerate', '5', '--max-n', '4', '--quiet']) == cli.EXIT_ERROR


def test_bad_arguments_exit_with_one(capsys):
    assert run(['enumerate', '3', '--jobs', '0']) == cli.EXIT_ERROR
    assert run(['enumerate', 'three']) == cli.EXIT_ERROR
    assert run([]) == cli.EXIT_ERROR
    assert run(['analyze', '2 11 01', '--format', 'yaml']) == cli.EXIT_ERROR


def test_verify_small_range(capsys):
    code = run(['verify', '--from', '1', '--to', '3', '--random-samples', '5', '--property-samples', '50',
                '--quiet'])
    assert code == cli.EXIT_OK
    assert "all suites passed" in capsys.readouterr().out


def test_verify_failure_exit_code(capsys):
    with patch.dict('bott_towers.verification.MATRIX_SUITES', {'heredity': lambda matrix: False}):
        code = run(['verify', '--from', '2', '--to', '2', '--random-samples', '0', '--property-samples', '0',
                    '--quiet', '--format', 'machine'])
    assert code == cli.EXIT_VERIFICATION
    payload = json.loads(capsys.readouterr().out)
    assert payload['passed'] is False
    assert payload['suites']['heredity']['failures'] == 2


def test_consistency_error_exits_with_two(capsys):
    with patch('bott_towers.cli.CensusRunner.run', side_effect=ConsistencyError("closed form drift")):
        assert run(['enumerate', '2', '--quiet']) == cli.EXIT_VERIFICATION
    assert "closed form drift" in capsys.readouterr().err


def test_examples(capsys):
    assert run(['examples']) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "PASS not-spin-7: not spin; witness pair (2,3)" in out
    assert out.endswith("all examples match\n")


def test_examples_machine(capsys):
    assert run(['examples', '--format', 'machine']) == cli.EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload['passed'] is True
    assert payload['examples']['census-4']['summary'] == "n=4: 64 total, 8 orientable, 8 spin"


def test_keyboard_interrupt(capsys):
    with patch.dict(cli.COMMANDS, {'examples': Mock(side_effect=KeyboardInterrupt)}):
        assert run(['examples']) == cli.EXIT_INTERRUPTED
    assert "Interrupted by user" in capsys.readouterr().err


def test_unexpected_error(capsys):
    with patch('bott_towers.cli.run_examples', side_effect=RuntimeError("disk on fire")):
        assert run(['examples']) == cli.EXIT_ERROR
    assert "disk on fire" in capsys.readouterr().err


def test_configure_logging_survives_unwritable_dir(tmp_path, monkeypatch, capsys):
    blocker = tmp_path / 'file'
    blocker.write_text('x', encoding='utf-8')
    monkeypatch.setattr('bott_towers.config.DATA_DIR', str(blocker / 'data'))
    monkeypatch.setattr('bott_towers.config.LOG_FILE', str(blocker / 'data' / 'bott_towers.log'))
    with patch('logging.basicConfig') as basic_config:
        REAL_CONFIGURE_LOGGING('debug')
    assert "cannot write log file" in capsys.readouterr().err
    kwargs = basic_config.call_args.kwargs
    assert kwargs['level'] == logging.DEBUG
    assert len(kwargs['handlers']) == 1
