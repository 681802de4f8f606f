"""Tests for the config module."""
import sys
from pathlib import Path

# Add the project root to the Python path
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from bott_towers import config


def test_env_int_reads_the_environment(monkeypatch):
    monkeypatch.setenv('BOTT_TEST_VALUE', '12')
    assert config._env_int('BOTT_TEST_VALUE', 3) == 12


def test_env_int_falls_back_when_unset_or_blank(monkeypatch):
    monkeypatch.delenv('BOTT_TEST_VALUE', raising=False)
    assert config._env_int('BOTT_TEST_VALUE', 3) == 3
    monkeypatch.setenv('BOTT_TEST_VALUE', '  ')
    assert config._env_int('BOTT_TEST_VALUE', 3) == 3


def test_env_int_rejects_bad_values(monkeypatch, caplog):
    monkeypatch.setenv('BOTT_TEST_VALUE', 'many')
    assert config._env_int('BOTT_TEST_VALUE', 3) == 3
    monkeypatch.setenv('BOTT_TEST_VALUE', '0')
    assert config._env_int('BOTT_TEST_VALUE', 3, minimum=1) == 3
    assert caplog.text.count('Ignoring BOTT_TEST_VALUE') == 2


def test_defaults():
    assert config.LOG_FORMAT == '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    assert config.GOLDEN_DIR.is_dir()
    assert config.APPENDIX_MAX_N <= config.DEFAULT_MAX_N
    assert config.SCHEMA_VERSION == '1.0'
