import json
import logging

import pytest

from src.cli import main
from src.hamnet import HamNet, _config_to_dict


def test_results_package_holds_output_config_and_log(config, tmp_path):
    config.RESULTS_PACKAGE = True
    config.RESULTS_BASE_DIR = str(tmp_path / 'runs')
    config.LOG_FILE = str(tmp_path / 'hamnet.log')
    config.TOL_ANGLE = 2e-9

    code = main(['unfold', 'cube', '--cycle', '15623784', '--edge', '1,5', '--out', 'net.json'], config=config)
    assert code == 0

    runs = list((tmp_path / 'runs').iterdir())
    assert len(runs) == 1
    package = runs[0]
    assert len(package.name) == len('YYYYMMDD_HHMMSS')
    names = {p.name for p in package.iterdir()}
    assert {'net.json', 'run_config.json', 'run_config.py'} <= names
    assert not (tmp_path / 'net.json').exists()

    assert json.loads((package / 'net.json').read_text())['cycle'] == '1-5-6-2-3-7-8-4'
    saved = json.loads((package / 'run_config.json').read_text())
    assert saved['TOL_ANGLE'] == 2e-9
    assert saved['RESULTS_PACKAGE'] is True
    assert all(key.isupper() for key in saved)
    assert "TOL_ANGLE = 2e-09" in (package / 'run_config.py').read_text()

    log = (tmp_path / 'hamnet.log').read_text()
    assert 'HamNet' in log
    assert 'Input cube: V=8, E=12, F=6' in log


def test_log_file_is_truncated_on_start(config, tmp_path):
    path = tmp_path / 'hamnet.log'
    path.write_text('stale line\n')
    config.LOG_FILE = str(path)
    with HamNet(config) as session:
        session.load(fixture_name='octahedron')
    assert 'stale line' not in path.read_text()
    assert 'Input octahedron' in path.read_text()
    assert logging.getLogger("HamNet").handlers == []


def test_output_path_without_package(config):
    with HamNet(config) as session:
        assert session.results_dir is None
        assert session.output_path('out/net.json') == 'out/net.json'


def test_load_needs_exactly_one_source(config):
    with HamNet(config) as session:
        with pytest.raises(ValueError):
            session.load()
        with pytest.raises(ValueError):
            session.load(fixture_name='cube', off_path='cube.off')


def test_config_dict_keeps_settings_only(config):
    config.SEARCH_WORKERS = 3
    data = _config_to_dict(config)
    assert data['SEARCH_WORKERS'] == 3
    assert 'LOG_LEVEL' in data
    assert not [key for key in data if not key.isupper()]
    assert _config_to_dict(None) == {}
