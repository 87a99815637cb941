"""Tests for main entry point."""
import json
from unittest.mock import Mock, patch

import pytest

import main
from src.config.config import reload_config
from src.config.run_config import RunConfig


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch) -> None:
    for name in ("LOG_LEVEL", "RIS_OUT_DIR", "RIS_THREADS"):
        monkeypatch.delenv(name, raising=False)
    reload_config()


class TestMain:
    """Tests for main function."""

    def test_main_configures_logging_and_runs_workflow(self, tmp_path) -> None:
        """main configures logging, loads the preset, creates the workflow and runs it."""
        # Arrange
        mock_workflow = Mock()
        mock_workflow.run.return_value.outputs = []
        mock_create_workflow = Mock(return_value=mock_workflow)

        # Act
        with patch('main.create_workflow', mock_create_workflow):
            with patch('main.configure') as mock_configure:
                code = main.main(['montecarlo', '--config', 'table2-ms10', '--out', str(tmp_path), '--seed', '5'])

        # Assert
        assert code == 0
        mock_configure.assert_called_once_with(None)
        mock_create_workflow.assert_called_once_with('montecarlo')
        run_config, out_dir = mock_workflow.run.call_args[0]
        assert isinstance(run_config, RunConfig)
        assert run_config.source == 'presets/table2-ms10.yaml'
        assert run_config.seed == 5
        assert out_dir == str(tmp_path)

    def test_out_dir_defaults_to_environment(self, monkeypatch, tmp_path) -> None:
        """Without --out the RIS_OUT_DIR variable picks the directory."""
        # Arrange
        monkeypatch.setenv('RIS_OUT_DIR', str(tmp_path / 'env-out'))
        reload_config()
        mock_workflow = Mock()
        mock_workflow.run.return_value.outputs = []

        # Act
        with patch('main.create_workflow', Mock(return_value=mock_workflow)), patch('main.configure'):
            main.main(['tracking'])

        # Assert
        assert mock_workflow.run.call_args[0][1] == str(tmp_path / 'env-out')

    def test_config_error_exits_with_two(self, tmp_path, capsys) -> None:
        """A typo in the config file is reported with its line and exit code 2."""
        # Arrange
        path = tmp_path / 'bad.yaml'
        path.write_text('geometry:\n  m_x: 5\n  m_z: 2\n', encoding='utf-8')

        # Act
        with patch('main.configure'):
            code = main.main(['montecarlo', '--config', str(path), '--out', str(tmp_path)])

        # Assert
        assert code == 2
        assert f'{path}:3: unknown key geometry.m_z' in capsys.readouterr().err

    def test_unknown_policy_lists_valid_names(self, tmp_path, capsys) -> None:
        """A malformed policy name exits with 2 and names the valid policies."""
        # Act
        with patch('main.configure'):
            code = main.main(['policy-demo', '--set', 'policy=A9', '--out', str(tmp_path)])

        # Assert
        assert code == 2
        assert 'valid names: A1, A2' in capsys.readouterr().err

    def test_brute_force_cap_exits_with_one(self, tmp_path, capsys) -> None:
        """Refused exhaustive search exits with 1 and names the cap."""
        # Act
        with patch('main.configure'):
            code = main.main([
                'montecarlo', '--out', str(tmp_path), '--set', 'trials=1', '--set', 'brute_force_cap=4',
            ])

        # Assert
        assert code == 1
        assert 'brute_force_cap=4' in capsys.readouterr().err

    def test_bad_flag_exits_with_two(self) -> None:
        """argparse errors exit with status 2."""
        with pytest.raises(SystemExit) as exc_info:
            main.main(['montecarlo', '--threads', '0'])
        assert exc_info.value.code == 2

    def test_policy_demo_end_to_end(self, tmp_path, capsys) -> None:
        """policy-demo prints one JSON outcome on standard output."""
        # Act
        with patch('main.configure'):
            code = main.main(['policy-demo', '--seed', '1', '--out', str(tmp_path)])

        # Assert
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        record = next(json.loads(line) for line in lines if line.startswith('{"a_h"'))
        assert record['seed'] == 1
        assert len(record['a_h']) + len(record['a_r']) == 10
        assert (tmp_path / 'manifest.json').is_file()
