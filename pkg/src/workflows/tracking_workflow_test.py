"""Tests for TrackingWorkflow."""
from pathlib import Path

import pandas as pd
import pytest

from src.config.run_config import load_run_config
from src.repository.file_result_repository import MANIFEST_NAME
from src.tracking.tracking import EVENT_COLUMNS, PDAVG_COLUMNS, SPACING_COLUMNS, TRACE_COLUMNS
from src.workflows.tracking_workflow import TrackingWorkflow

# A coarse walk keeps the run short.
_COARSE = ["step=10 cm", "lateral_range=[-10 m, 10 m]"]


def _run(out_dir: Path, *overrides: str) -> None:
    config = load_run_config("fig7-15x15", _COARSE + list(overrides), command="tracking")
    TrackingWorkflow().run(config, str(out_dir))


def test_writes_trace_events_and_power_tables(tmp_path: Path) -> None:
    """Every table has its documented header."""
    # Act
    _run(tmp_path)

    # Assert
    assert list(pd.read_csv(tmp_path / "trace.csv").columns) == TRACE_COLUMNS
    assert list(pd.read_csv(tmp_path / "events.csv").columns) == EVENT_COLUMNS
    assert list(pd.read_csv(tmp_path / "spacings.csv").columns) == SPACING_COLUMNS
    assert list(pd.read_csv(tmp_path / "pdavg.csv").columns) == PDAVG_COLUMNS
    assert (tmp_path / MANIFEST_NAME).is_file()


def test_trace_covers_the_walk(tmp_path: Path) -> None:
    """One trace row per sample from -10 m to 10 m."""
    # Act
    _run(tmp_path)

    # Assert
    trace = pd.read_csv(tmp_path / "trace.csv")
    assert len(trace) == 201
    assert trace["position_m"].iloc[0] == pytest.approx(-10.0)
    assert trace["position_m"].iloc[-1] == pytest.approx(10.0)
    assert (trace["snr_db_stale"] <= trace["snr_db_continuous"] + 1e-9).all()


def test_power_table_has_one_row_per_duration_and_power(tmp_path: Path) -> None:
    """pdavg.csv crosses the reconfiguration durations with the P_dynamic grid."""
    # Act
    _run(tmp_path)

    # Assert
    events = pd.read_csv(tmp_path / "events.csv")
    pdavg = pd.read_csv(tmp_path / "pdavg.csv", float_precision="round_trip")
    assert len(events) >= 2
    assert len(pdavg) == 3 * 6
    assert sorted(pdavg["reconfig_duration_s"].unique()) == pytest.approx([1e-6, 1e-5, 1e-4])
    assert pdavg["p_d_avg_w"].tolist() == pytest.approx((pdavg["p_r"] * pdavg["p_dynamic_w"]).tolist(), rel=1e-12)


def test_huge_threshold_leaves_power_table_empty(tmp_path: Path) -> None:
    """Without events the cadence is undefined and pdavg.csv holds only its header."""
    # Act
    _run(tmp_path, "snr_drop_threshold=1e9 dB")

    # Assert
    assert pd.read_csv(tmp_path / "events.csv").empty
    assert (tmp_path / "pdavg.csv").read_text() == ",".join(PDAVG_COLUMNS) + "\n"
