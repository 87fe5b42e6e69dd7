"""Tests for reports.py — JSON envelopes and terminal rendering."""

import json
from fractions import Fraction
from unittest import mock

from config import SCHEMA_VERSION, Config
from polynomials import NEG_INF
from reports import Report, ReportUI, jsonable, reports_to_json


class TestJsonable:
    """Test conversion to plain JSON data."""

    def test_negative_infinity(self):
        assert jsonable(NEG_INF) == "-inf"

    def test_fractions(self):
        assert jsonable(Fraction(4, 2)) == 2
        assert jsonable(Fraction(-1, 3)) == "-1/3"

    def test_nested(self):
        value = {1: (Fraction(1, 2), [NEG_INF, True]), "k": None}
        assert jsonable(value) == {"1": ["1/2", ["-inf", True]], "k": None}


class TestReport:
    """Test single reports."""

    def test_ok_report(self):
        r = Report("pd M", 3, 1, result={"pd": NEG_INF}, engine={"seed": 0})
        data = r.to_json()
        assert data["ok"] is True
        assert data["position"] == [3, 1]
        assert data["result"] == {"pd": "-inf"}
        assert "error" not in data
        assert "elapsed_seconds" not in data

    def test_error_report(self):
        r = Report("regularity M", 2, 5, error="boom", error_type="ZeroSheafError")
        data = r.to_json()
        assert not r.ok
        assert data["error"] == {"type": "ZeroSheafError", "message": "boom"}
        assert "result" not in data

    def test_timing(self):
        r = Report("pd M", 1, 1, elapsed=0.1234567)
        assert r.to_json(include_timing=True)["elapsed_seconds"] == 0.123457


class TestEnvelope:
    """Test the versioned envelope."""

    def test_schema_and_order(self):
        reports = [Report("krull M", 1, 1, result={"dim": 2})]
        text = reports_to_json(reports, Config())
        data = json.loads(text)
        assert data["schema_version"] == SCHEMA_VERSION
        assert data["reports"][0]["result"] == {"dim": 2}
        assert text == json.dumps(data, sort_keys=True, indent=2)

    def test_deterministic(self):
        reports = [Report("gb I", 1, 1, result={"basis": ["x", "y"]}, elapsed=0.5)]
        assert reports_to_json(reports, Config()) == reports_to_json(reports, Config())


class TestReportUI:
    """Test terminal rendering."""

    def test_json_mode_writes_stdout(self, capsys):
        ui = ReportUI(Config(json_output=True))
        ui.show_reports([Report("pd M", 1, 1, result={"pd": 0})])
        out = capsys.readouterr().out
        assert json.loads(out)["reports"][0]["result"] == {"pd": 0}

    def test_error_goes_to_error_display(self):
        ui = ReportUI(Config())
        with mock.patch.object(ui, "show_error") as show_error:
            ui.show_reports([Report("pd M", 1, 1, error="bad", error_type="ValueError")])
        show_error.assert_called_once_with("pd M: bad")

    def test_panel_printed(self):
        ui = ReportUI(Config())
        with mock.patch("reports.console") as console:
            ui.show_reports([Report("pd M", 1, 1, result={"pd": 0})])
        console.print.assert_called_once()
