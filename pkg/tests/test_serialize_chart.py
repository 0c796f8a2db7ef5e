"""Number formatting, CSV/JSON shaping and SVG chart rendering."""

import csv
import io
import xml.etree.ElementTree as ET

import pytest

from ctxcalc.model import (
    CorrelationMatrix,
    LatencyParams,
    MemoryConfig,
    SystemConfig,
    TopicRates,
)
from ctxcalc.serialize import (
    format_number,
    sweep_table_to_csv,
    sweep_table_to_dict,
    to_json,
)
from ctxcalc.svgchart import render_line_chart
from ctxcalc.sweep import SweepSpec, run_sweep


def small_table():
    topic = TopicRates(0.5, 0.5)
    config = SystemConfig(
        (topic, topic),
        CorrelationMatrix.uniform(2, 0.3),
        MemoryConfig(2.0),
        LatencyParams(1.0, 0.5, 2),
    )
    spec = SweepSpec(
        config, "memory_window", (0.5, 1.0, 2.0), ("rci_shared", "rci_separate")
    )
    return run_sweep(spec)


class TestFormatNumber:
    def test_short_decimals_stay_short(self):
        assert format_number(0.5) == "0.5"
        assert format_number(2.0) == "2"
        assert format_number(10.0) == "10"

    def test_twelve_significant_digits(self):
        assert format_number(1.0 / 3.0) == "0.333333333333"
        assert format_number(123456789012345.0) == "1.23456789012e+14"

    def test_small_magnitudes_use_exponent(self):
        assert format_number(1e-13) == "1e-13"

    def test_negative_zero_normalised(self):
        assert format_number(-0.0) == "0"

    def test_round_trip_precision(self):
        value = 0.96999724654172524
        assert float(format_number(value)) == pytest.approx(value, rel=1e-11)


class TestSweepCsv:
    def test_header_and_shape(self):
        table = small_table()
        text = sweep_table_to_csv(table)
        rows = list(csv.reader(io.StringIO(text), strict=True))
        assert rows[0] == ["memory_window", "rci_shared", "rci_separate"]
        assert len(rows) == 4
        for parsed, (grid, values) in zip(rows[1:], zip(table.grid, table.rows)):
            assert float(parsed[0]) == pytest.approx(grid, rel=1e-11)
            for cell, value in zip(parsed[1:], values):
                assert float(cell) == pytest.approx(value, rel=1e-11)

    def test_unix_line_endings_and_trailing_newline(self):
        text = sweep_table_to_csv(small_table())
        assert "\r" not in text
        assert text.endswith("\n")
        assert not text.endswith("\n\n")

    def test_deterministic(self):
        assert sweep_table_to_csv(small_table()) == sweep_table_to_csv(small_table())


class TestSweepDictAndJson:
    def test_dict_shape(self):
        payload = sweep_table_to_dict(small_table())
        assert payload["parameter"] == "memory_window"
        assert payload["columns"] == ["rci_shared", "rci_separate"]
        assert len(payload["rows"]) == 3
        assert all(all(flag for flag in row) for row in payload["in_domain"])

    def test_to_json_stable_and_newline_terminated(self):
        payload = {"schema": 1, "value": 0.5}
        text = to_json(payload)
        assert text.endswith("}\n")
        assert to_json(payload) == text


class TestSvgChart:
    def chart(self):
        table = small_table()
        return render_line_chart(
            "demo",
            "memory_window",
            "value",
            table.grid,
            [(name, table.column(name)) for name in table.columns],
        )

    def test_parses_as_xml(self):
        root = ET.fromstring(self.chart())
        assert root.tag.endswith("svg")

    def test_one_polyline_per_series(self):
        svg = self.chart()
        assert svg.count("<polyline") == 2

    def test_points_match_grid_length(self):
        svg = self.chart()
        root = ET.fromstring(svg)
        polylines = [e for e in root.iter() if e.tag.endswith("polyline")]
        for line in polylines:
            assert len(line.attrib["points"].split()) == 3

    def test_labels_escaped(self):
        svg = render_line_chart("a < b & c", "x", "y", (0.0, 1.0), [("s<1>", (0.0, 1.0))])
        assert "a &lt; b &amp; c" in svg
        assert "s&lt;1&gt;" in svg
        ET.fromstring(svg)

    def test_deterministic(self):
        assert self.chart() == self.chart()

    def test_flat_series_still_renders(self):
        svg = render_line_chart("flat", "x", "y", (0.0, 1.0, 2.0), [("k", (1.0, 1.0, 1.0))])
        ET.fromstring(svg)

    def test_empty_inputs_rejected(self):
        with pytest.raises(ValueError):
            render_line_chart("t", "x", "y", (), [("s", ())])
        with pytest.raises(ValueError):
            render_line_chart("t", "x", "y", (1.0,), [])
