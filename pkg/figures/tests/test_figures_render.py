"""Rendering tests built around parsing the emitted SVG.

The SVG writer stamps every plotted value into data attributes as the
verbatim CSV strings, so these tests audit the figure by reading the
file back rather than by trusting any intermediate state.
"""

import csv
import pathlib
import xml.etree.ElementTree as ET

import pytest

from plot_figures import CSV_HEADER, PlotSpec, RenderError, render

DATA = pathlib.Path(__file__).parent / "data"
GOLDEN = DATA / "golden.csv"
NS = "{http://www.w3.org/2000/svg}"


def _spec(out, csv_paths=(str(GOLDEN),), kind="channel-mse", **kw):
    return PlotSpec(csv_paths=tuple(csv_paths), kind=kind, out=str(out), **kw)


def _series_groups(path):
    root = ET.parse(path).getroot()
    return [
        g
        for g in root.iter(NS + "g")
        if g.get("class") == "series"
    ]


def _write_csv(path, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(rows)


def _row(estimator="mips", snr="0.0", mse="0.1", l="0"):
    return [estimator, snr, l, "8", "8", "10", mse, "0.01", "0.02", "100.0", "3"]


def test_svg_has_expected_series_points_and_log_axis(tmp_path):
    out = tmp_path / "fig.svg"
    render(_spec(out))
    groups = _series_groups(out)
    assert len(groups) == 2
    for g in groups:
        assert len(g.findall(NS + "circle")) == 5
    root = ET.parse(out).getroot()
    axes = [g for g in root.iter(NS + "g") if g.get("class") == "y-axis"]
    assert len(axes) == 1 and axes[0].get("data-scale") == "log10"


def test_svg_point_data_round_trips_every_csv_value(tmp_path):
    out = tmp_path / "fig.svg"
    render(_spec(out))
    expected = {}
    with open(GOLDEN, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            key = (rec["estimator"], rec["L"])
            expected.setdefault(key, []).append(
                (rec["snr_db"], rec["mse_channel"])
            )
    got = {}
    for g in _series_groups(out):
        key = (g.get("data-estimator"), g.get("data-l"))
        got[key] = [
            (c.get("data-snr-db"), c.get("data-mse"))
            for c in g.findall(NS + "circle")
        ]
    assert got == expected


def test_rendering_is_deterministic(tmp_path):
    a = tmp_path / "a.svg"
    b = tmp_path / "b.svg"
    render(_spec(a))
    render(_spec(b))
    assert a.read_bytes() == b.read_bytes()


def test_points_keep_csv_row_order(tmp_path):
    src = tmp_path / "scrambled.csv"
    _write_csv(
        src,
        [
            _row(snr="5.0", mse="0.2"),
            _row(snr="-10.0", mse="0.5"),
            _row(snr="0.0", mse="0.3"),
        ],
    )
    out = tmp_path / "fig.svg"
    render(_spec(out, csv_paths=(str(src),)))
    (group,) = _series_groups(out)
    snrs = [c.get("data-snr-db") for c in group.findall(NS + "circle")]
    assert snrs == ["5.0", "-10.0", "0.0"]


def test_estimator_filter_drops_series(tmp_path):
    out = tmp_path / "fig.svg"
    render(_spec(out, estimators=("mips",)))
    groups = _series_groups(out)
    assert len(groups) == 1
    assert groups[0].get("data-estimator") == "mips"


def test_l_filter_with_no_match_reports_empty(tmp_path):
    with pytest.raises(RenderError, match="no rows after filter"):
        render(_spec(tmp_path / "fig.svg", l_values=(99,)))


def test_header_only_csv_reports_empty(tmp_path):
    src = tmp_path / "empty.csv"
    _write_csv(src, [])
    with pytest.raises(RenderError, match="no rows after filter"):
        render(_spec(tmp_path / "fig.svg", csv_paths=(str(src),)))


def test_foreign_header_rejected(tmp_path):
    src = tmp_path / "other.csv"
    src.write_text("a,b,c\n1,2,3\n", encoding="utf-8")
    with pytest.raises(RenderError, match="unexpected header"):
        render(_spec(tmp_path / "fig.svg", csv_paths=(str(src),)))


def test_missing_file_reported(tmp_path):
    with pytest.raises(RenderError, match="cannot read"):
        render(_spec(tmp_path / "fig.svg", csv_paths=("/no/such.csv",)))


def test_nan_value_rejected_on_log_axis(tmp_path):
    src = tmp_path / "nan.csv"
    row = _row()
    row[7] = "nan"
    _write_csv(src, [row])
    with pytest.raises(RenderError, match="log axis"):
        render(_spec(tmp_path / "fig.svg", csv_paths=(str(src),), kind="doa-mse"))


def test_zero_value_rejected_on_log_axis(tmp_path):
    src = tmp_path / "zero.csv"
    _write_csv(src, [_row(mse="0.0")])
    with pytest.raises(RenderError, match="log axis"):
        render(_spec(tmp_path / "fig.svg", csv_paths=(str(src),)))


def test_unknown_extension_rejected(tmp_path):
    with pytest.raises(RenderError, match="extension"):
        render(_spec(tmp_path / "fig.tiff"))


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(RenderError, match="unknown kind"):
        _spec(tmp_path / "fig.svg", kind="nope")


def test_multiple_csvs_concatenate_points(tmp_path):
    out = tmp_path / "fig.svg"
    render(_spec(out, csv_paths=(str(GOLDEN), str(GOLDEN))))
    groups = _series_groups(out)
    assert len(groups) == 2
    for g in groups:
        assert len(g.findall(NS + "circle")) == 10


def test_png_output_is_a_png(tmp_path):
    out = tmp_path / "fig.png"
    render(_spec(out))
    assert out.read_bytes()[:4] == b"\x89PNG"
