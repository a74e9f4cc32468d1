"""Rendering core: load sweep rows, group them into series, emit a figure.

Cell values travel as the exact strings found in the CSV and are parsed
to floats only for geometry, so the SVG emitter can stamp the verbatim
text into data attributes. Output is a pure function of the input file
bytes and the spec: no timestamps, no environment lookups.
"""

import csv
import math
import os
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

CSV_HEADER = (
    "estimator",
    "snr_db",
    "L",
    "M",
    "N",
    "trials",
    "mse_channel",
    "mse_doa",
    "mse_fading",
    "avg_real_mults",
    "seed",
)

KIND_COLUMNS = {
    "channel-mse": "mse_channel",
    "doa-mse": "mse_doa",
    "fading-mse": "mse_fading",
}

# One fixed color per estimator so the same estimator looks the same in
# every figure; unknown names fall back to gray.
SERIES_COLORS = {
    "mips": "#1f77b4",
    "pml": "#d62728",
    "lmmse": "#2ca02c",
}
OTHER_COLOR = "#7f7f7f"

# Dash pattern by rank of L among the plotted L values (SVG form and the
# matching matplotlib linestyle).
DASH_PATTERNS = ("", "6 3", "2 2", "8 3 2 3")
LINE_STYLES = ("-", "--", ":", "-.")

CANVAS_W, CANVAS_H = 720, 480
PLOT_X0, PLOT_X1 = 70, 540
PLOT_Y0, PLOT_Y1 = 24, 424


class RenderError(RuntimeError):
    """Anything that makes the requested figure impossible."""


@dataclass(frozen=True)
class PlotSpec:
    csv_paths: tuple
    kind: str
    out: str
    estimators: tuple | None = None
    l_values: tuple | None = None

    def __post_init__(self):
        if not self.csv_paths:
            raise RenderError("at least one CSV path is required")
        if self.kind not in KIND_COLUMNS:
            raise RenderError(
                "unknown kind %r; expected one of %s"
                % (self.kind, ", ".join(sorted(KIND_COLUMNS)))
            )


def load_rows(paths):
    """Rows from one or more harness CSVs, as dicts of verbatim strings.

    Every file must carry the exact eleven-column header; files are
    concatenated in the order given and rows keep their file order.
    """
    rows = []
    for path in paths:
        try:
            fh = open(path, encoding="utf-8", newline="")
        except OSError as exc:
            raise RenderError("cannot read %s: %s" % (path, exc)) from exc
        with fh:
            reader = csv.reader(fh)
            header = tuple(next(reader, ()))
            if header != CSV_HEADER:
                raise RenderError(
                    "unexpected header in %s; expected %s"
                    % (path, ",".join(CSV_HEADER))
                )
            for rec in reader:
                if len(rec) != len(CSV_HEADER):
                    raise RenderError(
                        "malformed row in %s: %r" % (path, rec)
                    )
                rows.append(dict(zip(CSV_HEADER, rec)))
    return rows


def _select(rows, spec):
    keep_est = set(spec.estimators) if spec.estimators else None
    keep_l = set(spec.l_values) if spec.l_values is not None else None
    out = []
    for row in rows:
        if keep_est is not None and row["estimator"] not in keep_est:
            continue
        if keep_l is not None and _as_int(row["L"], "L") not in keep_l:
            continue
        out.append(row)
    return out


def _as_int(text, column):
    try:
        return int(text)
    except ValueError as exc:
        raise RenderError(
            "bad %s value %r in CSV" % (column, text)
        ) from exc


def _as_float(text, column):
    try:
        return float(text)
    except ValueError as exc:
        raise RenderError(
            "bad %s value %r in CSV" % (column, text)
        ) from exc


@dataclass
class Series:
    estimator: str
    l_label: str
    # (snr string, mse string, snr float, mse float) per point, CSV order
    points: list

    @property
    def label(self):
        return "%s (L=%s)" % (self.estimator, self.l_label)


def _build_series(rows, column):
    order = []
    table = {}
    for row in rows:
        key = (row["estimator"], row["L"])
        if key not in table:
            table[key] = Series(row["estimator"], row["L"], [])
            order.append(key)
        x = _as_float(row["snr_db"], "snr_db")
        y_str = row[column]
        y = _as_float(y_str, column)
        if not (math.isfinite(y) and y > 0.0):
            raise RenderError(
                "%s value %r (estimator %s, snr_db %s) cannot go on a "
                "log axis" % (column, y_str, row["estimator"], row["snr_db"])
            )
        table[key].points.append((row["snr_db"], y_str, x, y))
    return [table[key] for key in order]


def _styles(series_list):
    """Color by estimator, dash by rank of L among the plotted values."""
    distinct = sorted({_as_int(s.l_label, "L") for s in series_list})
    rank = {l: i for i, l in enumerate(distinct)}
    styled = []
    for s in series_list:
        color = SERIES_COLORS.get(s.estimator, OTHER_COLOR)
        idx = rank[_as_int(s.l_label, "L")] % len(DASH_PATTERNS)
        styled.append((s, color, DASH_PATTERNS[idx], LINE_STYLES[idx]))
    return styled


def render(spec: PlotSpec) -> None:
    """Write the figure described by `spec`, choosing the writer by the
    output extension (.svg vector, .png raster)."""
    rows = _select(load_rows(spec.csv_paths), spec)
    if not rows:
        raise RenderError("no rows after filter")
    column = KIND_COLUMNS[spec.kind]
    series_list = _build_series(rows, column)
    ext = os.path.splitext(spec.out)[1].lower()
    if ext == ".svg":
        _write_svg(spec.out, series_list, column)
    elif ext == ".png":
        _write_png(spec.out, series_list, column)
    else:
        raise RenderError(
            "unsupported output extension %r; use .svg or .png" % ext
        )


# -- SVG ----------------------------------------------------------------


def _axes(series_list):
    xs = [p[2] for s in series_list for p in s.points]
    ys = [p[3] for s in series_list for p in s.points]
    xmin, xmax = min(xs), max(xs)
    if xmin == xmax:
        xmin, xmax = xmin - 1.0, xmax + 1.0
    lo = math.floor(min(math.log10(y) for y in ys))
    hi = math.ceil(max(math.log10(y) for y in ys))
    if lo == hi:
        hi = lo + 1
    return xmin, xmax, lo, hi


def _write_svg(path, series_list, column):
    xmin, xmax, lo, hi = _axes(series_list)

    def sx(v):
        return PLOT_X0 + (v - xmin) / (xmax - xmin) * (PLOT_X1 - PLOT_X0)

    def sy(v):
        frac = (math.log10(v) - lo) / (hi - lo)
        return PLOT_Y1 - frac * (PLOT_Y1 - PLOT_Y0)

    out = []
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d" font-family="sans-serif" font-size="12">'
        % (CANVAS_W, CANVAS_H, CANVAS_W, CANVAS_H)
    )
    out.append(
        '<rect width="%d" height="%d" fill="#ffffff"/>' % (CANVAS_W, CANVAS_H)
    )

    # y decades: gridline plus power-of-ten label
    out.append('<g class="y-axis" data-scale="log10">')
    for k in range(lo, hi + 1):
        y = sy(10.0**k)
        out.append(
            '<line x1="%d" y1="%.2f" x2="%d" y2="%.2f" stroke="#dddddd"/>'
            % (PLOT_X0, y, PLOT_X1, y)
        )
        out.append(
            '<text x="%d" y="%.2f" text-anchor="end">1e%d</text>'
            % (PLOT_X0 - 6, y + 4, k)
        )
    out.append("</g>")

    out.append('<g class="x-axis">')
    for v in sorted({p[2] for s in series_list for p in s.points}):
        x = sx(v)
        out.append(
            '<line x1="%.2f" y1="%d" x2="%.2f" y2="%d" stroke="#dddddd"/>'
            % (x, PLOT_Y0, x, PLOT_Y1)
        )
        out.append(
            '<text x="%.2f" y="%d" text-anchor="middle">%g</text>'
            % (x, PLOT_Y1 + 18, v)
        )
    out.append("</g>")

    out.append(
        '<rect x="%d" y="%d" width="%d" height="%d" fill="none" '
        'stroke="#333333"/>'
        % (PLOT_X0, PLOT_Y0, PLOT_X1 - PLOT_X0, PLOT_Y1 - PLOT_Y0)
    )
    out.append(
        '<text x="%d" y="%d" text-anchor="middle">SNR (dB)</text>'
        % ((PLOT_X0 + PLOT_X1) // 2, CANVAS_H - 12)
    )
    out.append(
        '<text x="16" y="%d" text-anchor="middle" '
        'transform="rotate(-90 16 %d)">%s (log scale)</text>'
        % ((PLOT_Y0 + PLOT_Y1) // 2, (PLOT_Y0 + PLOT_Y1) // 2, escape(column))
    )

    styled = _styles(series_list)
    for s, color, dash, _ in styled:
        dash_attr = ' stroke-dasharray="%s"' % dash if dash else ""
        out.append(
            '<g class="series" data-estimator=%s data-l=%s fill="none" '
            'stroke="%s" stroke-width="1.5"%s>'
            % (quoteattr(s.estimator), quoteattr(s.l_label), color, dash_attr)
        )
        pts = " ".join(
            "%.2f,%.2f" % (sx(x), sy(y)) for _, _, x, y in s.points
        )
        out.append('<polyline points="%s"/>' % pts)
        for snr_str, mse_str, x, y in s.points:
            out.append(
                '<circle class="pt" cx="%.2f" cy="%.2f" r="3" fill="%s" '
                "stroke=\"none\" data-snr-db=%s data-mse=%s/>"
                % (sx(x), sy(y), color, quoteattr(snr_str), quoteattr(mse_str))
            )
        out.append("</g>")

    out.append('<g class="legend">')
    for i, (s, color, dash, _) in enumerate(styled):
        y = 40 + 18 * i
        dash_attr = ' stroke-dasharray="%s"' % dash if dash else ""
        out.append(
            '<line x1="552" y1="%d" x2="576" y2="%d" stroke="%s" '
            'stroke-width="1.5"%s/>' % (y, y, color, dash_attr)
        )
        out.append(
            '<text x="582" y="%d">%s</text>' % (y + 4, escape(s.label))
        )
    out.append("</g>")
    out.append("</svg>")

    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(out) + "\n")
    except OSError as exc:
        raise RenderError("cannot write %s: %s" % (path, exc)) from exc


# -- raster -------------------------------------------------------------


def _write_png(path, series_list, column):
    # Imported here so pure-SVG use never touches matplotlib.
    from matplotlib.backends.backend_agg import FigureCanvasAgg
    from matplotlib.figure import Figure

    fig = Figure(figsize=(7.2, 4.8), dpi=100)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    for s, color, _, ls in _styles(series_list):
        xs = [p[2] for p in s.points]
        ys = [p[3] for p in s.points]
        ax.semilogy(
            xs, ys, marker="o", color=color, linestyle=ls, label=s.label
        )
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel(column)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    try:
        fig.savefig(path, format="png")
    except OSError as exc:
        raise RenderError("cannot write %s: %s" % (path, exc)) from exc
