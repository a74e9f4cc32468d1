"""Turn sweep result CSVs into MSE-versus-SNR figures.

The input contract is the fixed eleven-column CSV emitted by the
simulation harness; nothing here imports the simulator itself. SVG
output is written by a small built-in emitter whose data attributes
carry the source values verbatim, so a figure can be audited (or
round-tripped in tests) by parsing the file. Raster formats go
through matplotlib.
"""

from .render import (
    CSV_HEADER,
    KIND_COLUMNS,
    PlotSpec,
    RenderError,
    load_rows,
    render,
)

__all__ = [
    "CSV_HEADER",
    "KIND_COLUMNS",
    "PlotSpec",
    "RenderError",
    "load_rows",
    "render",
]

__version__ = "0.1.0"
