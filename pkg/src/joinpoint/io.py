"""Reading series files and rendering analysis reports.

Series files are delimited text: either a single value column, or a label
column (integer calendar labels such as years, strictly consecutive) next
to a value column.  Reports render to JSON (full, versioned schema), CSV
(the statistic profile), or plain text.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .detection import AnalysisReport
from .errors import GapInLabels, NonMonotoneLabels, ParseError
from .series import TimeSeries, from_values

SCHEMA_VERSION = 1

EXAMPLE_SERIES_FILE = "noaa_global_annual_1850_2023.csv"


@dataclass(frozen=True)
class SeriesFileSpec:
    """How to interpret a delimited series file.

    label_column / value_column are zero-based indices; None means the
    default layout (single column of values, or label then value).
    has_header None means auto-detect: a first row with any non-numeric
    cell is treated as a header.
    """

    path: Union[str, Path]
    label_column: Optional[int] = None
    value_column: Optional[int] = None
    has_header: Optional[bool] = None
    delimiter: str = ","


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_series(source) -> TimeSeries:
    """Parse a series file into a TimeSeries.

    Accepts a path or a SeriesFileSpec.  Labels, when present, must be
    strictly consecutive integers (NonMonotoneLabels / GapInLabels
    otherwise); malformed cells raise ParseError with 1-based line and
    column.
    """
    spec = source if isinstance(source, SeriesFileSpec) else SeriesFileSpec(path=source)
    with open(spec.path, "r", newline="", encoding="utf-8") as handle:
        rows = [(i, row) for i, row in
                enumerate(csv.reader(handle, delimiter=spec.delimiter), start=1)
                if any(cell.strip() for cell in row)]
    if not rows:
        return from_values([])          # raises EmptySeries
    first_line, first_row = rows[0]
    has_header = spec.has_header
    if has_header is None:
        has_header = not all(_is_number(c) for c in first_row if c.strip())
    data = rows[1:] if has_header else rows
    if not data:
        return from_values([])
    ncols = len(data[0][1])
    if spec.value_column is not None:
        value_col = spec.value_column
        label_col = spec.label_column
    elif ncols == 1:
        value_col, label_col = 0, None
    else:
        value_col, label_col = 1, 0
    values = []
    labels = []
    for line, row in data:
        if value_col >= len(row):
            raise ParseError("missing value column", line, value_col + 1)
        cell = row[value_col].strip()
        try:
            values.append(float(cell))
        except ValueError:
            raise ParseError(f"not a number: {cell!r}", line, value_col + 1)
        if label_col is not None:
            if label_col >= len(row):
                raise ParseError("missing label column", line, label_col + 1)
            lab = row[label_col].strip()
            try:
                labels.append(int(lab))
            except ValueError:
                raise ParseError(f"not an integer label: {lab!r}",
                                 line, label_col + 1)
    start_label = None
    if labels:
        for prev, cur in zip(labels, labels[1:]):
            if cur <= prev:
                raise NonMonotoneLabels(
                    f"labels must strictly increase ({prev} then {cur})")
            if cur != prev + 1:
                raise GapInLabels(
                    f"labels must be consecutive ({prev} then {cur})")
        start_label = labels[0]
    return from_values(values, start_label=start_label)


def load_example_series() -> TimeSeries:
    """The bundled annual global temperature anomaly series (1850-2023)."""
    ref = resources.files("joinpoint.data").joinpath(EXAMPLE_SERIES_FILE)
    with resources.as_file(ref) as path:
        return read_series(SeriesFileSpec(path=path))


def _segments_dict(report: AnalysisReport) -> dict:
    fit = report.fit
    series = report.series
    k = fit.k
    origin = series.start_label if series.start_label is not None else 1
    shift = 1 - origin          # t = label + shift
    left_t = fit.mu_hat
    right_t = fit.mu_hat - fit.beta_hat * k
    return {
        "left": {
            "slope": fit.left_slope,
            "intercept_t": left_t,
            "intercept_label": left_t + fit.left_slope * shift,
        },
        "right": {
            "slope": fit.right_slope,
            "intercept_t": right_t,
            "intercept_label": right_t + fit.right_slope * shift,
        },
    }


def _level_key(level: float) -> str:
    # 90.0 -> "90", 97.5 -> "97.5"
    return f"{level:g}"


def report_to_dict(report: AnalysisReport) -> dict:
    """The versioned JSON-ready representation of an analysis report."""
    cfg = report.config
    profile = report.profile
    series = report.series
    return {
        "schema_version": SCHEMA_VERSION,
        "config": {
            "delta": cfg.delta,
            "level": cfg.level,
            "seed": cfg.seed,
            "mc_replicates": cfg.mc_replicates,
            "grid_size": cfg.grid_size,
            "null_method": report.null_method,
            "null_replicates": report.null_replicates,
            "null_seed": report.null_seed,
        },
        "tau_hat": report.changepoint,
        "tau_label": report.changepoint_label,
        "statistic": report.statistic,
        "p_value": report.p_value,
        "detected": report.detected,
        "critical_values": {
            _level_key(lvl): report.critical_values[lvl]
            for lvl in sorted(report.critical_values)
        },
        "segments": _segments_dict(report),
        "profile": [
            {"k": int(k), "label": series.label_of(int(k)), "J": float(j)}
            for k, j in report.profile.entries
        ],
    }


def _render_json(report: AnalysisReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def _render_csv(report: AnalysisReport) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "label", "J"])
    series = report.series
    for k, j in report.profile.entries:
        writer.writerow([int(k), series.label_of(int(k)), repr(float(j))])
    return buf.getvalue()


def _sig(x: float) -> str:
    if x == 0:
        return "0"
    if not math.isfinite(x):
        return str(x)
    return f"{x:.4g}"


def _render_text(report: AnalysisReport) -> str:
    series = report.series
    profile = report.profile
    cfg = report.config
    first, last = series.label_of(1), series.label_of(series.n)
    k_lo = int(profile.candidates[0])
    k_hi = int(profile.candidates[-1])
    lines = [
        "slope-change detection report",
        "=============================",
        f"observations:     {series.n} ({first} to {last})",
        f"trimming:         delta = {cfg.delta:g}, "
        f"candidates k = {k_lo} .. {k_hi}",
        f"max |statistic|:  {_sig(report.statistic)} at {report.changepoint_label}"
        f" (k = {report.changepoint})",
        f"p-value:          {_sig(report.p_value)}  "
        f"({report.null_replicates} replicates, {report.null_method})",
        "critical values:  " + "  ".join(
            f"{_level_key(lvl)}%: {_sig(report.critical_values[lvl])}"
            for lvl in sorted(report.critical_values)),
    ]
    verdict = (f"slope change detected at {report.changepoint_label}"
               if report.detected else "no slope change detected")
    lines.append(f"decision:         {verdict} (level {cfg.level:g})")
    lines.append(
        f"left segment:     slope {_sig(report.left_slope)} per step, "
        f"{first} .. {report.changepoint_label}")
    lines.append(
        f"right segment:    slope {_sig(report.right_slope)} per step, "
        f"{report.changepoint_label} .. {last}")
    lines.append(
        f"residual sd:      {_sig(math.sqrt(report.fit.sigma2_hat))}")
    return "\n".join(lines) + "\n"


_RENDERERS = {"json": _render_json, "csv": _render_csv, "text": _render_text}


def render_report(report: AnalysisReport, fmt: str = "text") -> str:
    """Render a report to a string in the requested format."""
    try:
        renderer = _RENDERERS[fmt]
    except KeyError:
        raise ValueError(f"unknown report format {fmt!r}; "
                         f"expected one of {sorted(_RENDERERS)}")
    return renderer(report)


def write_report(report: AnalysisReport, destination, fmt: str = "text") -> str:
    """Render a report and write it to a path or text stream.

    Returns the rendered string.  Output is deterministic: identical
    reports render to identical bytes.
    """
    text = render_report(report, fmt)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")
    return text
