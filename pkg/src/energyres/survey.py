"""Sensor survey: ingest records, compute E_R/hbar, emit comparison reports.

Record schema (JSON array of objects; CSV uses one dotted column per leaf)::

    {
      "name": "...", "technology": "OPM",
      "geometry": {"type": "volumetric", "volume_m3": 1e-6},
      "sensitivity": {"type": "field_psd", "value": 1.0, "units": "fT/rtHz"},
      "mode": "continuous",            # or "pulsed", with "duty_accounting"
      "reference": "..."
    }

geometry.type is one of point (l_m), linear (length_m), planar (area_m2),
volumetric (volume_m3) or squid_loop (inductance_H, optional area_m2).
sensitivity.type is field_psd, field_rms (value is an rms field, plus
duration_s), flux_psd or moment_psd (plus distance_m, defaulting to the point
standoff). Units come from the fixed table in :mod:`energyres.units`.

For pulsed sensors the value must already include whatever dead time the
user considers fundamentally unavoidable; the tool does not decide that.
There is no frequency field, so rf sensors must be filtered out beforehand.
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional
from xml.sax.saxutils import escape, quoteattr

from . import erl_metrics as em
from .units import (
    CODATA2018, FIELD_PSD, FLUX_PSD, MOMENT_PSD, TESLA, convert_to_si, in_hbar,
)

__all__ = [
    "SensorRecord", "ErReport", "RowError", "DatasetError", "LoadResult",
    "SUGGESTED_TECHNOLOGIES", "REPORT_COLUMNS", "RECORD_COLUMNS",
    "parse_record", "record_to_dict", "load_dataset", "evaluate_record",
    "evaluate_dataset", "emit_report", "read_report", "reference_field_noise",
]

SUGGESTED_TECHNOLOGIES = (
    "MTJ", "GMR", "SKIM", "SQUIPT", "SQUID", "OPM", "NVD", "RFNVD", "BEC",
    "MEMF", "COPM", "EMR", "YIG", "GRA", "MFM", "PAFG", "WGM",
)

REPORT_COLUMNS = ("name", "technology", "l_m", "dB_sqrtT", "er_over_hbar", "below_hbar", "conversions")

RECORD_COLUMNS = (
    "name", "technology",
    "geometry.type", "geometry.l_m", "geometry.length_m", "geometry.area_m2",
    "geometry.volume_m3", "geometry.inductance_H",
    "sensitivity.type", "sensitivity.value", "sensitivity.units",
    "sensitivity.distance_m", "sensitivity.duration_s",
    "mode", "duty_accounting", "reference",
)


class DatasetError(ValueError):
    """The input as a whole could not be parsed."""


class RowError(NamedTuple):
    row: int
    name: str
    message: str


@dataclass(frozen=True)
class SensorRecord:
    name: str
    technology: str
    geometry: em.SensorGeometry
    sensitivity: em.SensitivitySpec
    mode: str = "continuous"
    duty_accounting: str = ""
    reference: str = ""

    def __post_init__(self):
        if self.mode not in ("continuous", "pulsed"):
            raise ValueError(f"mode must be 'continuous' or 'pulsed', got {self.mode!r}")
        s, g = self.sensitivity, self.geometry
        if isinstance(s, em.FluxPsd) and not isinstance(g, (em.SquidLoop, em.Planar)):
            raise ValueError("flux noise requires a squid_loop or planar geometry")
        if isinstance(s, em.MomentPsd) and not isinstance(g, em.Point):
            raise ValueError("moment noise requires a point geometry")


@dataclass(frozen=True)
class ErReport:
    name: str
    technology: str
    l: float                 # m
    db_sqrt_t: float         # T s^(1/2)
    er_over_hbar: float
    below_hbar: bool
    conversions: tuple = field(default_factory=tuple)


class LoadResult(NamedTuple):
    records: list
    errors: list


# -- parsing ----------------------------------------------------------------

def _num(d: dict, key: str, where: str) -> float:
    if key not in d or d[key] in (None, ""):
        raise ValueError(f"{where}: missing {key!r}")
    try:
        v = float(d[key])
    except (TypeError, ValueError):
        raise ValueError(f"{where}: {key!r} is not a number: {d[key]!r}") from None
    if not math.isfinite(v):
        raise ValueError(f"{where}: {key!r} must be finite")
    return v


def _opt_num(d: dict, key: str, where: str) -> Optional[float]:
    if d.get(key) in (None, ""):
        return None
    return _num(d, key, where)


def _parse_geometry(g: dict) -> em.SensorGeometry:
    if not isinstance(g, dict):
        raise ValueError("geometry must be an object")
    kind = g.get("type")
    if kind == "point":
        return em.Point(_num(g, "l_m", "geometry"))
    if kind == "linear":
        return em.Linear(_num(g, "length_m", "geometry"))
    if kind == "planar":
        return em.Planar(_num(g, "area_m2", "geometry"))
    if kind == "volumetric":
        return em.Volumetric(_num(g, "volume_m3", "geometry"))
    if kind == "squid_loop":
        return em.SquidLoop(_num(g, "inductance_H", "geometry"), _opt_num(g, "area_m2", "geometry"))
    raise ValueError(f"unknown geometry type {kind!r}")


def _parse_sensitivity(s: dict, geometry) -> em.SensitivitySpec:
    if not isinstance(s, dict):
        raise ValueError("sensitivity must be an object")
    kind = s.get("type")
    value = _num(s, "value", "sensitivity")
    units = s.get("units")
    q = convert_to_si(value, units)
    expected = {"field_psd": FIELD_PSD, "field_rms": TESLA, "flux_psd": FLUX_PSD, "moment_psd": MOMENT_PSD}
    if kind not in expected:
        raise ValueError(f"unknown sensitivity type {kind!r}")
    if q.dim != expected[kind]:
        raise ValueError(f"units {units!r} do not fit sensitivity type {kind!r}")
    if kind == "field_psd":
        return em.FieldPsd(q.value)
    if kind == "field_rms":
        return em.FieldRms(q.value, _num(s, "duration_s", "sensitivity"))
    if kind == "flux_psd":
        return em.FluxPsd(q.value)
    distance = _opt_num(s, "distance_m", "sensitivity")
    if distance is None:
        if not isinstance(geometry, em.Point):
            raise ValueError("moment noise requires a point geometry")
        distance = geometry.standoff
    return em.MomentPsd(q.value, distance)


def parse_record(d: dict) -> SensorRecord:
    """Validate one schema object into a :class:`SensorRecord`."""
    if not isinstance(d, dict):
        raise ValueError("record must be an object")
    geometry = _parse_geometry(d.get("geometry"))
    sensitivity = _parse_sensitivity(d.get("sensitivity"), geometry)
    mode = d.get("mode") or "continuous"
    return SensorRecord(
        name=str(d.get("name", "")),
        technology=str(d.get("technology", "")),
        geometry=geometry,
        sensitivity=sensitivity,
        mode=mode,
        duty_accounting=str(d.get("duty_accounting") or ""),
        reference=str(d.get("reference") or ""),
    )


def record_to_dict(r: SensorRecord) -> dict:
    """Schema object for a record, with all values in SI units."""
    g, s = r.geometry, r.sensitivity
    if isinstance(g, em.Point):
        geo = {"type": "point", "l_m": g.standoff}
    elif isinstance(g, em.Linear):
        geo = {"type": "linear", "length_m": g.length}
    elif isinstance(g, em.Planar):
        geo = {"type": "planar", "area_m2": g.area}
    elif isinstance(g, em.Volumetric):
        geo = {"type": "volumetric", "volume_m3": g.volume}
    else:
        geo = {"type": "squid_loop", "inductance_H": g.inductance}
        if g.area is not None:
            geo["area_m2"] = g.area
    if isinstance(s, em.FieldPsd):
        sens = {"type": "field_psd", "value": s.s_b, "units": "T^2/Hz"}
    elif isinstance(s, em.FieldRms):
        sens = {"type": "field_rms", "value": s.delta_b, "units": "T", "duration_s": s.duration}
    elif isinstance(s, em.FluxPsd):
        sens = {"type": "flux_psd", "value": s.s_phi, "units": "Wb^2/Hz"}
    else:
        sens = {"type": "moment_psd", "value": s.s_mu, "units": "(J/T)^2/Hz", "distance_m": s.distance}
    out = {"name": r.name, "technology": r.technology, "geometry": geo,
           "sensitivity": sens, "mode": r.mode, "reference": r.reference}
    if r.duty_accounting:
        out["duty_accounting"] = r.duty_accounting
    return out


def _unflatten(row: dict) -> dict:
    out: dict = {}
    for key, value in row.items():
        if key is None:
            continue
        if value is None or value.strip() == "":
            continue
        head, _, leaf = key.strip().partition(".")
        if leaf:
            out.setdefault(head, {})[leaf] = value.strip()
        else:
            out[head] = value.strip()
    return out


def _read_text(source) -> tuple[str, Optional[str]]:
    if hasattr(source, "read"):
        return source.read(), getattr(source, "name", None)
    if str(source) == "-":
        return sys.stdin.read(), None
    path = Path(source)
    return path.read_text(encoding="utf-8"), path.name


def load_dataset(source, fmt: Optional[str] = None) -> LoadResult:
    """Read records from a path, ``"-"`` (stdin) or a text stream.

    Format is `fmt` ("json" / "csv"), else the file extension, else sniffed
    from the first character. Invalid rows are skipped and reported in
    ``errors``; unparseable input raises :class:`DatasetError`.
    """
    text, name = _read_text(source)
    if fmt is None:
        suffix = Path(name).suffix.lower() if name else ""
        if suffix in (".json", ".csv"):
            fmt = suffix[1:]
        else:
            fmt = "json" if text.lstrip()[:1] in ("[", "{", "") else "csv"
    if fmt == "json":
        if not text.strip():
            return LoadResult([], [])
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"malformed JSON: {exc}") from None
        if not isinstance(rows, list):
            raise DatasetError("JSON dataset must be an array of records")
    elif fmt == "csv":
        try:
            reader = csv.DictReader(io.StringIO(text), strict=True)
            rows = [_unflatten(r) for r in reader]
        except csv.Error as exc:
            raise DatasetError(f"malformed CSV: {exc}") from None
    else:
        raise DatasetError(f"unknown dataset format {fmt!r}")

    records, errors = [], []
    for i, row in enumerate(rows):
        try:
            records.append(parse_record(row))
        except (ValueError, TypeError) as exc:
            label = row.get("name", "") if isinstance(row, dict) else ""
            errors.append(RowError(i, str(label), str(exc)))
    return LoadResult(records, errors)


# -- evaluation -------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.7g}"


def evaluate_record(r: SensorRecord, constants=CODATA2018) -> ErReport:
    """Effective dimension, field-noise amplitude and E_R/hbar for one record."""
    g, s = r.geometry, r.sensitivity
    conversions = []
    if isinstance(s, em.FieldPsd):
        s_b = s.s_b
    elif isinstance(s, em.FieldRms):
        s_b = s.s_b
        conversions.append(f"rms->psd: S_B = dB^2 T with T = {_fmt(s.duration)} s")
    elif isinstance(s, em.FluxPsd):
        area = g.area
        if area is None:
            raise em.UnsupportedGeometry(
                "flux noise on a SQUID loop without an area cannot be put on the "
                "common scale; use er_squid(S_Phi, L)")
        s_b = em.flux_noise_to_field_noise(s.s_phi, area).value
        conversions.append(f"flux->field via area {_fmt(area)} m^2")
    else:
        s_b = em.moment_noise_to_field_noise(s.s_mu, s.distance, constants).value
        conversions.append(f"moment->field via on-axis dipole at {_fmt(s.distance)} m")

    if isinstance(g, em.SquidLoop) and isinstance(s, em.FluxPsd):
        er_sq = em.er_squid(s.s_phi, g.inductance)
        conversions.append(f"er_squid = S_Phi/(2L) = {_fmt(in_hbar(er_sq, constants))} hbar")

    l = em.effective_linear_dimension(g).value
    er = em.er_general(s_b, l, constants)
    ratio = in_hbar(er, constants)
    return ErReport(
        name=r.name,
        technology=r.technology,
        l=l,
        db_sqrt_t=math.sqrt(s_b),
        er_over_hbar=ratio,
        below_hbar=ratio < 1.0,
        conversions=tuple(conversions),
    )


def evaluate_dataset(records, constants=CODATA2018, workers: int = 1):
    """Evaluate records in input order; returns (reports, errors)."""

    def one(r):
        try:
            return evaluate_record(r, constants), None
        except ValueError as exc:
            return None, str(exc)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, records))
    else:
        results = [one(r) for r in records]
    reports, errors = [], []
    for i, (rep, err) in enumerate(results):
        if err is None:
            reports.append(rep)
        else:
            errors.append(RowError(i, records[i].name, err))
    return reports, errors


def reference_field_noise(l, constants=CODATA2018):
    """dB sqrt(T) of the E_R = hbar line at effective dimension `l`."""
    return math.sqrt(2.0 * constants.mu0 * constants.hbar / l ** 3)


# -- reports ----------------------------------------------------------------

def _report_row(r: ErReport) -> dict:
    return {
        "name": r.name,
        "technology": r.technology,
        "l_m": r.l,
        "dB_sqrtT": r.db_sqrt_t,
        "er_over_hbar": r.er_over_hbar,
        "below_hbar": r.below_hbar,
        "conversions": list(r.conversions),
    }


def emit_report(reports, fmt: str = "csv", constants=CODATA2018) -> str:
    """Render reports as "csv", "json" or "svg" text."""
    reports = list(reports)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for r in reports:
            w.writerow([r.name, r.technology, repr(r.l), repr(r.db_sqrt_t),
                        repr(r.er_over_hbar), "true" if r.below_hbar else "false",
                        "; ".join(r.conversions)])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([_report_row(r) for r in reports], indent=2) + "\n"
    if fmt == "svg":
        if not reports:
            raise ValueError("cannot plot an empty report")
        return _svg(reports, constants)
    raise ValueError(f"unknown report format {fmt!r}")


def read_report(text: str, fmt: str = "csv") -> list[ErReport]:
    """Parse a CSV or JSON report produced by :func:`emit_report`."""
    if fmt == "json":
        rows = json.loads(text)
    elif fmt == "csv":
        rows = []
        for row in csv.DictReader(io.StringIO(text)):
            row = dict(row)
            row["below_hbar"] = row["below_hbar"] == "true"
            row["conversions"] = [c for c in row["conversions"].split("; ") if c]
            rows.append(row)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return [
        ErReport(
            name=row["name"], technology=row["technology"], l=float(row["l_m"]),
            db_sqrt_t=float(row["dB_sqrtT"]), er_over_hbar=float(row["er_over_hbar"]),
            below_hbar=bool(row["below_hbar"]), conversions=tuple(row["conversions"]),
        )
        for row in rows
    ]


# -- SVG --------------------------------------------------------------------

_W, _H = 760, 540
_LEFT, _RIGHT, _TOP, _BOTTOM = 80, 190, 30, 60
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")
_SHAPES = ("circle", "square", "triangle", "diamond")


def _marker(shape: str, color: str) -> str:
    if shape == "circle":
        return f'<circle r="5" fill="{color}"/>'
    if shape == "square":
        return f'<rect x="-4.5" y="-4.5" width="9" height="9" fill="{color}"/>'
    if shape == "triangle":
        return f'<path d="M0,-6 L5.2,3 L-5.2,3 Z" fill="{color}"/>'
    return f'<path d="M0,-6 L6,0 L0,6 L-6,0 Z" fill="{color}"/>'


class _Axes(NamedTuple):
    x0: int
    x1: int
    y0: int
    y1: int

    def px(self, lx: float) -> float:
        return _LEFT + (lx - self.x0) / (self.x1 - self.x0) * (_W - _LEFT - _RIGHT)

    def py(self, ly: float) -> float:
        return _H - _BOTTOM - (ly - self.y0) / (self.y1 - self.y0) * (_H - _TOP - _BOTTOM)


def _decades(values) -> tuple[int, int]:
    lo = math.floor(min(values))
    hi = math.ceil(max(values))
    if hi <= lo:
        hi = lo + 1
    return lo, hi


def _svg(reports, constants) -> str:
    lx = [math.log10(r.l) for r in reports]
    ly = [math.log10(r.db_sqrt_t) for r in reports]
    ax = _Axes(*_decades(lx), *_decades(ly))
    techs = list(dict.fromkeys(r.technology for r in reports))
    style = {t: (_SHAPES[i % len(_SHAPES)], _PALETTE[i % len(_PALETTE)]) for i, t in enumerate(techs)}

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        '<defs><clipPath id="plot-area">'
        f'<rect x="{_LEFT}" y="{_TOP}" width="{_W - _LEFT - _RIGHT}" height="{_H - _TOP - _BOTTOM}"/>'
        '</clipPath></defs>',
        f'<rect x="{_LEFT}" y="{_TOP}" width="{_W - _LEFT - _RIGHT}" height="{_H - _TOP - _BOTTOM}" '
        'fill="none" stroke="black"/>',
    ]
    for k in range(ax.x0, ax.x1 + 1):
        x = ax.px(k)
        out.append(f'<line class="tick" x1="{x:.6f}" y1="{_H - _BOTTOM}" x2="{x:.6f}" y2="{_H - _BOTTOM + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.6f}" y="{_H - _BOTTOM + 20}" text-anchor="middle">10<tspan baseline-shift="super" font-size="9">{k}</tspan></text>')
    for k in range(ax.y0, ax.y1 + 1):
        y = ax.py(k)
        out.append(f'<line class="tick" x1="{_LEFT - 5}" y1="{y:.6f}" x2="{_LEFT}" y2="{y:.6f}" stroke="black"/>')
        out.append(f'<text x="{_LEFT - 8}" y="{y + 4:.6f}" text-anchor="end">10<tspan baseline-shift="super" font-size="9">{k}</tspan></text>')
    out.append(f'<text x="{(_LEFT + _W - _RIGHT) / 2}" y="{_H - 15}" text-anchor="middle">effective linear dimension l (m)</text>')
    out.append(f'<text transform="translate(20,{(_TOP + _H - _BOTTOM) / 2}) rotate(-90)" text-anchor="middle">δB√T (T√s)</text>')

    # E_R = hbar: log10(dB) = 0.5 log10(2 mu0 hbar) - 1.5 log10(l), a straight line
    ya = math.log10(reference_field_noise(10.0 ** ax.x0, constants))
    yb = math.log10(reference_field_noise(10.0 ** ax.x1, constants))
    out.append(
        f'<line id="reference-line" clip-path="url(#plot-area)" x1="{ax.px(ax.x0):.6f}" y1="{ax.py(ya):.6f}" '
        f'x2="{ax.px(ax.x1):.6f}" y2="{ax.py(yb):.6f}" stroke="black" stroke-dasharray="6,4"/>'
    )
    for r, x, y in zip(reports, lx, ly):
        shape, color = style[r.technology]
        cls = f"marker tech-{techs.index(r.technology)}"
        out.append(
            f'<g class="{cls}" data-name={quoteattr(r.name)} data-l="{r.l!r}" data-db="{r.db_sqrt_t!r}" '
            f'transform="translate({ax.px(x):.6f},{ax.py(y):.6f})">{_marker(shape, color)}</g>'
        )
    lx0 = _W - _RIGHT + 15
    out.append(f'<g id="legend" transform="translate({lx0},{_TOP + 10})">')
    for i, t in enumerate(techs):
        shape, color = style[t]
        out.append(f'<g transform="translate(0,{18 * i})">{_marker(shape, color)}'
                   f'<text x="12" y="4">{escape(t) or "(untagged)"}</text></g>')
    n = len(techs)
    out.append(f'<line x1="-6" y1="{18 * n}" x2="6" y2="{18 * n}" stroke="black" stroke-dasharray="6,4"/>'
               f'<text x="12" y="{18 * n + 4}">E_R = ħ</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
