import csv
import io
import json
import math
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from energyres import erl_metrics as em
from energyres import survey
from energyres.units import CODATA2018 as K

SVG = "{http://www.w3.org/2000/svg}"


def rel(a, b):
    return abs(a - b) / abs(b)


def volumetric_row(name, V, sb, tech="OPM"):
    return {"name": name, "technology": tech,
            "geometry": {"type": "volumetric", "volume_m3": V},
            "sensitivity": {"type": "field_psd", "value": sb, "units": "T^2/Hz"},
            "mode": "continuous", "reference": "synthetic"}


def kappa_rows():
    rows = []
    for i, (kappa, l) in enumerate([(0.5, 1e-8), (1.0, 1e-6), (2.0, 1e-4), (44.0, 1e-3),
                                    (3773.0, 1e-2), (1.0, 1e-1)]):
        rows.append({"name": f"k{i}", "technology": ["SQUID", "OPM", "NVD"][i % 3],
                     "geometry": {"type": "point", "l_m": l},
                     "sensitivity": {"type": "field_psd", "value": kappa * 2 * K.mu0 * K.hbar / l ** 3,
                                     "units": "T^2/Hz"}})
    return rows


# -- loading ----------------------------------------------------------------

def test_empty_inputs():
    assert survey.load_dataset(io.StringIO(""), fmt="json") == ([], [])
    assert survey.load_dataset(io.StringIO("[]")) == ([], [])
    hdr = ",".join(survey.RECORD_COLUMNS) + "\n"
    assert survey.load_dataset(io.StringIO(hdr), fmt="csv") == ([], [])


def test_single_valid_row():
    res = survey.load_dataset(io.StringIO(json.dumps([volumetric_row("a", 1e-6, 1e-30)])))
    assert len(res.records) == 1 and res.errors == []
    assert isinstance(res.records[0].geometry, em.Volumetric)


def test_incompatible_row_is_reported_and_others_kept():
    bad = volumetric_row("bad", 1e-6, 1e-30)
    bad["sensitivity"] = {"type": "moment_psd", "value": 1.0, "units": "muB/rtHz", "distance_m": 1e-8}
    rows = [volumetric_row("a", 1e-6, 1e-30), bad, volumetric_row("c", 1e-3, 1e-28)]
    res = survey.load_dataset(io.StringIO(json.dumps(rows)))
    assert [r.name for r in res.records] == ["a", "c"]
    assert len(res.errors) == 1
    err = res.errors[0]
    assert (err.row, err.name) == (1, "bad") and "point geometry" in err.message


@pytest.mark.parametrize("mutate,needle", [
    (lambda r: r["geometry"].update(type="blob"), "unknown geometry"),
    (lambda r: r["sensitivity"].update(units="Wb^2/Hz"), "do not fit"),
    (lambda r: r["sensitivity"].update(units="furlong"), "unsupported unit"),
    (lambda r: r["sensitivity"].update(value="abc"), "not a number"),
    (lambda r: r["geometry"].update(volume_m3=-1.0), "positive"),
    (lambda r: r.update(mode="sometimes"), "mode"),
])
def test_row_level_diagnostics(mutate, needle):
    row = volumetric_row("x", 1e-6, 1e-30)
    mutate(row)
    res = survey.load_dataset(io.StringIO(json.dumps([row])))
    assert res.records == [] and needle in res.errors[0].message


@pytest.mark.parametrize("text,fmt", [("[{", "json"), ('{"a": 1}', "json"), ('a,"b\n"x', "csv")])
def test_malformed_input_is_file_level(text, fmt):
    with pytest.raises(survey.DatasetError):
        survey.load_dataset(io.StringIO(text), fmt=fmt)


def test_csv_and_json_inputs_agree(tmp_path):
    rows = kappa_rows()
    jpath = tmp_path / "d.json"
    jpath.write_text(json.dumps(rows))
    cpath = tmp_path / "d.csv"
    with cpath.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=survey.RECORD_COLUMNS)
        w.writeheader()
        for r in rows:
            flat = {"name": r["name"], "technology": r["technology"]}
            for part in ("geometry", "sensitivity"):
                for k, v in r[part].items():
                    flat[f"{part}.{k}"] = repr(v) if isinstance(v, float) else v
            w.writerow(flat)
    a = survey.load_dataset(jpath)
    b = survey.load_dataset(cpath)
    assert a.records == b.records and not a.errors and not b.errors


def test_record_dict_round_trip():
    for row in kappa_rows() + [volumetric_row("v", 2e-6, 3e-29)]:
        rec = survey.parse_record(row)
        assert survey.parse_record(survey.record_to_dict(rec)) == rec


def test_moment_distance_defaults_to_standoff():
    row = {"name": "m", "technology": "MFM", "geometry": {"type": "point", "l_m": 1e-8},
           "sensitivity": {"type": "moment_psd", "value": 1.0, "units": "muB/rtHz"}}
    assert survey.parse_record(row).sensitivity.distance == 1e-8


# -- evaluation -------------------------------------------------------------

def test_volumetric_example():
    rep = survey.evaluate_record(survey.parse_record(
        {"name": "o", "technology": "OPM", "geometry": {"type": "volumetric", "volume_m3": 1e-6},
         "sensitivity": {"type": "field_psd", "value": 1.0, "units": "fT/rtHz"}}))
    assert rel(rep.l, 1e-2) < 1e-15
    assert abs(rep.er_over_hbar - 3772.97) < 0.01
    assert not rep.below_hbar


def test_squid_example_reports_both_forms():
    rep = survey.evaluate_record(survey.parse_record(
        {"name": "s", "technology": "SQUID",
         "geometry": {"type": "squid_loop", "inductance_H": 1e-10, "area_m2": 1e-10},
         "sensitivity": {"type": "flux_psd", "value": 1.0, "units": "uPhi0/rtHz"}}))
    assert rel(rep.er_over_hbar, 1613.3004656) < 1e-9
    assert any("= 202.7333 hbar" in c for c in rep.conversions)
    assert any(c.startswith("flux->field") for c in rep.conversions)


def test_point_moment_example():
    rep = survey.evaluate_record(survey.parse_record(
        {"name": "p", "technology": "MFM", "geometry": {"type": "point", "l_m": 1e-8},
         "sensitivity": {"type": "moment_psd", "value": 1.0, "units": "muB/rtHz", "distance_m": 1e-8}}))
    assert rel(rep.db_sqrt_t, 1.85480201667e-6) < 1e-10
    assert rel(rep.er_over_hbar, 12980.1316746) < 1e-9


def test_field_rms_conversion_recorded():
    rep = survey.evaluate_record(survey.parse_record(
        {"name": "b", "technology": "BEC", "geometry": {"type": "volumetric", "volume_m3": 1e-6},
         "sensitivity": {"type": "field_rms", "value": 1.0, "units": "fT", "duration_s": 1.0}}))
    assert rel(rep.er_over_hbar, 3772.97544936) < 1e-9
    assert rep.conversions[0].startswith("rms->psd")


def test_linear_and_bare_squid_are_evaluation_errors():
    recs = [
        survey.SensorRecord("lin", "MTJ", em.Linear(1e-3), em.FieldPsd(1e-28)),
        survey.SensorRecord("sq", "SQUID", em.SquidLoop(1e-10), em.FluxPsd(1e-40)),
        survey.SensorRecord("ok", "OPM", em.Volumetric(1e-6), em.FieldPsd(1e-30)),
    ]
    reports, errors = survey.evaluate_dataset(recs)
    assert [r.name for r in reports] == ["ok"]
    assert [(e.row, e.name) for e in errors] == [(0, "lin"), (1, "sq")]


@settings(max_examples=200)
@given(st.floats(min_value=1e-9, max_value=1e3))
def test_reference_line_record_over_twelve_decades(l):
    rec = survey.SensorRecord("r", "X", em.Point(l), em.FieldPsd(2 * K.mu0 * K.hbar / l ** 3))
    rep = survey.evaluate_record(rec)
    assert abs(rep.er_over_hbar - 1.0) < 1e-12


@given(st.floats(min_value=1e-9, max_value=1.0), st.floats(min_value=1e-34, max_value=1e-20))
def test_report_self_consistent(l, sb):
    rep = survey.evaluate_record(survey.SensorRecord("r", "X", em.Point(l), em.FieldPsd(sb)))
    recomputed = rep.db_sqrt_t ** 2 * rep.l ** 3 / (2 * K.mu0 * K.hbar)
    assert math.isclose(recomputed, rep.er_over_hbar, rel_tol=1e-12)
    assert rep.below_hbar == (rep.er_over_hbar < 1)


@given(st.floats(min_value=1e-6, max_value=1.0), st.floats(min_value=1e-34, max_value=1e-26),
       st.floats(min_value=1.0, max_value=1e3))
def test_classification_monotone(V, sb, factor):
    a = survey.evaluate_record(survey.SensorRecord("a", "X", em.Volumetric(V), em.FieldPsd(sb)))
    b = survey.evaluate_record(survey.SensorRecord("b", "X", em.Volumetric(V), em.FieldPsd(sb * factor)))
    assert not (not a.below_hbar and b.below_hbar)


def test_parallel_evaluation_preserves_order():
    recs = survey.load_dataset(io.StringIO(json.dumps(kappa_rows() * 5))).records
    assert survey.evaluate_dataset(recs, workers=4) == survey.evaluate_dataset(recs, workers=1)


# -- reports ----------------------------------------------------------------

def _reports():
    recs = survey.load_dataset(io.StringIO(json.dumps(kappa_rows()))).records
    return survey.evaluate_dataset(recs)[0]


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_report_round_trip(fmt):
    reps = _reports()
    back = survey.read_report(survey.emit_report(reps, fmt), fmt)
    assert back == reps


def test_csv_columns_and_empty_reports():
    text = survey.emit_report([], "csv")
    assert text.strip() == ",".join(survey.REPORT_COLUMNS)
    assert json.loads(survey.emit_report([], "json")) == []
    with pytest.raises(ValueError, match="empty"):
        survey.emit_report([], "svg")


def _line(root):
    ln = root.find(f".//{SVG}line[@id='reference-line']")
    return tuple(float(ln.get(k)) for k in ("x1", "y1", "x2", "y2"))


def _markers(root):
    out = []
    for g in root.iter(f"{SVG}g"):
        if "marker" in (g.get("class") or "").split():
            x, y = g.get("transform")[len("translate("):-1].split(",")
            out.append((g, float(x), float(y)))
    return out


def test_svg_structure_and_markers_on_line():
    reps = _reports()
    root = ET.fromstring(survey.emit_report(reps, "svg"))
    assert root.get("version") == "1.1"
    assert root.find(f".//{SVG}script") is None
    x1, y1, x2, y2 = _line(root)
    marks = _markers(root)
    assert len(marks) == len(reps)
    classes = {g.get("data-name"): g.get("class") for g, _, _ in marks}
    assert classes["k0"] != classes["k1"] and classes["k0"] == classes["k3"]
    for (g, x, y), rep in zip(marks, reps):
        assert float(g.get("data-l")) == rep.l and float(g.get("data-db")) == rep.db_sqrt_t
        # perpendicular pixel distance to the reference line
        d = abs((y2 - y1) * x - (x2 - x1) * y + x2 * y1 - y2 * x1) / math.hypot(x2 - x1, y2 - y1)
        if rep.er_over_hbar == pytest.approx(1.0, rel=1e-12):
            assert d < 1e-4
            assert rel(survey.reference_field_noise(rep.l), rep.db_sqrt_t) < 1e-12
        else:
            assert d > 1.0


def test_svg_equal_er_points_share_slope():
    # equal E_R/hbar ⇒ slope -3/2 in log-log between the two points
    reps = [r for r in _reports() if r.er_over_hbar == pytest.approx(1.0)]
    a, b = reps[:2]
    slope = (math.log10(b.db_sqrt_t) - math.log10(a.db_sqrt_t)) / (math.log10(b.l) - math.log10(a.l))
    assert abs(slope + 1.5) < 1e-12


def test_sample_dataset_loads():
    data = Path(__file__).parent.parent / "demos" / "data"
    js = survey.load_dataset(data / "sample_survey.json")
    cs = survey.load_dataset(data / "sample_survey.csv")
    assert js.records and not js.errors
    assert cs.records == js.records
