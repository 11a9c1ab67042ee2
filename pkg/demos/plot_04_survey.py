"""
A survey of sensors against the hbar line
=========================================

Load a small synthetic dataset, evaluate every record and write CSV, JSON
and SVG reports. The numbers are made up for illustration.
"""

import sys
import tempfile
from pathlib import Path

from energyres import survey

###############################################################################
# Records in the JSON schema; the CSV file holds the same rows.
data = Path(__file__).parent / "data" / "sample_survey.json"
loaded = survey.load_dataset(data)
reports, errors = survey.evaluate_dataset(loaded.records)

for r in reports:
    flag = "below hbar" if r.below_hbar else ""
    print(f"{r.technology:<6s} {r.name:<28s} l = {r.l:9.3e} m   E_R = {r.er_over_hbar:12.4g} hbar  {flag}")
    for c in r.conversions:
        print(f"{'':8s}{c}")

###############################################################################
# Write the reports next to each other.
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="energyres-"))
out.mkdir(parents=True, exist_ok=True)
for fmt in ("csv", "json", "svg"):
    (out / f"survey.{fmt}").write_text(survey.emit_report(reports, fmt))
print("reports written to", out)
