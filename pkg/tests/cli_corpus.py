"""CLI invocations exercised by the test suite (paths relative to the repo root)."""
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "demos" / "data"

CORPUS = [
    ["er", "--geometry", "volumetric", "--volume", "1e-6", "--sb", "1e-30"],
    ["er", "--geometry", "volumetric", "--volume", "1e-6", "--sb", "1e-30", "--si", "--format", "json"],
    ["er", "--geometry", "planar", "--area", "1e-8", "--sb-asd", "1e-15", "--alpha", "0.5"],
    ["er", "--geometry", "point", "--standoff", "1e-8", "--smu", "8.6007262929e-47"],
    ["er", "--geometry", "squid", "--inductance", "1e-10", "--sphi", "4.27579684e-42"],
    ["er", "--geometry", "squid", "--inductance", "1e-10", "--area", "1e-10", "--sphi", "4.27579684e-42"],
    ["er", "--geometry", "volumetric", "--volume", "1e-6", "--db", "1e-15", "--duration", "1"],
    ["limits", "--list"],
    ["limits", "--list", "--format", "json", "--precision", "15"],
    ["limits", "tc"],
    ["limits", "nvd", "--alpha", "1.3", "--si"],
    ["limits", "opm", "--params", str(DATA / "sample_species.json"), "--volume", "1e-6"],
    ["spn-msi", "--gamma", "4.398e10", "--x", "1e20"],
    ["ml", "--volume", "1e-18", "--time", "1e-6", "--b0", "1e-6"],
    ["bb", "--radius", "1e-6", "--beta", "2"],
    ["zeropoint", "--weighting", "parabolic", "--rs", "1e-3", "--tb", "0"],
    ["zeropoint", "--weighting", "parabolic", "--rs", "1e-3", "--tb", "300", "--format", "json"],
    ["survey", "--in", str(DATA / "sample_survey.json"), "--out", "-", "--report-format", "csv"],
    ["survey", "--in", str(DATA / "sample_survey.csv"), "--out", "-", "--report-format", "svg"],
]

# zeropoint runs repeated with several --workers settings
WORKER_VARIANTS = [
    ["zeropoint", "--weighting", "parabolic", "--rs", "1e-3", "--tb", "300", "--precision", "15"],
]
