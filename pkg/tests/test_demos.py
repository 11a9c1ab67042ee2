import subprocess
import sys

import pytest

from cli_corpus import ROOT

DEMOS = sorted((ROOT / "demos").glob("plot_*.py"))


@pytest.mark.parametrize("script", DEMOS, ids=lambda p: p.stem)
def test_demo_runs(script, tmp_path):
    p = subprocess.run([sys.executable, str(script), str(tmp_path)], capture_output=True, text=True,
                       cwd=tmp_path, timeout=300)
    assert p.returncode == 0, p.stderr
    assert p.stdout.strip()


def test_demos_exist():
    assert len(DEMOS) == 4
