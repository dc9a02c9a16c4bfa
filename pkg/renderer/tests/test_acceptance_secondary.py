"""Acceptance for the rendering side: preset CSVs -> images with the right
curve counts, and a hard failure on malformed input.

Needs the dephasr package for CSV generation; skipped when it is absent
(the trajectory suite never needs the renderer, and the renderer's own
unit tests run on synthetic CSV).
"""

import subprocess
import sys

import pytest

from dephasr_render import PlotSpec, render
from dephasr_render.cli import main

pytest.importorskip("dephasr")


@pytest.fixture(scope="module")
def preset_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("presets")
    for fid, span in ((1, "2.0"), (2, "1.0"), (3, "2.0")):
        cmd = [sys.executable, "-m", "dephasr.cli", "figure", "--id", str(fid),
               "--span", span, "--output", str(out / f"fig{fid}.csv")]
        subprocess.run(cmd, check=True, cwd=out)
    return out


def test_figure1_image(preset_dir, tmp_path):
    out = tmp_path / "fig1.png"
    fig = render(PlotSpec(inputs=(str(preset_dir / "fig1.csv"),),
                          figure_id=1, output=str(out)))
    assert out.exists() and out.stat().st_size > 0
    assert len(fig.axes[0].lines) == 4


def test_figure2_image(preset_dir, tmp_path):
    out = tmp_path / "fig2.png"
    fig = render(PlotSpec(inputs=(str(preset_dir / "fig2.csv"),),
                          figure_id=2, output=str(out)))
    assert out.exists()
    assert len(fig.axes[0].lines) == 6
    assert len(fig.axes[0].child_axes) == 2


def test_figure3_image(preset_dir, tmp_path):
    out = tmp_path / "fig3.png"
    fig = render(PlotSpec(inputs=(str(preset_dir / "fig3.csv"),),
                          figure_id=3, output=str(out)))
    assert out.exists()
    assert len(fig.axes[0].lines) == 4


def test_malformed_csv_fails(preset_dir, tmp_path):
    bad = tmp_path / "mangled.csv"
    text = (preset_dir / "fig1.csv").read_text().splitlines()
    bad.write_text("\n".join([text[0].replace("method", "mode")] + text[1:]))
    out = tmp_path / "no.png"
    assert main(["--figure", "1", "--in", str(bad), "--out", str(out)]) != 0
    assert not out.exists()
