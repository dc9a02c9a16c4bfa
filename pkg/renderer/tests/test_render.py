import math
import os

import pytest

from dephasr_render import PlotSpec, SchemaError, load_rows, render
from dephasr_render.cli import main

HEADER = "t1,t2,method,pair,re,im\n"


def cf_rows(method, t2, pair="sx.sy", n=40, span=2.0):
    lines = []
    for k in range(n + 1):
        t1 = t2 + span * k / n
        re = math.exp(-0.3 * (t1 - t2)) * math.cos(t1)
        im = math.exp(-0.3 * (t1 - t2)) * math.sin(t1)
        lines.append(f"{t1!r},{t2!r},{method},{pair},{re!r},{im!r}\n")
    return lines


def single_rows(pair, n=40, span=5.0):
    lines = []
    for k in range(n + 1):
        t = span * k / n
        lines.append(f"{t!r},0.0,nm-full,{pair},{math.cos(t)!r},0.0\n")
    return lines


def write_fig1_csv(path):
    lines = [HEADER]
    for method in ("markovian", "nm-qrt", "nm-full", "exact"):
        lines.extend(cf_rows(method, 0.2))
    path.write_text("".join(lines))


def write_fig2_csv(path):
    lines = [HEADER]
    for t2 in (0.2, 0.5, 1.0, 2.0, 5.0, 10.0):
        lines.extend(cf_rows("nm-full", t2))
    lines.extend(single_rows("sx.id"))
    lines.extend(single_rows("sy.id"))
    path.write_text("".join(lines))


class TestLoadRows:
    def test_round_trip(self, tmp_path):
        p = tmp_path / "ok.csv"
        write_fig1_csv(p)
        rows = load_rows([str(p)])
        assert rows[0]["method"] == "markovian"
        assert isinstance(rows[0]["re"], float)

    def test_empty_file_rejected(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(SchemaError):
            load_rows([str(p)])

    def test_header_only_rejected(self, tmp_path):
        p = tmp_path / "header.csv"
        p.write_text(HEADER)
        with pytest.raises(SchemaError):
            load_rows([str(p)])

    def test_wrong_header_rejected(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("time,value\n1,2\n")
        with pytest.raises(SchemaError):
            load_rows([str(p)])

    def test_non_numeric_rejected(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text(HEADER + "0.1,0.0,exact,sx.sy,abc,0.0\n")
        with pytest.raises(SchemaError):
            load_rows([str(p)])


class TestRender:
    def test_figure1_four_curves(self, tmp_path):
        csv_path = tmp_path / "fig1.csv"
        out = tmp_path / "fig1.png"
        write_fig1_csv(csv_path)
        fig = render(PlotSpec(inputs=(str(csv_path),), figure_id=1,
                              output=str(out)))
        assert out.exists() and out.stat().st_size > 0
        assert len(fig.axes[0].lines) == 4

    def test_figure2_six_curves_two_insets(self, tmp_path):
        csv_path = tmp_path / "fig2.csv"
        out = tmp_path / "fig2.png"
        write_fig2_csv(csv_path)
        fig = render(PlotSpec(inputs=(str(csv_path),), figure_id=2,
                              output=str(out)))
        assert out.exists()
        main_ax = fig.axes[0]
        assert len(main_ax.lines) == 6
        insets = main_ax.child_axes
        assert len(insets) == 2
        assert all(len(ax.lines) == 1 for ax in insets)

    def test_figure3_same_layout_as_1(self, tmp_path):
        csv_path = tmp_path / "fig3.csv"
        out = tmp_path / "fig3.png"
        lines = [HEADER]
        for method in ("markovian", "nm-qrt", "nm-full", "exact"):
            lines.extend(cf_rows(method, 10.0))
        csv_path.write_text("".join(lines))
        fig = render(PlotSpec(inputs=(str(csv_path),), figure_id=3,
                              output=str(out)))
        assert len(fig.axes[0].lines) == 4


class TestCli:
    def test_success(self, tmp_path):
        csv_path = tmp_path / "fig1.csv"
        write_fig1_csv(csv_path)
        out = tmp_path / "fig1.png"
        assert main(["--figure", "1", "--in", str(csv_path),
                     "--out", str(out)]) == 0
        assert out.exists()

    def test_malformed_csv_exits_nonzero(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("not,a,trajectory\n1,2,3\n")
        out = tmp_path / "no.png"
        assert main(["--figure", "1", "--in", str(bad),
                     "--out", str(out)]) == 2
        assert not out.exists()

    def test_empty_csv_exits_nonzero(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        out = tmp_path / "no.png"
        assert main(["--figure", "2", "--in", str(empty),
                     "--out", str(out)]) != 0
        assert not out.exists()

    def test_missing_input_is_io_error(self, tmp_path):
        out = tmp_path / "no.png"
        assert main(["--figure", "1", "--in", str(tmp_path / "ghost.csv"),
                     "--out", str(out)]) == 4
        assert not out.exists()

    def test_unwritable_output(self, tmp_path):
        csv_path = tmp_path / "fig1.csv"
        write_fig1_csv(csv_path)
        assert main(["--figure", "1", "--in", str(csv_path),
                     "--out", str(tmp_path / "ghost_dir" / "x.png")]) == 4
