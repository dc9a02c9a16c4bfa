"""Turn trajectory CSV files into figure images.

Input schema (fixed): header ``t1,t2,method,pair,re,im``.  Rows whose pair
ends in ``.id`` are single-time series and feed the inset panels of
figure 2; everything else is a two-time correlator curve.

Figure 1 and figure 3 draw one curve per method against t1.  Figure 2
draws one full-kernel curve per t2 against t = t1 - t2 and adds two inset
panels with the single-time series.  The renderer trusts the numbers; it
validates shape, not physics.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

EXPECTED_HEADER = ["t1", "t2", "method", "pair", "re", "im"]

METHOD_STYLES = {
    "markovian": {"color": "tab:blue", "linestyle": "-"},
    "nm-qrt": {"color": "tab:orange", "linestyle": "--"},
    "nm-full": {"color": "tab:green", "linestyle": "-."},
    "exact": {"color": "black", "linestyle": ":"},
}

METHOD_ORDER = ["markovian", "nm-qrt", "nm-full", "exact"]


class SchemaError(Exception):
    """CSV does not conform to the trajectory schema."""


class ValidationError(Exception):
    """CSV parsed but does not contain what the figure needs."""


@dataclass(frozen=True)
class PlotSpec:
    """What to render: input files, figure id, output image, styling."""

    inputs: tuple[str, ...]
    figure_id: int
    output: str
    xlabel: str | None = None
    ylabel: str | None = None
    styles: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure_id not in (1, 2, 3):
            raise ValidationError("figure id must be 1, 2 or 3")
        if not self.inputs:
            raise ValidationError("at least one input CSV is required")


def load_rows(paths) -> list[dict]:
    """Read and schema-check trajectory rows from one or more CSV files."""
    rows: list[dict] = []
    for path in paths:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file") from None
            if header != EXPECTED_HEADER:
                raise SchemaError(
                    f"{path}: header {header} != {EXPECTED_HEADER}")
            for lineno, rec in enumerate(reader, start=2):
                if len(rec) != 6:
                    raise SchemaError(f"{path}:{lineno}: expected 6 columns")
                try:
                    rows.append({
                        "t1": float(rec[0]), "t2": float(rec[1]),
                        "method": rec[2], "pair": rec[3],
                        "re": float(rec[4]), "im": float(rec[5]),
                    })
                except ValueError as exc:
                    raise SchemaError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise SchemaError("no data rows in input")
    return rows


def _split(rows):
    main = [r for r in rows if not r["pair"].endswith(".id")]
    insets = [r for r in rows if r["pair"].endswith(".id")]
    return main, insets


def _series(rows, key):
    """Group rows by key and return {value: (x_sorted, re_sorted)} pairs."""
    groups: dict = {}
    for r in rows:
        groups.setdefault(r[key], []).append(r)
    out = {}
    for val, grp in groups.items():
        grp.sort(key=lambda r: r["t1"])
        out[val] = ([r["t1"] for r in grp], [r["re"] for r in grp])
    return out


def _pair_label(rows) -> str:
    pairs = sorted({r["pair"] for r in rows})
    if len(pairs) != 1:
        raise ValidationError(f"expected one correlator pair, found {pairs}")
    a, b = pairs[0].split(".", 1)
    return f"Re <{a}(t1) {b}(t2)>"


def render(spec: PlotSpec):
    """Render the figure and write the image; returns the matplotlib figure."""
    rows = load_rows(spec.inputs)
    main, insets = _split(rows)
    if not main:
        raise ValidationError("no correlator rows to plot")

    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    styles = dict(METHOD_STYLES)
    styles.update(spec.styles)

    if spec.figure_id in (1, 3):
        by_method = _series(main, "method")
        order = [m for m in METHOD_ORDER if m in by_method]
        order += sorted(set(by_method) - set(order))
        for method in order:
            xs, ys = by_method[method]
            if not xs:
                raise ValidationError(f"method {method} has no samples")
            ax.plot(xs, ys, label=method, **styles.get(method, {}))
        ax.set_xlabel(spec.xlabel or "t1")
    else:
        by_t2 = _series(main, "t2")
        if not by_t2:
            raise ValidationError("figure 2 needs at least one t2 curve")
        for t2 in sorted(by_t2):
            xs, ys = by_t2[t2]
            ax.plot([x - t2 for x in xs], ys, label=f"t2 = {t2:g}")
        ax.set_xlabel(spec.xlabel or "t = t1 - t2")
        if insets:
            for pair, rect in (("sx.id", (0.58, 0.72, 0.3, 0.22)),
                               ("sy.id", (0.58, 0.40, 0.3, 0.22))):
                sub = [r for r in insets if r["pair"] == pair]
                if not sub:
                    raise ValidationError(f"figure 2 inset {pair} is empty")
                sub.sort(key=lambda r: r["t1"])
                inset_ax = ax.inset_axes(rect)
                inset_ax.plot([r["t1"] for r in sub], [r["re"] for r in sub],
                              linewidth=0.9)
                name = pair.split(".", 1)[0]
                inset_ax.set_title(f"<{name}(t)>", fontsize=7)
                inset_ax.tick_params(labelsize=6)

    ax.set_ylabel(spec.ylabel or _pair_label(main))
    ax.legend(fontsize=8)
    ax.grid(alpha=0.25)
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)
    return fig
