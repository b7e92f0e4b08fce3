"""Figure recipes, strict CSV parsing, and deterministic rendering.

Inputs are the micromaser CLI's CSV files: sweeps with header
``D,mean_n,v,n_max,residual,status`` and photon distributions with a
``# ...`` moments comment followed by ``n,P``.  The per-curve vertical
shifts exist purely for visual separation of overlaid curves and are also
written out by --dump-plotted so they can be checked numerically.
"""

import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "figtool"


class DataError(RuntimeError):
    """Input CSV missing, malformed, or inconsistent with the recipe."""


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: str
    kind: str            # "sweep" or "pn"
    column: str          # "mean_n", "v" or "P"
    shifts: tuple        # per-curve vertical offset, display only
    xlabel: str
    ylabel: str
    labels: tuple        # per-curve legend text


RECIPES = {
    "fig1": FigureRecipe("fig1", "sweep", "mean_n", (0.0, 150.0), "D", "<n>",
                         ("(a) pair pumping", "(b) one-atom, shifted +150")),
    "fig2a": FigureRecipe("fig2a", "sweep", "mean_n", (0.0, 0.0), "D", "<n>",
                          ("pair pumping", "one-atom")),
    "fig2b": FigureRecipe("fig2b", "sweep", "v", (0.0, 0.0), "D", "v",
                          ("pair pumping", "one-atom")),
    "fig3a": FigureRecipe("fig3a", "pn", "P", (0.0, 0.0), "n", "P(n)",
                          ("pair pumping", "one-atom")),
    "fig3b": FigureRecipe("fig3b", "pn", "P", (0.0, 0.0), "n", "P(n)",
                          ("pair pumping", "one-atom")),
    "fig3c": FigureRecipe("fig3c", "pn", "P", (0.0, 0.0), "n", "P(n)",
                          ("pair pumping", "one-atom")),
    "fig4a": FigureRecipe("fig4a", "sweep", "mean_n", (0.0, 40.0, 80.0),
                          "D", "<n>",
                          ("(a) detuning 100", "(b) detuning 150, +40",
                           "(c) detuning 300, +80")),
    "fig4b": FigureRecipe("fig4b", "sweep", "v", (0.0, 4.0, 8.0), "D", "v",
                          ("(a) detuning 100", "(b) detuning 150, +4",
                           "(c) detuning 300, +8")),
}

SWEEP_HEADER = ["D", "mean_n", "v", "n_max", "residual", "status"]
PN_HEADER = ["n", "P"]


def _parse_csv(path: str, kind: str, column: str):
    """Return (x, y) arrays; raise DataError naming the file and line."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"{path}: cannot read ({exc})") from exc
    lineno = 0
    # pn files open with one moments comment; tolerate any leading comments
    while lineno < len(lines) and lines[lineno].startswith("#"):
        lineno += 1
    if lineno >= len(lines):
        raise DataError(f"{path}: no header line")
    header = lines[lineno].split(",")
    expected = SWEEP_HEADER if kind == "sweep" else PN_HEADER
    if header != expected:
        raise DataError(f"{path}, line {lineno + 1}: expected header "
                        f"{','.join(expected)!r}, got {lines[lineno]!r}")
    col = expected.index(column)
    xs, ys = [], []
    for i in range(lineno + 1, len(lines)):
        if not lines[i]:
            continue
        fields = lines[i].split(",")
        if len(fields) != len(expected):
            raise DataError(f"{path}, line {i + 1}: expected "
                            f"{len(expected)} fields, got {len(fields)}")
        if kind == "sweep" and fields[-1] != "ok":
            continue  # failed solver points carry no data
        try:
            x = float(fields[0])
            y = float(fields[col])
        except ValueError as exc:
            raise DataError(f"{path}, line {i + 1}: {exc}") from exc
        if not (math.isfinite(x) and math.isfinite(y)):
            raise DataError(f"{path}, line {i + 1}: non-finite value")
        xs.append(x)
        ys.append(y)
    if not xs:
        raise DataError(f"{path}: no usable data rows")
    return xs, ys


def load_curves(recipe: FigureRecipe, data_paths):
    if len(data_paths) != len(recipe.shifts):
        raise DataError(f"{recipe.figure_id} needs {len(recipe.shifts)} "
                        f"input CSVs, got {len(data_paths)}")
    return [_parse_csv(p, recipe.kind, recipe.column) for p in data_paths]


def shifted(curves, recipe: FigureRecipe):
    return [(xs, [y + s for y in ys])
            for (xs, ys), s in zip(curves, recipe.shifts)]


def dump_plotted(path: str, curves, recipe: FigureRecipe) -> None:
    """Re-emit the series exactly as drawn, shift arithmetic included."""
    names = "abc"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("curve,x,y\n")
        for ci, (xs, ys) in enumerate(shifted(curves, recipe)):
            for x, y in zip(xs, ys):
                fh.write(f"{names[ci]},{x:.17g},{y:.17g}\n")


def render(recipe: FigureRecipe, data_paths, out_path: str,
           dump_path: str | None = None) -> None:
    curves = load_curves(recipe, data_paths)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    styles = ["-", "--", "-."]
    for (xs, ys), label, style in zip(shifted(curves, recipe),
                                      recipe.labels, styles):
        ax.plot(xs, ys, style, linewidth=1.2, label=label)
    ax.set_xlabel(recipe.xlabel)
    ax.set_ylabel(recipe.ylabel)
    ax.set_title(recipe.figure_id)
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(out_path, metadata={"Date": None})
    plt.close(fig)
    if dump_path is not None:
        dump_plotted(dump_path, curves, recipe)
