"""Atlas rendering: a delimited table plus a winner-grid figure.

The table is the authoritative artifact; the figure is the same data laid
out as a grid, one cell per game code, colored by winner.
"""

from __future__ import annotations

import os

from .engine import Atlas
from .ordinals import format_ordinal


def code_literal(code: tuple) -> str:
    """The code in the ordinal grammar's literal form."""
    return "code:[%s]" % ",".join(str(c) for c in code)


def atlas_tsv(atlas: Atlas) -> str:
    """Tab-separated winner table, one row per game code.

    Comment lines carry the formula and the stabilization shape so the
    file is self-describing; data rows are code, a smallest ordinal
    realizing it, and the winner.
    """
    lines = [
        "# formula\t%s" % atlas.formula,
        "# stable exponent\t%d" % atlas.stable_exponent,
        "# digit lag\t%s" % ",".join(map(str, atlas.coeff_lag)),
        "# digit period\t%s" % ",".join(map(str, atlas.coeff_period)),
        "code\tordinal\twinner",
    ]
    for row in atlas.rows:
        lines.append("%s\t%s\t%s" % (code_literal(row.code),
                                     format_ordinal(row.alpha), row.winner))
    return "\n".join(lines) + "\n"


def render_atlas_figure(atlas: Atlas, path: str) -> str:
    """Draw the winner grid to an image file and return its path.

    Rows are the leading-block flag, columns the digit tuples in table
    order; Player I's cells are drawn dark, Player II's light.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Patch

    flags = sorted({row.code[0] for row in atlas.rows})
    digit_tuples = []
    for row in atlas.rows:
        if row.code[1:] not in digit_tuples:
            digit_tuples.append(row.code[1:])
    digit_tuples.sort()
    grid = [[0.5] * len(digit_tuples) for _ in flags]
    for row in atlas.rows:
        r = flags.index(row.code[0])
        c = digit_tuples.index(row.code[1:])
        grid[r][c] = 1.0 if row.winner == "I" else 0.0

    width = max(4.0, 0.6 * len(digit_tuples) + 2.0)
    fig, ax = plt.subplots(figsize=(width, 1.2 * len(flags) + 1.6))
    ax.imshow(grid, cmap="cividis", vmin=0.0, vmax=1.0, aspect="auto")
    ax.set_yticks(range(len(flags)))
    ax.set_yticklabels(["flag %d" % f for f in flags])
    ax.set_xticks(range(len(digit_tuples)))
    ax.set_xticklabels([",".join(map(str, d)) if d else "-"
                        for d in digit_tuples],
                       rotation=45, ha="right", fontsize=8)
    ax.set_xlabel("digits (most significant first)")
    ax.set_title(atlas.formula, fontsize=9)
    ax.legend(handles=[Patch(color=plt.get_cmap("cividis")(1.0), label="I"),
                       Patch(color=plt.get_cmap("cividis")(0.0), label="II")],
              loc="upper right", fontsize=8, framealpha=0.9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_atlas_report(atlas: Atlas, out_path: str) -> tuple:
    """Write the table to `out_path` and the figure next to it.

    Returns (table path, figure path).  The figure reuses the table's
    name with a .png suffix.
    """
    with open(out_path, "w") as fh:
        fh.write(atlas_tsv(atlas))
    stem, ext = os.path.splitext(out_path)
    png = (stem if ext else out_path) + ".png"
    render_atlas_figure(atlas, png)
    return out_path, png
