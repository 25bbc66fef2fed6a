"""Phase flow aggregation: stage-wise transition counts and Sankey output.

A stage is one phase change in the run-collapsed letter sequence. A
trajectory that ends before a stage flows into the TERMINAL sink there;
activity past the stage horizon is folded into TERMINAL at the last stage
so conservation holds at every rendered stage.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .classify import PhaseLetter
from .langutory import Langutory

TERMINAL = "TERMINAL"
DEFAULT_MAX_STAGES = 8

# Per-phase colors; out-of-plan gray, termination black.
PHASE_COLORS = {
    "N": "#CCC7E6",
    "R": "#EEC7D4",
    "P": "#FFED99",
    "V": "#D9EDCC",
    "RG": "#B4DDF7",
    "VG": "#E1B28D",
    "S": "#808000",
    "O": "#B0B0B0",
    TERMINAL: "#000000",
}

_LETTER_ORDER = ["RG", "N", "R", "P", "V", "VG", "S", "O", TERMINAL]


@dataclass
class FlowTable:
    stages: list[int]
    flows: dict[tuple[int, str, str], int]
    population: int
    folded: dict[tuple[int, str, str], int] = field(default_factory=dict)


def collapse_runs(lang: Langutory) -> list[PhaseLetter]:
    """Collapse maximal runs of identical letters to a single occurrence."""
    collapsed: list[PhaseLetter] = []
    for letter in lang.letters:
        if not collapsed or collapsed[-1] != letter:
            collapsed.append(letter)
    return collapsed


def build_flow(corpus_langs: list[Langutory],
               max_stages: int = DEFAULT_MAX_STAGES) -> FlowTable:
    if max_stages < 1:
        raise ValueError("max_stages must be >= 1")
    flows: dict[tuple[int, str, str], int] = {}
    folded: dict[tuple[int, str, str], int] = {}
    for lang in corpus_langs:
        seq = [letter.value for letter in collapse_runs(lang)]
        length = len(seq)
        for stage in range(1, max_stages + 1):
            if stage <= length - 1 and stage < max_stages:
                key = (stage, seq[stage - 1], seq[stage])
            elif stage == max_stages and stage <= length - 1:
                # continuation past the horizon folds into TERMINAL here
                key = (stage, seq[stage - 1], TERMINAL)
                folded[key] = folded.get(key, 0) + 1
            elif stage == length:
                key = (stage, seq[length - 1], TERMINAL)
            else:
                break
            flows[key] = flows.get(key, 0) + 1
            if key[2] == TERMINAL:
                break
    return FlowTable(stages=list(range(1, max_stages + 1)), flows=flows,
                     population=len(corpus_langs), folded=folded)


def _sort_key(key: tuple[int, str, str]):
    stage, src, dst = key
    return (stage, _LETTER_ORDER.index(src) if src in _LETTER_ORDER else 99,
            _LETTER_ORDER.index(dst) if dst in _LETTER_ORDER else 99)


def flow_records(flow: FlowTable) -> list[dict]:
    return [{"stage": stage, "from": src, "to": dst,
             "count": flow.flows[(stage, src, dst)],
             "folded": flow.folded.get((stage, src, dst), 0)}
            for stage, src, dst in sorted(flow.flows, key=_sort_key)]


def write_flow_data(flow: FlowTable, path: str | Path) -> None:
    doc = {"population": flow.population,
           "max_stage": flow.stages[-1] if flow.stages else 0,
           "flows": flow_records(flow)}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def _column_nodes(flow: FlowTable) -> list[dict[str, int]]:
    """Node weights per column.

    Column 0 holds stage-1 sources; column s holds stage-s sinks. By
    conservation a middle column's inflow equals its stage-(s+1) outflow.
    """
    max_stage = max((k[0] for k in flow.flows), default=0)
    columns: list[dict[str, int]] = [dict() for _ in range(max_stage + 1)]
    for (stage, src, dst), count in flow.flows.items():
        if stage == 1:
            columns[0][src] = columns[0].get(src, 0) + count
        columns[stage][dst] = columns[stage].get(dst, 0) + count
    return columns


def render_sankey_svg(flow: FlowTable, width: int = 960, height: int = 480,
                      title: str = "") -> str:
    """Static SVG Sankey: one ribbon path per flow record."""
    margin, bar_w, gap = 40.0, 12.0, 6.0
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">']
    if title:
        parts.append(f'<text x="{margin}" y="20" font-size="14">{title}</text>')
    legend_y = height - 16
    lx = margin
    for name in _LETTER_ORDER:
        color = PHASE_COLORS[name]
        parts.append(f'<rect x="{lx}" y="{legend_y}" width="10" height="10" '
                     f'fill="{color}"/>')
        parts.append(f'<text x="{lx + 14}" y="{legend_y + 9}" font-size="9">'
                     f'{name}</text>')
        lx += 14 + 9 * max(1, len(name)) + 12

    if flow.population == 0 or not flow.flows:
        parts.append("</svg>")
        return "\n".join(parts) + "\n"

    columns = _column_nodes(flow)
    ncols = len(columns)
    plot_h = height - 2 * margin - 24
    col_x = [margin + c * (width - 2 * margin - bar_w) / max(1, ncols - 1)
             for c in range(ncols)]
    unit = plot_h / max(1, flow.population)

    # stack nodes per column, deterministic letter order
    node_geom: dict[tuple[int, str], tuple[float, float]] = {}
    for c, col in enumerate(columns):
        y = margin
        for name in sorted(col, key=lambda n: _LETTER_ORDER.index(n)
                           if n in _LETTER_ORDER else 99):
            h = col[name] * unit
            node_geom[(c, name)] = (y, h)
            parts.append(f'<rect x="{col_x[c]:.2f}" y="{y:.2f}" '
                         f'width="{bar_w}" height="{max(h, 1.0):.2f}" '
                         f'fill="{PHASE_COLORS.get(name, "#B0B0B0")}" '
                         f'stroke="#555" stroke-width="0.5"/>')
            y += h + gap

    src_used: dict[tuple[int, str], float] = {}
    dst_used: dict[tuple[int, str], float] = {}
    for stage, src, dst in sorted(flow.flows, key=_sort_key):
        count = flow.flows[(stage, src, dst)]
        h = count * unit
        sy0, _ = node_geom[(stage - 1, src)]
        dy0, _ = node_geom[(stage, dst)]
        sy = sy0 + src_used.get((stage - 1, src), 0.0)
        dy = dy0 + dst_used.get((stage, dst), 0.0)
        src_used[(stage - 1, src)] = src_used.get((stage - 1, src), 0.0) + h
        dst_used[(stage, dst)] = dst_used.get((stage, dst), 0.0) + h
        x0 = col_x[stage - 1] + bar_w
        x1 = col_x[stage]
        xm = (x0 + x1) / 2
        color = PHASE_COLORS.get(src, "#B0B0B0")
        parts.append(
            f'<path class="ribbon" d="M {x0:.2f} {sy:.2f} '
            f'C {xm:.2f} {sy:.2f} {xm:.2f} {dy:.2f} {x1:.2f} {dy:.2f} '
            f'L {x1:.2f} {dy + h:.2f} '
            f'C {xm:.2f} {dy + h:.2f} {xm:.2f} {sy + h:.2f} {x0:.2f} {sy + h:.2f} Z" '
            f'fill="{color}" fill-opacity="0.55"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_sankey(flow: FlowTable, data_path: str | Path, svg_path: str | Path,
                title: str = "") -> None:
    """Write the machine-readable flow file and the static SVG diagram."""
    write_flow_data(flow, data_path)
    Path(svg_path).write_text(render_sankey_svg(flow, title=title),
                              encoding="utf-8")
