"""Graphviz DOT rendering of accessibility relations.

Output depends only on the model: states and players appear in file order
and edges in state order, so the same model always renders to the same
bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from doxa.frames import bits, blindspot_mask
from doxa.games import accessibility_degree
from doxa.modelfile import ModelFile, format_rational


@dataclass(frozen=True)
class DotOptions:
    merged: bool = False
    players: tuple[str, ...] | None = None
    degrees: bool = False


def _q(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def _degree(model: ModelFile, player: str, a: int, b: int) -> str | None:
    ext = model.extension
    if ext is None:
        return None
    return format_rational(accessibility_degree(ext, player, a, b))


def export_dot(model: ModelFile, options: DotOptions = DotOptions()) -> str:
    sp = model.space
    players = options.players or model.players
    for p in players:
        model.profile[p]
    full = sp.full_mask
    blind = {p: blindspot_mask(model.profile[p].sets, full) for p in players}
    lines: list[str] = []

    def nodes(marks: dict[int, list[str]]):
        lines.append("  node [shape=circle];")
        for k, lab in enumerate(sp.labels):
            who = marks.get(k)
            if who is None:
                lines.append(f"  {_q(lab)};")
            else:
                note = "blindspot" if not options.merged else "blindspot: " + ", ".join(who)
                lines.append(f"  {_q(lab)} [style=dashed, xlabel={_q(note)}];")

    if options.merged:
        marks: dict[int, list[str]] = {}
        for p in players:
            for k in bits(blind[p]):
                marks.setdefault(k, []).append(p)
        lines.append(f"digraph {_q('model')} {{")
        lines.append("  rankdir=LR;")
        nodes(marks)
        for a in range(sp.n):
            for p in players:
                for b in bits(model.profile[p].sets[a]):
                    label = p
                    if options.degrees and (d := _degree(model, p, a, b)) is not None:
                        label = f"{p}: {d}"
                    lines.append(f"  {_q(sp.labels[a])} -> {_q(sp.labels[b])} [label={_q(label)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    for p in players:
        lines.append(f"digraph {_q('player ' + p)} {{")
        lines.append("  rankdir=LR;")
        nodes({k: [p] for k in bits(blind[p])})
        for a in range(sp.n):
            for b in bits(model.profile[p].sets[a]):
                edge = f"  {_q(sp.labels[a])} -> {_q(sp.labels[b])}"
                if options.degrees and (d := _degree(model, p, a, b)) is not None:
                    edge += f" [label={_q(d)}]"
                lines.append(edge + ";")
        lines.append("}")
    return "\n".join(lines) + "\n"
