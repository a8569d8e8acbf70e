"""Pair analysis driver and report rendering (text, JSON, CSV, figures)."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import game as game_mod
from .energy import Energy, format_energy
from .game import DEFAULT_MAX_POSITIONS, GameGraph, build, format_position
from .hml import Evaluator, Formula, render
from .lts import TransitionSystem
from .solver import BudgetTable, solve
from .spectrum import NOTIONS, ORDER, Verdict, classify, frontier
from .strategy import certificates, extract

#: the notions double-checked by the slow oracles (debug path)
ORACLE_NOTIONS = ("BBsr", "B", "SB", "1S", "T")


@dataclass
class PairResult:
    left: str
    right: str
    kind: str                    # "compare" | "preorder"
    graph: GameGraph
    table: BudgetTable
    verdict: Verdict
    budgets_lr: List[Energy]
    budgets_rl: List[Energy]
    certs_lr: List[Tuple[Energy, Formula]]
    certs_rl: List[Tuple[Energy, Formula]]

    @property
    def positions(self) -> int:
        return len(self.graph)

    @property
    def moves(self) -> int:
        return self.graph.move_count()


def analyze_pair(sys: TransitionSystem, left: str, right: str,
                 kind: str = "compare",
                 max_positions: int = DEFAULT_MAX_POSITIONS) -> PairResult:
    """Build, solve and classify the comparison game for one pair."""
    p = sys.state(left)
    q = sys.state(right)
    graph = build(sys, p, q, max_positions)
    table = solve(graph)
    pos_lr = game_mod.attacker_position(p, 1 << q)
    pos_rl = game_mod.attacker_position(q, 1 << p)
    verdict = classify(table, pos_lr, pos_rl)
    evaluator = Evaluator(sys)
    certs_lr = certificates(sys, graph, table, pos_lr, evaluator)
    certs_rl = certificates(sys, graph, table, pos_rl, evaluator)
    return PairResult(
        left=left, right=right, kind=kind, graph=graph, table=table,
        verdict=verdict,
        budgets_lr=table.min_budgets(pos_lr),
        budgets_rl=table.min_budgets(pos_rl),
        certs_lr=certs_lr, certs_rl=certs_rl)


def notion_certificates(result: PairResult, direction: str = "lr"
                        ) -> List[Tuple[str, Optional[Energy], Optional[Formula]]]:
    """Per violated notion, one formula priced within its coordinate."""
    sys = result.graph.sys
    p = sys.state(result.left if direction == "lr" else result.right)
    q = sys.state(result.right if direction == "lr" else result.left)
    pos = game_mod.attacker_position(p, 1 << q)
    held = result.verdict.lr if direction == "lr" else result.verdict.rl
    out = []
    evaluator = Evaluator(sys)
    for name in ORDER:
        if held[name]:
            continue
        formula = extract(sys, result.graph, result.table, pos,
                          NOTIONS[name].coord, evaluator)
        out.append((name, NOTIONS[name].coord, formula))
    return out


# -- text -----------------------------------------------------------------


def text_report(result: PairResult, stats: bool = False,
                per_notion_formulas: bool = False) -> str:
    lines = []
    arrow = "~" if result.kind == "compare" else "<="
    lines.append("== %s %s %s ==" % (result.left, arrow, result.right))
    if stats:
        lines.append("stats: positions=%d moves=%d"
                     % (result.positions, result.moves))

    def budget_block(title, budgets, certs):
        lines.append(title)
        if not budgets:
            lines.append("  (none: defender wins every budget)")
        for e, f in certs:
            lines.append("  %s  %s" % (format_energy(e), render(f)))

    budget_block("minimal distinguishing budgets %s -> %s:"
                 % (result.left, result.right),
                 result.budgets_lr, result.certs_lr)
    directions = ("lr",) if result.kind == "preorder" else ("lr", "rl")
    if "rl" in directions:
        budget_block("minimal distinguishing budgets %s -> %s:"
                     % (result.right, result.left),
                     result.budgets_rl, result.certs_rl)

    lines.append("notions (finer to coarser):")
    for name in ORDER:
        v = result.verdict
        if result.kind == "preorder":
            lines.append("  %-10s %-3s  (%s)"
                         % (name, "yes" if v.lr[name] else "no",
                            NOTIONS[name].long_name))
        else:
            lines.append("  %-10s lr=%-3s rl=%-3s eq=%-3s  (%s)"
                         % (name,
                            "yes" if v.lr[name] else "no",
                            "yes" if v.rl[name] else "no",
                            "yes" if v.eq[name] else "no",
                            NOTIONS[name].long_name))

    relation = "lr" if result.kind == "preorder" else "equivalence"
    finest, coarsest = frontier(result.verdict, relation)
    lines.append("frontier (%s): finest maintained: %s" %
                 (relation, ", ".join(finest) if finest else "(none)"))
    lines.append("frontier (%s): coarsest violated: %s" %
                 (relation, ", ".join(coarsest) if coarsest else "(none)"))

    if per_notion_formulas:
        for direction in directions:
            entries = notion_certificates(result, direction)
            if entries:
                lines.append("per-notion certificates (%s):" % direction)
                for name, _coord, formula in entries:
                    lines.append("  %-10s %s" % (name, render(formula)))
    return "\n".join(lines)


# -- JSON -----------------------------------------------------------------


def json_pair(result: PairResult, emit_game: bool = False,
              emit_budgets: bool = False) -> dict:
    verdict = result.verdict
    formulas = []
    for e, f in result.certs_lr:
        formulas.append({"direction": "lr", "budget": format_energy(e),
                         "formula": render(f)})
    for e, f in result.certs_rl:
        formulas.append({"direction": "rl", "budget": format_energy(e),
                         "formula": render(f)})
    payload = {
        "left": result.left,
        "right": result.right,
        "kind": result.kind,
        "budgets_lr": [format_energy(e) for e in result.budgets_lr],
        "budgets_rl": [format_energy(e) for e in result.budgets_rl],
        "formulas": formulas,
        "notions": {name: {"lr": verdict.lr[name], "rl": verdict.rl[name],
                           "eq": verdict.eq[name]} for name in ORDER},
        "frontier": {},
    }
    for relation in ("equivalence", "lr", "rl"):
        finest, coarsest = frontier(verdict, relation)
        payload["frontier"][relation] = {
            "finest_maintained": list(finest),
            "coarsest_violated": list(coarsest),
        }
    if emit_budgets:
        sys = result.graph.sys
        payload["budget_table"] = {
            format_position(sys, pos):
                [format_energy(e) for e in result.table.min_budgets(i)]
            for i, pos in enumerate(result.graph.positions)}
    if emit_game:
        payload["game"] = game_mod.graph_to_json(result.graph)
    return payload


# -- delimited + figures ----------------------------------------------------


def write_csv(path: str, results: List[PairResult]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["left", "right", "notion", "lr", "rl", "eq"])
        for result in results:
            v = result.verdict
            for name in ORDER:
                writer.writerow([result.left, result.right, name,
                                 v.lr[name], v.rl[name], v.eq[name]])


#: hand-tuned lattice layout (x, y); finer notions sit higher
_LAYOUT = {
    "BBsr": (3.0, 8.0),
    "BB": (2.0, 7.0), "DBsr": (4.2, 7.0),
    "eta-bisim": (0.8, 6.0), "DB": (3.0, 6.0), "SB": (5.0, 6.0),
    "B": (2.4, 5.2),
    "eta-sim": (0.0, 4.4), "2S": (1.6, 4.4), "C": (3.2, 4.4),
    "RS": (1.0, 3.4), "PF": (2.2, 3.4), "IF": (3.4, 3.4),
    "RSs": (4.6, 3.4), "IFs": (5.6, 3.4),
    "1S": (0.2, 2.4), "R": (1.6, 2.4), "Rs": (4.6, 2.4),
    "F": (2.6, 1.4), "Fs": (4.9, 1.4),
    "T": (2.8, 0.4),
}


def write_figure(path: str, result: PairResult,
                 relation: str = "equivalence") -> None:
    """Render the spectrum lattice with the pair's verdict coloring."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .spectrum import EDGES

    if result.kind == "preorder" and relation == "equivalence":
        relation = "lr"
    finest, coarsest = frontier(result.verdict, relation)
    fig, ax = plt.subplots(figsize=(7.5, 7.0))
    for finer, coarser in EDGES:
        x0, y0 = _LAYOUT[finer]
        x1, y1 = _LAYOUT[coarser]
        ax.plot([x0, x1], [y0, y1], color="#b0b0b0", lw=1.0, zorder=1)
    for name in ORDER:
        x, y = _LAYOUT[name]
        held = result.verdict.holds(name, relation)
        color = "#2e7d32" if held else "#c62828"
        edge = "#000000" if name in finest or name in coarsest else color
        ax.scatter([x], [y], s=600, c=color, edgecolors=edge,
                   linewidths=2.0 if edge == "#000000" else 0.5, zorder=2)
        ax.annotate(name, (x, y), ha="center", va="center",
                    fontsize=8, color="white", zorder=3)
    arrow = "~" if result.kind == "compare" else "<="
    ax.set_title("%s %s %s (%s): green maintained, red violated;\n"
                 "outlined nodes form the frontier"
                 % (result.left, arrow, result.right, relation))
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
