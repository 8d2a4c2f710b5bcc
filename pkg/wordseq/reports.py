import io
import json
from collections.abc import Iterable

import pandas as pd

from wordseq.checks import CheckResult
from wordseq.graph_system import InverseSystem
from wordseq.group_ops import GroupElement, MultiplicityReport, essential_multiplicity
from wordseq.limit_ops import CompletionResult, StabilityVerdict, sequence_to_json
from wordseq.metric import FourPointReport, LengthBound, RhoInterval, TreeBall


"""
Tables and renderings for everything the CLI prints.

Tables are pandas DataFrames written as CSV; machine output is JSON built
from plain dicts; covering trees also render as DOT. Dyadic values are
always rendered exactly as `p/2^e`.
"""

CHECK_COLUMNS = ["check", "fixture", "cases", "failures", "passed", "first_failure"]
TRUST_COLUMNS = ["level", "word", "confirmed", "unstable_ending", "anomaly", "coherent", "ending"]
MULTIPLICITY_COLUMNS = ["vertex", "level", "upto", "counts", "monotone", "plateau"]


def check_table(results: Iterable[CheckResult]) -> pd.DataFrame:
    rows = [
        {
            "check": r.name,
            "fixture": r.fixture,
            "cases": r.cases,
            "failures": len(r.failures),
            "passed": r.passed,
            "first_failure": r.failures[0] if r.failures else "",
        }
        for r in results
    ]
    return pd.DataFrame(rows, columns=CHECK_COLUMNS)


def constancy_table(verdict: StabilityVerdict) -> pd.DataFrame:
    return verdict.table.sort_values(by=["level", "source"]).reset_index(drop=True)


def trust_table(result: CompletionResult) -> pd.DataFrame:
    rows = [
        {
            "level": t.level,
            "word": str(result.sequence.word(t.level)),
            "confirmed": t.confirmed,
            "unstable_ending": t.unstable_ending,
            "anomaly": t.anomaly,
            "coherent": t.coherent,
            "ending": str(t.ending),
        }
        for t in result.trust
    ]
    return pd.DataFrame(rows, columns=TRUST_COLUMNS)


def multiplicity_table(system: InverseSystem, n: int, K: int) -> pd.DataFrame:
    """One row per vertex of level n with its c_k counts up to level K."""
    rows = []
    for v in sorted(system.level(n).vertices):
        report = essential_multiplicity(system, n, v, K)
        rows.append(
            {
                "vertex": v,
                "level": n,
                "upto": K,
                "counts": " ".join(str(c) for _, c in report.counts),
                "monotone": report.monotone,
                "plateau": report.plateau,
            }
        )
    return pd.DataFrame(rows, columns=MULTIPLICITY_COLUMNS)


def to_csv(df: pd.DataFrame) -> str:
    buffer = io.StringIO()
    df.to_csv(buffer, index=False)
    return buffer.getvalue()


# --- JSON ------------------------------------------------------------------


def verdict_json(verdict: StabilityVerdict) -> dict:
    return {
        "verdict": "Stable" if verdict.stable else "Unknown",
        "window": verdict.window,
        "first_unstable": verdict.first_unstable,
    }


def bound_json(bound: LengthBound) -> dict:
    return {"lo": str(bound.lo), "hi": str(bound.hi)}


def rho_json(interval: RhoInterval) -> dict:
    return {"lo": str(interval.lo), "hi": str(interval.hi), "verdict": str(interval.verdict)}


def completion_json(result: CompletionResult) -> dict:
    return {
        "sequence": sequence_to_json(result.sequence),
        "trust": trust_table(result).to_dict(orient="records"),
    }


def element_json(element: GroupElement) -> dict:
    return {"sequence": sequence_to_json(element.sequence), **verdict_json(element.verdict)}


def multiplicity_json(report: MultiplicityReport) -> dict:
    return {
        "level": report.level,
        "vertex": report.vertex,
        "counts": {str(k): c for k, c in report.counts},
        "monotone": report.monotone,
        "plateau": report.plateau,
    }


def four_point_json(report: FourPointReport) -> dict:
    return {
        "max_defect": str(report.max_defect),
        "slack": str(report.slack),
        "worst": list(report.worst) if report.worst else None,
        "within_slack": report.within_slack,
        "quadruples": report.quadruples,
    }


def tree_json(ball: TreeBall) -> dict:
    graph = ball.graph
    return {
        "level": ball.level,
        "partial": ball.partial,
        "root": str(ball.root),
        "nodes": [{"word": str(w), "coordinate": str(graph.nodes[w]["coordinate"])} for w in graph.nodes],
        "edges": [[str(u), str(v)] for u, v in graph.edges],
    }


def system_json(system: InverseSystem) -> dict:
    return {
        "name": system.name,
        "depth": system.depth,
        "levels": [
            {
                "level": level.level_index,
                "vertices": sorted(level.vertices),
                "edges": [list(e) for e in sorted(level.edges)],
                "subdiv": level.subdiv,
                "basepoint": level.basepoint,
            }
            for level in system.levels
        ],
        "maps": [
            {"source": m.source, "target": m.target, "assignment": {v: str(p) for v, p in sorted(m.assignment.items())}}
            for m in system.maps
        ],
    }


def dumps(data) -> str:
    return json.dumps(data, indent=2)


# --- Text ------------------------------------------------------------------


def tree_dot(ball: TreeBall) -> str:
    """Render a covering-tree ball as a DOT digraph."""
    out = io.StringIO()
    write_line = lambda s: out.write(s + "\n")  # noqa: E731
    graph = ball.graph
    ids = {w: i for i, w in enumerate(graph.nodes)}
    write_line("digraph tree {")
    write_line(f'\tgraph [label="level {ball.level}{" (partial)" if ball.partial else ""}"]')
    for w, i in ids.items():
        label = f"{w}\\n{graph.nodes[w]['coordinate']}"
        shape = "doublecircle" if w == ball.root else "ellipse"
        write_line(f'\t"{i}" [label="{label}", shape = {shape}];')
    for u, v in graph.edges:
        write_line(f'\t"{ids[u]}" -> "{ids[v]}";')
    write_line("}")
    return out.getvalue()
