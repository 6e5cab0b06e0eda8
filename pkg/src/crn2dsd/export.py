"""Deterministic serialization: system export, crosstalk report export,
trajectory logs, and DOT rendering of gadget complexes.

All outputs are byte-stable for identical inputs (sorted keys, fixed float
formatting via ``repr``).
"""

from __future__ import annotations

import json

from .analyzer import CrosstalkReport
from .compiler import DsdSystem
from .dsd import Complex
from .sim import Trajectory


def _strand_entry(strand) -> dict:
    return {
        "name": strand.name,
        "identity": strand.key,
        "role": strand.role.value,
        "domains": [d.name for d in strand.domains],
    }


def _complex_entry(c: Complex) -> dict:
    return {
        "name": c.name,
        "strands": [s.key for s in c.strands],
        "bonds": [[list(a), list(b)] for a, b in sorted(c.bonds)],
    }


def system_to_dict(sys: DsdSystem) -> dict:
    domains: dict[str, str] = {}
    strands: dict[str, dict] = {}

    def note(strand):
        strands.setdefault(strand.key, _strand_entry(strand))
        for d in strand.domains:
            domains.setdefault(d.label, d.kind.value)

    for key in sorted(sys.strand_table):
        note(sys.strand_table[key])
    complexes = []
    for g in sys.gadgets:
        for s in g.input_gate.strands + g.output_gate.strands:
            note(s)
        complexes.append(_complex_entry(g.input_gate))
        complexes.append(_complex_entry(g.output_gate))
    return {
        "format": "crn2dsd-system",
        "version": 1,
        "crn": [
            {"id": r.id, "reactants": list(r.reactants), "products": list(r.products)}
            for r in sys.crn.reactions
        ],
        "assignment": {
            "universal": sys.assignment.universal.name,
            "linkers": {f"r{rid}": d.name
                        for rid, d in sorted(sys.assignment.linker_of.items())},
        },
        "domains": [{"label": label, "kind": kind}
                    for label, kind in sorted(domains.items())],
        "strands": [strands[k] for k in sorted(strands)],
        "complexes": complexes,
        "counts": dict(sorted(sys.initial_counts.items())),
        "gc_sinks": sorted(sys.gc_sinks),
    }


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def report_to_dict(report: CrosstalkReport) -> dict:
    return {
        "format": "crn2dsd-report",
        "version": 1,
        "gc_assumed": report.gc_assumed,
        "spurious_count": report.spurious_count,
        "rules": dict(sorted(report.rules.items())),
        "buffer_collisions": list(report.buffer_collisions),
        "events": [
            {
                "classification": e.classification,
                "invader": e.invader,
                "gadget": e.gadget,
                "stage": e.stage,
                "target": e.target,
                "site": e.site,
                "site_label": e.site_label,
                "displaced": e.displaced,
                "rule": e.rule,
                "narrative": e.narrative,
            }
            for e in report.events
        ],
    }


def trajectory_to_text(traj: Trajectory, mapped: dict[str, int],
                       held: dict[str, int]) -> str:
    """One line per step: time, event id, sparse delta; then the stop
    reason and the high-level view of the final state."""
    lines = [f"# seed {traj.seed}"]
    for t, name, delta in traj.steps:
        parts = ",".join(f"{key}{n:+d}" for key, n in sorted(delta.items()))
        lines.append(f"{t!r}\t{name}\t{parts}")
    lines.append(f"# stopped {traj.stopped} time {traj.time!r} steps {len(traj.steps)}")
    species = " ".join(f"{k}={v}" for k, v in sorted(mapped.items()))
    lines.append(f"# species {species}" if species else "# species -")
    if held:
        inflight = " ".join(f"{k}={v}" for k, v in sorted(held.items()))
        lines.append(f"# in-flight {inflight}")
    return "\n".join(lines) + "\n"


def _dot_complex(c: Complex, cluster_id: str, lines: list[str]) -> None:
    lines.append(f'  subgraph "cluster_{cluster_id}" {{')
    lines.append(f'    label="{c.name}";')
    for si, strand in enumerate(c.strands):
        prev = None
        for di, d in enumerate(strand.domains):
            node = f"{cluster_id}_{si}_{di}"
            lines.append(f'    "{node}" [label="{d.name}"];')
            if prev is not None:
                lines.append(f'    "{prev}" -> "{node}";')
            prev = node
    for (a, b) in sorted(c.bonds):
        na = f"{cluster_id}_{a[0]}_{a[1]}"
        nb = f"{cluster_id}_{b[0]}_{b[1]}"
        lines.append(f'    "{na}" -> "{nb}" [dir=none, style=dashed];')
    lines.append("  }")


def system_to_dot(sys: DsdSystem) -> str:
    """Strands as chains of domain nodes, hybridization as dashed edges;
    one cluster per gate complex."""
    lines = ["digraph gadgets {", "  rankdir=LR;", '  node [shape=box];']
    for g in sys.gadgets:
        rid = g.reaction.id
        _dot_complex(g.input_gate, f"g1_r{rid}", lines)
        _dot_complex(g.output_gate, f"g2_r{rid}", lines)
    lines.append("}")
    return "\n".join(lines) + "\n"
