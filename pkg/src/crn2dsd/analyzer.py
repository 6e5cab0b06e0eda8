"""Static crosstalk analysis of a compiled system.

Every free strand is paired with every gate state a gadget can reach on its
intended pathway, and every exposed toehold on that state. A strand that
carries the complement of an exposed toehold can attach there; a
displacement happens only if the strand's domain next to that toehold
matches the recognition region hybridized next to the site, on the side the
strand's own domain order dictates. Attachments without a displacement are
reversible and recorded as ``transient``.

Displacements are classified against the gadgets' pathways:

* ``intended``       - exactly a forward pathway step;
* ``intended-reverse`` - the mirror of a forward step (the strand displaced
  by a step re-invading through the toehold that step left it on), benign
  reversibility;
* ``spurious``       - everything else, tagged with the design rule whose
  violation explains it when attributable.

Free strands are plain top strands (no complemented domains), so only
gate-backbone sites can ever initiate a binding; the enumeration therefore
walks backbone positions. Free-vs-free pairings have no complementary
domains at all and are skipped. Output-gate trigger sites are long
recognition domains, which cannot initiate toehold binding; the one
intended trigger (the bound linker's dangling tail releasing the products)
is appended per gadget as the pathway's completion event.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .compiler import DsdSystem, Gadget, species_strand
from .dsd import Complex, DomainKind, Role, Strand

INTENDED = "intended"
INTENDED_REVERSE = "intended-reverse"
TRANSIENT = "transient"
SPURIOUS = "spurious"

RULE_SHARED_LINKER = "shared-linker-toehold"
RULE_LINKER_EQUALS_T = "linker-equals-t"
RULE_BUFFER_COLLISION = "buffer-identity-collision"

_STAGE_ORDER = {"Fresh": 0, "R1Bound": 1, "R2Bound": 2, "FinalBound": 3,
                "LinkerBound": 4}


@dataclass(frozen=True)
class AnalysisOptions:
    """gc_assumed removes collected buffer identities from circulation
    instantly; with gc off they stay in the free pool. sink_final matches
    the simulator option of the same name; it does not change the pool
    (displaced final reactants are species strands, which are pooled
    unconditionally since any species can be initialized or produced)."""

    gc_assumed: bool = True
    sink_final: bool = True


@dataclass(frozen=True)
class InteractionEvent:
    classification: str
    invader: str
    gadget: int | None
    stage: str | None
    target: str | None
    site: int | None
    site_label: str | None
    displaced: str | None
    rule: str | None = None
    narrative: str = ""

    def sort_key(self):
        return (0 if self.gadget is not None else 1,
                self.gadget if self.gadget is not None else -1,
                _STAGE_ORDER.get(self.stage, 9),
                self.target or "", self.site if self.site is not None else -1,
                self.invader, self.displaced or "")


@dataclass(frozen=True)
class CrosstalkReport:
    events: tuple[InteractionEvent, ...]
    spurious_count: int
    rules: dict[str, int] = field(default_factory=dict)
    buffer_collisions: tuple[str, ...] = ()
    gc_assumed: bool = True

    def spurious(self) -> list[InteractionEvent]:
        return [e for e in self.events if e.classification == SPURIOUS]

    def intended_for(self, rid: int) -> list[InteractionEvent]:
        return [e for e in self.events
                if e.gadget == rid and e.classification == INTENDED]


def reachable_states(sys: DsdSystem) -> list[tuple[int, str, Complex]]:
    """Each gadget's input-gate complex at every intended pathway stage
    (4 stages for bimolecular gadgets, 5 for termolecular)."""
    out = []
    for g in sys.gadgets:
        for stage in g.stages:
            out.append((g.reaction.id, stage, g.stage_complex(stage)))
    return out


def free_strand_pool(sys: DsdSystem, opts: AnalysisOptions | None = None,
                     ) -> dict[str, Strand]:
    """Identity -> strand for everything free at some point of an intended
    pathway: species strands (inputs and released products), linker fuels,
    released buffer1 strands, released covers and tail placeholders, and,
    with gc off, released buffer2 strands. With gc assumed, every identity
    designated for collection is removed from circulation."""
    opts = opts or AnalysisOptions()
    pool: dict[str, Strand] = {}
    for name in sys.crn.species:
        sp = species_strand(name)
        pool[sp.key] = sp
    for g in sys.gadgets:
        for strand in (g.linker, g.buffer1, g.cover, g.tail):
            pool[strand.key] = strand
        if g.buffer2 is not None and not opts.gc_assumed:
            pool[g.buffer2.key] = g.buffer2
    if opts.gc_assumed:
        for key in sys.gc_sinks:
            pool.pop(key, None)
    return pool


def _occupancy(g: Gadget, stage: str) -> dict[int, tuple[Strand, int]]:
    occ: dict[int, tuple[Strand, int]] = {}
    for top in g.stage_tops(stage):
        for i in range(top.length):
            occ[top.backbone_at + i] = (top.strand, top.from_idx + i)
    return occ


def _intended_signatures(g: Gadget):
    intended = {}
    reverse = set()
    for step in g.steps:
        if step.target != "g1":
            continue
        intended[(step.stage_from, step.site, step.invader.key,
                  step.displaced.key)] = step
        toe_idx = next(i for i, d in enumerate(step.displaced.domains)
                       if d.kind is DomainKind.TOEHOLD)
        reverse.add((step.displaced.key, step.displaced_window + toe_idx,
                     step.invader.key))
    return intended, reverse


def _attribute_rule(sys: DsdSystem, g: Gadget, invader: Strand, site: int) -> str | None:
    if invader.role is not Role.LINKER:
        return None
    toe = invader.domains[1]
    if toe.label == sys.assignment.universal.label:
        return RULE_LINKER_EQUALS_T
    if site == len(g.backbone.domains) - 1:
        return RULE_SHARED_LINKER
    return None


def enumerate_interactions(sys: DsdSystem,
                           opts: AnalysisOptions | None = None) -> CrosstalkReport:
    """Exhaustive sweep of (free strand x reachable gate state x exposed
    toehold). On a system compiled from an ordering-valid CRN with a valid
    toehold assignment, every displacement is intended or an intended
    reverse, so the spurious count is zero in both gc modes."""
    opts = opts or AnalysisOptions()
    pool = free_strand_pool(sys, opts)
    events: list[InteractionEvent] = []

    for g in sys.gadgets:
        rid = g.reaction.id
        backbone = g.backbone.domains
        intended, reverse = _intended_signatures(g)
        for stage in g.stages:
            occ = _occupancy(g, stage)
            exposed = [p for p in range(len(backbone))
                       if p not in occ and backbone[p].kind is DomainKind.TOEHOLD]
            for p in exposed:
                site_dom = backbone[p]
                for key in sorted(pool):
                    inv = pool[key]
                    for f, d in enumerate(inv.domains):
                        if not d.is_complement_of(site_dom):
                            continue
                        displaced: list[Strand] = []
                        for side in (-1, 1):
                            fi, pi = f + side, p + side
                            if not (0 <= fi < len(inv.domains)
                                    and 0 <= pi < len(backbone)):
                                continue
                            if (inv.domains[fi].is_complement_of(backbone[pi])
                                    and pi in occ):
                                displaced.append(occ[pi][0])
                        if not displaced:
                            events.append(InteractionEvent(
                                TRANSIENT, key, rid, stage, "g1", p, site_dom.name,
                                None, None,
                                f"{key} attaches reversibly at {site_dom.name} and "
                                f"detaches: no matching recognition neighbor"))
                            continue
                        for top in displaced:
                            sig = (stage, p, key, top.key)
                            if sig in intended:
                                cls, rule = INTENDED, None
                                text = (f"{key} binds {site_dom.name} and displaces "
                                        f"{top.key}: pathway step "
                                        f"{intended[sig].name}")
                            elif (key, p, top.key) in reverse:
                                cls, rule = INTENDED_REVERSE, None
                                text = (f"{key} re-invades through {site_dom.name} "
                                        f"and displaces {top.key}: reverse of an "
                                        f"intended step")
                            else:
                                cls = SPURIOUS
                                rule = _attribute_rule(sys, g, inv, p)
                                text = (f"{key} binds {site_dom.name} and displaces "
                                        f"{top.key}: not on any intended pathway")
                            events.append(InteractionEvent(
                                cls, key, rid, stage, "g1", p, site_dom.name,
                                top.key, rule, text))
        release = g.steps[-1]
        events.append(InteractionEvent(
            INTENDED, g.linker.key, rid, "LinkerBound", "g2", 0,
            g.out_backbone.domains[0].name, g.tail.key, None,
            f"bound linker tail triggers the output gate of r{rid}, releasing "
            f"{', '.join(release.releases) if release.releases else 'nothing'}"))

    b1_keys = {g.buffer1.key for g in sys.gadgets}
    collisions = tuple(sorted(sys.gc_sinks & b1_keys))
    if opts.gc_assumed:
        for key in collisions:
            events.append(InteractionEvent(
                SPURIOUS, "gc", None, None, None, None, None, key,
                RULE_BUFFER_COLLISION,
                f"garbage collection consumes {key}, which is also a buffer1 "
                f"identity that must stay in solution"))

    events.sort(key=InteractionEvent.sort_key)
    spurious = [e for e in events if e.classification == SPURIOUS]
    rules: dict[str, int] = {}
    for e in spurious:
        tag = e.rule or "unattributed"
        rules[tag] = rules.get(tag, 0) + 1
    return CrosstalkReport(tuple(events), len(spurious), rules, collisions,
                           opts.gc_assumed)


def explain(report: CrosstalkReport) -> str:
    """Deterministic text rendering: one line per event plus a spurious
    total. Empty report renders as the empty string."""
    if not report.events:
        return ""
    lines = []
    for e in report.events:
        if e.gadget is None:
            lines.append(f"{e.classification:<16} {e.narrative} rule={e.rule}")
            continue
        line = (f"{e.classification:<16} r{e.gadget}@{e.stage} "
                f"{e.target}[{e.site}]={e.site_label} invader={e.invader} "
                f"displaces={e.displaced or '-'}")
        if e.rule:
            line += f" rule={e.rule}"
        lines.append(line)
    lines.append(f"{report.spurious_count} spurious")
    return "\n".join(lines) + "\n"
