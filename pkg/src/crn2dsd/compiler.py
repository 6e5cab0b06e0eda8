"""Compile a CRN into gate complexes, fuel strands, and buffer strands.

Toehold allocation
------------------
Species strands and buffer strands all share one universal toehold ``t``.
Each reaction additionally gets a linker toehold for its fuel strand, chosen
so that

* no linker toehold equals ``t`` (otherwise a linker could displace a
  reactant bound at positions other than the final one), and
* reactions sharing a final reactant get pairwise-distinct linker toeholds
  (their linkers share the same leading recognition region, so an equal
  toehold would let one reaction's linker strip the final reactant off
  another reaction's gate).

Labels are reused greedily across groups with different final reactants, so
the number of distinct linker toeholds equals the largest group size.

Gadget layout
-------------
For a reaction ``R1 + ... + Rn -> P1 + ...`` (n = 2 or 3) with linker
toehold ``tr`` and a reaction-unique tail domain ``jr``, the input gate g1
is a single bottom strand carrying complements left to right::

    t* x_R1* t* x_R2* [t* x_R3*] tr*

Initially bound on top: a buffer1 strand ``[x_R1 t]`` over positions 1-2, a
buffer2 strand ``[x_R2 t]`` over positions 3-4 (termolecular only), and a
cover strand ``[x_Rn tr]`` over the last two positions, leaving exactly one
exposed toehold: the leftmost ``t*``. Each reactant strand ``[t x_Ri]`` in
turn binds the one exposed ``t*`` and displaces the strand covering the
neighboring recognition region, uncovering the next binding site. When the
final reactant binds it displaces the cover, exposing ``tr*``; the free
linker ``[x_Rn tr jr]`` then binds ``tr*`` and displaces the final-reactant
strand, leaving its tail ``jr`` dangling. The tail triggers the output gate
g2 (bottom strand ``jr*`` followed by one ``x_P*`` per product, products
pre-bound, trigger site blocked by a ``[jr]`` placeholder), which releases
one active ``[t x_P]`` strand per product.

Buffer strands released by first reactants stay in solution; buffer strands
released by second reactants of termolecular reactions are designated for
garbage collection (``gc_sinks``). Displaced final-reactant strands are
routed to a per-reaction sink so that completed pathways consume exactly
their reactants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .crn import Crn, Reaction, final_reactant
from .dsd import Complex, Domain, Role, Strand, bond, recognition, toehold
from .ordering import (InfeasibleOrdering, OrderingViolation, _list_violations,
                       solve_ordering, validate_ordering)

UNIVERSAL = toehold("t")

STAGE_FRESH = "Fresh"
STAGE_R1 = "R1Bound"
STAGE_R2 = "R2Bound"
STAGE_FINAL = "FinalBound"
STAGE_LINKER = "LinkerBound"
STAGE_DONE = "Done"


class CompileError(ValueError):
    def __init__(self, kind: str, message: str, *,
                 violations: list[OrderingViolation] | None = None,
                 witness: frozenset[int] | None = None):
        super().__init__(message)
        self.kind = kind
        self.violations = violations or []
        self.witness = witness


def species_domain(name: str) -> Domain:
    return recognition(f"x_{name}")


def tail_domain(rid: int) -> Domain:
    return recognition(f"j{rid}")


def species_strand(name: str) -> Strand:
    return Strand(name, (UNIVERSAL, species_domain(name)), Role.SPECIES)


def species_key(name: str) -> str:
    return species_strand(name).key


def gate_identity(rid: int, stage: str) -> str:
    return f"g1.r{rid}.{stage}"


def outgate_identity(rid: int) -> str:
    return f"g2.r{rid}"


def done_identity(rid: int) -> str:
    return f"done.r{rid}"


def corrupt_identity(rid: int) -> str:
    return f"corrupt.r{rid}"


@dataclass(frozen=True)
class ToeholdAssignment:
    """Universal toehold plus one linker toehold per reaction id."""

    universal: Domain
    linker_of: dict[int, Domain]

    def label_count(self) -> int:
        return len({d.label for d in self.linker_of.values()})


def allocate_toeholds(crn: Crn) -> ToeholdAssignment:
    """First-fit label assignment in reaction-id order: within every group
    of reactions sharing a final reactant the labels are pairwise distinct;
    across groups the lowest labels are reused, so the total equals the
    largest group size. All labels differ from the universal toehold."""
    used: dict[str, set[int]] = {}
    linker_of: dict[int, Domain] = {}
    for r in crn.reactions:
        if r.arity not in (2, 3):
            raise CompileError("arity", f"reaction r{r.id} has arity {r.arity}; "
                                        "only bimolecular and termolecular reactions compile")
        group = used.setdefault(final_reactant(r), set())
        k = 1
        while k in group:
            k += 1
        group.add(k)
        linker_of[r.id] = toehold(f"t{k}")
    return ToeholdAssignment(UNIVERSAL, linker_of)


def final_groups(crn: Crn) -> dict[str, list[int]]:
    groups: dict[str, list[int]] = {}
    for r in crn.reactions:
        if r.arity >= 2:
            groups.setdefault(final_reactant(r), []).append(r.id)
    return groups


def check_fanin_bound(crn: Crn) -> list[tuple[str, int]]:
    """Final-reactant groups larger than three, as warnings. Allocation
    still succeeds for them; the bound is a design-health diagnostic."""
    return sorted((species, len(rids))
                  for species, rids in final_groups(crn).items() if len(rids) > 3)


@dataclass(frozen=True)
class BoundTop:
    """A top strand hybridized to a gate backbone: strand domains
    ``from_idx .. from_idx+length-1`` pair backbone positions
    ``backbone_at .. backbone_at+length-1``."""

    strand: Strand
    backbone_at: int
    from_idx: int = 0
    length: int = 2


@dataclass(frozen=True)
class PathwayStep:
    """One intended displacement on a gadget's pathway."""

    index: int
    name: str
    stage_from: str
    stage_to: str
    invader: Strand
    target: str          # "g1" or "g2"
    site: int            # backbone position of the initiating exposed site
    window: int          # backbone position the invader's first bonded domain takes
    displaced: Strand
    displaced_window: int
    releases: tuple[str, ...] = ()


@dataclass(frozen=True)
class Gadget:
    """Everything compiled for one reaction."""

    reaction: Reaction
    linker_toehold: Domain
    backbone: Strand
    buffer1: Strand
    buffer2: Strand | None
    cover: Strand
    linker: Strand
    tail: Strand
    out_backbone: Strand
    product_strands: tuple[Strand, ...]
    input_gate: Complex = field(compare=False)
    output_gate: Complex = field(compare=False)
    steps: tuple[PathwayStep, ...] = field(compare=False, default=())
    stages: tuple[str, ...] = ()

    @property
    def fuels(self) -> tuple[Strand, ...]:
        return (self.linker,)

    @property
    def buffers_initial(self) -> tuple[Strand, ...]:
        return (self.buffer1,) if self.buffer2 is None else (self.buffer1, self.buffer2)

    def stage_tops(self, stage: str) -> tuple[BoundTop, ...]:
        """Top strands bound to g1 at the given pathway stage."""
        rid = self.reaction.id
        reactants = self.reaction.reactants
        length = len(self.backbone.domains)
        buf2 = (BoundTop(self.buffer2, 3),) if self.buffer2 is not None else ()
        sp = [species_strand(s) for s in reactants]
        if stage == STAGE_FRESH:
            tops = (BoundTop(self.buffer1, 1),) + buf2 + (BoundTop(self.cover, length - 2),)
        elif stage == STAGE_R1:
            tops = (BoundTop(sp[0], 0),) + buf2 + (BoundTop(self.cover, length - 2),)
        elif stage == STAGE_R2:
            if self.buffer2 is None:
                raise ValueError(f"gadget r{rid} is bimolecular; no {stage} stage")
            tops = (BoundTop(sp[0], 0), BoundTop(sp[1], 2),
                    BoundTop(self.cover, length - 2))
        elif stage == STAGE_FINAL:
            mid = (BoundTop(sp[1], 2),) if len(sp) == 3 else ()
            tops = (BoundTop(sp[0], 0),) + mid + (BoundTop(sp[-1], length - 3),)
        elif stage == STAGE_LINKER:
            mid = (BoundTop(sp[1], 2),) if len(sp) == 3 else ()
            tops = (BoundTop(sp[0], 0),) + mid + (BoundTop(self.linker, length - 2),)
        else:
            raise ValueError(f"unknown stage {stage!r}")
        return tops

    def stage_complex(self, stage: str) -> Complex:
        return _gate_complex(gate_identity(self.reaction.id, stage),
                             self.backbone, self.stage_tops(stage))

    def held_species(self, stage: str) -> tuple[str, ...]:
        """Reactant species bound in g1 at a stage (in-flight accounting).
        The final reactant is displaced to a sink at LinkerBound."""
        reactants = self.reaction.reactants
        if stage == STAGE_R1:
            return (reactants[0],)
        if stage == STAGE_R2:
            return reactants[:2]
        if stage == STAGE_FINAL:
            return reactants
        if stage in (STAGE_LINKER, STAGE_DONE):
            return reactants[:-1]
        return ()


def _gate_complex(name: str, backbone: Strand, tops: tuple[BoundTop, ...]) -> Complex:
    ordered = sorted(tops, key=lambda tp: tp.backbone_at)
    strands = (backbone,) + tuple(tp.strand for tp in ordered)
    bonds = set()
    for instance, tp in enumerate(ordered, start=1):
        for i in range(tp.length):
            bonds.add(bond((instance, tp.from_idx + i), (0, tp.backbone_at + i)))
    return Complex(name, strands, frozenset(bonds))


def compile_reaction(r: Reaction, asg: ToeholdAssignment) -> Gadget:
    """Instantiate the gadget for one reaction under a toehold assignment."""
    if r.arity not in (2, 3):
        raise CompileError("arity", f"reaction r{r.id} has arity {r.arity}; "
                                    "only bimolecular and termolecular reactions compile")
    if r.id not in asg.linker_of:
        raise CompileError("assignment", f"no linker toehold assigned to reaction r{r.id}")
    tr = asg.linker_of[r.id]
    rid = r.id
    fin = final_reactant(r)
    jr = tail_domain(rid)

    backbone_domains: list[Domain] = []
    for s in r.reactants:
        backbone_domains += [asg.universal.complement(), species_domain(s).complement()]
    backbone_domains.append(tr.complement())
    backbone = Strand(f"g1_r{rid}", tuple(backbone_domains), Role.GATE_BACKBONE)
    length = len(backbone_domains)

    buffer1 = Strand(f"b1_r{rid}", (species_domain(r.reactants[0]), asg.universal),
                     Role.BUFFER1)
    buffer2 = None
    if r.arity == 3:
        buffer2 = Strand(f"b2_r{rid}", (species_domain(r.reactants[1]), asg.universal),
                         Role.BUFFER2)
    cover = Strand(f"cov_r{rid}", (species_domain(fin), tr), Role.COVER)
    linker = Strand(f"L_r{rid}", (species_domain(fin), tr, jr), Role.LINKER)
    tail = Strand(f"tail_r{rid}", (jr,), Role.LINKER_TAIL)

    products = r.products  # already sorted, multiset with repetition
    out_domains = (jr.complement(),) + tuple(species_domain(p).complement()
                                             for p in products)
    out_backbone = Strand(f"g2_r{rid}", out_domains, Role.GATE_BACKBONE)
    product_strands = tuple(species_strand(p) for p in products)

    sp = [species_strand(s) for s in r.reactants]
    steps = [PathwayStep(0, "bind-first", STAGE_FRESH, STAGE_R1,
                         sp[0], "g1", 0, 0, buffer1, 1)]
    if r.arity == 3:
        steps.append(PathwayStep(1, "bind-second", STAGE_R1, STAGE_R2,
                                 sp[1], "g1", 2, 2, buffer2, 3))
    before_final = STAGE_R2 if r.arity == 3 else STAGE_R1
    steps.append(PathwayStep(len(steps), "bind-final", before_final, STAGE_FINAL,
                             sp[-1], "g1", length - 3, length - 3, cover, length - 2))
    steps.append(PathwayStep(len(steps), "displace-final", STAGE_FINAL, STAGE_LINKER,
                             linker, "g1", length - 1, length - 2, sp[-1], length - 3))
    steps.append(PathwayStep(len(steps), "release-products", STAGE_LINKER, "Done",
                             linker, "g2", 0, 0, tail, 0, releases=products))

    stages = ((STAGE_FRESH, STAGE_R1, STAGE_R2, STAGE_FINAL, STAGE_LINKER)
              if r.arity == 3 else
              (STAGE_FRESH, STAGE_R1, STAGE_FINAL, STAGE_LINKER))

    fresh_tops = (BoundTop(buffer1, 1),)
    if buffer2 is not None:
        fresh_tops += (BoundTop(buffer2, 3),)
    fresh_tops += (BoundTop(cover, length - 2),)
    input_gate = _gate_complex(gate_identity(rid, STAGE_FRESH), backbone, fresh_tops)
    out_tops = (BoundTop(tail, 0, 0, 1),) + tuple(
        BoundTop(ps, 1 + i, 1, 1) for i, ps in enumerate(product_strands))
    output_gate = _gate_complex(outgate_identity(rid), out_backbone, out_tops)

    return Gadget(
        reaction=r, linker_toehold=tr, backbone=backbone,
        buffer1=buffer1, buffer2=buffer2, cover=cover, linker=linker, tail=tail,
        out_backbone=out_backbone, product_strands=product_strands,
        input_gate=input_gate, output_gate=output_gate,
        steps=tuple(steps), stages=stages)


@dataclass
class CompileOptions:
    fix_order: bool = False
    fuel_count: int = 100
    initial: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class DsdSystem:
    """A compiled system: gadgets, toehold assignment, counts, gc set."""

    crn: Crn
    assignment: ToeholdAssignment
    gadgets: tuple[Gadget, ...]
    fuel_count: int
    initial_species: dict[str, int]
    initial_counts: dict[str, int]
    gc_sinks: frozenset[str]
    strand_table: dict[str, Strand]

    def gadget(self, rid: int) -> Gadget:
        return self.gadgets[rid]


def build_system(crn: Crn, asg: ToeholdAssignment,
                 opts: CompileOptions | None = None) -> DsdSystem:
    """Instantiate every gadget and assemble counts. Performs no ordering
    validation: callers that want the safety guarantees go through
    :func:`compile_crn`; this entry point exists for forced builds
    (diagnostics, sabotage reproductions, property tests)."""
    opts = opts or CompileOptions()
    gadgets = tuple(compile_reaction(r, asg) for r in crn.reactions)
    gc_sinks = frozenset(g.buffer2.key for g in gadgets if g.buffer2 is not None)

    strand_table: dict[str, Strand] = {}
    counts: dict[str, int] = {}
    for name in crn.species:
        strand = species_strand(name)
        strand_table[strand.key] = strand
        counts[strand.key] = int(opts.initial.get(name, 0))
    for g in gadgets:
        rid = g.reaction.id
        for stage in g.stages:
            counts[gate_identity(rid, stage)] = (
                opts.fuel_count if stage == STAGE_FRESH else 0)
        counts[outgate_identity(rid)] = opts.fuel_count
        counts[done_identity(rid)] = 0
        for strand in (g.buffer1, g.buffer2, g.cover, g.linker, g.tail):
            if strand is None:
                continue
            strand_table.setdefault(strand.key, strand)
            counts.setdefault(strand.key, 0)
        counts[g.linker.key] = counts.get(g.linker.key, 0) + opts.fuel_count
    return DsdSystem(crn=crn, assignment=asg, gadgets=gadgets,
                     fuel_count=opts.fuel_count,
                     initial_species=dict(opts.initial),
                     initial_counts=counts, gc_sinks=gc_sinks,
                     strand_table=strand_table)


def compile_crn(crn: Crn, opts: CompileOptions | None = None) -> DsdSystem:
    """Validate (optionally repair) reactant ordering, allocate toeholds,
    and build the full system."""
    opts = opts or CompileOptions()
    for r in crn.reactions:
        if r.arity not in (2, 3):
            raise CompileError("arity", f"reaction r{r.id} has arity {r.arity}; "
                                        "only bimolecular and termolecular reactions compile")
    violations = validate_ordering(crn)
    if violations:
        if not opts.fix_order:
            detail = "; ".join(str(v) for v in violations)
            raise CompileError("ordering", f"reactant ordering is inconsistent: {detail}",
                               violations=violations)
        try:
            crn = solve_ordering(crn)
        except InfeasibleOrdering as exc:
            raise CompileError("infeasible", str(exc), witness=exc.witness) from exc
    asg = allocate_toeholds(crn)
    return build_system(crn, asg, opts)


def buffer_sets(sys: DsdSystem) -> tuple[frozenset[str], frozenset[str]]:
    """Identity sets (full domain lists) of buffer1 and buffer2 strands.
    They are disjoint exactly when the source CRN passes ordering
    validation; the gc set equals the buffer2 set by construction."""
    b1 = frozenset(g.buffer1.key for g in sys.gadgets)
    b2 = frozenset(g.buffer2.key for g in sys.gadgets if g.buffer2 is not None)
    return b1, b2


class SabotageError(ValueError):
    pass


def sabotage_share_linker_toehold(crn: Crn, asg: ToeholdAssignment) -> ToeholdAssignment:
    """Give two reactions that share a final reactant the same linker
    toehold (the second member of the first such group takes the first
    member's label). Everything else is untouched."""
    for species, rids in sorted(final_groups(crn).items(), key=lambda kv: kv[1][0]):
        if len(rids) >= 2:
            linker_of = dict(asg.linker_of)
            linker_of[rids[1]] = linker_of[rids[0]]
            return ToeholdAssignment(asg.universal, linker_of)
    raise SabotageError("no two reactions share a final reactant; nothing to sabotage")


def _final_reused_non_finally(crn: Crn, rid: int) -> bool:
    fin = final_reactant(crn.reactions[rid])
    for other in crn.reactions:
        if other.arity >= 2 and other.reactants[0] == fin:
            return True
        if other.arity == 3 and other.reactants[1] == fin:
            return True
    return False


def sabotage_linker_equals_t(crn: Crn, asg: ToeholdAssignment) -> ToeholdAssignment:
    """Set one reaction's linker toehold equal to the universal toehold.
    Prefers a reaction whose final reactant also appears in a non-final
    position, where the mistake is observable as a displacement."""
    target = next((r.id for r in crn.reactions if _final_reused_non_finally(crn, r.id)),
                  0)
    if not crn.reactions:
        raise SabotageError("empty network; nothing to sabotage")
    linker_of = dict(asg.linker_of)
    linker_of[target] = asg.universal
    return ToeholdAssignment(asg.universal, linker_of)


def sabotage_swap_order(crn: Crn) -> Crn:
    """Swap the first two reactants of the first termolecular reaction for
    which the swap introduces an ordering violation."""
    lists = [r.reactants for r in crn.reactions]
    for r in crn.reactions:
        if r.arity != 3:
            continue
        trial = list(lists)
        trial[r.id] = (r.reactants[1], r.reactants[0], r.reactants[2])
        if _list_violations(trial):
            reactions = tuple(
                Reaction(x.id, trial[x.id], x.products, line=x.line, col=x.col)
                for x in crn.reactions)
            return Crn(reactions)
    raise SabotageError("no first/second swap of a termolecular reaction breaks ordering")
