"""Stochastic execution of a compiled system.

The low-level reaction network is derived from the analyzer's event
classification: forward pathway steps, product release, garbage-collection
sinks, and (optionally) spurious displacement channels. Reversible
re-invasions are benign and excluded, so every network drains monotonically
toward quiescence. All rates default to 1: the simulator is a correctness
instrument, not a kinetics predictor.

Two interchangeable kernels execute the direct method: a compiled extension
(built from ``_ssa_core.pyx``) and a pure-Python fallback. Selection happens
at import; ``CRN2DSD_SSA=python|compiled`` overrides it. Both produce
bit-identical trajectories for the same seed.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import _ssa_py
from .analyzer import SPURIOUS, AnalysisOptions, enumerate_interactions
from .compiler import (STAGE_DONE, DsdSystem, corrupt_identity, done_identity,
                       gate_identity, outgate_identity, species_key)
from .rng import split

try:
    from . import _ssa_core
except ImportError:
    _ssa_core = None

_STOP_NAMES = {0: "quiescent", 1: "max-steps", 2: "max-time"}


def available_backends() -> tuple[str, ...]:
    return ("python", "compiled") if _ssa_core is not None else ("python",)


def ssa_backend() -> str:
    """Backend used when none is requested explicitly."""
    env = os.environ.get("CRN2DSD_SSA", "").strip().lower()
    if env in ("python", "compiled"):
        if env == "compiled" and _ssa_core is None:
            raise RuntimeError("CRN2DSD_SSA=compiled but the extension is not built")
        return env
    return "compiled" if _ssa_core is not None else "python"


@dataclass(frozen=True)
class LowLevelReaction:
    name: str
    reactants: tuple[tuple[str, int], ...]
    products: tuple[tuple[str, int], ...]
    rate: float = 1.0
    kind: str = "pathway"
    gadget: int | None = None


@dataclass(frozen=True)
class SsaNetwork:
    identities: tuple[str, ...]
    reactions: tuple[LowLevelReaction, ...]

    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.identities)}

    def reaction_named(self, name: str) -> LowLevelReaction:
        for r in self.reactions:
            if r.name == name:
                return r
        raise KeyError(name)


@dataclass
class SimOptions:
    gc_assumed: bool = True
    include_spurious: bool = False
    sink_final: bool = True
    rates: dict[str, float] = field(default_factory=dict)


def build_ssa_network(sys: DsdSystem, opts: SimOptions | None = None) -> SsaNetwork:
    """One unit-rate reaction per executable event: the forward pathway
    steps of every gadget, one product release per gadget, a sink per
    collected buffer identity, and, when requested, the spurious channels
    the analyzer found (each parks the gate in a terminal corrupted state
    and frees the displaced strand)."""
    opts = opts or SimOptions()
    reactions: list[LowLevelReaction] = []
    for g in sys.gadgets:
        rid = g.reaction.id
        for step in g.steps:
            name = f"r{rid}.{step.name}"
            if step.target == "g1":
                products = [(gate_identity(rid, step.stage_to), 1)]
                if step.name == "displace-final":
                    if not opts.sink_final:
                        products.append((step.displaced.key, 1))
                else:
                    products.append((step.displaced.key, 1))
                reactions.append(LowLevelReaction(
                    name,
                    ((gate_identity(rid, step.stage_from), 1), (step.invader.key, 1)),
                    tuple(products),
                    rate=opts.rates.get(name, 1.0), kind="pathway", gadget=rid))
            else:
                products = [(done_identity(rid), 1), (g.tail.key, 1)]
                released: dict[str, int] = {}
                for sp in step.releases:
                    key = species_key(sp)
                    released[key] = released.get(key, 0) + 1
                products += sorted(released.items())
                reactions.append(LowLevelReaction(
                    name,
                    ((gate_identity(rid, "LinkerBound"), 1), (outgate_identity(rid), 1)),
                    tuple(products),
                    rate=opts.rates.get(name, 1.0), kind="release", gadget=rid))
    if opts.gc_assumed:
        for key in sorted(sys.gc_sinks):
            name = f"gc.{key}"
            reactions.append(LowLevelReaction(
                name, ((key, 1),), (), rate=opts.rates.get(name, 1.0), kind="gc"))
    identities = list(sys.initial_counts)
    if opts.include_spurious:
        report = enumerate_interactions(
            sys, AnalysisOptions(gc_assumed=opts.gc_assumed,
                                 sink_final=opts.sink_final))
        corrupted = set()
        for i, ev in enumerate(e for e in report.events
                               if e.classification == SPURIOUS and e.gadget is not None):
            name = f"spurious{i}.r{ev.gadget}"
            reactions.append(LowLevelReaction(
                name,
                ((gate_identity(ev.gadget, ev.stage), 1), (ev.invader, 1)),
                ((corrupt_identity(ev.gadget), 1), (ev.displaced, 1)),
                rate=opts.rates.get(name, 1.0), kind="spurious", gadget=ev.gadget))
            corrupted.add(ev.gadget)
        identities += [corrupt_identity(rid) for rid in sorted(corrupted)]
    return SsaNetwork(tuple(identities), tuple(reactions))


@dataclass(frozen=True)
class StopCondition:
    """Simulation always stops at quiescence; these add earlier bounds."""

    max_steps: int | None = None
    max_time: float | None = None

    def validate(self) -> None:
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError(f"unreachable stop condition: max_steps={self.max_steps}")
        if self.max_time is not None and self.max_time <= 0:
            raise ValueError(f"unreachable stop condition: max_time={self.max_time}")


@dataclass(frozen=True)
class SystemState:
    counts: dict[str, int]
    time: float = 0.0


@dataclass(frozen=True)
class Trajectory:
    seed: int
    initial: dict[str, int]
    steps: tuple[tuple[float, str, dict[str, int]], ...]
    final: dict[str, int]
    time: float
    stopped: str


def _delta(rxn: LowLevelReaction) -> dict[str, int]:
    d: dict[str, int] = {}
    for key, n in rxn.reactants:
        d[key] = d.get(key, 0) - n
    for key, n in rxn.products:
        d[key] = d.get(key, 0) + n
    return {k: v for k, v in sorted(d.items()) if v != 0}


def simulate(network: SsaNetwork, initial, seed: int,
             stop: StopCondition | None = None,
             backend: str | None = None) -> Trajectory:
    """Exact stochastic simulation, deterministic in ``seed``. ``initial``
    maps identities to counts (a SystemState is accepted); identities the
    network does not know are rejected."""
    stop = stop or StopCondition()
    stop.validate()
    counts_in = initial.counts if isinstance(initial, SystemState) else dict(initial)
    index = network.index()
    for key in counts_in:
        if key not in index:
            raise ValueError(f"unknown identity in initial state: {key}")
    n = len(network.identities)
    counts = [int(counts_in.get(key, 0)) for key in network.identities]

    r_off, r_idx, r_st = [0], [], []
    p_off, p_idx, p_st = [0], [], []
    rates = []
    for rxn in network.reactions:
        for key, stoich in rxn.reactants:
            r_idx.append(index[key])
            r_st.append(stoich)
        r_off.append(len(r_idx))
        for key, stoich in rxn.products:
            p_idx.append(index[key])
            p_st.append(stoich)
        p_off.append(len(p_idx))
        rates.append(float(rxn.rate))

    max_steps = -1 if stop.max_steps is None else stop.max_steps
    max_time = math.inf if stop.max_time is None else stop.max_time

    chosen = backend or ssa_backend()
    if chosen == "compiled":
        if _ssa_core is None:
            raise RuntimeError("compiled SSA backend is not available")
        state = np.array(counts, dtype=np.int64)
        times, events, t_final, code = _ssa_core.run(
            n,
            np.array(r_off, dtype=np.int32), np.array(r_idx, dtype=np.int32),
            np.array(r_st, dtype=np.int32),
            np.array(p_off, dtype=np.int32), np.array(p_idx, dtype=np.int32),
            np.array(p_st, dtype=np.int32),
            np.array(rates, dtype=np.float64),
            state, seed & ((1 << 64) - 1), max_steps, max_time)
        final = state.tolist()
    elif chosen == "python":
        final = list(counts)
        times, events, t_final, code = _ssa_py.run(
            n, r_off, r_idx, r_st, p_off, p_idx, p_st, rates, final,
            seed & ((1 << 64) - 1), max_steps, max_time)
    else:
        raise ValueError(f"unknown backend {chosen!r}")

    deltas = [_delta(rxn) for rxn in network.reactions]
    steps = tuple((t, network.reactions[j].name, deltas[j])
                  for t, j in zip(times, events))
    final_counts = {key: final[i] for i, key in enumerate(network.identities)}
    return Trajectory(seed=seed, initial=dict(counts_in), steps=steps,
                      final=final_counts, time=t_final,
                      stopped=_STOP_NAMES[code])


def run_trajectories(network: SsaNetwork, initial, seed: int, n: int,
                     stop: StopCondition | None = None,
                     backend: str | None = None) -> list[Trajectory]:
    """Independent runs with child seeds split from ``seed``."""
    return [simulate(network, initial, split(seed, i), stop, backend)
            for i in range(n)]


def map_state(sys: DsdSystem, state) -> dict[str, int]:
    """High-level view of a low-level state: species count = free species
    strand count. Reactants bound inside gates appear in
    :func:`in_flight`, not here."""
    counts = state.counts if isinstance(state, SystemState) else state
    known = set(sys.initial_counts)
    known.update(corrupt_identity(g.reaction.id) for g in sys.gadgets)
    for key in counts:
        if key not in known:
            raise ValueError(f"unknown identity in state: {key}")
    return {name: counts.get(species_key(name), 0) for name in sys.crn.species}


def in_flight(sys: DsdSystem, state) -> dict[str, int]:
    """Species currently held inside gate complexes, by stage occupancy."""
    counts = state.counts if isinstance(state, SystemState) else state
    held: dict[str, int] = {}
    for g in sys.gadgets:
        rid = g.reaction.id
        for stage in g.stages + (STAGE_DONE,):
            ident = done_identity(rid) if stage == STAGE_DONE else gate_identity(rid, stage)
            n = counts.get(ident, 0)
            if n:
                for sp in g.held_species(stage):
                    held[sp] = held.get(sp, 0) + n
    return {k: v for k, v in sorted(held.items()) if v}


class AuditError(AssertionError):
    pass


def audit_trajectory(sys: DsdSystem, network: SsaNetwork,
                     traj: Trajectory) -> dict[str, int]:
    """Replay a trajectory and verify, after every step, that

    * no count goes negative,
    * per reaction, gates across all stages (plus completions) are
      conserved, and
    * free species counts equal the initial counts minus species drawn into
      gates plus species released by completed pathways - i.e. every
      completed pathway's net effect is exactly its high-level reaction.

    Returns completions per reaction id. Only meaningful for networks
    without spurious channels."""
    counts = {key: traj.initial.get(key, 0) for key in network.identities}
    completions = {g.reaction.id: 0 for g in sys.gadgets}

    def check(step_no: int) -> None:
        for key, v in counts.items():
            if v < 0:
                raise AuditError(f"step {step_no}: negative count for {key}")
        for g in sys.gadgets:
            rid = g.reaction.id
            total = sum(counts.get(gate_identity(rid, s), 0) for s in g.stages)
            total += counts.get(done_identity(rid), 0)
            total += counts.get(corrupt_identity(rid), 0)
            if total != sys.fuel_count:
                raise AuditError(
                    f"step {step_no}: gate conservation broken for r{rid}: "
                    f"{total} != {sys.fuel_count}")
        for name in sys.crn.species:
            expected = sys.initial_species.get(name, 0)
            for g in sys.gadgets:
                rid = g.reaction.id
                reactants = g.reaction.reactants
                stages = list(g.stages) + [STAGE_DONE]
                for i, sp in enumerate(reactants):
                    if sp != name:
                        continue
                    past = sum(
                        counts.get(done_identity(rid), 0)
                        if s == STAGE_DONE else counts.get(gate_identity(rid, s), 0)
                        for s in stages[i + 1:])
                    expected -= past
                expected += completions[rid] * sum(
                    1 for p in g.reaction.products if p == name)
            actual = counts.get(species_key(name), 0)
            if actual != expected:
                raise AuditError(
                    f"step {step_no}: species balance broken for {name}: "
                    f"free count {actual}, pathway accounting gives {expected}")

    check(0)
    by_name = {r.name: r for r in network.reactions}
    for step_no, (_, name, delta) in enumerate(traj.steps, start=1):
        for key, d in delta.items():
            counts[key] = counts.get(key, 0) + d
        rxn = by_name[name]
        if rxn.kind == "release":
            completions[rxn.gadget] += 1
        check(step_no)
    for key, v in counts.items():
        if traj.final.get(key, 0) != v:
            raise AuditError(f"replay mismatch for {key}: {v} != final "
                             f"{traj.final.get(key, 0)}")
    return completions
