"""Domain-level strand-displacement structures.

Domains are purely nominal: a short toehold or a long recognition region,
optionally complemented. Strands are ordered domain lists; complexes pair
complementary domain instances one-to-one. No sequences, lengths, or
energies are modeled.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum


class DomainKind(Enum):
    TOEHOLD = "toehold"
    RECOGNITION = "recognition"


class Role(Enum):
    SPECIES = "species"
    LINKER = "linker"
    BUFFER1 = "buffer1"
    BUFFER2 = "buffer2"
    GATE_BACKBONE = "gate-backbone"
    LINKER_TAIL = "linker-tail"
    COVER = "cover"


@dataclass(frozen=True)
class Domain:
    label: str
    kind: DomainKind
    comp: bool = False

    @property
    def name(self) -> str:
        return self.label + ("*" if self.comp else "")

    def complement(self) -> "Domain":
        return replace(self, comp=not self.comp)

    def is_complement_of(self, other: "Domain") -> bool:
        return (self.label == other.label and self.kind == other.kind
                and self.comp != other.comp)

    def __str__(self) -> str:
        return self.name


def toehold(label: str, comp: bool = False) -> Domain:
    return Domain(label, DomainKind.TOEHOLD, comp)


def recognition(label: str, comp: bool = False) -> Domain:
    return Domain(label, DomainKind.RECOGNITION, comp)


@dataclass(frozen=True)
class Strand:
    """An ordered run of domains. ``key`` is the identity used everywhere
    for counting and set membership: strands with equal domain lists are the
    same molecule regardless of which gadget minted them."""

    name: str
    domains: tuple[Domain, ...]
    role: Role

    @property
    def key(self) -> str:
        return ".".join(d.name for d in self.domains)

    def __len__(self) -> int:
        return len(self.domains)

    def __str__(self) -> str:
        return f"{self.name}[{' '.join(d.name for d in self.domains)}]"


Site = tuple[int, int]  # (strand instance index, domain index)
Bond = tuple[Site, Site]


def bond(a: Site, b: Site) -> Bond:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Complex:
    """Strand instances plus bonds between complementary domain instances."""

    name: str
    strands: tuple[Strand, ...]
    bonds: frozenset[Bond]

    def domain_at(self, site: Site) -> Domain:
        return self.strands[site[0]].domains[site[1]]

    def bond_map(self) -> dict[Site, Site]:
        out: dict[Site, Site] = {}
        for a, b in self.bonds:
            out[a] = b
            out[b] = a
        return out

    def all_sites(self) -> list[Site]:
        return [(si, di) for si, s in enumerate(self.strands)
                for di in range(len(s.domains))]


@dataclass(frozen=True)
class Exposure:
    complex: Complex
    sites: tuple[Site, ...]

    def toehold_sites(self) -> tuple[Site, ...]:
        return tuple(s for s in self.sites
                     if self.complex.domain_at(s).kind is DomainKind.TOEHOLD)


def check_complex(c: Complex) -> list[str]:
    """Structural faults, empty when well-formed: every bond must pair a
    domain with its exact complement, no domain may sit in two bonds, sites
    must exist, and the strand-bond graph must be connected."""
    faults: list[str] = []
    seen: set[Site] = set()
    valid_sites = set(c.all_sites())
    for a, b in sorted(c.bonds):
        for site in (a, b):
            if site not in valid_sites:
                faults.append(f"dangling bond: no domain at {site}")
        if a in valid_sites and b in valid_sites:
            da, db = c.domain_at(a), c.domain_at(b)
            if not da.is_complement_of(db):
                faults.append(f"non-complementary bond: {da} at {a} vs {db} at {b}")
        for site in (a, b):
            if site in seen:
                faults.append(f"domain used twice: {site}")
            seen.add(site)
    if len(c.strands) > 1:
        adjacency: dict[int, set[int]] = {i: set() for i in range(len(c.strands))}
        for a, b in c.bonds:
            if a in valid_sites and b in valid_sites:
                adjacency[a[0]].add(b[0])
                adjacency[b[0]].add(a[0])
        reached = {0}
        frontier = [0]
        while frontier:
            nxt = frontier.pop()
            for other in adjacency[nxt]:
                if other not in reached:
                    reached.add(other)
                    frontier.append(other)
        if len(reached) != len(c.strands):
            missing = sorted(set(range(len(c.strands))) - reached)
            faults.append(f"disconnected: strand instances {missing} unreachable")
    return faults


def exposed_sites(c: Complex) -> Exposure:
    """Unbonded domain instances in deterministic order (strand instance,
    then domain index). Together with the bonded instances this partitions
    the complex's domain instances."""
    bonded = {site for pair in c.bonds for site in pair}
    sites = tuple(s for s in c.all_sites() if s not in bonded)
    return Exposure(c, sites)
