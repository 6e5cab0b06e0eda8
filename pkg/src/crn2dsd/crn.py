"""High-level chemical reaction networks with order-significant reactants.

The textual format is one reaction per line::

    A + B -> C        # a comment
    A + B + C -> X + Y
    W + V -> 0        # empty product side

Reactant order is meaningful everywhere downstream: the last reactant of a
reaction (the "final reactant") selects the fuel strand that completes it,
and the first/second positions decide which buffer strands a gate releases.
Products are an unordered multiset.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

MAX_ARITY = 3

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class ParseError(ValueError):
    """Raised on malformed CRN text. Carries a 1-based source location.

    ``code`` is ``"arity"`` for reactions with more than three reactants and
    ``"syntax"`` for everything else.
    """

    def __init__(self, message: str, line: int, col: int, code: str = "syntax"):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.code = code


@dataclass(frozen=True)
class Reaction:
    """One reaction: an ordered reactant list and a product multiset.

    ``products`` is kept as a sorted tuple (multiset in canonical order);
    ``reactants`` preserves left-to-right source order. ``line``/``col``
    locate the reaction in its source text (1-based; 0 for synthetic
    reactions) and do not participate in equality.
    """

    id: int
    reactants: tuple[str, ...]
    products: tuple[str, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "products", tuple(sorted(self.products)))

    @property
    def arity(self) -> int:
        return len(self.reactants)

    def species(self) -> set[str]:
        return set(self.reactants) | set(self.products)


@dataclass(frozen=True)
class Crn:
    """An ordered list of reactions; reaction ids are 0..n-1 in listing order."""

    reactions: tuple[Reaction, ...]
    species: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        for i, r in enumerate(self.reactions):
            if r.id != i:
                raise ValueError(f"reaction ids must be 0..n-1 in order, got {r.id} at {i}")
        names: set[str] = set()
        for r in self.reactions:
            names |= r.species()
        object.__setattr__(self, "species", tuple(sorted(names)))

    def __len__(self) -> int:
        return len(self.reactions)


def make_crn(reactant_lists: Iterable[Iterable[str]],
             product_lists: Iterable[Iterable[str]] | None = None) -> Crn:
    """Convenience constructor used heavily by tests and generators."""
    rls = [tuple(r) for r in reactant_lists]
    pls = [tuple(p) for p in product_lists] if product_lists is not None else [()] * len(rls)
    return Crn(tuple(Reaction(i, r, p) for i, (r, p) in enumerate(zip(rls, pls))))


def _strip_comment(raw: str) -> str:
    cut = raw.find("#")
    return raw if cut < 0 else raw[:cut]


def _parse_side(text: str, line_no: int, offset: int, *, is_product: bool,
                ) -> list[str]:
    names: list[str] = []
    pos = 0
    terms = text.split("+")
    if is_product and len(terms) == 1 and terms[0].strip() == "0":
        return []
    for term in terms:
        stripped = term.strip()
        col = offset + pos + term.index(stripped) + 1 if stripped else offset + pos + 1
        if not stripped:
            raise ParseError("empty term", line_no, col)
        if stripped == "0":
            raise ParseError('"0" denotes an empty product side only', line_no, col)
        if not _IDENT.fullmatch(stripped):
            raise ParseError(f"bad species name {stripped!r}", line_no, col)
        names.append(stripped)
        pos += len(term) + 1
    return names


def parse_crn(text: str) -> Crn:
    """Parse CRN text; raises :class:`ParseError` with source location."""
    reactions: list[Reaction] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        code = _strip_comment(raw)
        if not code.strip():
            continue
        arrow = code.find("->")
        if arrow < 0:
            raise ParseError('missing "->"', line_no, len(code.rstrip()) + 1)
        left, right = code[:arrow], code[arrow + 2:]
        if "->" in right:
            raise ParseError('more than one "->"', line_no, arrow + 3 + right.find("->"))
        reactants = _parse_side(left, line_no, 0, is_product=False)
        products = _parse_side(right, line_no, arrow + 2, is_product=True)
        if len(reactants) > MAX_ARITY:
            raise ParseError(
                f"{len(reactants)} reactants; at most {MAX_ARITY} supported",
                line_no, 1, code="arity")
        col = len(code) - len(code.lstrip()) + 1
        reactions.append(
            Reaction(len(reactions), tuple(reactants), tuple(products),
                     line=line_no, col=col))
    return Crn(tuple(reactions))


def serialize_crn(crn: Crn) -> str:
    """Canonical text form; ``parse_crn(serialize_crn(c))`` equals ``c``
    structurally (reaction order, reactant order, product multiset)."""
    lines = []
    for r in crn.reactions:
        left = " + ".join(r.reactants)
        right = " + ".join(r.products) if r.products else "0"
        lines.append(f"{left} -> {right}\n")
    return "".join(lines)


def final_reactant(r: Reaction) -> str:
    """Last reactant in significant order (2nd of a bimolecular reaction,
    3rd of a termolecular one). Undefined for unimolecular reactions."""
    if r.arity < 2:
        raise ValueError(f"reaction {r.id} is unimolecular; it has no final reactant")
    return r.reactants[-1]
