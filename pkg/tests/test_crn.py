import pytest
from hypothesis import given
from hypothesis import strategies as st

from crn2dsd import (Crn, ParseError, Reaction, final_reactant, make_crn,
                     parse_crn, serialize_crn)


def test_parse_bimolecular():
    crn = parse_crn("A + B -> C")
    assert len(crn) == 1
    r = crn.reactions[0]
    assert r.reactants == ("A", "B")
    assert r.products == ("C",)


def test_parse_termolecular_multiple_products():
    crn = parse_crn("A + B + C -> X + Y")
    r = crn.reactions[0]
    assert r.reactants == ("A", "B", "C")
    assert r.products == ("X", "Y")


def test_parse_arity_rejected():
    with pytest.raises(ParseError) as exc:
        parse_crn("A + B + C + D -> E")
    assert exc.value.code == "arity"
    assert exc.value.line == 1


def test_parse_empty_products():
    crn = parse_crn("A + B -> 0")
    assert crn.reactions[0].products == ()


def test_parse_zero_reactant_side_rejected():
    with pytest.raises(ParseError) as exc:
        parse_crn("0 -> A")
    assert exc.value.code == "syntax"


def test_parse_comments_blanks_and_locations():
    crn = parse_crn("# header\n\nA + B -> C  # trailing\n\n  D + E -> F\n")
    assert [r.line for r in crn.reactions] == [3, 5]
    assert [r.col for r in crn.reactions] == [1, 3]
    assert crn.reactions[1].reactants == ("D", "E")


def test_parse_missing_arrow():
    with pytest.raises(ParseError) as exc:
        parse_crn("A + B C")
    assert exc.value.code == "syntax"


def test_parse_bad_identifier():
    with pytest.raises(ParseError):
        parse_crn("A + 2B -> C")


def test_parse_repeated_reactant_is_legal():
    crn = parse_crn("X + X + Z -> Y")
    assert crn.reactions[0].reactants == ("X", "X", "Z")


def test_parse_duplicate_products_kept_as_multiset():
    crn = parse_crn("A + B -> C + C")
    assert crn.reactions[0].products == ("C", "C")


def test_reaction_ids_in_listing_order():
    crn = parse_crn("A + B -> C\nC + D -> E\n")
    assert [r.id for r in crn.reactions] == [0, 1]
    with pytest.raises(ValueError):
        Crn((Reaction(1, ("A", "B"), ()),))


def test_species_is_union_over_reactions():
    crn = parse_crn("A + B -> C\nC + D -> 0\n")
    assert crn.species == ("A", "B", "C", "D")


def test_serialize_canonical_forms():
    assert serialize_crn(make_crn([("A", "B")], [("C",)])) == "A + B -> C\n"
    assert serialize_crn(make_crn([("A", "B")], [()])) == "A + B -> 0\n"
    assert serialize_crn(Crn(())) == ""


def test_final_reactant_is_positional():
    assert final_reactant(Reaction(0, ("A", "B", "C"), ())) == "C"
    assert final_reactant(Reaction(0, ("A", "B"), ())) == "B"
    assert final_reactant(Reaction(0, ("Z", "A"), ())) == "A"  # not alphabetical
    with pytest.raises(ValueError):
        final_reactant(Reaction(0, ("A",), ()))


names = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,3}", fullmatch=True)
reactions = st.tuples(st.lists(names, min_size=1, max_size=3),
                      st.lists(names, min_size=0, max_size=3))


@given(st.lists(reactions, max_size=8))
def test_round_trip_identity(described):
    crn = make_crn([r for r, _ in described], [p for _, p in described])
    assert parse_crn(serialize_crn(crn)) == crn
