import pytest
from hypothesis import given, settings, strategies as st

from generators import ANY_MULTIPLICITIES, random_model
from onto2cdm.dl import Datatype
from onto2cdm.engine import transform_concept
from onto2cdm.emit import dumps_model
from onto2cdm.model import (
    EMPTY_MODEL,
    Attribute,
    ConceptualModel,
    Direction,
    EntityType,
    Generalization,
    Multiplicity,
    Origin,
    Relationship,
    canonicalize,
    merge,
    stats,
)

randoms = st.randoms(use_true_random=False)


def rel(name, src, dst, lo, hi=None, direction=Direction.UNI):
    return Relationship(name, src, dst, direction, Multiplicity(lo, hi))


def model(*rels, entities=None, gens=()):
    names = entities or sorted({n for r in rels for n in (r.source, r.target)})
    return ConceptualModel([EntityType(n) for n in names], rels, gens)


def test_multiplicity_invariant():
    with pytest.raises(ValueError):
        Multiplicity(2, 1)
    with pytest.raises(ValueError):
        Multiplicity(-1)
    assert Multiplicity(1).encode() == "1..*"
    assert Multiplicity(0, 1).encode() == "0..1"


def test_merge_identity():
    m = model(rel("polymer-of", "Protein", "Amino-Acid", 1))
    assert merge(m, EMPTY_MODEL) == canonicalize(m)
    assert merge(EMPTY_MODEL, m) == canonicalize(m)


def test_merge_refines_polymer_of():
    a = model(rel("polymer-of", "Protein", "Amino-Acid", 1))
    b = model(rel("polymer-of", "Protein", "Amino-Acid", 0))
    merged = merge(a, b)
    assert merged.relationships == (rel("polymer-of", "Protein", "Amino-Acid", 1),)


def test_merge_direction_bi_wins():
    a = model(rel("part-of", "Protein", "Protein-sequence", 0, direction=Direction.BI))
    b = model(rel("part-of", "Protein", "Protein-sequence", 1))
    (r,) = merge(a, b).relationships
    assert r.direction is Direction.BI
    assert r.multiplicity == Multiplicity(1)


def test_merge_conflict_keeps_smaller_encoding():
    a = model(rel("p", "A", "B", 2, 3))
    b = model(rel("p", "A", "B", 0, 1))
    diags = []
    (r,) = merge(a, b, diags).relationships
    assert [d.code for d in diags] == ["MULT_CONFLICT"]
    assert r.multiplicity == Multiplicity(0, 1)
    diags2 = []
    assert merge(b, a, diags2) == merge(a, b)
    assert len(diags2) == 1


def test_merge_entities_origin_and_attributes():
    a = ConceptualModel([EntityType("Gene", [Attribute("name", Datatype.STRING)], Origin.TARGET)])
    b = ConceptualModel([EntityType("gene", [Attribute("length", Datatype.INTEGER)], Origin.SUBCONCEPT)])
    (e,) = merge(a, b).entities
    assert e.name == "Gene"
    assert e.origin is Origin.SUBCONCEPT
    assert {a.name for a in e.attributes} == {"name", "length"}


def test_merge_rewrites_references_to_kept_spelling():
    a = ConceptualModel([EntityType("gene"), EntityType("DNA")], [rel("encodes", "gene", "DNA", 0)])
    b = ConceptualModel([EntityType("Gene")], [], [])
    m = merge(a, b)
    assert m.relationships[0].source == "Gene"
    assert m.integrity_errors() == []


def test_mini_tao_submodels_commute(mini_tao):
    subs = [transform_concept(mini_tao, c).model for c in ("Protein", "Macromolecule-Part", "DNA-Part")]
    ab = dumps_model(merge(merge(subs[0], subs[1]), subs[2]))
    ba = dumps_model(merge(subs[2], merge(subs[1], subs[0])))
    assert ab == ba


def test_stats():
    assert tuple(stats(EMPTY_MODEL)) == (0, 0, 0, 0)
    one = ConceptualModel([EntityType("A", [Attribute("x", Datatype.STRING), Attribute("y", Datatype.DATE)])])
    assert tuple(stats(one)) == (1, 0, 2, 0)
    assert str(stats(EMPTY_MODEL)) == "entities: 0, relationships: 0, attributes: 0, generalizations: 0"


def test_canonical_order():
    m = canonicalize(ConceptualModel([EntityType("B"), EntityType("A")]))
    assert [e.name for e in m.entities] == ["A", "B"]


def test_canonicalize_dedupes_generalizations():
    m = ConceptualModel([EntityType("A"), EntityType("B")], [], [Generalization("A", "B"), Generalization("A", "B")])
    assert len(canonicalize(m).generalizations) == 1


@settings(max_examples=200)
@given(randoms)
def test_canonicalize_idempotent(rng):
    m = random_model(rng, multiplicities=ANY_MULTIPLICITIES)
    assert canonicalize(canonicalize(m)) == canonicalize(m)


@settings(max_examples=200)
@given(randoms)
def test_merge_commutative_even_with_conflicts(rng):
    a = random_model(rng, multiplicities=ANY_MULTIPLICITIES)
    b = random_model(rng, multiplicities=ANY_MULTIPLICITIES)
    assert merge(a, b) == merge(b, a)


@settings(max_examples=200)
@given(randoms)
def test_merge_never_drops_entities(rng):
    a, b = random_model(rng), random_model(rng)
    names = {e.name.casefold() for e in merge(a, b).entities}
    assert {e.name.casefold() for e in a.entities} <= names
    assert {e.name.casefold() for e in b.entities} <= names
    assert len(names) >= max(len(a.entities), len(b.entities))


@settings(max_examples=200)
@given(randoms)
def test_merge_keeps_referential_integrity(rng):
    assert merge(random_model(rng), random_model(rng)).integrity_errors() == []


def test_conflict_tie_break_is_not_associative():
    # The fixed tie-break discards information, so grouping matters once a
    # conflict occurs: [0,5] then [6,6] keeps [0,5], which then meets [5,9].
    a = model(rel("p", "A", "B", 0, 5))
    b = model(rel("p", "A", "B", 6, 6))
    c = model(rel("p", "A", "B", 5, 9))
    left = merge(merge(a, b), c).relationships[0].multiplicity
    right = merge(a, merge(b, c)).relationships[0].multiplicity
    assert left == Multiplicity(5, 5)
    assert right == Multiplicity(0, 5)
