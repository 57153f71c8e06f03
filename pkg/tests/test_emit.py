import json

import pytest
from hypothesis import given, settings, strategies as st

from generators import ANY_MULTIPLICITIES, random_model
from onto2cdm.dl import Datatype
from onto2cdm.emit import (
    BadModelFile,
    dumps_model,
    loads_model,
    model_to_dict,
    read_model,
    to_diagram_text,
    write_model,
)
from onto2cdm.engine import TransformOptions, transform
from onto2cdm.model import (
    EMPTY_MODEL,
    Attribute,
    ConceptualModel,
    Direction,
    EntityType,
    Generalization,
    Multiplicity,
    Relationship,
    canonicalize,
)

randoms = st.randoms(use_true_random=False)


@pytest.fixture
def protein_model(mini_tao):
    m, _ = transform(mini_tao, TransformOptions(["Protein"]))
    return m


def test_diagram_lines(protein_model):
    lines = to_diagram_text(protein_model).splitlines()
    assert "Protein --|> Macromolecular-compound" in lines
    assert 'Protein --> "1..*" Amino-Acid : polymer-of' in lines
    assert 'Protein <--> "0..*" Protein-sequence : part-of' in lines
    assert lines[0] == "@startuml" and lines[-1] == "@enduml"


def test_diagram_empty_model():
    assert to_diagram_text(EMPTY_MODEL) == "@startuml\n@enduml\n"


def test_diagram_attributes_and_bounds():
    m = canonicalize(ConceptualModel(
        [EntityType("Species", [Attribute("has-name", Datatype.STRING)]), EntityType("Protein")],
        [Relationship("has-species", "Protein", "Species", Direction.UNI, Multiplicity(0, 1))],
    ))
    text = to_diagram_text(m)
    assert "  has-name : string\n" in text
    assert 'Protein --> "0..1" Species : has-species' in text


@settings(max_examples=300)
@given(randoms)
def test_diagram_injective(rng):
    a = canonicalize(random_model(rng, multiplicities=ANY_MULTIPLICITIES))
    b = canonicalize(random_model(rng, multiplicities=ANY_MULTIPLICITIES))
    if a != b:
        assert to_diagram_text(a) != to_diagram_text(b)


def test_diagram_distinguishes_origin_only_difference():
    a = ConceptualModel([EntityType("A", (), "seed")])
    b = ConceptualModel([EntityType("A", (), "subconcept")])
    assert to_diagram_text(a) != to_diagram_text(b)


def test_round_trip_fixture(protein_model, tmp_path):
    path = tmp_path / "protein.cdm.json"
    write_model(protein_model, path)
    assert read_model(path) == protein_model


def test_round_trip_empty():
    assert loads_model(dumps_model(EMPTY_MODEL)) == EMPTY_MODEL


@settings(max_examples=200)
@given(randoms)
def test_round_trip_random(rng):
    m = canonicalize(random_model(rng, multiplicities=ANY_MULTIPLICITIES))
    assert loads_model(dumps_model(m)) == m


def test_unknown_format_version():
    doc = model_to_dict(EMPTY_MODEL)
    doc["format"] = "cdm/99"
    with pytest.raises(BadModelFile):
        loads_model(json.dumps(doc))


@pytest.mark.parametrize("text", [
    "",
    "[]",
    "{not json",
    '{"format": "cdm/1"}',
    '{"format": "cdm/1", "entities": [{"name": "A"}], "relationships": [], "generalizations": []}',
    '{"format": "cdm/1", "entities": [], "relationships": [{"name": "p", "source": "A", "target": "B",'
    ' "direction": "uni", "multiplicity": [0, "*"]}], "generalizations": []}',
    '{"format": "cdm/1", "entities": [{"name": "A", "origin": "seed", "attributes": []}, '
    '{"name": "B", "origin": "seed", "attributes": []}], "relationships": [{"name": "p", "source": "A",'
    ' "target": "B", "direction": "uni", "multiplicity": [3, 1]}], "generalizations": []}',
    '{"format": "cdm/1", "entities": [{"name": "A", "origin": "alien", "attributes": []}],'
    ' "relationships": [], "generalizations": []}',
])
def test_malformed_documents(text):
    with pytest.raises(BadModelFile):
        loads_model(text)


def test_dump_is_byte_stable(protein_model):
    first = dumps_model(protein_model)
    reordered = ConceptualModel(
        reversed(protein_model.entities), reversed(protein_model.relationships),
        reversed(protein_model.generalizations))
    assert dumps_model(reordered) == first
    assert dumps_model(protein_model) == first


def test_dump_encodes_unbounded_as_star():
    m = ConceptualModel([EntityType("A"), EntityType("B")], [Relationship("p", "A", "B")])
    assert model_to_dict(m)["relationships"][0]["multiplicity"] == [0, "*"]


def test_write_replaces_existing_file(tmp_path):
    path = tmp_path / "m.cdm.json"
    path.write_text("old")
    write_model(ConceptualModel([EntityType("A"), EntityType("B")], [], [Generalization("A", "B")]), path)
    assert read_model(path).entities[0].name == "A"
    assert [p.name for p in tmp_path.iterdir()] == ["m.cdm.json"]
