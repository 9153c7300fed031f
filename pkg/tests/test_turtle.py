import pytest

from skillgen.errors import TurtleSyntaxError
from skillgen.turtle import (RDF_TYPE, BlankNode, Iri, Literal, local_name,
                             parse_turtle)

SIMPLE = """\
@prefix ex: <http://example.org/> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .

ex:Thing a ex:Widget ;
    rdfs:label "A thing"@en ;
    ex:count 3 .
"""


def test_basic_triples():
    triples = parse_turtle(SIMPLE)
    assert (Iri("http://example.org/Thing"), Iri(RDF_TYPE),
            Iri("http://example.org/Widget")) in triples
    assert (Iri("http://example.org/Thing"),
            Iri("http://www.w3.org/2000/01/rdf-schema#label"),
            Literal("A thing", lang="en")) in triples
    counts = [o for s, p, o in triples if p.value == "http://example.org/count"]
    assert counts == [Literal("3", datatype="http://www.w3.org/2001/XMLSchema#integer")]


def test_object_list_and_predicate_list():
    text = """@prefix ex: <http://example.org/> .
ex:a ex:p ex:b, ex:c ; ex:q ex:d .
"""
    triples = parse_turtle(text)
    assert len(triples) == 3
    objects = [o.value for s, p, o in triples]
    assert objects == ["http://example.org/b", "http://example.org/c",
                       "http://example.org/d"]


def test_blank_node_property_list():
    text = """@prefix ex: <http://example.org/> .
ex:a ex:p [ ex:q "v" ; ex:r 1.5 ] .
"""
    triples = parse_turtle(text)
    assert len(triples) == 3
    blank = [o for s, p, o in triples if isinstance(o, BlankNode)]
    assert len(blank) == 1
    nested = [t for t in triples if t[0] == blank[0]]
    assert len(nested) == 2


def test_typed_literal_and_plain():
    text = ('@prefix ex: <http://example.org/> .\n'
            '@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n'
            'ex:a ex:p "plain" ; ex:q "typed"^^xsd:string .\n')
    triples = parse_turtle(text)
    literals = [o for _, _, o in triples]
    assert Literal("plain") in literals
    assert Literal("typed", datatype="http://www.w3.org/2001/XMLSchema#string") in literals


def test_string_escapes():
    text = '@prefix ex: <http://example.org/> .\nex:a ex:p "line\\nbreak \\"q\\"" .\n'
    [(_, _, o)] = parse_turtle(text)
    assert o.value == 'line\nbreak "q"'


def test_local_name_with_trailing_dot():
    text = "@prefix ex: <http://example.org/> .\nex:a ex:p ex:b.\n"
    triples = parse_turtle(text)
    assert triples[0][2] == Iri("http://example.org/b")


def test_sparql_style_prefix():
    text = "PREFIX ex: <http://example.org/>\nex:a ex:p ex:b .\n"
    assert len(parse_turtle(text)) == 1


def test_determinism():
    assert parse_turtle(SIMPLE) == parse_turtle(SIMPLE)


@pytest.mark.parametrize("bad", [
    "ex:a ex:p ex:b .",                       # undeclared prefix
    "@prefix ex: <http://example.org/> .\nex:a ex:p .",   # missing object
    "@prefix ex: <http://example.org/> .\nex:a ex:p ex:b",  # missing dot
    "@prefix ex: <http://e/> .\nex:a ex:p (ex:b ex:c) .",  # collections unsupported
    "@base <http://example.org/> .",          # base unsupported
    '@prefix ex: <http://e/> .\nex:a ex:p "unterminated .',
])
def test_syntax_errors(bad):
    with pytest.raises(TurtleSyntaxError):
        parse_turtle(bad)


def test_error_carries_position():
    try:
        parse_turtle("@prefix ex: <http://e/> .\nex:a ex:p .\n")
    except TurtleSyntaxError as exc:
        assert exc.line == 2
        assert exc.column > 0
    else:
        pytest.fail("expected TurtleSyntaxError")


def test_local_name():
    assert local_name("http://example.org/cap#MoveForward") == "MoveForward"
    assert local_name("http://example.org/cap/MoveForward") == "MoveForward"
