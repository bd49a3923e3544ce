"""Tests for corpus elements, graph assembly, and the JSONL formats."""

import pytest

from macrolab.corpus import (
    CorpusError,
    DepGraph,
    Element,
    GraphNode,
    build_graph,
    load_corpus,
    load_graph,
    save_corpus,
    save_graph,
)
from macrolab.exprs import parse_expr

WORKED_SIG = (
    "(forallE (sort) (forallE (sort) "
    "(forallE (app (app (const And) (other)) (other)) (other))))"
)
WORKED_BODY = (
    "(lam (sort) (lam (sort) (lam (app (app (const And) (other)) (other)) "
    "(app (app (app (const And.right) (other)) (other)) (other)))))"
)


def worked_element():
    return Element(
        name="simple_lemma",
        kind="theorem",
        signature=parse_expr(WORKED_SIG),
        body=parse_expr(WORKED_BODY),
        token_count_signature=18,
        token_count_body=24,
    )


# --- elements ---


def test_element_normalizes_lemma_to_theorem():
    el = Element(name="x", kind="lemma")
    assert el.kind == "theorem"


def test_element_rejects_unknown_kinds():
    with pytest.raises(CorpusError):
        Element(name="x", kind="conjecture")


def test_element_rejects_empty_names():
    with pytest.raises(CorpusError):
        Element(name="", kind="definition")


def test_element_rejects_non_positive_token_counts():
    with pytest.raises(CorpusError):
        Element(name="x", kind="definition", token_count_signature=0)


def test_primitive_elements_cannot_carry_bodies():
    with pytest.raises(CorpusError):
        Element(name="x", kind="primitive", body=parse_expr("(other)"))


# --- graph assembly ---


def test_build_graph_splits_signature_and_body_references():
    graph = build_graph([worked_element()])
    node = graph.nodes["simple_lemma"]
    assert node.sig_refs == {"And": 1, "Sort": 2}
    assert node.body_refs == {"And": 1, "And.right": 1, "Sort": 2}
    assert node.merged_refs() == {"And": 2, "And.right": 1, "Sort": 4}


def test_build_graph_adds_one_sink_per_unknown_name():
    graph = build_graph([worked_element()])
    assert graph.names() == ["And", "And.right", "Sort", "simple_lemma"]
    for name in ("And", "And.right", "Sort"):
        sink = graph.nodes[name]
        assert sink.kind == "synthetic"
        assert sink.generated
        assert sink.sig_refs == {} and sink.body_refs == {}
    assert graph.total_edge_weight() == 7


def test_build_graph_keeps_declared_names_out_of_the_sinks():
    els = [
        worked_element(),
        Element(name="And", kind="inductive", signature=parse_expr("(sort)")),
    ]
    graph = build_graph(els)
    assert graph.nodes["And"].kind == "inductive"
    assert not graph.nodes["And"].generated
    assert len(graph) == 4  # simple_lemma, And, plus sinks And.right and Sort


def test_build_graph_retains_mutual_cycles():
    els = [
        Element(name="a", kind="definition", signature=parse_expr("(const b)")),
        Element(name="b", kind="definition", signature=parse_expr("(const a)")),
    ]
    graph = build_graph(els)
    assert graph.nodes["a"].sig_refs == {"b": 1}
    assert graph.nodes["b"].sig_refs == {"a": 1}


def test_build_graph_rejects_duplicate_names():
    els = [
        Element(name="a", kind="definition"),
        Element(name="a", kind="theorem"),
    ]
    with pytest.raises(CorpusError):
        build_graph(els)


def test_build_graph_rejects_referencing_primitives():
    els = [Element(name="p", kind="primitive", signature=parse_expr("(const q)"))]
    with pytest.raises(CorpusError):
        build_graph(els)


def test_bodiless_const_signature_yields_one_edge():
    graph = build_graph([Element(name="x", kind="definition", signature=parse_expr("(const X)"))])
    assert list(graph.edges()) == [("x", "X", 1)]


def test_dep_graph_rejects_undeclared_references():
    node = GraphNode(
        name="a", kind="definition", generated=False,
        token_count_signature=None, token_count_body=None,
        sig_refs={"ghost": 1},
    )
    with pytest.raises(CorpusError):
        DepGraph([node])


def test_edges_are_sorted_and_summed():
    graph = build_graph([worked_element()])
    edges = [e for e in graph.edges() if e[0] == "simple_lemma"]
    assert edges == [
        ("simple_lemma", "And", 2),
        ("simple_lemma", "And.right", 1),
        ("simple_lemma", "Sort", 4),
    ]


# --- file formats ---


def test_graph_round_trip_is_byte_identical(tmp_path):
    graph = build_graph([worked_element()])
    first = tmp_path / "graph.jsonl"
    second = tmp_path / "again.jsonl"
    save_graph(graph, str(first))
    save_graph(load_graph(str(first)), str(second))
    assert first.read_bytes() == second.read_bytes()
    assert first.read_bytes().startswith(b'{"format":"macrolab-graph","version":1}\n')


def test_corpus_round_trip_preserves_elements(tmp_path):
    els = [
        worked_element(),
        Element(name="And", kind="inductive", signature=parse_expr("(sort)")),
    ]
    path = tmp_path / "corpus.jsonl"
    save_corpus(els, str(path))
    loaded = load_corpus(str(path))
    assert [e.name for e in loaded] == ["And", "simple_lemma"]
    back = {e.name: e for e in loaded}
    assert back["simple_lemma"].signature == parse_expr(WORKED_SIG)
    assert back["simple_lemma"].body == parse_expr(WORKED_BODY)
    assert back["simple_lemma"].token_count_body == 24
    again = tmp_path / "again.jsonl"
    save_corpus(loaded, str(again))
    assert path.read_bytes() == again.read_bytes()


def test_load_graph_reports_bad_json_line(tmp_path):
    path = tmp_path / "graph.jsonl"
    path.write_text(
        '{"format":"macrolab-graph","version":1}\n'
        '{"name":"a","kind":"definition"}\n'
        "{broken\n"
    )
    with pytest.raises(CorpusError) as err:
        load_graph(str(path))
    assert err.value.line == 3


def test_load_graph_rejects_wrong_header(tmp_path):
    path = tmp_path / "graph.jsonl"
    path.write_text('{"format":"something-else","version":1}\n')
    with pytest.raises(CorpusError) as err:
        load_graph(str(path))
    assert err.value.line == 1


def test_load_graph_rejects_wrong_version(tmp_path):
    path = tmp_path / "graph.jsonl"
    path.write_text('{"format":"macrolab-graph","version":99}\n')
    with pytest.raises(CorpusError):
        load_graph(str(path))


def test_load_graph_rejects_empty_files(tmp_path):
    path = tmp_path / "graph.jsonl"
    path.write_text("")
    with pytest.raises(CorpusError):
        load_graph(str(path))


def test_load_graph_rejects_bad_reference_weights(tmp_path):
    path = tmp_path / "graph.jsonl"
    path.write_text(
        '{"format":"macrolab-graph","version":1}\n'
        '{"name":"a","kind":"definition","sig_refs":{"b":0}}\n'
    )
    with pytest.raises(CorpusError) as err:
        load_graph(str(path))
    assert err.value.line == 2


def test_load_corpus_reports_parse_errors_with_lines(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_text(
        '{"format":"macrolab-corpus","version":1}\n'
        '{"name":"bad","kind":"definition","signature":"(app (sort)"}\n'
    )
    with pytest.raises(CorpusError) as err:
        load_corpus(str(path))
    assert err.value.line == 2
    assert "bad" in str(err.value)
