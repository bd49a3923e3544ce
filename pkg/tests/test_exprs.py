"""Tests for expression parsing, printing, and reference counting."""

from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from macrolab.exprs import (
    ExprNode,
    ExprParseError,
    app,
    collect_elems,
    const,
    expr_size,
    forall_e,
    lam,
    let_e,
    mdata,
    other,
    parse_expr,
    print_expr,
    proj,
    sort,
)

SIMPLE_BODY = (
    "(lam (sort) (lam (sort) (lam (app (app (const And) (other)) (other)) "
    "(app (app (app (const And.right) (other)) (other)) (other)))))"
)


# --- parsing ---


def test_parse_const():
    node = parse_expr("(const And)")
    assert node == const("And")
    assert node.name == "And"


def test_parse_nested_body():
    node = parse_expr(SIMPLE_BODY)
    assert node.tag == "lam"
    inner = node.children[1].children[1]
    assert inner.tag == "lam"
    assert inner.children[0].tag == "app"
    spine = inner.children[1]
    assert spine.tag == "app"
    assert collect_elems(spine)["And.right"] == 1


def test_parse_accepts_arbitrary_whitespace():
    assert parse_expr("( app\n  (sort)\n  (other) )") == app(sort(), other())


def test_parse_reports_unclosed_position():
    with pytest.raises(ExprParseError) as err:
        parse_expr("(app (const f)")
    assert "unclosed" in str(err.value)
    assert err.value.line == 1
    assert err.value.col == 14


def test_parse_reports_unknown_tag_position():
    with pytest.raises(ExprParseError) as err:
        parse_expr("(app (sort)\n  (bogus))")
    assert err.value.line == 2
    assert err.value.col == 4


def test_parse_rejects_wrong_arity():
    with pytest.raises(ExprParseError) as err:
        parse_expr("(app (sort))")
    assert "takes 2" in str(err.value)


def test_parse_rejects_trailing_input():
    with pytest.raises(ExprParseError) as err:
        parse_expr("(sort) (sort)")
    assert "trailing" in str(err.value)


def test_parse_rejects_bare_atoms_and_empty_input():
    with pytest.raises(ExprParseError):
        parse_expr("And")
    with pytest.raises(ExprParseError):
        parse_expr("   ")
    with pytest.raises(ExprParseError):
        parse_expr("(const)")
    with pytest.raises(ExprParseError):
        parse_expr(")")


def test_parse_survives_deep_nesting():
    depth = 40000
    text = "(mdata " * depth + "(other)" + ")" * depth
    node = parse_expr(text)
    assert expr_size(node) == depth + 1


def test_node_constructor_validation():
    with pytest.raises(ValueError):
        ExprNode("nonsense")
    with pytest.raises(ValueError):
        ExprNode("app", children=(sort(),))
    with pytest.raises(ValueError):
        ExprNode("sort", name="Sort")
    with pytest.raises(ValueError):
        ExprNode("const")


# --- printing ---


def test_print_matches_canonical_form():
    node = let_e(sort(), proj(other()), mdata(const("x")))
    assert print_expr(node) == "(letE (sort) (proj (other)) (mdata (const x)))"


def test_print_parse_round_trip_on_the_worked_body():
    node = parse_expr(SIMPLE_BODY)
    assert parse_expr(print_expr(node)) == node


expr_nodes = st.deferred(
    lambda: st.one_of(
        st.just(sort()),
        st.just(other()),
        st.from_regex(r"[A-Za-z][A-Za-z0-9_.]{0,8}", fullmatch=True).map(const),
        st.tuples(expr_nodes, expr_nodes).map(lambda t: app(*t)),
        st.tuples(expr_nodes, expr_nodes).map(lambda t: lam(*t)),
        st.tuples(expr_nodes, expr_nodes).map(lambda t: forall_e(*t)),
        st.tuples(expr_nodes, expr_nodes, expr_nodes).map(lambda t: let_e(*t)),
        st.tuples(expr_nodes).map(lambda t: mdata(*t)),
        st.tuples(expr_nodes).map(lambda t: proj(*t)),
    )
)


@settings(deadline=None, max_examples=80)
@given(expr_nodes)
def test_print_parse_round_trip(node):
    assert parse_expr(print_expr(node)) == node


# --- reference counting ---


def test_collect_counts_the_worked_signature():
    text = (
        "(forallE (sort) (forallE (sort) "
        "(forallE (app (app (const And) (other)) (other)) (other))))"
    )
    assert collect_elems(parse_expr(text)) == Counter({"Sort": 2, "And": 1})


def test_collect_counts_the_worked_body():
    assert collect_elems(parse_expr(SIMPLE_BODY)) == Counter(
        {"Sort": 2, "And": 1, "And.right": 1}
    )


def test_collect_single_const():
    assert collect_elems(const("Nat")) == Counter({"Nat": 1})


def test_collect_ignores_reference_free_nodes():
    node = lam(other(), mdata(proj(other())))
    assert collect_elems(node) == Counter()


@settings(deadline=None, max_examples=80)
@given(expr_nodes)
def test_collect_total_equals_const_and_sort_nodes(node):
    text = print_expr(node)
    expected = text.count("(const ") + text.count("(sort)")
    assert sum(collect_elems(node).values()) == expected
