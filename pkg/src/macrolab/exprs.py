"""S-expression encoded expression trees and reference counting.

The grammar mirrors a proof-assistant kernel term language::

    E ::= (const NAME) | (app E E) | (lam E E) | (forallE E E)
        | (letE E E E) | (mdata E) | (proj E) | (sort) | (other)

`(sort)` stands for any type universe and counts as a reference to the single
name "Sort"; `(other)` covers constructs that reference nothing (bound
variables, literals, metavariables).  Parsing and printing are iterative so
deeply nested bodies cannot overflow the interpreter stack.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

SORT_NAME = "Sort"

# tag -> number of expression children
_ARITY = {
    "const": 0,
    "app": 2,
    "lam": 2,
    "forallE": 2,
    "letE": 3,
    "mdata": 1,
    "proj": 1,
    "sort": 0,
    "other": 0,
}


@dataclass(frozen=True)
class ExprNode:
    tag: str
    name: str | None = None
    children: tuple[ExprNode, ...] = ()

    def __post_init__(self) -> None:
        if self.tag not in _ARITY:
            raise ValueError(f"unknown expression tag {self.tag!r}")
        if len(self.children) != _ARITY[self.tag]:
            raise ValueError(
                f"{self.tag} takes {_ARITY[self.tag]} children, got {len(self.children)}"
            )
        if (self.tag == "const") != (self.name is not None):
            raise ValueError("exactly const nodes carry a name")


def const(name: str) -> ExprNode:
    return ExprNode("const", name=name)


def app(fn: ExprNode, arg: ExprNode) -> ExprNode:
    return ExprNode("app", children=(fn, arg))


def lam(binder_type: ExprNode, body: ExprNode) -> ExprNode:
    return ExprNode("lam", children=(binder_type, body))


def forall_e(binder_type: ExprNode, body: ExprNode) -> ExprNode:
    return ExprNode("forallE", children=(binder_type, body))


def let_e(binder_type: ExprNode, value: ExprNode, body: ExprNode) -> ExprNode:
    return ExprNode("letE", children=(binder_type, value, body))


def mdata(inner: ExprNode) -> ExprNode:
    return ExprNode("mdata", children=(inner,))


def proj(struct: ExprNode) -> ExprNode:
    return ExprNode("proj", children=(struct,))


def sort() -> ExprNode:
    return ExprNode("sort")


def other() -> ExprNode:
    return ExprNode("other")


class ExprParseError(ValueError):
    """Malformed expression text, with 1-based line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


@dataclass
class _Token:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch.isspace():
            col += 1
            i += 1
        elif ch in "()":
            tokens.append(_Token(ch, line, col))
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < len(text) and not text[i].isspace() and text[i] not in "()":
                i += 1
                col += 1
            tokens.append(_Token(text[start:i], line, start_col))
    return tokens


def parse_expr(text: str) -> ExprNode:
    """Parse one S-expression; trailing input or malformed forms are rejected."""
    tokens = _tokenize(text)
    if not tokens:
        raise ExprParseError("empty input", 1, 1)
    pos = 0

    # frames: [tag, tag_token, children-list]
    stack: list[list] = []
    result: ExprNode | None = None
    while pos < len(tokens):
        tok = tokens[pos]
        if result is not None:
            raise ExprParseError(f"unexpected trailing {tok.text!r}", tok.line, tok.col)
        if tok.text == "(":
            pos += 1
            if pos >= len(tokens) or tokens[pos].text in "()":
                bad = tokens[pos] if pos < len(tokens) else tok
                raise ExprParseError("expected a tag after '('", bad.line, bad.col)
            tag_tok = tokens[pos]
            if tag_tok.text not in _ARITY:
                raise ExprParseError(f"unknown tag {tag_tok.text!r}", tag_tok.line, tag_tok.col)
            pos += 1
            name = None
            if tag_tok.text == "const":
                if pos >= len(tokens) or tokens[pos].text in "()":
                    raise ExprParseError("const needs a name", tag_tok.line, tag_tok.col)
                name = tokens[pos].text
                pos += 1
            stack.append([tag_tok.text, tag_tok, name, []])
        elif tok.text == ")":
            if not stack:
                raise ExprParseError("unmatched ')'", tok.line, tok.col)
            tag, tag_tok, name, children = stack.pop()
            if len(children) != _ARITY[tag]:
                raise ExprParseError(
                    f"{tag} takes {_ARITY[tag]} children, got {len(children)}",
                    tag_tok.line, tag_tok.col,
                )
            node = ExprNode(tag, name=name, children=tuple(children))
            pos += 1
            if stack:
                stack[-1][3].append(node)
            else:
                result = node
        else:
            raise ExprParseError(f"unexpected atom {tok.text!r}", tok.line, tok.col)
    if result is None:
        last = tokens[-1]
        raise ExprParseError("unclosed '('", last.line, last.col)
    return result


def print_expr(node: ExprNode) -> str:
    """Canonical single-space rendering; parse_expr(print_expr(e)) == e."""
    out: list[str] = []
    stack: list[ExprNode | str] = [node]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        if item.tag == "const":
            out.append(f"(const {item.name})")
            continue
        if not item.children:
            out.append(f"({item.tag})")
            continue
        out.append(f"({item.tag}")
        stack.append(")")
        for child in reversed(item.children):
            stack.append(child)
    # join pieces: space before every piece except after an opening fragment
    text: list[str] = []
    for piece in out:
        if text and piece != ")":
            text.append(" ")
        text.append(piece)
    return "".join(text)


def collect_elems(node: ExprNode) -> Counter[str]:
    """Multiset of referenced names: const names plus "Sort" per sort node."""
    counts: Counter[str] = Counter()
    stack = [node]
    while stack:
        e = stack.pop()
        if e.tag == "const":
            counts[e.name] += 1
        elif e.tag == "sort":
            counts[SORT_NAME] += 1
        stack.extend(e.children)
    return counts


def expr_size(node: ExprNode) -> int:
    """Node count, handy as a crude token count for synthetic corpora."""
    size = 0
    stack = [node]
    while stack:
        e = stack.pop()
        size += 1
        stack.extend(e.children)
    return size
