"""Corpus elements, dependency-graph assembly, and on-disk formats.

A corpus is a set of named elements, each with a signature expression and an
optional body expression.  The dependency graph keeps the signature-origin
and body-origin reference counts separate (ranking needs the split); summed
they give the usual weighted edge multiset.  Names referenced but never
declared become synthetic sink nodes, one per name, so unknown references
stay distinguishable.

Both file formats are line-delimited JSON with a leading header record, one
canonical byte rendering per graph (sorted names, sorted keys, no float
fields), so save(load(path)) reproduces the file exactly.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .exprs import ExprNode, collect_elems, parse_expr, print_expr

ELEMENT_KINDS = ("definition", "theorem", "structure", "inductive", "primitive", "synthetic")
_KIND_ALIASES = {"lemma": "theorem"}

GRAPH_FORMAT = "macrolab-graph"
CORPUS_FORMAT = "macrolab-corpus"
FORMAT_VERSION = 1


class CorpusError(ValueError):
    """Malformed corpus or graph input; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


def normalize_kind(kind: str) -> str:
    kind = _KIND_ALIASES.get(kind, kind)
    if kind not in ELEMENT_KINDS:
        raise CorpusError(f"unknown element kind {kind!r}")
    return kind


@dataclass
class Element:
    """One corpus entry, pre graph assembly."""

    name: str
    kind: str
    signature: ExprNode | None = None
    body: ExprNode | None = None
    token_count_signature: int | None = None
    token_count_body: int | None = None
    generated: bool = False

    def __post_init__(self) -> None:
        self.kind = normalize_kind(self.kind)
        if not self.name:
            raise CorpusError("element names must be non-empty")
        for label, count in (
            ("signature", self.token_count_signature),
            ("body", self.token_count_body),
        ):
            if count is not None and count < 1 and not self.generated:
                raise CorpusError(
                    f"element {self.name!r}: {label} token count must be >= 1"
                )
        if self.kind in ("primitive", "synthetic") and self.body is not None:
            raise CorpusError(f"{self.kind} element {self.name!r} cannot have a body")


@dataclass
class GraphNode:
    """A dependency-graph node with signature/body reference splits."""

    name: str
    kind: str
    generated: bool
    token_count_signature: int | None
    token_count_body: int | None
    sig_refs: dict[str, int] = field(default_factory=dict)
    body_refs: dict[str, int] = field(default_factory=dict)

    def merged_refs(self) -> dict[str, int]:
        merged = dict(self.sig_refs)
        for name, w in self.body_refs.items():
            merged[name] = merged.get(name, 0) + w
        return merged

    @property
    def has_body(self) -> bool:
        return self.token_count_body is not None or bool(self.body_refs)


class DepGraph:
    """Weighted dependency graph over named elements, name-ordered."""

    def __init__(self, nodes: list[GraphNode]):
        self.nodes: dict[str, GraphNode] = {}
        for node in sorted(nodes, key=lambda nd: nd.name):
            if node.name in self.nodes:
                raise CorpusError(f"duplicate element name {node.name!r}")
            self.nodes[node.name] = node
        for node in self.nodes.values():
            for target in (*node.sig_refs, *node.body_refs):
                if target not in self.nodes:
                    raise CorpusError(
                        f"{node.name!r} references undeclared {target!r}; "
                        "build_graph adds synthetic sinks for these"
                    )

    def __len__(self) -> int:
        return len(self.nodes)

    def names(self) -> list[str]:
        return list(self.nodes)

    def edges(self):
        """Yield (source, target, summed weight), deterministic order."""
        for node in self.nodes.values():
            merged = node.merged_refs()
            for target in sorted(merged):
                yield node.name, target, merged[target]

    def total_edge_weight(self) -> int:
        return sum(w for _, _, w in self.edges())


def build_graph(elements: list[Element]) -> DepGraph:
    """Assemble the dependency graph, adding synthetic sinks for unknown names."""
    declared: set[str] = set()
    for el in elements:
        if el.name in declared:
            raise CorpusError(f"duplicate element name {el.name!r}")
        declared.add(el.name)

    nodes: list[GraphNode] = []
    referenced: set[str] = set()
    for el in elements:
        sig_refs = dict(collect_elems(el.signature)) if el.signature is not None else {}
        body_refs = dict(collect_elems(el.body)) if el.body is not None else {}
        if el.kind in ("primitive", "synthetic") and (sig_refs or body_refs):
            raise CorpusError(f"{el.kind} element {el.name!r} must reference nothing")
        referenced.update(sig_refs)
        referenced.update(body_refs)
        nodes.append(GraphNode(
            name=el.name,
            kind=el.kind,
            generated=el.generated,
            token_count_signature=el.token_count_signature,
            token_count_body=el.token_count_body,
            sig_refs=sig_refs,
            body_refs=body_refs,
        ))
    for name in sorted(referenced - declared):
        nodes.append(GraphNode(
            name=name,
            kind="synthetic",
            generated=True,
            token_count_signature=None,
            token_count_body=None,
        ))
    return DepGraph(nodes)


def _node_record(node: GraphNode) -> str:
    rec = {
        "name": node.name,
        "kind": node.kind,
        "generated": node.generated,
        "token_count_signature": node.token_count_signature,
        "token_count_body": node.token_count_body,
        "sig_refs": {k: node.sig_refs[k] for k in sorted(node.sig_refs)},
        "body_refs": {k: node.body_refs[k] for k in sorted(node.body_refs)},
    }
    return json.dumps(rec, sort_keys=True, separators=(",", ":"))


def save_graph(graph: DepGraph, path: str) -> None:
    header = json.dumps(
        {"format": GRAPH_FORMAT, "version": FORMAT_VERSION},
        sort_keys=True, separators=(",", ":"),
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for name in sorted(graph.nodes):
            fh.write(_node_record(graph.nodes[name]) + "\n")


def _check_header(obj: dict, expected_format: str) -> None:
    if not isinstance(obj, dict) or obj.get("format") != expected_format:
        raise CorpusError(f"expected a {expected_format!r} header record", line=1)
    if obj.get("version") != FORMAT_VERSION:
        raise CorpusError(f"unsupported format version {obj.get('version')!r}", line=1)


def _read_jsonl(path: str, expected_format: str):
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise CorpusError("empty file", line=1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise CorpusError(f"bad JSON: {exc.msg}", line=1) from exc
    _check_header(header, expected_format)
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            yield lineno, json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"bad JSON: {exc.msg}", line=lineno) from exc


def _opt_nat(rec: dict, key: str, lineno: int, minimum: int = 1) -> int | None:
    val = rec.get(key)
    if val is None:
        return None
    if not isinstance(val, int) or isinstance(val, bool) or val < minimum:
        raise CorpusError(f"{key} must be an integer >= {minimum} or null", line=lineno)
    return val


def _refs_field(rec: dict, key: str, lineno: int) -> dict[str, int]:
    val = rec.get(key, {})
    if not isinstance(val, dict):
        raise CorpusError(f"{key} must be an object", line=lineno)
    out: dict[str, int] = {}
    for name, w in val.items():
        if not isinstance(w, int) or isinstance(w, bool) or w < 1:
            raise CorpusError(f"{key}[{name!r}] must be a positive integer", line=lineno)
        out[name] = w
    return out


def load_graph(path: str) -> DepGraph:
    nodes: list[GraphNode] = []
    for lineno, rec in _read_jsonl(path, GRAPH_FORMAT):
        if not isinstance(rec, dict):
            raise CorpusError("expected an object per line", line=lineno)
        name = rec.get("name")
        if not isinstance(name, str) or not name:
            raise CorpusError("missing element name", line=lineno)
        try:
            kind = normalize_kind(rec.get("kind", ""))
        except CorpusError as exc:
            raise CorpusError(str(exc), line=lineno) from exc
        nodes.append(GraphNode(
            name=name,
            kind=kind,
            generated=bool(rec.get("generated", False)),
            token_count_signature=_opt_nat(rec, "token_count_signature", lineno),
            token_count_body=_opt_nat(rec, "token_count_body", lineno),
            sig_refs=_refs_field(rec, "sig_refs", lineno),
            body_refs=_refs_field(rec, "body_refs", lineno),
        ))
    try:
        return DepGraph(nodes)
    except CorpusError as exc:
        raise CorpusError(f"inconsistent graph: {exc}") from exc


def load_corpus(path: str) -> list[Element]:
    """Read an expression corpus (JSONL with S-expression signature/body strings)."""
    elements: list[Element] = []
    for lineno, rec in _read_jsonl(path, CORPUS_FORMAT):
        if not isinstance(rec, dict):
            raise CorpusError("expected an object per line", line=lineno)
        name = rec.get("name")
        if not isinstance(name, str) or not name:
            raise CorpusError("missing element name", line=lineno)
        sig_text = rec.get("signature")
        body_text = rec.get("body")
        try:
            signature = parse_expr(sig_text) if sig_text is not None else None
            body = parse_expr(body_text) if body_text is not None else None
        except ValueError as exc:
            raise CorpusError(f"{name}: {exc}", line=lineno) from exc
        try:
            elements.append(Element(
                name=name,
                kind=rec.get("kind", ""),
                signature=signature,
                body=body,
                token_count_signature=_opt_nat(rec, "token_count_signature", lineno),
                token_count_body=_opt_nat(rec, "token_count_body", lineno),
                generated=bool(rec.get("generated", False)),
            ))
        except CorpusError as exc:
            raise CorpusError(str(exc), line=lineno) from exc
    return elements


def save_corpus(elements: list[Element], path: str) -> None:
    header = json.dumps(
        {"format": CORPUS_FORMAT, "version": FORMAT_VERSION},
        sort_keys=True, separators=(",", ":"),
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for el in sorted(elements, key=lambda e: e.name):
            rec = {
                "name": el.name,
                "kind": el.kind,
                "generated": el.generated,
                "signature": print_expr(el.signature) if el.signature is not None else None,
                "body": print_expr(el.body) if el.body is not None else None,
                "token_count_signature": el.token_count_signature,
                "token_count_body": el.token_count_body,
            }
            fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
