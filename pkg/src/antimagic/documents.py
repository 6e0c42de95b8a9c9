"""Line-oriented labeling documents.

A labeling document is versioned text carrying the labeled edge list, the
per-vertex sums, the layer assignment, and the interval plan.  Rendering is
deterministic: identical inputs produce byte-identical documents.  Parsing
accepts any document with the right header and edge lines; the other sections
are cross-checked when present.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import GraphFormatError
from .graph import Graph
from .labeling import LabelingResult

HEADER = "antimagic-labeling 1"


@dataclass
class LabelingDocument:
    """Parsed form; optional sections are None / empty when absent."""

    labels: dict[tuple[int, int], int]
    n: int | None = None
    m: int | None = None
    root: int | None = None
    degree: int | None = None
    depth: int | None = None
    layer_of: dict[int, int] = field(default_factory=dict)
    sums: dict[int, int] = field(default_factory=dict)


def render_document(result: LabelingResult) -> str:
    g = result.graph
    lines = [HEADER,
             f"graph {g.n} {g.m}",
             f"root {result.root}",
             f"degree {2 * result.k + 2}",
             f"layers {result.layering.depth}"]
    for i in range(result.layering.depth, 0, -1):
        plan = result.plans[i]
        lines.append(f"plan {i} offset={plan.offset} inner={plan.inner_count} "
                     f"trail={plan.trail_count} link={plan.link_count} size={plan.layer_size}")
    for v in range(g.n):
        lines.append(f"layer {v} {result.layering.layer_of[v]}")
    by_ends = sorted((g.edges[eid], eid) for eid in range(g.m))
    for (u, v), eid in by_ends:
        lines.append(f"edge {u} {v} {result.labeling.labels[eid]}")
    for v in range(g.n):
        lines.append(f"sum {v} {result.labeling.vertex_sums[v]}")
    return "\n".join(lines) + "\n"


def _int_fields(parts: list[str], count: int, lineno: int) -> list[int]:
    if len(parts) != count:
        raise GraphFormatError(f"line {lineno}: expected {count} fields, got {len(parts)}")
    try:
        return [int(p) for p in parts]
    except ValueError as exc:
        raise GraphFormatError(f"line {lineno}: non-integer field") from exc


def parse_document(text: str) -> LabelingDocument:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise GraphFormatError(f"labeling document must start with '{HEADER}'")
    doc = LabelingDocument(labels={})
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        kind, *rest = line.split()
        if kind == "graph":
            doc.n, doc.m = _int_fields(rest, 2, lineno)
        elif kind == "root":
            (doc.root,) = _int_fields(rest, 1, lineno)
        elif kind == "degree":
            (doc.degree,) = _int_fields(rest, 1, lineno)
        elif kind == "layers":
            (doc.depth,) = _int_fields(rest, 1, lineno)
        elif kind == "plan":
            continue  # informative; the verifier recomputes plans when needed
        elif kind == "layer":
            v, idx = _int_fields(rest, 2, lineno)
            doc.layer_of[v] = idx
        elif kind == "edge":
            u, v, label = _int_fields(rest, 3, lineno)
            if u == v:
                raise GraphFormatError(f"line {lineno}: loop edge {u}-{v}")
            key = (u, v) if u < v else (v, u)
            if key in doc.labels:
                raise GraphFormatError(f"line {lineno}: duplicate edge {key[0]}-{key[1]}")
            doc.labels[key] = label
        elif kind == "sum":
            v, s = _int_fields(rest, 2, lineno)
            doc.sums[v] = s
        else:
            raise GraphFormatError(f"line {lineno}: unknown record '{kind}'")
    if not doc.labels:
        raise GraphFormatError("labeling document has no edge records")
    return doc


def labels_for_graph(graph: Graph, doc: LabelingDocument) -> list[int]:
    """Match the document's labeled edges against a graph, returning labels in
    edge-id order.  Any mismatch between the two is a format error."""
    if doc.n is not None and doc.n != graph.n:
        raise GraphFormatError(f"document declares {doc.n} vertices, graph has {graph.n}")
    if doc.m is not None and doc.m != graph.m:
        raise GraphFormatError(f"document declares {doc.m} edges, graph has {graph.m}")
    if len(doc.labels) != graph.m:
        raise GraphFormatError(f"document labels {len(doc.labels)} edges, graph has {graph.m}")
    out = []
    for u, v in graph.edges:
        if (u, v) not in doc.labels:
            raise GraphFormatError(f"graph edge {u}-{v} has no label in the document")
        out.append(doc.labels[(u, v)])
    return out
