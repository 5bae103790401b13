"""Graphviz renderings.  Output is deterministic: everything sorted by id."""
from __future__ import annotations

from .exact import format_extended
from .semigraph import SemiGraph
from .skeleton import EmptySkeleton, Skeleton, is_hyperbolic_node, is_node


def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def semigraph_dot(g: SemiGraph, vertex_attrs: dict[str, str] | None = None,
                  edge_labels: dict[str, str] | None = None, name: str = "G") -> str:
    """Open edges are drawn as half-edges ending at invisible points."""
    vertex_attrs = vertex_attrs or {}
    edge_labels = edge_labels or {}
    lines = [f"graph {name} {{"]
    for v in sorted(g.vertices):
        attrs = vertex_attrs.get(v, "")
        lines.append(f"  {_q(v)}{' [' + attrs + ']' if attrs else ''};")
    for e in sorted(g.edges, key=lambda e: e.id):
        label = edge_labels.get(e.id, e.id)
        if e.is_open:
            end = _q(f"__open_{e.id}")
            lines.append(f"  {end} [shape=point, style=invis];")
            lines.append(f"  {_q(e.branches[0].vertex)} -- {end} [label={_q(label)}, style=dashed];")
        else:
            a, b = e.branches
            lines.append(f"  {_q(a.vertex)} -- {_q(b.vertex)} [label={_q(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def skeleton_dot(sk: Skeleton | EmptySkeleton) -> str:
    """Hyperbolic nodes green, other nodes red, non-nodes grey."""
    if isinstance(sk, EmptySkeleton):
        return "graph skeleton {\n}\n"
    attrs, labels = {}, {}
    for v in sk.graph.vertices:
        d = sk.vertex(v)
        if is_node(sk, v):
            color = "green" if is_hyperbolic_node(sk, v) else "red"
        else:
            color = "grey"
        attrs[v] = f'style=filled, fillcolor={color}, label={_q(f"{v} g={d.genus}")}'
    for e in sk.graph.edges:
        d = sk.edge_decor(e.id)
        text = format_extended(d.length)
        labels[e.id] = f"{e.id} {text}" + (f" {d.cusp_type}" if d.cusp_type else "")
    return semigraph_dot(sk.graph, attrs, labels, name="skeleton")


def labeled_dot(g: SemiGraph, vertex_labels: dict[str, int], edge_labels: dict[str, int], name: str = "gog") -> str:
    attrs = {v: f"label={_q(f'{v} |{vertex_labels[v]}|')}" for v in g.vertices}
    labels = {e.id: f"{e.id} |{edge_labels.get(e.id, '?')}|" for e in g.edges}
    return semigraph_dot(g, attrs, labels, name=name)
