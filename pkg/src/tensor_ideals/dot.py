"""Graphviz DOT output for lattices, posets and finite spaces."""

from __future__ import annotations

import json
from typing import Callable, Hashable, Iterable

from .ideals import FiniteSpectralSpace, RadicalIdealLattice
from .lattices import FinitePoset
from .spaces import FiniteTopSpace

__all__ = ["emit_dot", "node_name"]


def node_name(x: Hashable, order: Callable | None = None) -> str:
    """Canonical node text: sets print as ``{a,b}`` in ``order``."""
    if isinstance(x, frozenset):
        items = sorted(x, key=order) if order else sorted(x, key=str)
        return "{" + ",".join(node_name(y, order) for y in items) + "}"
    if hasattr(x, "members"):
        return node_name(x.members, order)
    return str(x)


def _render(title: str, names: list[str], edges: Iterable[tuple[int, int]], rankdir: str) -> str:
    lines = [f"digraph {json.dumps(title)} {{", f"  rankdir={rankdir};", "  node [shape=box];"]
    for i, name in enumerate(names):
        lines.append(f"  n{i} [label={json.dumps(name)}];")
    for i, j in sorted(edges):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _covers(n: int, rel: set[tuple[int, int]]) -> list[tuple[int, int]]:
    strict = {(i, j) for i, j in rel if i != j}
    return [(i, j) for i, j in strict if not any((i, k) in strict and (k, j) in strict for k in range(n))]


def emit_dot(obj, title: str = "", order: Callable | None = None) -> str:
    """Hasse diagram (edges point upward, bottom at the bottom) for posets
    and lattices; covering edges ``x -> y`` of specialization (y in the
    closure of x) for spaces."""
    if isinstance(obj, RadicalIdealLattice):
        pos = obj.presentation.label_positions
        return emit_dot(obj.to_lattice(), title or obj.presentation.name, order=pos.__getitem__)
    if isinstance(obj, FinitePoset):
        names = [node_name(x, order) for x in obj.elements]
        return _render(title or "lattice", names, obj.covers(), "BT")
    if isinstance(obj, FiniteSpectralSpace):
        pos = {x: i for i, x in enumerate(obj.labels)}
        names = [node_name(P, pos.__getitem__) for P in obj.points]
        return _render(title or "spectrum", names, _covers(len(names), set(obj.specialization)), "TB")
    if isinstance(obj, FiniteTopSpace):
        names = [node_name(x, order) for x in obj.points]
        return _render(title or "space", names, obj.specialization_edges(), "TB")
    raise TypeError(f"cannot draw {type(obj).__name__}")
