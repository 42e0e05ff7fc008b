"""Structural correctness checks for predicted graphs.

A graph is structurally valid when it is a weakly connected DAG with at
least three distinct edges and anchors at least two of its concepts in the
belief text and two in the argument text (normalized contiguous substring
match).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyGraph
from .graphs import Concept, ExplanationGraph, normalize_text

MIN_EDGES = 3
MIN_ANCHORS = 2


@dataclass(frozen=True)
class StructureVerdict:
    connected: bool
    acyclic: bool
    edge_count_ok: bool
    belief_anchors: tuple[Concept, ...]
    argument_anchors: tuple[Concept, ...]

    @property
    def valid(self) -> bool:
        return (
            self.connected
            and self.acyclic
            and self.edge_count_ok
            and len(self.belief_anchors) >= MIN_ANCHORS
            and len(self.argument_anchors) >= MIN_ANCHORS
        )

    def to_dict(self) -> dict:
        return {
            "connected": self.connected,
            "acyclic": self.acyclic,
            "edge_count_ok": self.edge_count_ok,
            "belief_anchors": [c.text for c in self.belief_anchors],
            "argument_anchors": [c.text for c in self.argument_anchors],
            "valid": self.valid,
        }


def _require_non_empty(graph: ExplanationGraph):
    if not graph.triples:
        raise EmptyGraph("graph has no triples")


def is_weakly_connected(graph: ExplanationGraph) -> bool:
    """True iff the undirected projection of the deduplicated edge set has a
    single component spanning all nodes. BFS from an arbitrary node."""
    _require_non_empty(graph)
    adjacency: dict[Concept, set[Concept]] = {}
    for t in graph.unique_triples:
        adjacency.setdefault(t.head, set()).add(t.tail)
        adjacency.setdefault(t.tail, set()).add(t.head)
    nodes = list(adjacency)
    seen = {nodes[0]}
    frontier = [nodes[0]]
    while frontier:
        current = frontier.pop()
        for neighbor in adjacency[current]:
            if neighbor not in seen:
                seen.add(neighbor)
                frontier.append(neighbor)
    return len(seen) == len(nodes)


def is_dag(graph: ExplanationGraph) -> bool:
    """True iff the directed deduplicated edge set has no directed cycle.
    Kahn's in-degree peeling; a self-loop fails immediately."""
    _require_non_empty(graph)
    successors: dict[Concept, set[Concept]] = {}
    indegree: dict[Concept, int] = {}
    for t in graph.unique_triples:
        if t.head == t.tail:
            return False
        indegree.setdefault(t.head, 0)
        indegree.setdefault(t.tail, 0)
        if t.tail not in successors.setdefault(t.head, set()):
            successors[t.head].add(t.tail)
            indegree[t.tail] += 1
    ready = [node for node, deg in indegree.items() if deg == 0]
    peeled = 0
    while ready:
        node = ready.pop()
        peeled += 1
        for succ in successors.get(node, ()):
            indegree[succ] -= 1
            if indegree[succ] == 0:
                ready.append(succ)
    return peeled == len(indegree)


def concept_anchors(graph: ExplanationGraph, text: str) -> list[Concept]:
    """Graph nodes whose normalized form occurs as a contiguous substring of
    the normalized text."""
    haystack = normalize_text(text)
    if not haystack:
        return []
    return [node for node in graph.nodes if node.text in haystack]


def validate_structure(
    graph: ExplanationGraph, belief: str, argument: str
) -> StructureVerdict:
    _require_non_empty(graph)
    return StructureVerdict(
        connected=is_weakly_connected(graph),
        acyclic=is_dag(graph),
        edge_count_ok=len(graph.unique_triples) >= MIN_EDGES,
        belief_anchors=tuple(concept_anchors(graph, belief)),
        argument_anchors=tuple(concept_anchors(graph, argument)),
    )
