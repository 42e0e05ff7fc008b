"""Bidirectional parsing between surface strings and ExplanationGraph.

Two corpus formats are supported:

* stance task:  ``support (head; relation; tail)(head; relation; tail)...``
* answer task:  ``a [[head, relation, tail], [head, relation, tail], ...]``

Parsing is tolerant of extra whitespace; serialization is canonical so any
well-formed surface round-trips to the same normalized triple list.
"""

from __future__ import annotations

from .errors import (
    EmptyGraph,
    FormatMismatch,
    MalformedSurface,
    UnknownAnswer,
    UnknownRelation,
    UnknownStance,
)
from .graphs import (
    ANSWERS,
    STANCES,
    Concept,
    ExplanationGraph,
    Relation,
    StanceOrAnswer,
    Triple,
    normalize_text,
)

FORMATS = ("explagraph", "copasse")


def _split_label(surface: str) -> tuple[str, str]:
    s = surface.strip()
    if not s:
        raise MalformedSurface("empty surface")
    parts = s.split(None, 1)
    return parts[0], parts[1].strip() if len(parts) > 1 else ""


def _concept(text: str, context: str) -> Concept:
    try:
        return Concept(text)
    except ValueError as exc:
        raise MalformedSurface(f"{context}: {exc}") from exc


def parse_explagraph(surface: str, strict: bool = True) -> ExplanationGraph:
    """Parse a stance-task surface string.

    With ``strict`` (the default) relations must come from the closed
    28-label vocabulary; otherwise any non-empty label is accepted.
    """
    token, rest = _split_label(surface)
    token_norm = normalize_text(token)
    if token_norm not in STANCES:
        raise UnknownStance(token)

    triples: list[Triple] = []
    i, n = 0, len(rest)
    while i < n:
        while i < n and rest[i].isspace():
            i += 1
        if i >= n:
            break
        if rest[i] != "(":
            raise MalformedSurface(f"expected '(' at offset {i}")
        close = rest.find(")", i)
        if close == -1:
            raise MalformedSurface("unbalanced '('")
        body = rest[i + 1 : close]
        if "(" in body:
            raise MalformedSurface("nested '(' inside triple")
        parts = body.split(";")
        if len(parts) != 3:
            raise MalformedSurface(
                f"triple needs exactly 'head; relation; tail', got {body!r}"
            )
        head = _concept(parts[0], "head")
        tail = _concept(parts[2], "tail")
        relation = Relation(parts[1])
        if strict and not relation.in_vocabulary:
            raise UnknownRelation(relation.name)
        triples.append(Triple(head, relation, tail))
        i = close + 1

    if not triples:
        raise MalformedSurface("no triples")
    return ExplanationGraph(tuple(triples), StanceOrAnswer("stance", token_norm))


def parse_copasse(surface: str) -> ExplanationGraph:
    """Parse an answer-task surface string. Relations are open vocabulary;
    the verbatim spelling is kept alongside the normalized name."""
    token, rest = _split_label(surface)
    token_norm = normalize_text(token)
    if token_norm not in ANSWERS:
        raise UnknownAnswer(token)

    if not rest.startswith("[") or not rest.endswith("]"):
        raise MalformedSurface("expected '[...]' triple list")
    inner = rest[1:-1]

    triples: list[Triple] = []
    i, n = 0, len(inner)
    while i < n:
        while i < n and inner[i].isspace():
            i += 1
        if i >= n:
            break
        if inner[i] != "[":
            raise MalformedSurface(f"expected '[' at offset {i}")
        close = inner.find("]", i)
        if close == -1:
            raise MalformedSurface("unbalanced '['")
        body = inner[i + 1 : close]
        if "[" in body:
            raise MalformedSurface("nested '[' inside triple")
        parts = body.split(",")
        if len(parts) != 3:
            raise MalformedSurface(
                f"triple needs exactly 'head, relation, tail', got {body!r}"
            )
        head = _concept(parts[0], "head")
        tail = _concept(parts[2], "tail")
        triples.append(Triple(head, Relation(parts[1]), tail))
        i = close + 1
        while i < n and inner[i].isspace():
            i += 1
        if i < n and inner[i] == ",":
            i += 1

    if not triples:
        raise MalformedSurface("no triples")
    return ExplanationGraph(tuple(triples), StanceOrAnswer("answer", token_norm))


def parse(surface: str, format: str, strict: bool = True) -> ExplanationGraph:
    if format == "explagraph":
        return parse_explagraph(surface, strict=strict)
    if format == "copasse":
        return parse_copasse(surface)
    raise ValueError(f"unknown format {format!r}")


def serialize(graph: ExplanationGraph, format: str) -> str:
    """Canonical surface form of a graph.

    Raises FormatMismatch when the label kind does not fit the format and
    EmptyGraph for graphs without triples.
    """
    if not graph.triples:
        raise EmptyGraph("cannot serialize an empty graph")
    if format == "explagraph":
        if graph.label.kind != "stance":
            raise FormatMismatch("answer-labeled graph cannot use the stance format")
        body = "".join(
            f"({t.head.text}; {t.relation.name}; {t.tail.text})" for t in graph.triples
        )
        return f"{graph.label.value} {body}"
    if format == "copasse":
        if graph.label.kind != "answer":
            raise FormatMismatch("stance-labeled graph cannot use the answer format")
        body = ", ".join(
            f"[{t.head.text}, {t.relation.surface or t.relation.name}, {t.tail.text}]"
            for t in graph.triples
        )
        return f"{graph.label.value} [{body}]"
    raise ValueError(f"unknown format {format!r}")


def try_parse(surface: str, format: str, strict: bool = True):
    """Total parse: returns (graph, None) or (None, error_message)."""
    try:
        return parse(surface, format, strict=strict), None
    except (MalformedSurface, UnknownStance, UnknownAnswer, UnknownRelation) as exc:
        return None, f"{type(exc).__name__}: {exc}"
