"""Domain model for explanation graphs.

A graph is an ordered list of (head; relation; tail) triples over concept
nodes plus a stance or answer label.  Triples keep their surface order and
duplicates so redundancy stays observable; set-based consumers use the
deduplicated view.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import UnknownAnswer, UnknownStance

_WS = re.compile(r"\s+")
_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")

#: Closed vocabulary of relation labels for the stance task (strict mode).
RELATIONS = (
    "antonym of",
    "synonym of",
    "at location",
    "not at location",
    "capable of",
    "not capable of",
    "causes",
    "not causes",
    "created by",
    "not created by",
    "is a",
    "is not a",
    "desires",
    "not desires",
    "has subevent",
    "not has subevent",
    "part of",
    "not part of",
    "has context",
    "not has context",
    "has property",
    "not has property",
    "made of",
    "not made of",
    "receives action",
    "not receives action",
    "used for",
    "not used for",
)

_RELATION_SET = frozenset(RELATIONS)

STANCES = ("support", "counter")
ANSWERS = ("a", "b")

# Structural delimiters that can never appear inside a concept.
_FORBIDDEN_IN_CONCEPT = (";", ",", "(", ")", "[", "]")


def normalize_text(text: str) -> str:
    """Lowercase, collapse internal whitespace, trim. Idempotent."""
    return _WS.sub(" ", text).strip().lower()


def normalize_relation(name: str) -> str:
    """Normalize a relation label for comparison.

    Camel case (``HasProperty``) is split into spaced lowercase
    (``has property``); underscores and hyphens become spaces.
    """
    spaced = _CAMEL_BOUNDARY.sub(" ", name.replace("_", " ").replace("-", " "))
    return normalize_text(spaced)


@dataclass(frozen=True, order=True)
class Concept:
    """One graph node: a short phrase, stored in normalized form."""

    text: str

    def __post_init__(self):
        normalized = normalize_text(self.text)
        if not normalized:
            raise ValueError("concept empty after normalization")
        for ch in _FORBIDDEN_IN_CONCEPT:
            if ch in normalized:
                raise ValueError(f"concept contains delimiter {ch!r}: {normalized!r}")
        object.__setattr__(self, "text", normalized)


@dataclass(frozen=True, order=True)
class Relation:
    """Edge label. ``name`` is the normalized form used for comparison;
    ``surface`` keeps the verbatim spelling when it differs (COPA mode)."""

    name: str
    surface: str | None = field(default=None, compare=False)

    def __post_init__(self):
        raw = self.name.strip()
        normalized = normalize_relation(raw)
        if not normalized:
            raise ValueError("relation empty after normalization")
        object.__setattr__(self, "name", normalized)
        if self.surface is None and raw != normalized:
            object.__setattr__(self, "surface", raw)

    @property
    def in_vocabulary(self) -> bool:
        return self.name in _RELATION_SET


@dataclass(frozen=True, order=True)
class Triple:
    """One (head; relation; tail) edge."""

    head: Concept
    relation: Relation
    tail: Concept

    def sentence(self) -> str:
        """Render the edge as a plain sentence, single-space joined."""
        return f"{self.head.text} {self.relation.name} {self.tail.text}"

    @classmethod
    def of(cls, head: str, relation: str, tail: str) -> "Triple":
        return cls(Concept(head), Relation(relation), Concept(tail))


@dataclass(frozen=True)
class StanceOrAnswer:
    """Task label: a stance in {support, counter} or an answer in {a, b}."""

    kind: str
    value: str

    def __post_init__(self):
        if self.kind == "stance":
            if self.value not in STANCES:
                raise UnknownStance(self.value)
        elif self.kind == "answer":
            if self.value not in ANSWERS:
                raise UnknownAnswer(self.value)
        else:
            raise ValueError(f"label kind must be 'stance' or 'answer', got {self.kind!r}")


def stance(value: str) -> StanceOrAnswer:
    return StanceOrAnswer("stance", normalize_text(value))


def answer(value: str) -> StanceOrAnswer:
    return StanceOrAnswer("answer", normalize_text(value))


@dataclass(frozen=True)
class ExplanationGraph:
    """Labeled multigraph over concepts.

    ``triples`` preserves surface order and duplicates; ``unique_triples``
    and ``nodes`` are the deduplicated views used by set-based metrics.
    """

    triples: tuple[Triple, ...]
    label: StanceOrAnswer

    def __post_init__(self):
        object.__setattr__(self, "triples", tuple(self.triples))

    @property
    def unique_triples(self) -> tuple[Triple, ...]:
        seen: dict[Triple, None] = {}
        for t in self.triples:
            seen.setdefault(t)
        return tuple(seen)

    @property
    def nodes(self) -> tuple[Concept, ...]:
        seen: dict[Concept, None] = {}
        for t in self.triples:
            seen.setdefault(t.head)
            seen.setdefault(t.tail)
        return tuple(seen)

    @property
    def triple_set(self) -> frozenset[Triple]:
        return frozenset(self.triples)

    def __len__(self) -> int:
        return len(self.triples)

    def normalized_equal(self, other: "ExplanationGraph") -> bool:
        """Equality on label plus deduplicated triple set (order-insensitive)."""
        return self.label == other.label and self.triple_set == other.triple_set


@dataclass(frozen=True)
class Sample:
    """One task instance: context + query texts, gold label, gold graph."""

    id: str
    context: str
    query: str
    gold_label: StanceOrAnswer
    gold_graph: ExplanationGraph

    def __post_init__(self):
        if self.gold_graph.label != self.gold_label:
            raise ValueError(f"sample {self.id}: graph label differs from gold label")
