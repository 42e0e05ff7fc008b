"""Graph-comparison metrics built on the assignment framework, plus triple
and label accuracies and the leave-one-out edge accuracy."""

from __future__ import annotations

import re
from typing import Protocol

from .assignment import EdgeScorer, MatchResult, best_assignment
from .errors import EmptyGraph, OracleFailure
from .ged import graph_edit_distance
from .graphs import ExplanationGraph, StanceOrAnswer, normalize_text
from .scorers import BleuEdgeScorer, RougeLEdgeScorer, TokenOverlapScorer

_WORD = re.compile(r"\w+")


def graph_bertscore(
    pred: ExplanationGraph, gold: ExplanationGraph, scorer: EdgeScorer | None = None
) -> float:
    """F1 of the best edge assignment under a semantic pair scorer (the
    built-in token-overlap scorer unless an external one is bound)."""
    return best_assignment(pred, gold, scorer or TokenOverlapScorer()).f1


def graph_bleu(pred: ExplanationGraph, gold: ExplanationGraph) -> float:
    return best_assignment(pred, gold, BleuEdgeScorer()).f1


def graph_rouge(pred: ExplanationGraph, gold: ExplanationGraph) -> float:
    return best_assignment(pred, gold, RougeLEdgeScorer()).f1


def match_edges(
    pred: ExplanationGraph, gold: ExplanationGraph, scorer: EdgeScorer
) -> MatchResult:
    return best_assignment(pred, gold, scorer)


def triple_f1(pred: ExplanationGraph, gold: ExplanationGraph) -> float:
    """Exact-overlap F1 between the deduplicated triple sets."""
    pred_set = pred.triple_set
    gold_set = gold.triple_set
    if not pred_set or not gold_set:
        return 0.0
    shared = len(pred_set & gold_set)
    if shared == 0:
        return 0.0
    precision = shared / len(pred_set)
    recall = shared / len(gold_set)
    return 2 * precision * recall / (precision + recall)


def graph_exact(pred: ExplanationGraph, gold: ExplanationGraph) -> bool:
    """Deduplicated-set equality including the label."""
    return pred.normalized_equal(gold)


def label_accuracy(pred_label: StanceOrAnswer, gold_label: StanceOrAnswer) -> bool:
    return pred_label == gold_label


class ConfidenceOracle(Protocol):
    def confidence(
        self,
        belief: str,
        argument: str,
        graph: ExplanationGraph,
        target_label: StanceOrAnswer,
    ) -> float: ...


class LexicalOverlapOracle:
    """Deterministic built-in confidence stub: the fraction of the graph's
    word tokens that also occur in the belief or argument text.  Useful for
    tests and as a neutral default; it ignores the target label."""

    def confidence(
        self,
        belief: str,
        argument: str,
        graph: ExplanationGraph,
        target_label: StanceOrAnswer,
    ) -> float:
        graph_tokens: set[str] = set()
        for t in graph.triples:
            graph_tokens.update(_WORD.findall(t.sentence()))
        if not graph_tokens:
            return 0.0
        text_tokens = set(_WORD.findall(normalize_text(belief)))
        text_tokens.update(_WORD.findall(normalize_text(argument)))
        return len(graph_tokens & text_tokens) / len(graph_tokens)


def edge_accuracy(
    pred: ExplanationGraph,
    belief: str,
    argument: str,
    oracle: ConfidenceOracle,
    target: StanceOrAnswer,
    epsilon: float = 0.0,
) -> float:
    """Fraction of distinct predicted edges whose removal strictly lowers
    the oracle's confidence (by more than ``epsilon``)."""
    edges = pred.unique_triples
    if not edges:
        raise EmptyGraph("edge accuracy needs a non-empty prediction")

    def ask(graph: ExplanationGraph) -> float:
        try:
            value = oracle.confidence(belief, argument, graph, target)
        except Exception as exc:
            raise OracleFailure(f"confidence oracle failed: {exc}") from exc
        if not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
            raise OracleFailure(f"oracle confidence {value!r} outside [0, 1]")
        return float(value)

    full = ask(ExplanationGraph(edges, pred.label))
    important = 0
    for i in range(len(edges)):
        reduced = edges[:i] + edges[i + 1 :]
        without = ask(ExplanationGraph(reduced, pred.label))
        if full - without > epsilon:
            important += 1
    return important / len(edges)
