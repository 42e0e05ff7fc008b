"""Pairwise edge scorers for the assignment-based graph metrics.

Each edge is rendered as the sentence ``"head relation tail"`` and scored
against another edge's sentence.  Built-in scorers are deterministic,
symmetric, and score identical edges as exactly 1.0.  A neural scorer can
be plugged in through the newline-delimited JSON service protocol.
"""

from __future__ import annotations

import json
import math
import socket
from collections import Counter

from .errors import ScorerFailure
from .graphs import Triple

BLEU_MAX_ORDER = 4


def _tokens(triple: Triple) -> list[str]:
    return triple.sentence().split()


def _ngram_counts(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def sentence_bleu(candidate: list[str], reference: list[str], max_n: int = BLEU_MAX_ORDER) -> float:
    """Smoothed sentence BLEU with clipped n-gram precision up to ``max_n``.

    Unigram precision is unsmoothed (no content overlap means zero); higher
    orders use add-one smoothing so short identical sentences still score 1.
    """
    if not candidate or not reference:
        return 0.0
    log_precision_sum = 0.0
    for n in range(1, max_n + 1):
        cand_counts = _ngram_counts(candidate, n)
        total = sum(cand_counts.values())
        matched = sum((cand_counts & _ngram_counts(reference, n)).values())
        if n == 1:
            if matched == 0:
                return 0.0
            precision = matched / total
        else:
            precision = (matched + 1) / (total + 1)
        log_precision_sum += math.log(precision)
    if len(candidate) >= len(reference):
        brevity = 1.0
    else:
        brevity = math.exp(1.0 - len(reference) / len(candidate))
    return brevity * math.exp(log_precision_sum / max_n)


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for x in a:
        current = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(candidate: list[str], reference: list[str]) -> float:
    """ROUGE-L F-measure (longest common subsequence, balanced F1)."""
    lcs = _lcs_length(candidate, reference)
    if lcs == 0:
        return 0.0
    precision = lcs / len(candidate)
    recall = lcs / len(reference)
    return 2 * precision * recall / (precision + recall)


def token_f1(a: list[str], b: list[str]) -> float:
    """Bag-of-tokens F1 overlap between two token lists."""
    overlap = sum((Counter(a) & Counter(b)).values())
    if overlap == 0:
        return 0.0
    return 2 * overlap / (len(a) + len(b))


class TokenOverlapScorer:
    """Default built-in substitute for an embedding-based edge scorer."""

    def score(self, e1: Triple, e2: Triple) -> float:
        return token_f1(_tokens(e1), _tokens(e2))


class ExactTripleScorer:
    """1.0 for normalized-equal triples, else 0.0."""

    def score(self, e1: Triple, e2: Triple) -> float:
        return 1.0 if e1 == e2 else 0.0


class BleuEdgeScorer:
    """Smoothed sentence BLEU, symmetrized (mean of both directions) so the
    scorer satisfies score(a, b) = score(b, a)."""

    def score(self, e1: Triple, e2: Triple) -> float:
        a, b = _tokens(e1), _tokens(e2)
        return 0.5 * (sentence_bleu(a, b) + sentence_bleu(b, a))


class RougeLEdgeScorer:
    def score(self, e1: Triple, e2: Triple) -> float:
        return rouge_l(_tokens(e1), _tokens(e2))


class ExternalEdgeScorer:
    """Client for a scorer process speaking the line protocol.

    Sends ``{"op": "edge_score", "e1": ..., "e2": ...}`` per pair and expects
    ``{"values": {"score": x}}`` back.  Any transport or protocol problem is
    surfaced as ScorerFailure.  Scores are cached per sentence pair.
    """

    def __init__(self, reader, writer):
        self._reader = reader
        self._writer = writer
        self._cache: dict[tuple[str, str], float] = {}

    @classmethod
    def connect(cls, address: str, timeout: float = 10.0) -> "ExternalEdgeScorer":
        host, _, port = address.rpartition(":")
        try:
            sock = socket.create_connection((host or "127.0.0.1", int(port)), timeout=timeout)
        except OSError as exc:
            raise ScorerFailure(f"cannot connect to scorer at {address}: {exc}") from exc
        return cls(sock.makefile("r", encoding="utf-8"), sock.makefile("w", encoding="utf-8"))

    def score(self, e1: Triple, e2: Triple) -> float:
        key = (e1.sentence(), e2.sentence())
        if key in self._cache:
            return self._cache[key]
        request = {"op": "edge_score", "e1": key[0], "e2": key[1]}
        try:
            self._writer.write(json.dumps(request) + "\n")
            self._writer.flush()
            line = self._reader.readline()
        except OSError as exc:
            raise ScorerFailure(f"scorer transport failed: {exc}") from exc
        if not line:
            raise ScorerFailure("scorer closed the connection")
        try:
            response = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ScorerFailure(f"scorer sent malformed JSON: {line!r}") from exc
        if "error" in response:
            raise ScorerFailure(f"scorer error: {response['error']}")
        try:
            value = float(response["values"]["score"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ScorerFailure(f"scorer response missing score: {response!r}") from exc
        if not math.isfinite(value) or not -1e-9 <= value <= 1 + 1e-9:
            raise ScorerFailure(f"scorer value {value!r} outside [0, 1]")
        value = min(max(value, 0.0), 1.0)
        self._cache[key] = value
        return value


SCORER_NAMES = ("token-overlap", "external")


def make_scorer(name: str, external_address: str | None = None):
    if name == "token-overlap":
        return TokenOverlapScorer()
    if name == "external":
        if not external_address:
            raise ScorerFailure("external scorer requested but no address given")
        return ExternalEdgeScorer.connect(external_address)
    raise ValueError(f"unknown scorer {name!r}")
