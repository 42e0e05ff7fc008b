"""Maximum-weight one-to-one matching between predicted and gold edges.

Edge sets in this domain are small (a handful of triples), so the matching
is solved exactly with a bitmask DP over the smaller side; sums accumulate
in ascending edge order, which keeps totals bit-reproducible.  Larger
inputs fall back to scipy's Hungarian solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite
from typing import Protocol

from .errors import EmptyGraph, ScorerFailure
from .graphs import ExplanationGraph, Triple

_DP_LIMIT = 14


class EdgeScorer(Protocol):
    def score(self, e1: Triple, e2: Triple) -> float: ...


@dataclass(frozen=True)
class MatchResult:
    """Best one-to-one partial matching and the derived precision/recall.

    ``assignment`` holds (pred_index, gold_index, pair_score) for pairs with
    positive score; precision divides the matched score by the number of
    predicted edges, recall by the number of gold edges.
    """

    assignment: tuple[tuple[int, int, float], ...]
    precision: float
    recall: float
    f1: float


def _score_matrix(pred_edges, gold_edges, scorer) -> list[list[float]]:
    matrix = []
    for p in pred_edges:
        row = []
        for g in gold_edges:
            s = scorer.score(p, g)
            if not isinstance(s, (int, float)) or not isfinite(s):
                raise ScorerFailure(f"scorer returned non-finite value {s!r}")
            if s < -1e-9 or s > 1 + 1e-9:
                raise ScorerFailure(f"scorer value {s!r} outside [0, 1]")
            row.append(min(max(float(s), 0.0), 1.0))
        matrix.append(row)
    return matrix


def _solve_dp(matrix, n, m) -> list[tuple[int, int]]:
    # Bitmask over columns; rows may stay unmatched. Ties prefer skipping,
    # then the lowest column, so reconstruction is deterministic.
    size = 1 << m
    neg = float("-inf")
    prev = [neg] * size
    prev[0] = 0.0
    choices: list[list[int]] = []
    for i in range(n):
        cur = [neg] * size
        ch = [-2] * size
        row = matrix[i]
        for mask in range(size):
            base = prev[mask]
            if base == neg:
                continue
            if base > cur[mask]:
                cur[mask] = base
                ch[mask] = -1
            for j in range(m):
                bit = 1 << j
                if mask & bit:
                    continue
                value = base + row[j]
                target = mask | bit
                if value > cur[target]:
                    cur[target] = value
                    ch[target] = j
        choices.append(ch)
        prev = cur

    best_mask = 0
    best = prev[0]
    for mask in range(size):
        if prev[mask] > best:
            best = prev[mask]
            best_mask = mask

    pairs = []
    mask = best_mask
    for i in range(n - 1, -1, -1):
        j = choices[i][mask]
        if j >= 0:
            pairs.append((i, j))
            mask &= ~(1 << j)
    pairs.reverse()
    return pairs


def _solve_scipy(matrix, n, m) -> list[tuple[int, int]]:
    import numpy as np
    from scipy.optimize import linear_sum_assignment

    rows, cols = linear_sum_assignment(np.asarray(matrix), maximize=True)
    return sorted(zip(rows.tolist(), cols.tolist()))


def best_assignment(
    pred: ExplanationGraph, gold: ExplanationGraph, scorer: EdgeScorer
) -> MatchResult:
    """Matching that maximizes the total pairwise score over one-to-one
    partial matchings of deduplicated pred edges against gold edges."""
    pred_edges = pred.unique_triples
    gold_edges = gold.unique_triples
    if not pred_edges or not gold_edges:
        raise EmptyGraph("assignment needs non-empty graphs on both sides")

    matrix = _score_matrix(pred_edges, gold_edges, scorer)
    n, m = len(pred_edges), len(gold_edges)
    transposed = False
    if m > _DP_LIMIT and n <= _DP_LIMIT:
        matrix = [list(col) for col in zip(*matrix)]
        n, m = m, n
        transposed = True
    if m <= _DP_LIMIT:
        pairs = _solve_dp(matrix, n, m)
    else:
        pairs = _solve_scipy(matrix, n, m)
    if transposed:
        pairs = sorted((j, i) for i, j in pairs)
        matrix = [list(col) for col in zip(*matrix)]
        n, m = m, n

    kept = tuple(
        (i, j, matrix[i][j]) for i, j in pairs if matrix[i][j] > 0.0
    )
    total = 0.0
    for _, _, s in kept:
        total += s
    precision = total / len(pred_edges)
    recall = total / len(gold_edges)
    f1 = 0.0 if precision + recall == 0.0 else 2 * precision * recall / (precision + recall)
    return MatchResult(assignment=kept, precision=precision, recall=recall, f1=f1)
