"""Scalar rewards, their aggregation, and the sequence-level KL penalty.

The total reward combines a model-side score r_model with a metric-side
score r_metric, either as the convex combination
``alpha * r_model + (1 - alpha) * r_metric`` or as the plain sum (the
unweighted variant), and is shaped by subtracting ``beta`` times the
sampled sequence KL against a reference policy.
"""

from __future__ import annotations

import json
import math
import os
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import LengthMismatch, NonFiniteReward
from .ged import graph_edit_distance
from .graphs import ExplanationGraph
from .metrics import graph_bertscore, graph_bleu, graph_rouge
from .parsing import try_parse

METRIC_CHOICES = ("G-BS", "G-BL", "G-RO", "GED")
AGGREGATIONS = ("weighted", "unweighted", "model_only", "metric_only")
NORMALIZATIONS = ("none", "clip01", "zscore-window")

CONFIG_ENV_VAR = "EXGRAPH_CONFIG"


@dataclass
class RewardConfig:
    alpha: float = 0.9
    beta: float = 0.3
    metric_choice: str = "G-BS"
    aggregation: str = "unweighted"
    normalization: str = "none"
    window: int = 256

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.beta < 0.0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        self.metric_choice = self.metric_choice.upper()
        if self.metric_choice not in METRIC_CHOICES:
            raise ValueError(f"metric_choice must be one of {METRIC_CHOICES}")
        if self.aggregation not in AGGREGATIONS:
            raise ValueError(f"aggregation must be one of {AGGREGATIONS}")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")

    @classmethod
    def from_dict(cls, data: dict) -> "RewardConfig":
        known = {k: data[k] for k in (
            "alpha", "beta", "metric_choice", "aggregation", "normalization", "window"
        ) if k in data}
        return cls(**known)

    @classmethod
    def from_file(cls, path: str | Path | None = None) -> "RewardConfig":
        """Load from TOML or JSON; with no path, honor $EXGRAPH_CONFIG or
        fall back to defaults."""
        if path is None:
            path = os.environ.get(CONFIG_ENV_VAR)
            if not path:
                return cls()
        text = Path(path).read_bytes()
        if str(path).endswith(".toml"):
            import tomli

            return cls.from_dict(tomli.loads(text.decode("utf-8")))
        return cls.from_dict(json.loads(text.decode("utf-8")))


def metric_reward(
    pred: ExplanationGraph | None,
    gold: ExplanationGraph,
    choice: str = "G-BS",
    scorer=None,
) -> float:
    """Metric-side reward in [0, 1]; higher is better for every choice
    (GED is flipped to 1 - normalized distance).  A missing/unparseable
    prediction earns 0."""
    if pred is None or not pred.triples:
        return 0.0
    choice = choice.upper()
    if choice == "G-BS":
        return graph_bertscore(pred, gold, scorer)
    if choice == "G-BL":
        return graph_bleu(pred, gold)
    if choice == "G-RO":
        return graph_rouge(pred, gold)
    if choice == "GED":
        return 1.0 - graph_edit_distance(pred, gold)
    raise ValueError(f"unknown metric choice {choice!r}")


def reward_from_surface(
    pred_surface: str, gold: ExplanationGraph, config: RewardConfig, fmt: str, scorer=None
) -> float:
    """Total metric reward for a raw prediction string (0 when unparseable)."""
    pred, _ = try_parse(pred_surface, fmt, strict=False)
    return metric_reward(pred, gold, config.metric_choice, scorer)


def _check_finite(*values: float):
    for v in values:
        if not math.isfinite(v):
            raise NonFiniteReward(f"non-finite reward component {v!r}")


def aggregate(r_model: float, r_metric: float, config: RewardConfig) -> float:
    """Stateless aggregation (normalization modes none/clip01).  The
    windowed z-score mode needs history; use RewardAggregator for that."""
    _check_finite(r_model, r_metric)
    if config.normalization == "zscore-window":
        raise ValueError("zscore-window normalization is stateful; use RewardAggregator")
    if config.normalization == "clip01":
        r_model = min(max(r_model, 0.0), 1.0)
        r_metric = min(max(r_metric, 0.0), 1.0)
    if config.aggregation == "weighted":
        return config.alpha * r_model + (1.0 - config.alpha) * r_metric
    if config.aggregation == "unweighted":
        return r_model + r_metric
    if config.aggregation == "model_only":
        return r_model
    return r_metric


class RewardAggregator:
    """Aggregation with optional running normalization over a sliding
    window of recent rewards (one window per reward stream)."""

    def __init__(self, config: RewardConfig):
        self.config = config
        self._model_window: deque[float] = deque(maxlen=config.window)
        self._metric_window: deque[float] = deque(maxlen=config.window)

    def _zscore(self, value: float, window: deque[float]) -> float:
        window.append(value)
        n = len(window)
        mean = sum(window) / n
        variance = sum((x - mean) ** 2 for x in window) / n
        if variance < 1e-24:
            return 0.0
        return (value - mean) / math.sqrt(variance)

    def aggregate(self, r_model: float, r_metric: float) -> float:
        _check_finite(r_model, r_metric)
        if self.config.normalization == "zscore-window":
            r_model = self._zscore(r_model, self._model_window)
            r_metric = self._zscore(r_metric, self._metric_window)
            stateless = RewardConfig(
                alpha=self.config.alpha,
                beta=self.config.beta,
                metric_choice=self.config.metric_choice,
                aggregation=self.config.aggregation,
                normalization="none",
            )
            return aggregate(r_model, r_metric, stateless)
        return aggregate(r_model, r_metric, self.config)


def kl_penalty(
    logp_policy: Sequence[float], logp_reference: Sequence[float], beta: float
) -> tuple[float, float]:
    """(kl_estimate, penalty) from per-token log-probs of the sampled
    tokens.  The estimate is the sum of log-ratio terms, clamped at 0 for
    reporting; the penalty uses the raw sum."""
    if len(logp_policy) != len(logp_reference):
        raise LengthMismatch(
            f"sequence lengths differ: {len(logp_policy)} vs {len(logp_reference)}"
        )
    raw = 0.0
    for lp, lr in zip(logp_policy, logp_reference):
        raw += lp - lr
    return max(0.0, raw), beta * raw


@dataclass(frozen=True)
class RewardBreakdown:
    r_model: float
    r_metric: float
    aggregated: float
    kl: float
    shaped: float


def shape_reward(
    r_model: float,
    r_metric: float,
    logp_policy: Sequence[float],
    logp_reference: Sequence[float],
    config: RewardConfig,
) -> RewardBreakdown:
    """Single code path from raw reward components to the shaped scalar."""
    aggregated = aggregate(r_model, r_metric, config)
    kl_estimate, penalty = kl_penalty(logp_policy, logp_reference, config.beta)
    return RewardBreakdown(
        r_model=r_model,
        r_metric=r_metric,
        aggregated=aggregated,
        kl=kl_estimate,
        shaped=aggregated - penalty,
    )


@dataclass(frozen=True)
class PreferencePair:
    prompt: str
    preferred: str
    rejected: str


def _normalized_equal(generated: str, reference: str, fmt: str) -> bool:
    gen_graph, _ = try_parse(generated, fmt, strict=False)
    ref_graph, _ = try_parse(reference, fmt, strict=False)
    if gen_graph is not None and ref_graph is not None:
        return gen_graph.normalized_equal(ref_graph)
    return generated.strip() == reference.strip()


def build_preference_pairs(
    samples: Iterable[tuple[str, str, str]], fmt: str = "explagraph"
) -> list[PreferencePair]:
    """One (preferred=reference, rejected=generated) pair per sample whose
    generation differs from its reference under normalized comparison
    (label + deduplicated triple set; raw string equality when either side
    is unparseable)."""
    pairs = []
    for prompt, generated, reference in samples:
        if _normalized_equal(generated, reference, fmt):
            continue
        pairs.append(PreferencePair(prompt=prompt, preferred=reference, rejected=generated))
    return pairs
