"""Corpus-level scoring: per-sample metric rows plus aggregates.

Conventions (all configurable):
* unparseable predictions score worst (0 on similarity metrics, 1.0 on
  normalized GED) and are counted, never skipped;
* with ``gate_on_label`` (default) a wrong label also scores worst on the
  graph metrics, and structural accuracy requires label correctness;
* aggregates are plain means over all samples, so they are independent of
  evaluation order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .assignment import EdgeScorer
from .errors import IdMismatch
from .ged import graph_edit_distance
from .graphs import Sample
from .metrics import (
    ConfidenceOracle,
    LexicalOverlapOracle,
    edge_accuracy,
    graph_exact,
    label_accuracy,
    match_edges,
    triple_f1,
)
from .parsing import try_parse
from .scorers import BleuEdgeScorer, RougeLEdgeScorer, TokenOverlapScorer
from .validation import validate_structure

SCHEMA_VERSION = 1


@dataclass
class ScoringConfig:
    task: str = "explagraph"
    scorer: EdgeScorer | None = None
    oracle: ConfidenceOracle | None = None
    gate_on_label: bool = True
    strict: bool = True
    ea_epsilon: float = 0.0
    ged_exact: bool | None = None
    ged_edge_labels: bool = True


@dataclass
class ScoreReport:
    task: str
    n_samples: int
    aggregates: dict
    aggregates_x100: dict
    per_sample: list
    parse_failures: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "task": self.task,
            "n_samples": self.n_samples,
            "aggregates": self.aggregates,
            "aggregates_x100": self.aggregates_x100,
            "per_sample": self.per_sample,
            "parse_failures": self.parse_failures,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"


def _round(value: float) -> float:
    return round(float(value), 9)


def _worst_metrics(task: str) -> dict:
    row = {"t_f1": 0.0, "g_f1": False, "g_bs": 0.0, "g_bl": 0.0, "g_ro": 0.0, "ged": 1.0}
    if task == "explagraph":
        row["stca"] = False
        row["ea"] = 0.0
    return row


def score_pair(pred_graph, sample: Sample, config: ScoringConfig) -> dict:
    """Metric row for one parsed prediction against its gold sample."""
    scorer = config.scorer or TokenOverlapScorer()
    row = {
        "t_f1": triple_f1(pred_graph, sample.gold_graph),
        "g_f1": graph_exact(pred_graph, sample.gold_graph),
        "g_bs": match_edges(pred_graph, sample.gold_graph, scorer).f1,
        "g_bl": match_edges(pred_graph, sample.gold_graph, BleuEdgeScorer()).f1,
        "g_ro": match_edges(pred_graph, sample.gold_graph, RougeLEdgeScorer()).f1,
        "ged": graph_edit_distance(
            pred_graph,
            sample.gold_graph,
            exact=config.ged_exact,
            edge_labels=config.ged_edge_labels,
        ),
    }
    if config.task == "explagraph":
        verdict = validate_structure(pred_graph, sample.context, sample.query)
        label_ok = label_accuracy(pred_graph.label, sample.gold_label)
        row["stca"] = verdict.valid and (label_ok or not config.gate_on_label)
        oracle = config.oracle or LexicalOverlapOracle()
        row["ea"] = edge_accuracy(
            pred_graph,
            sample.context,
            sample.query,
            oracle,
            sample.gold_label,
            epsilon=config.ea_epsilon,
        )
    return row


def score_corpus(
    predictions: dict[str, str], golds: list[Sample], config: ScoringConfig
) -> ScoreReport:
    gold_ids = [s.id for s in golds]
    missing = [i for i in gold_ids if i not in predictions]
    extra = sorted(set(predictions) - set(gold_ids))
    if missing or extra:
        raise IdMismatch(f"missing predictions for {missing}, unmatched ids {extra}")

    label_key = "sa" if config.task == "explagraph" else "aa"
    per_sample = []
    parse_failures = []
    micro_shared = micro_pred = micro_gold = 0

    for sample in golds:
        surface = predictions[sample.id]
        pred_graph, error = try_parse(surface, config.task, strict=config.strict)
        if pred_graph is None:
            parse_failures.append({"id": sample.id, "error": error})
            label_ok = False
        else:
            label_ok = label_accuracy(pred_graph.label, sample.gold_label)

        gated_out = pred_graph is None or (config.gate_on_label and not label_ok)
        if gated_out:
            metrics = _worst_metrics(config.task)
        else:
            metrics = score_pair(pred_graph, sample, config)

        micro_gold += len(sample.gold_graph.triple_set)
        if pred_graph is not None:
            micro_pred += len(pred_graph.triple_set)
            if not gated_out:
                micro_shared += len(pred_graph.triple_set & sample.gold_graph.triple_set)

        row = {"id": sample.id, "parsed": pred_graph is not None, label_key: label_ok}
        row.update({k: (_round(v) if isinstance(v, float) else v) for k, v in metrics.items()})
        per_sample.append(row)

    n = len(golds)
    metric_keys = [k for k in per_sample[0] if k not in ("id", "parsed")] if n else []
    aggregates = {}
    for key in metric_keys:
        aggregates[key] = _round(sum(float(row[key]) for row in per_sample) / n)
    micro_p = micro_shared / micro_pred if micro_pred else 0.0
    micro_r = micro_shared / micro_gold if micro_gold else 0.0
    aggregates["t_f1_micro"] = _round(
        0.0 if micro_p + micro_r == 0 else 2 * micro_p * micro_r / (micro_p + micro_r)
    )
    aggregates_x100 = {
        key: round(100.0 * value, 2) for key, value in aggregates.items() if key != "ged"
    }
    return ScoreReport(
        task=config.task,
        n_samples=n,
        aggregates=aggregates,
        aggregates_x100=aggregates_x100,
        per_sample=per_sample,
        parse_failures=parse_failures,
    )
