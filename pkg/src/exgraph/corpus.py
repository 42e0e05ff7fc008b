"""Corpus and prediction file ingestion.

Gold corpora are JSONL.  Stance-task rows carry {id, belief, argument,
stance, graph}; answer-task rows carry {id, premise, option_a, option_b,
answer, graph}.  The ``graph`` field holds just the triple list (no label
prefix); the full surface is label + space + graph.  A TSV fallback mirrors
the upstream dataset layout (no header, no id column; row index becomes the
id).

Prediction files are JSONL rows {id, prediction} where the prediction is a
full surface string.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import MalformedSurface
from .graphs import Sample, answer, stance
from .parsing import parse_copasse, parse_explagraph

TASKS = ("explagraph", "copasse")


def _sample_from_fields(task, id_, context, query, label_value, graph_text, strict):
    if task == "explagraph":
        label = stance(label_value)
        graph = parse_explagraph(f"{label.value} {graph_text}", strict=strict)
    else:
        label = answer(label_value)
        graph = parse_copasse(f"{label.value} {graph_text}")
    return Sample(id=str(id_), context=context, query=query, gold_label=label, gold_graph=graph)


def _sample_from_json(task: str, row: dict, line_no: int, strict: bool) -> Sample:
    try:
        if task == "explagraph":
            return _sample_from_fields(
                task, row["id"], row["belief"], row["argument"], row["stance"], row["graph"], strict
            )
        return _sample_from_fields(
            task,
            row["id"],
            row["premise"],
            f"a: {row['option_a']} b: {row['option_b']}",
            row["answer"],
            row["graph"],
            strict,
        )
    except KeyError as exc:
        raise MalformedSurface(f"line {line_no}: missing field {exc}") from exc


def read_samples_jsonl(path: str | Path, task: str, strict: bool = True) -> list[Sample]:
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    samples = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedSurface(f"line {line_no}: invalid JSON: {exc}") from exc
            samples.append(_sample_from_json(task, row, line_no, strict))
    return samples


_TSV_COLUMNS = {"explagraph": 4, "copasse": 5}


def read_samples_tsv(path: str | Path, task: str, strict: bool = True) -> list[Sample]:
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    expected = _TSV_COLUMNS[task]
    samples = []
    with open(path, encoding="utf-8") as handle:
        for index, line in enumerate(handle):
            line = line.rstrip("\n")
            if not line:
                continue
            cells = line.split("\t")
            if len(cells) != expected:
                raise MalformedSurface(
                    f"row {index}: expected {expected} tab-separated columns, got {len(cells)}"
                )
            if task == "explagraph":
                belief, argument, stance_value, graph_text = cells
                samples.append(
                    _sample_from_fields(task, index, belief, argument, stance_value, graph_text, strict)
                )
            else:
                premise, option_a, option_b, answer_value, graph_text = cells
                samples.append(
                    _sample_from_fields(
                        task,
                        index,
                        premise,
                        f"a: {option_a} b: {option_b}",
                        answer_value,
                        graph_text,
                        strict,
                    )
                )
    return samples


def read_samples(path: str | Path, task: str, strict: bool = True) -> list[Sample]:
    """Dispatch on file extension: .tsv uses the upstream layout, anything
    else is treated as JSONL."""
    if str(path).endswith(".tsv"):
        return read_samples_tsv(path, task, strict=strict)
    return read_samples_jsonl(path, task, strict=strict)


def read_predictions(path: str | Path) -> dict[str, str]:
    """Load {id: surface} from a prediction JSONL file."""
    predictions: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
                predictions[str(row["id"])] = str(row["prediction"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise MalformedSurface(f"line {line_no}: bad prediction row: {exc}") from exc
    return predictions
