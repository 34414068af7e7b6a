"""Shared glue between representations, classifiers, and biography records.

A "stack" bundles a representation (bow | we | dnn), a trained model, the
indicator condition it was trained under, and the prediction target
(occupation or gender).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .corpus import Biography
from .errors import ConfigError, DataError
from .linear import LinearConfig, LinearModel, predict_batch, train_linear
from .represent import (
    EmbeddingTable,
    Vocabulary,
    bow_matrix,
    build_vocab,
    tokenize,
    we_matrix,
)
from .rnn import GruAttentionModel, RnnConfig, load_model, predict_dnn, save_model, train_dnn
from .scrub import DEFAULT_INDICATORS, IndicatorConfig, scrub_text

REPRESENTATIONS = ("bow", "we", "dnn")
CONDITIONS = ("with", "without")
TARGETS = ("occupation", "gender")


@dataclass
class Stack:
    rep: str
    condition: str
    target: str
    model: LinearModel | GruAttentionModel
    vocab: Optional[Vocabulary] = None  # bow only

    @property
    def classes(self) -> list[str]:
        return self.model.classes


def record_text(bio: Biography, condition: str, cfg: IndicatorConfig = DEFAULT_INDICATORS) -> str:
    if condition == "with":
        return bio.feature_text
    if condition == "without":
        return scrub_text(bio.feature_text, bio.first, cfg)
    raise ConfigError(f"unknown indicator condition {condition!r}")


def record_label(bio: Biography, target: str) -> str:
    if target == "occupation":
        return bio.occupation
    if target == "gender":
        return bio.gender
    raise ConfigError(f"unknown target {target!r}")


def train_stack(
    train_records: Sequence[Biography],
    rep: str,
    condition: str,
    target: str = "occupation",
    table: EmbeddingTable | None = None,
    valid_records: Sequence[Biography] | None = None,
    min_freq: int = 5,
    linear_config: LinearConfig | None = None,
    rnn_config: RnnConfig | None = None,
    seed: int = 0,
    indicators: IndicatorConfig = DEFAULT_INDICATORS,
) -> Stack:
    if rep not in REPRESENTATIONS:
        raise ConfigError(f"unknown representation {rep!r}")
    texts = [tokenize(record_text(b, condition, indicators)) for b in train_records]
    labels = [record_label(b, target) for b in train_records]
    if rep == "bow":
        vocab = build_vocab(texts, min_freq=min_freq)
        x = bow_matrix(texts, vocab)
        model = train_linear(x, labels, linear_config or LinearConfig(), seed=seed)
        model.metadata.update({"rep": rep, "condition": condition, "target": target})
        return Stack(rep=rep, condition=condition, target=target, model=model, vocab=vocab)
    if table is None:
        raise ConfigError(f"representation {rep!r} requires an embedding table")
    if rep == "we":
        x = we_matrix(texts, table)
        model = train_linear(x, labels, linear_config or LinearConfig(), seed=seed)
        model.metadata.update({"rep": rep, "condition": condition, "target": target})
        return Stack(rep=rep, condition=condition, target=target, model=model)
    cfg = rnn_config or RnnConfig(seed=seed)
    val_texts = val_labels = None
    if valid_records:
        val_texts = [tokenize(record_text(b, condition, indicators)) for b in valid_records]
        val_labels = [record_label(b, target) for b in valid_records]
    model = train_dnn(texts, labels, table, cfg, val_texts, val_labels)
    model.metadata.update({"rep": rep, "condition": condition, "target": target})
    return Stack(rep=rep, condition=condition, target=target, model=model)


def predict_texts(stack: Stack, texts: Sequence[str], table: EmbeddingTable | None = None) -> list[str]:
    """Predict labels for raw texts (already in the stack's indicator condition)."""
    token_lists = [tokenize(t) for t in texts]
    if stack.rep == "bow":
        return predict_batch(stack.model, bow_matrix(token_lists, stack.vocab))
    if table is None:
        raise ConfigError(f"representation {stack.rep!r} requires an embedding table")
    if stack.rep == "we":
        return predict_batch(stack.model, we_matrix(token_lists, table))
    out = []
    for toks in token_lists:
        try:
            label, _ = predict_dnn(stack.model, toks, table)
        except DataError:
            label = stack.model.classes[0]  # no embedded token: fall back to class 0
        out.append(label)
    return out


def predict_records(
    stack: Stack,
    records: Sequence[Biography],
    table: EmbeddingTable | None = None,
    indicators: IndicatorConfig = DEFAULT_INDICATORS,
) -> list[str]:
    """Predict for biography records, applying the stack's own condition."""
    texts = [record_text(b, stack.condition, indicators) for b in records]
    return predict_texts(stack, texts, table)


def accuracy(stack: Stack, records: Sequence[Biography], table=None) -> float:
    if not records:
        raise DataError("empty evaluation set")
    preds = predict_records(stack, records, table)
    golds = [record_label(b, stack.target) for b in records]
    return sum(p == g for p, g in zip(preds, golds)) / len(records)


def save_stack(stack: Stack, path: str) -> None:
    if stack.rep == "dnn":
        save_model(stack.model, path)
    else:
        if stack.rep == "bow":
            stack.model.metadata["vocab_tokens"] = list(stack.vocab.tokens)
            stack.model.metadata["vocab_freqs"] = list(stack.vocab.freqs)
        stack.model.save(path)


def load_stack(path: str) -> Stack:
    with open(path, "rb") as fh:
        head = fh.read(16)
    if head.startswith(b"OCCAUDIT-GRUATT"):
        model = load_model(path)
    else:
        model = LinearModel.load(path)
    meta = model.metadata
    rep = meta.get("rep")
    if rep not in REPRESENTATIONS:
        raise DataError(f"{path}: model lacks representation metadata")
    vocab = None
    if rep == "bow":
        tokens = meta.get("vocab_tokens")
        if tokens is None:
            raise DataError(f"{path}: bow model lacks its vocabulary")
        vocab = Vocabulary(
            tokens=tuple(tokens),
            index={t: i for i, t in enumerate(tokens)},
            freqs=tuple(meta.get("vocab_freqs", [0] * len(tokens))),
        )
    return Stack(
        rep=rep,
        condition=meta.get("condition", "with"),
        target=meta.get("target", "occupation"),
        model=model,
        vocab=vocab,
    )
