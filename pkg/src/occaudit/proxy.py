"""Attention-based proxy-word detection and attention histograms."""
from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Biography
from .errors import DataError
from .represent import EmbeddingTable
from .rnn import GruAttentionModel, attention_of
from .scrub import DEFAULT_INDICATORS

DEFAULT_BINS = 30


@dataclass
class AttentionAggregate:
    """Per word type: summed attention mass and occurrence count over a split."""

    totals: dict[str, float]
    counts: dict[str, int]
    n_records: int

    def mean(self, token: str) -> float:
        c = self.counts.get(token, 0)
        return self.totals.get(token, 0.0) / c if c else 0.0

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["token", "total_attention", "count", "mean_attention"])
            for token in sorted(self.totals, key=lambda t: (-self.totals[t], t)):
                w.writerow([token, repr(self.totals[token]), self.counts[token],
                            repr(self.mean(token))])


def aggregate_attention(
    model: GruAttentionModel,
    token_lists: Sequence[list[str]],
    table: EmbeddingTable,
) -> AttentionAggregate:
    """Accumulate each word type's attention over every record of a split."""
    totals: dict[str, float] = defaultdict(float)
    counts: dict[str, int] = defaultdict(int)
    for tokens in token_lists:
        trace = attention_of(model, tokens, table)
        for token, weight in zip(trace.tokens, trace.weights):
            totals[token] += float(weight)
            counts[token] += 1
    return AttentionAggregate(totals=dict(totals), counts=dict(counts),
                              n_records=len(token_lists))


def proxy_candidates(
    agg: AttentionAggregate,
    k: int,
    exclude: frozenset[str] = DEFAULT_INDICATORS.scrub_list,
) -> list[str]:
    """Top-k word types by total attention, never including indicator tokens."""
    ranked = sorted(
        (t for t in agg.totals if t not in exclude),
        key=lambda t: (-agg.totals[t], t),
    )
    return ranked[: max(k, 0)]


@dataclass
class AttentionHistogram:
    word: str
    occupation: str
    condition: str  # "with" | "without"
    edges: np.ndarray
    counts: np.ndarray
    values: np.ndarray  # raw per-occurrence weights

    @property
    def mean_attention(self) -> float:
        if self.values.size == 0:
            raise DataError(
                f"no occurrences of {self.word!r} in occupation {self.occupation!r}"
            )
        return float(np.mean(self.values))

    @property
    def is_empty(self) -> bool:
        return self.values.size == 0


def _collect_weights(model, records, table, word, tokenizer):
    by_occ: dict[str, list[float]] = defaultdict(list)
    for bio, tokens in records:
        if word not in tokens:
            continue
        trace = attention_of(model, tokens, table)
        for token, weight in zip(trace.tokens, trace.weights):
            if token == word:
                by_occ[bio.occupation].append(float(weight))
    return by_occ


def attention_histograms(
    model_with: GruAttentionModel,
    model_without: GruAttentionModel,
    word: str,
    split_with: Sequence[tuple[Biography, list[str]]],
    split_without: Sequence[tuple[Biography, list[str]]],
    table: EmbeddingTable,
    bins: int = DEFAULT_BINS,
    occupation_order: Sequence[str] | None = None,
) -> dict[str, tuple[AttentionHistogram, AttentionHistogram]]:
    """Per-occupation histograms of one word's attention under both conditions.

    Splits are (record, tokens) pairs so the caller controls scrubbing.
    Both conditions of an occupation share bin edges on [0, max observed
    weight] so the histograms are directly comparable.
    """
    w_with = _collect_weights(model_with, split_with, table, word, None)
    w_without = _collect_weights(model_without, split_without, table, word, None)
    occupations = occupation_order
    if occupations is None:
        occupations = sorted(set(w_with) | set(w_without))
    out = {}
    for occ in occupations:
        a = np.array(w_with.get(occ, []), dtype=float)
        b = np.array(w_without.get(occ, []), dtype=float)
        top = max(a.max() if a.size else 0.0, b.max() if b.size else 0.0, 1e-12)
        edges = np.linspace(0.0, top, bins + 1)
        out[occ] = (
            AttentionHistogram(word=word, occupation=occ, condition="with",
                               edges=edges, counts=np.histogram(a, bins=edges)[0], values=a),
            AttentionHistogram(word=word, occupation=occ, condition="without",
                               edges=edges, counts=np.histogram(b, bins=edges)[0], values=b),
        )
    return out


def histogram_shift(h_with: AttentionHistogram, h_without: AttentionHistogram) -> float:
    """Mean attention difference (without - with); positive means more
    attention once indicators are gone."""
    if h_with.word != h_without.word or h_with.occupation != h_without.occupation:
        raise DataError("histograms compare different words or occupations")
    return h_without.mean_attention - h_with.mean_attention


def histograms_to_csv(histograms, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["word", "occupation", "condition", "bin_lo", "bin_hi", "count"])
        for occ in histograms:
            for hist in histograms[occ]:
                for i, count in enumerate(hist.counts):
                    w.writerow([hist.word, occ, hist.condition,
                                repr(float(hist.edges[i])), repr(float(hist.edges[i + 1])),
                                int(count)])
