"""Tokenization, vocabulary, bag-of-words and averaged-embedding vectors."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DataError

_WORD = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on any non-alphanumeric character."""
    return _WORD.findall(text.lower())


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]
    index: dict[str, int]
    freqs: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def to_tsv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for i, tok in enumerate(self.tokens):
                fh.write(f"{tok}\t{i}\t{self.freqs[i]}\n")

    @classmethod
    def from_tsv(cls, path) -> "Vocabulary":
        tokens, freqs = [], []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                cols = line.rstrip("\n").split("\t")
                if len(cols) != 3:
                    raise DataError(f"{path}:{lineno}: expected 3 columns")
                tokens.append(cols[0])
                freqs.append(int(cols[2]))
        return cls(tokens=tuple(tokens), index={t: i for i, t in enumerate(tokens)}, freqs=tuple(freqs))


def build_vocab(token_lists: Iterable[list[str]], min_freq: int = 5) -> Vocabulary:
    """Vocabulary of types with corpus frequency >= min_freq.

    Indexed in descending frequency, ties broken lexicographically.
    """
    counts: Counter = Counter()
    for tokens in token_lists:
        counts.update(tokens)
    kept = [(tok, n) for tok, n in counts.items() if n >= min_freq]
    if not kept:
        raise DataError(f"no token type reaches min_freq={min_freq}")
    kept.sort(key=lambda kv: (-kv[1], kv[0]))
    tokens = tuple(tok for tok, _ in kept)
    freqs = tuple(n for _, n in kept)
    return Vocabulary(tokens=tokens, index={t: i for i, t in enumerate(tokens)}, freqs=freqs)


@dataclass(frozen=True)
class SparseVec:
    """Binary presence vector: strictly increasing indices into a V-dim space."""

    indices: tuple[int, ...]
    dim: int

    def to_dense(self) -> np.ndarray:
        v = np.zeros(self.dim)
        v[list(self.indices)] = 1.0
        return v


def bow_vector(tokens: list[str], vocab: Vocabulary) -> SparseVec:
    """Type-presence indicator; out-of-vocabulary tokens are ignored."""
    idx = {vocab.index[t] for t in tokens if t in vocab.index}
    return SparseVec(indices=tuple(sorted(idx)), dim=len(vocab))


def bow_matrix(token_lists: Iterable[list[str]], vocab: Vocabulary) -> np.ndarray:
    vecs = [bow_vector(toks, vocab) for toks in token_lists]
    out = np.zeros((len(vecs), len(vocab)))
    for i, v in enumerate(vecs):
        out[i, list(v.indices)] = 1.0
    return out


@dataclass(frozen=True)
class EmbeddingTable:
    vectors: dict[str, np.ndarray]
    dim: int

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __getitem__(self, token: str) -> np.ndarray:
        return self.vectors[token]


def we_vector(tokens: list[str], table: EmbeddingTable, unique_types: bool = True) -> np.ndarray:
    """Mean embedding of the in-table word types present in the text.

    With ``unique_types`` (default) each distinct type counts once; the
    alternative averages over token occurrences. No in-table types yields
    the zero vector.
    """
    if unique_types:
        present = sorted({t for t in tokens if t in table})
    else:
        present = [t for t in tokens if t in table]
    if not present:
        return np.zeros(table.dim)
    return np.mean([table[t] for t in present], axis=0)


def we_matrix(token_lists: Iterable[list[str]], table: EmbeddingTable, unique_types: bool = True) -> np.ndarray:
    return np.array([we_vector(toks, table, unique_types) for toks in token_lists])


def load_embeddings(path) -> EmbeddingTable:
    """Parse a text embedding file: header "V D", then V lines "token v1 .. vD"."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise DataError(f"{path}: malformed header, expected 'V D'")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError as exc:
            raise DataError(f"{path}: malformed header, expected 'V D'") from exc
        if dim < 1:
            raise DataError(f"{path}: embedding dimension must be >= 1")
        vectors: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(fh, 2):
            parts = line.split()
            if not parts:
                continue
            token = parts[0]
            if len(parts) - 1 != dim:
                raise DataError(
                    f"{path}:{lineno}: expected {dim} components, got {len(parts) - 1}"
                )
            if token in vectors:
                raise DataError(f"{path}:{lineno}: duplicate token {token!r}")
            vectors[token] = np.array([float(x) for x in parts[1:]])
    if len(vectors) != count:
        raise DataError(f"{path}: header declares {count} rows, found {len(vectors)}")
    return EmbeddingTable(vectors=vectors, dim=dim)


def save_embeddings(table: EmbeddingTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(table.vectors)} {table.dim}\n")
        for token in sorted(table.vectors):
            comps = " ".join(repr(float(x)) for x in table.vectors[token])
            fh.write(f"{token} {comps}\n")


def synth_embeddings(vocab: Vocabulary, dim: int, seed: int) -> EmbeddingTable:
    """Seeded random unit-norm embedding per vocabulary type (testing aid)."""
    if dim < 1:
        raise DataError("embedding dimension must be >= 1")
    rng = np.random.default_rng(seed)
    vectors = {}
    for token in vocab.tokens:
        v = rng.standard_normal(dim)
        vectors[token] = v / np.linalg.norm(v)
    return EmbeddingTable(vectors=vectors, dim=dim)
