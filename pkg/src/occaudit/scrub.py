"""Removal and counterfactual swapping of explicit gender indicators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .corpus import Biography
from .errors import DataError

_PUNCT = ".,;:!?\"'()[]"

FEMALE_TO_MALE = {
    "she": "he",
    "her": "his",
    "hers": "his",
    "herself": "himself",
    "mrs": "mr",
    "ms": "mr",
}
MALE_TO_FEMALE = {
    "he": "she",
    "him": "her",
    "his": "her",
    "himself": "herself",
    "mr": "ms",
}


@dataclass(frozen=True)
class IndicatorConfig:
    """Explicit gender indicator tokens and their cross-gender replacements.

    ``mapping`` sends each indicator to its complement (or None for tokens
    that are only scrubbed, never swapped). The scrub list is the key set.
    """

    mapping: dict[str, Optional[str]] = field(
        default_factory=lambda: {**FEMALE_TO_MALE, **MALE_TO_FEMALE}
    )

    @property
    def scrub_list(self) -> frozenset[str]:
        return frozenset(self.mapping)

    @classmethod
    def from_tsv(cls, path) -> "IndicatorConfig":
        mapping: dict[str, Optional[str]] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) not in (1, 2):
                    raise DataError(f"{path}:{lineno}: expected 1-2 tab-separated columns")
                token = cols[0].strip().lower()
                repl = cols[1].strip().lower() if len(cols) == 2 and cols[1].strip() else None
                if token in mapping:
                    raise DataError(f"{path}:{lineno}: duplicate indicator {token!r}")
                mapping[token] = repl
        if not mapping:
            raise DataError(f"{path}: empty indicator table")
        return cls(mapping=mapping)

    def to_tsv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for token in sorted(self.mapping):
                repl = self.mapping[token] or ""
                fh.write(f"{token}\t{repl}\n")


DEFAULT_INDICATORS = IndicatorConfig()


def _split_token(raw: str) -> tuple[str, str, str]:
    """Split a whitespace token into (leading punctuation, core, trailing)."""
    start, end = 0, len(raw)
    while start < end and raw[start] in _PUNCT:
        start += 1
    while end > start and raw[end - 1] in _PUNCT:
        end -= 1
    return raw[:start], raw[start:end], raw[end:]


def scrub_text(feature_text: str, first_name: str, cfg: IndicatorConfig = DEFAULT_INDICATORS) -> str:
    """Delete the subject's first name and all indicator tokens."""
    first = first_name.lower()
    kept = []
    for raw in feature_text.split():
        _, core, _ = _split_token(raw)
        low = core.lower()
        if low == first or low in cfg.scrub_list:
            continue
        kept.append(raw)
    return " ".join(kept)


def scrub(bio: Biography, cfg: IndicatorConfig = DEFAULT_INDICATORS) -> str:
    return scrub_text(bio.feature_text, bio.first, cfg)


def swap_text(feature_text: str, first_name: str, cfg: IndicatorConfig = DEFAULT_INDICATORS) -> str:
    """Delete first-name tokens and swap each indicator for its complement."""
    first = first_name.lower()
    out = []
    for raw in feature_text.split():
        lead, core, trail = _split_token(raw)
        low = core.lower()
        if low == first:
            continue
        if low in cfg.mapping:
            repl = cfg.mapping[low]
            if repl is None:
                continue
            if core[:1].isupper():
                repl = repl.capitalize()
            out.append(lead + repl + trail)
        else:
            out.append(raw)
    return " ".join(out)


def swap_indicators(bio: Biography, cfg: IndicatorConfig = DEFAULT_INDICATORS) -> str:
    return swap_text(bio.feature_text, bio.first, cfg)
