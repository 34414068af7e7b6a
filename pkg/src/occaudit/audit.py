"""Fairness quantities: TPR gender gaps, compounding composition,
counterfactual swap statistics, gender-probe accuracy, and word-gender
correlation scatter data."""
from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .corpus import Biography
from .errors import DataError, NumericError
from .represent import Vocabulary
from .scrub import DEFAULT_INDICATORS, IndicatorConfig, swap_text

GENDERS = ("female", "male")


@dataclass
class GapRow:
    occupation: str
    pi_female: float
    tpr_female: Optional[float]
    tpr_male: Optional[float]
    gap_female: Optional[float]
    n_female: int
    n_male: int


@dataclass
class GapTable:
    rows: list[GapRow]

    def defined_points(self) -> list[tuple[float, float]]:
        """(pi_female, gap_female) for occupations where both TPRs exist."""
        return [(r.pi_female, r.gap_female) for r in self.rows if r.gap_female is not None]

    def mean_abs_gap(self) -> float:
        gaps = [abs(r.gap_female) for r in self.rows if r.gap_female is not None]
        if not gaps:
            raise DataError("no occupation has a defined gap")
        return float(np.mean(gaps))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(
                ["occupation", "pi_female", "tpr_female", "tpr_male", "gap_female",
                 "n_female", "n_male"]
            )
            for r in self.rows:
                w.writerow(
                    [r.occupation, repr(r.pi_female),
                     "" if r.tpr_female is None else repr(r.tpr_female),
                     "" if r.tpr_male is None else repr(r.tpr_male),
                     "" if r.gap_female is None else repr(r.gap_female),
                     r.n_female, r.n_male]
                )

    @classmethod
    def from_csv(cls, path) -> "GapTable":
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            lines = (line for line in fh if not line.startswith("#"))
            for rec in csv.DictReader(lines):
                rows.append(
                    GapRow(
                        occupation=rec["occupation"],
                        pi_female=float(rec["pi_female"]),
                        tpr_female=float(rec["tpr_female"]) if rec["tpr_female"] else None,
                        tpr_male=float(rec["tpr_male"]) if rec["tpr_male"] else None,
                        gap_female=float(rec["gap_female"]) if rec["gap_female"] else None,
                        n_female=int(rec["n_female"]),
                        n_male=int(rec["n_male"]),
                    )
                )
        return cls(rows=rows)


def gap_table(
    predictions: Sequence[str], gold: Sequence[str], genders: Sequence[str]
) -> GapTable:
    """Per-occupation TPRs by gender, gender imbalance, and TPR gap.

    TPR cells with zero support are left undefined rather than imputed.
    """
    if not (len(predictions) == len(gold) == len(genders)):
        raise DataError(
            f"misaligned inputs: {len(predictions)} predictions, "
            f"{len(gold)} labels, {len(genders)} genders"
        )
    support: Counter = Counter()
    correct: Counter = Counter()
    for pred, y, g in zip(predictions, gold, genders):
        support[(g, y)] += 1
        if pred == y:
            correct[(g, y)] += 1
    rows = []
    for occ in sorted({y for _, y in support}):
        nf = support[("female", occ)]
        nm = support[("male", occ)]
        tpr_f = correct[("female", occ)] / nf if nf else None
        tpr_m = correct[("male", occ)] / nm if nm else None
        gap = tpr_f - tpr_m if tpr_f is not None and tpr_m is not None else None
        rows.append(
            GapRow(
                occupation=occ,
                pi_female=nf / (nf + nm),
                tpr_female=tpr_f,
                tpr_male=tpr_m,
                gap_female=gap,
                n_female=nf,
                n_male=nm,
            )
        )
    return GapTable(rows=rows)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) < 2:
        raise DataError("need at least 2 points for a correlation")
    sx = x - x.mean()
    sy = y - y.mean()
    denom = np.sqrt(np.sum(sx * sx) * np.sum(sy * sy))
    if denom == 0.0:
        raise NumericError("degenerate variance: correlation undefined")
    return float(np.sum(sx * sy) / denom)


def gap_imbalance_correlation(table: GapTable) -> float:
    """Pearson r over occupations of (pi_female, gap_female)."""
    points = table.defined_points()
    if len(points) < 2:
        raise DataError("need at least 2 occupations with defined gaps")
    return pearson([p for p, _ in points], [g for _, g in points])


def tp_composition(pi: float, tpr_g: float, tpr_other: float) -> float:
    """Share of gender g among true positives: pi*TPR_g / (pi*TPR_g + (1-pi)*TPR_~g)."""
    denom = pi * tpr_g + (1.0 - pi) * tpr_other
    if denom <= 0.0:
        raise NumericError("true-positive composition undefined: zero denominator")
    return pi * tpr_g / denom


@dataclass
class SwapPair:
    gender: str
    from_label: str  # predicted with original indicators
    to_label: str  # gold label, predicted only after the swap
    count: int
    total: int  # |S_{g, to_label}|

    @property
    def pi_percent(self) -> float:
        return 100.0 * self.count / self.total


@dataclass
class SwapReport:
    n_records: int
    n_changed: int
    pair_counts: dict[tuple[str, str, str], int]
    total_counts: dict[tuple[str, str], int]
    top_pairs: dict[str, list[SwapPair]]

    @property
    def change_rate(self) -> float:
        return self.n_changed / self.n_records if self.n_records else 0.0

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["gender", "from_label", "to_label", "count", "total", "pi_percent"])
            for (g, y1, y2), count in sorted(self.pair_counts.items()):
                total = self.total_counts[(g, y2)]
                w.writerow([g, y1, y2, count, total, repr(100.0 * count / total)])


def swap_audit(
    predict: Callable[[str], str],
    records: Sequence[Biography],
    cfg: IndicatorConfig = DEFAULT_INDICATORS,
    top_k: int = 5,
    min_support: int = 10,
) -> SwapReport:
    """Counterfactual audit: compare predictions on original vs gender-swapped text.

    ``predict`` maps a feature text to an occupation label. For each gender
    and occupation pair (y1, y2), counts biographies predicted y1 originally
    but correctly predicted y2 once indicators are swapped.
    """
    pair_counts: Counter = Counter()
    total_counts: Counter = Counter()
    n_changed = 0
    for bio in records:
        orig = predict(bio.feature_text)
        swapped = predict(swap_text(bio.feature_text, bio.first, cfg))
        if orig != swapped:
            n_changed += 1
        if swapped == bio.occupation and orig != bio.occupation:
            total_counts[(bio.gender, bio.occupation)] += 1
            pair_counts[(bio.gender, orig, bio.occupation)] += 1
    top_pairs: dict[str, list[SwapPair]] = {}
    for gender in GENDERS:
        pairs = [
            SwapPair(gender=g, from_label=y1, to_label=y2, count=c,
                     total=total_counts[(g, y2)])
            for (g, y1, y2), c in pair_counts.items()
            if g == gender and total_counts[(g, y2)] >= min_support
        ]
        pairs.sort(key=lambda p: (-p.pi_percent, p.from_label, p.to_label))
        top_pairs[gender] = pairs[:top_k]
    return SwapReport(
        n_records=len(records),
        n_changed=n_changed,
        pair_counts=dict(pair_counts),
        total_counts=dict(total_counts),
        top_pairs=top_pairs,
    )


def probe_accuracy(predictions: Sequence[str], genders: Sequence[str]) -> float:
    """Fraction of correct binary gender predictions on a probe split."""
    if not predictions:
        raise DataError("empty probe split")
    if len(predictions) != len(genders):
        raise DataError("misaligned probe predictions and genders")
    return sum(p == g for p, g in zip(predictions, genders)) / len(predictions)


@dataclass
class ScatterPoint:
    token: str
    log10_freq: float
    corr_female: float


@dataclass
class WordGenderScatter:
    points: list[ScatterPoint]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["token", "log10_freq", "corr_female"])
            for p in self.points:
                w.writerow([p.token, repr(p.log10_freq), repr(p.corr_female)])


def word_gender_scatter(
    token_lists: Sequence[list[str]],
    genders: Sequence[str],
    vocab: Vocabulary,
) -> WordGenderScatter:
    """Per word type: log10 corpus frequency and point-biserial correlation
    between type presence and G=female. Zero-variance presence yields 0."""
    if len(token_lists) != len(genders):
        raise DataError("misaligned token lists and genders")
    n = len(token_lists)
    female = np.array([1.0 if g == "female" else 0.0 for g in genders])
    presence = np.zeros((n, len(vocab)))
    for i, toks in enumerate(token_lists):
        for t in set(toks):
            j = vocab.index.get(t)
            if j is not None:
                presence[i, j] = 1.0
    fc = female - female.mean()
    f_ss = float(np.sum(fc * fc))
    points = []
    for j, token in enumerate(vocab.tokens):
        col = presence[:, j]
        cc = col - col.mean()
        c_ss = float(np.sum(cc * cc))
        if c_ss == 0.0 or f_ss == 0.0:
            corr = 0.0
        else:
            corr = float(np.sum(cc * fc) / np.sqrt(c_ss * f_ss))
        points.append(
            ScatterPoint(token=token, log10_freq=float(np.log10(vocab.freqs[j])), corr_female=corr)
        )
    return WordGenderScatter(points=points)
