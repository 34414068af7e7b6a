"""Biography extraction, labeling, deduplication, and split construction.

Input is line-oriented plain text (one paragraph per line). A line yields a
record when it starts with a two- or three-token capitalized name followed by
" is a(n) ", an optional single modifier token, and a known occupation title.
"""
from __future__ import annotations

import importlib.resources
import json
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import ConfigError, DataError

FEMALE_PRONOUNS = frozenset({"she", "her", "hers", "herself"})
MALE_PRONOUNS = frozenset({"he", "him", "his", "himself"})

_NAME_TOKEN = re.compile(r"^[A-Z][\w'\-]*$")
_INITIAL = re.compile(r"^[A-Z]\.$")
_IS_A = re.compile(r"\bis an? ")


@dataclass(frozen=True)
class OccupationLexicon:
    """Maps surface occupation titles to canonical occupation ids."""

    entries: dict[str, str]
    canonical: tuple[str, ...]

    def __post_init__(self):
        if not self.canonical:
            raise DataError("lexicon has no canonical occupations")
        unknown = set(self.entries.values()) - set(self.canonical)
        if unknown:
            raise DataError(f"lexicon entries map to unknown canonical ids: {sorted(unknown)}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "OccupationLexicon":
        entries: dict[str, str] = {}
        canonical: list[str] = []
        for surface, canon in pairs:
            surface = surface.strip().lower()
            canon = canon.strip().lower()
            if surface in entries:
                raise DataError(f"duplicate surface title: {surface!r}")
            entries[surface] = canon
            if canon not in canonical:
                canonical.append(canon)
        return cls(entries=entries, canonical=tuple(canonical))

    @classmethod
    def from_tsv(cls, path) -> "OccupationLexicon":
        pairs = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) != 2:
                    raise DataError(f"{path}:{lineno}: expected 2 tab-separated columns")
                pairs.append((cols[0], cols[1]))
        return cls.from_pairs(pairs)

    def to_tsv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for surface in sorted(self.entries):
                fh.write(f"{surface}\t{self.entries[surface]}\n")

    def titles_longest_first(self) -> list[str]:
        return sorted(self.entries, key=lambda t: (-len(t.split()), t))


def default_lexicon() -> OccupationLexicon:
    """The occupation lexicon bundled with the package."""
    path = importlib.resources.files("occaudit").joinpath("data/occupations.tsv")
    return OccupationLexicon.from_tsv(path)


@dataclass(frozen=True)
class Biography:
    """One extracted biography record."""

    first: str
    middle: Optional[str]
    last: str
    occupation: str
    gender: str  # "female" | "male"
    full_text: str
    feature_text: str

    @property
    def token_count(self) -> int:
        return len(self.full_text.split())

    def to_json(self) -> dict:
        return {
            "first": self.first,
            "middle": self.middle,
            "last": self.last,
            "occupation": self.occupation,
            "gender": self.gender,
            "text": self.full_text,
            "feature_text": self.feature_text,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Biography":
        return cls(
            first=obj["first"],
            middle=obj.get("middle"),
            last=obj["last"],
            occupation=obj["occupation"],
            gender=obj["gender"],
            full_text=obj["text"],
            feature_text=obj["feature_text"],
        )


@dataclass
class SplitSet:
    train: list[Biography]
    validation: list[Biography]
    test: list[Biography]
    seed: int


@dataclass
class ProbeSplitSet:
    """Occupation-and-gender balanced subsample used for gender probing."""

    train: list[Biography]
    validation: list[Biography]
    test: list[Biography]
    retained_occupations: list[str]


@dataclass(frozen=True)
class RawRecord:
    first: str
    middle: Optional[str]
    last: str
    occupation: str
    full_text: str


def canonicalize_occupation(surface: str, lexicon: OccupationLexicon) -> str:
    """Resolve a surface title to its canonical occupation id.

    A single leading modifier token may be stripped if the full surface is
    not in the lexicon ("registered nurse" -> "nurse").
    """
    surface = surface.strip().lower()
    if surface in lexicon.entries:
        return lexicon.entries[surface]
    parts = surface.split(None, 1)
    if len(parts) == 2 and parts[1] in lexicon.entries:
        return lexicon.entries[parts[1]]
    raise DataError(f"unknown occupation title: {surface!r}")


def _match_title(rest: str, lexicon: OccupationLexicon) -> Optional[str]:
    """Match a lexicon title at the start of ``rest``; return the surface form."""
    rest_tokens = rest.split()
    rest_lower = [t.lower().strip(".,;:!?\"'()") for t in rest_tokens]
    for title in lexicon.titles_longest_first():
        tt = title.split()
        if rest_lower[: len(tt)] == tt:
            return title
    return None


def parse_line(line: str, lexicon: OccupationLexicon) -> Optional[RawRecord]:
    """Extract a raw biography record from one text line, or None.

    The line must begin with two or three capitalized name tokens, then
    " is a " or " is an ", then an optional single modifier token, then a
    lexicon surface title.
    """
    line = line.strip()
    m = _IS_A.search(line)
    if m is None or m.start() == 0:
        return None
    name_part = line[: m.start()].split()
    if len(name_part) == 2:
        first, middle, last = name_part[0], None, name_part[1]
    elif len(name_part) == 3:
        first, middle, last = name_part
        if not (_NAME_TOKEN.match(middle) or _INITIAL.match(middle)):
            return None
    else:
        return None
    if not (_NAME_TOKEN.match(first) and _NAME_TOKEN.match(last)):
        return None

    rest = line[m.end():]
    if not rest.split():
        return None
    surface = _match_title(rest, lexicon)
    if surface is None:
        # one optional modifier token before the title
        parts = rest.split(None, 1)
        if len(parts) == 2:
            surface = _match_title(parts[1], lexicon)
        if surface is None:
            return None
    occupation = canonicalize_occupation(surface, lexicon)
    return RawRecord(first=first, middle=middle, last=last, occupation=occupation, full_text=line)


def split_first_sentence(full_text: str) -> tuple[str, str]:
    """Split off the first sentence; the remainder becomes the feature text.

    A period directly after a single capital letter (an initial like "B.")
    does not terminate the sentence.
    """
    if not full_text:
        raise DataError("empty biography text")
    for i, ch in enumerate(full_text):
        if ch not in ".!?":
            continue
        if i + 1 < len(full_text) and not full_text[i + 1].isspace():
            continue
        if ch == ".":
            # initials guard: "B." = capital letter not preceded by a letter
            if i >= 1 and full_text[i - 1].isupper():
                if i == 1 or not full_text[i - 2].isalpha():
                    continue
        head = full_text[: i + 1]
        remainder = full_text[i + 1:].lstrip()
        return head, remainder
    return full_text, ""


def infer_gender(feature_text: str) -> Optional[str]:
    """Majority pronoun vote; None when there are no pronouns or a tie."""
    tokens = [t.strip(".,;:!?\"'()").lower() for t in feature_text.split()]
    female = sum(1 for t in tokens if t in FEMALE_PRONOUNS)
    male = sum(1 for t in tokens if t in MALE_PRONOUNS)
    if female > male:
        return "female"
    if male > female:
        return "male"
    return None


def extract_records(
    lines: Iterable[str], lexicon: OccupationLexicon
) -> tuple[list[Biography], Counter]:
    """Run the per-line extraction pipeline; returns records and discard stats."""
    records = []
    stats: Counter = Counter()
    for line in lines:
        line = line.strip()
        if not line:
            stats["empty_line"] += 1
            continue
        raw = parse_line(line, lexicon)
        if raw is None:
            stats["no_pattern_match"] += 1
            continue
        _, feature_text = split_first_sentence(raw.full_text)
        gender = infer_gender(feature_text)
        if gender is None:
            stats["no_gender_signal"] += 1
            continue
        records.append(
            Biography(
                first=raw.first,
                middle=raw.middle,
                last=raw.last,
                occupation=raw.occupation,
                gender=gender,
                full_text=raw.full_text,
                feature_text=feature_text,
            )
        )
        stats["extracted"] += 1
    return records, stats


def _middles_compatible(a: Optional[str], b: Optional[str]) -> bool:
    if a is None or b is None:
        return True
    return a.startswith(b) or b.startswith(a)


def dedup(records: list[Biography]) -> list[Biography]:
    """Collapse duplicate biographies of the same person.

    Duplicates share (first, last, occupation) and have compatible middle
    names (one absent, or one a string prefix of the other); the relation is
    closed transitively within each group. The longest full_text survives,
    ties going to the first record seen.
    """
    groups: dict[tuple, list[int]] = defaultdict(list)
    for i, rec in enumerate(records):
        groups[(rec.first, rec.last, rec.occupation)].append(i)

    keep: list[Biography] = []
    for key in groups:
        idxs = groups[key]
        # union-find over the group's indices
        parent = {i: i for i in idxs}

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a_pos, i in enumerate(idxs):
            for j in idxs[a_pos + 1:]:
                if _middles_compatible(records[i].middle, records[j].middle):
                    parent[find(i)] = find(j)
        classes: dict[int, list[int]] = defaultdict(list)
        for i in idxs:
            classes[find(i)].append(i)
        for members in classes.values():
            best = min(members, key=lambda i: (-len(records[i].full_text), i))
            keep.append(records[best])
    order = {id(r): i for i, r in enumerate(records)}
    keep.sort(key=lambda r: order[id(r)])
    return keep


def _largest_remainder_sizes(n: int, ratios: tuple[float, float, float]) -> list[int]:
    raw = [n * r for r in ratios]
    sizes = [int(np.floor(x)) for x in raw]
    leftover = n - sum(sizes)
    fracs = sorted(range(3), key=lambda i: (-(raw[i] - sizes[i]), i))
    for i in range(leftover):
        sizes[fracs[i]] += 1
    return sizes


def stratified_split(
    records: list[Biography],
    ratios: tuple[float, float, float],
    seed: int,
) -> SplitSet:
    """Shuffle and partition records per occupation by the given fractions."""
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ConfigError(f"split ratios must sum to 1, got {ratios}")
    by_occ: dict[str, list[Biography]] = defaultdict(list)
    for rec in records:
        by_occ[rec.occupation].append(rec)
    for occ, group in by_occ.items():
        if len(group) < 3:
            raise DataError(f"occupation {occ!r} has only {len(group)} records; need >= 3")

    rng = np.random.default_rng(seed)
    train: list[Biography] = []
    validation: list[Biography] = []
    test: list[Biography] = []
    for occ in sorted(by_occ):
        group = list(by_occ[occ])
        perm = rng.permutation(len(group))
        shuffled = [group[i] for i in perm]
        n_train, n_val, n_test = _largest_remainder_sizes(len(group), ratios)
        train.extend(shuffled[:n_train])
        validation.extend(shuffled[n_train: n_train + n_val])
        test.extend(shuffled[n_train + n_val:])
    return SplitSet(train=train, validation=validation, test=test, seed=seed)


def _cells(records: list[Biography]) -> dict[tuple[str, str], list[Biography]]:
    cells: dict[tuple[str, str], list[Biography]] = defaultdict(list)
    for rec in records:
        cells[(rec.occupation, rec.gender)].append(rec)
    return cells


def balanced_subsample(
    split_set: SplitSet,
    min_per_cell: int,
    per_cell_train: int,
    seed: int,
) -> ProbeSplitSet:
    """Build an occupation-and-gender balanced probe split.

    Occupations lacking ``min_per_cell`` training records for either gender
    are dropped; surviving training cells are subsampled to
    ``per_cell_train``. Validation/test cells are subsampled to the size of
    the smallest retained cell within each split.
    """
    if per_cell_train > min_per_cell:
        raise ConfigError(
            f"per_cell_train ({per_cell_train}) must be <= min_per_cell ({min_per_cell})"
        )
    train_cells = _cells(split_set.train)
    occupations = sorted({occ for occ, _ in train_cells})
    retained = [
        occ
        for occ in occupations
        if len(train_cells.get((occ, "female"), [])) >= min_per_cell
        and len(train_cells.get((occ, "male"), [])) >= min_per_cell
    ]
    if not retained:
        raise DataError("no occupation has enough records per gender for the probe split")

    rng = np.random.default_rng(seed)

    def sample(cells, count):
        out = []
        for occ in retained:
            for gender in ("female", "male"):
                pool = cells.get((occ, gender), [])
                idx = rng.choice(len(pool), size=count, replace=False)
                out.extend(pool[i] for i in sorted(idx))
        return out

    train = sample(train_cells, per_cell_train)
    result = [train]
    for part in (split_set.validation, split_set.test):
        cells = _cells(part)
        sizes = [
            len(cells.get((occ, g), [])) for occ in retained for g in ("female", "male")
        ]
        smallest = min(sizes)
        if smallest == 0:
            raise DataError("a retained (occupation, gender) cell is empty in a held-out split")
        result.append(sample(cells, smallest))
    return ProbeSplitSet(
        train=result[0],
        validation=result[1],
        test=result[2],
        retained_occupations=retained,
    )


def write_jsonl(records: Iterable[Biography], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")


def read_jsonl(path) -> list[Biography]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(Biography.from_json(json.loads(line)))
            except (json.JSONDecodeError, KeyError) as exc:
                raise DataError(f"{path}:{lineno}: bad record ({exc})") from exc
    return records
