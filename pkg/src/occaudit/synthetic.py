"""Seeded synthetic biography corpus with controllable gender bias.

Occupations come in confusable pairs that share a domain vocabulary; each
occupation has a distinguishing token that is sometimes missing, so a
classifier benefits from gender cues exactly on the ambiguous records.
A proxy token correlated with gender survives indicator scrubbing.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FEMALE_NAMES = [
    "Alice", "Beatriz", "Carla", "Diane", "Elena", "Fatima", "Grace", "Hannah",
    "Irene", "Julia", "Karen", "Laura", "Monica", "Nadia", "Olivia", "Paula",
    "Rosa", "Sofia", "Tanya", "Uma", "Vera", "Wendy", "Yara", "Zoe",
]
MALE_NAMES = [
    "Adam", "Boris", "Carl", "Dmitri", "Evan", "Felix", "George", "Hugo",
    "Ivan", "Jonas", "Kevin", "Lucas", "Marco", "Nolan", "Oscar", "Peter",
    "Ramon", "Samir", "Tomas", "Umar", "Victor", "Walter", "Yusuf", "Zack",
]
LAST_NAMES = [
    "Abbot", "Barnes", "Chowdry", "Dalton", "Eriksen", "Ferrara", "Gibson",
    "Hale", "Ibarra", "Jensen", "Kovacs", "Larsen", "Mendez", "Novak",
    "Okafor", "Petrov", "Quinn", "Rahman", "Santos", "Tanaka", "Ulrich",
    "Varga", "Watts", "Xiong", "Yamada", "Zhu", "Adler", "Brook", "Castel",
    "Duran", "Egan", "Farrow", "Grove", "Holt", "Ingram", "Joyce", "Keller",
    "Lowell", "Marsh", "Nolte",
]
NOISE_TOKENS = [
    "experience", "projects", "clients", "team", "city", "region", "awards",
    "conferences", "training", "mentoring", "volunteering", "workshops",
    "travel", "reading", "cycling", "hiking", "music", "photography",
    "writing", "cooking", "gardening", "chess", "running", "swimming",
    "languages", "history", "economics", "technology", "community",
    "leadership", "planning", "research", "strategy", "networking",
    "innovation", "education", "culture", "sports", "nature", "science",
]

PAIRS = [
    ("surgeon", "nurse", ["hospital", "patients", "clinic", "care", "wards"]),
    ("attorney", "paralegal", ["law", "court", "cases", "filings", "contracts"]),
    ("photographer", "interior designer", ["studio", "portfolio", "commissions", "lighting", "spaces"]),
]
UNIQUE_TOKENS = {
    "surgeon": "operating",
    "nurse": "bedside",
    "attorney": "litigation",
    "paralegal": "paperwork",
    "photographer": "cameras",
    "interior designer": "furnishings",
}
PROXY_TOKEN = "mother"


@dataclass
class SynthConfig:
    n_per_occupation: int = 600
    # female share for each pair (first member listed, partner gets 1 - share)
    pair_female_shares: tuple[float, float, float] = (0.25, 0.35, 0.45)
    unique_token_prob: float = 0.8
    proxy_prob_female: float = 0.6
    proxy_prob_male: float = 0.05
    gender_signal: bool = True  # False: proxy token becomes gender-neutral
    name_in_text_prob: float = 0.5
    seed: int = 0

    def occupation_shares(self) -> list[tuple[str, str, float, list[str]]]:
        out = []
        for (occ_a, occ_b, domain), share in zip(PAIRS, self.pair_female_shares):
            out.append((occ_a, occ_b, share, domain))
        return out


def _record_line(rng, occ, domain, pi_female, cfg: SynthConfig) -> str:
    female = rng.random() < pi_female
    first = (FEMALE_NAMES if female else MALE_NAMES)[rng.integers(len(FEMALE_NAMES))]
    last = LAST_NAMES[rng.integers(len(LAST_NAMES))]
    subj = "She" if female else "He"
    poss = "Her" if female else "His"
    refl = "she" if female else "he"

    d = [domain[i] for i in rng.choice(len(domain), size=3, replace=False)]
    noise = [NOISE_TOKENS[i] for i in rng.choice(len(NOISE_TOKENS), size=4, replace=False)]
    years = int(rng.integers(3, 30))

    article = "an" if occ[0] in "aeiou" else "a"
    sentences = [f"{first} {last} is {article} {occ}."]
    sentences.append(f"{subj} has {years} years of experience in {d[0]} and {d[1]}.")
    focus = f"{poss} work centers on {d[2]}"
    if rng.random() < cfg.unique_token_prob:
        focus += f" and {UNIQUE_TOKENS[occ]}"
    sentences.append(focus + ".")
    if rng.random() < cfg.name_in_text_prob:
        sentences.append(f"{first} is based in the {noise[0]} area.")
    if cfg.gender_signal:
        proxy_p = cfg.proxy_prob_female if female else cfg.proxy_prob_male
    else:
        proxy_p = 0.5 * (cfg.proxy_prob_female + cfg.proxy_prob_male)
    # the carrier sentence appears in every record so that only the proxy
    # token itself correlates with gender
    if rng.random() < proxy_p:
        sentences.append(f"Colleagues mention {PROXY_TOKEN} support groups often.")
    else:
        sentences.append("Colleagues mention support groups often.")
    sentences.append(f"In free time {refl} enjoys {noise[1]} and {noise[2]}.")
    return " ".join(sentences)


def generate_corpus(cfg: SynthConfig) -> list[str]:
    """Raw corpus lines, one biography paragraph per line."""
    rng = np.random.default_rng(cfg.seed)
    lines = []
    for occ_a, occ_b, share_a, domain in cfg.occupation_shares():
        for occ, share in ((occ_a, share_a), (occ_b, 1.0 - share_a)):
            for _ in range(cfg.n_per_occupation):
                lines.append(_record_line(rng, occ, domain, share, cfg))
    perm = rng.permutation(len(lines))
    return [lines[i] for i in perm]


def write_corpus(lines: list[str], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
