"""Run configuration: a TOML file merged with command-line overrides.

Flags win over the file; the resolved configuration hashes to a stable
value that every emitted report carries for provenance.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .linear import LinearConfig
from .rnn import RnnConfig

SCHEMA_VERSION = "1"

REPRESENTATIONS = ("bow", "we", "dnn")
CONDITIONS = ("with", "without")
TARGETS = ("occupation", "gender")


@dataclass
class RunConfig:
    """Every knob of a pipeline run, resolvable from TOML plus flags."""

    # paths
    lexicon: str | None = None
    embeddings: str | None = None
    indicators: str | None = None
    # pipeline selectors
    rep: str = "bow"
    condition: str = "with"
    target: str = "occupation"
    ratios: tuple[float, float, float] = (0.65, 0.10, 0.25)
    seed: int = 0
    # representation hyperparameters
    min_freq: int = 5
    synth_dim: int = 50
    # linear model
    lam: float = 1.0
    max_epochs: int = 500
    # recurrent model
    hidden: int = 32
    attn_dim: int = 32
    lr: float = 0.05
    epochs: int = 10
    batch_size: int = 32
    # audit and simulation options
    top_k: int = 5
    min_support: int = 10
    bins: int = 30
    horizon: int = 10
    grid_n: int = 21
    grid_lo: float = 0.5
    grid_hi: float = 1.0

    def validate(self) -> "RunConfig":
        if self.rep not in REPRESENTATIONS:
            raise ConfigError(f"unknown representation {self.rep!r}")
        if self.condition not in CONDITIONS:
            raise ConfigError(f"unknown indicator condition {self.condition!r}")
        if self.target not in TARGETS:
            raise ConfigError(f"unknown target {self.target!r}")
        if len(self.ratios) != 3:
            raise ConfigError(f"expected 3 split ratios, got {len(self.ratios)}")
        if abs(sum(self.ratios) - 1.0) > 1e-9:
            raise ConfigError(f"split ratios must sum to 1, got {self.ratios}")
        if self.horizon < 1:
            raise ConfigError("horizon must be >= 1")
        if self.grid_n < 1:
            raise ConfigError("grid_n must be >= 1")
        return self

    @property
    def content_hash(self) -> str:
        blob = json.dumps(
            {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()},
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def provenance(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config_hash": self.content_hash,
            "seed": self.seed,
        }

    def linear_config(self) -> LinearConfig:
        return LinearConfig(lam=self.lam, max_epochs=self.max_epochs)

    def rnn_config(self) -> RnnConfig:
        return RnnConfig(
            hidden=self.hidden,
            attn_dim=self.attn_dim,
            lr=self.lr,
            epochs=self.epochs,
            batch_size=self.batch_size,
            seed=self.seed,
        )


def load_config_file(path) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {sorted(unknown)}")
    return data


def resolve_config(config_path=None, **overrides) -> RunConfig:
    """Defaults, then TOML file values, then explicit flags (None = unset)."""
    values: dict = {}
    if config_path is not None:
        values.update(load_config_file(config_path))
    values.update({k: v for k, v in overrides.items() if v is not None})
    if "ratios" in values:
        values["ratios"] = tuple(float(r) for r in values["ratios"])
    known = {f.name for f in fields(RunConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**values).validate()
