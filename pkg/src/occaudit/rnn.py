"""Bi-directional GRU encoder with additive attention and a softmax head.

All gradients are hand-derived; training is plain mini-batch gradient
descent with seeded shuffling so runs are exactly reproducible. Input
embeddings are frozen.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, NumericError
from .represent import EmbeddingTable


@dataclass
class GruParams:
    """Gate parameters for one direction: update (z), reset (r), candidate (h)."""

    wz: np.ndarray
    wr: np.ndarray
    wh: np.ndarray
    uz: np.ndarray
    ur: np.ndarray
    uh: np.ndarray
    bz: np.ndarray
    br: np.ndarray
    bh: np.ndarray

    @property
    def hidden(self) -> int:
        return self.wz.shape[0]


@dataclass
class AttentionParams:
    w_proj: np.ndarray  # (k, 2H)
    b_proj: np.ndarray  # (k,)
    w_score: np.ndarray  # (k,)


@dataclass
class AttentionTrace:
    tokens: list[str]
    weights: np.ndarray


@dataclass
class GruAttentionModel:
    fwd: GruParams
    bwd: GruParams
    attn: AttentionParams
    w_out: np.ndarray  # (C, 2H)
    b_out: np.ndarray  # (C,)
    classes: list[str]
    embed_dim: int
    metadata: dict = field(default_factory=dict)

    @property
    def hidden(self) -> int:
        return self.fwd.hidden


@dataclass
class RnnConfig:
    hidden: int = 32
    attn_dim: int = 32
    lr: float = 0.05
    lr_decay: float = 0.5
    epochs: int = 10
    batch_size: int = 32
    seed: int = 0


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _softmax(z):
    z = z - np.max(z)
    e = np.exp(z)
    return e / np.sum(e)


def _uniform(rng, rows, cols):
    bound = 1.0 / np.sqrt(cols)
    return rng.uniform(-bound, bound, size=(rows, cols))


def init_model(classes, embed_dim, config, rng) -> GruAttentionModel:
    h, k = config.hidden, config.attn_dim

    def gru():
        return GruParams(
            wz=_uniform(rng, h, embed_dim),
            wr=_uniform(rng, h, embed_dim),
            wh=_uniform(rng, h, embed_dim),
            uz=_uniform(rng, h, h),
            ur=_uniform(rng, h, h),
            uh=_uniform(rng, h, h),
            bz=np.zeros(h),
            br=np.zeros(h),
            bh=np.zeros(h),
        )

    fwd, bwd = gru(), gru()
    attn = AttentionParams(
        w_proj=_uniform(rng, k, 2 * h),
        b_proj=np.zeros(k),
        w_score=_uniform(rng, 1, k)[0],
    )
    return GruAttentionModel(
        fwd=fwd,
        bwd=bwd,
        attn=attn,
        w_out=_uniform(rng, len(classes), 2 * h),
        b_out=np.zeros(len(classes)),
        classes=list(classes),
        embed_dim=embed_dim,
        metadata={"config": vars(config).copy()},
    )


def gru_cell(p: GruParams, e: np.ndarray, h_prev: np.ndarray) -> np.ndarray:
    """One GRU step: z/r gates, candidate state, convex combination."""
    z = _sigmoid(p.wz @ e + p.uz @ h_prev + p.bz)
    r = _sigmoid(p.wr @ e + p.ur @ h_prev + p.br)
    c = np.tanh(p.wh @ e + p.uh @ (r * h_prev) + p.bh)
    return (1.0 - z) * h_prev + z * c


def _gru_run(p: GruParams, seq: list[np.ndarray]):
    """Run one direction over ``seq`` from a zero state; keep backprop caches."""
    h = np.zeros(p.hidden)
    states, caches = [], []
    for e in seq:
        z = _sigmoid(p.wz @ e + p.uz @ h + p.bz)
        r = _sigmoid(p.wr @ e + p.ur @ h + p.br)
        c = np.tanh(p.wh @ e + p.uh @ (r * h) + p.bh)
        h_new = (1.0 - z) * h + z * c
        caches.append((e, h, z, r, c))
        states.append(h_new)
        h = h_new
    return states, caches


def _zero_grads(p: GruParams) -> dict:
    return {name: np.zeros_like(getattr(p, name)) for name in
            ("wz", "wr", "wh", "uz", "ur", "uh", "bz", "br", "bh")}


def _gru_backprop(p: GruParams, caches, dstates) -> dict:
    """Backprop through one direction; ``dstates`` aligned with processing order."""
    g = _zero_grads(p)
    carry = np.zeros(p.hidden)
    for i in range(len(caches) - 1, -1, -1):
        e, h_prev, z, r, c = caches[i]
        dh = dstates[i] + carry
        dz = dh * (c - h_prev)
        dc = dh * z
        dh_prev = dh * (1.0 - z)
        da_c = dc * (1.0 - c * c)
        g["wh"] += np.outer(da_c, e)
        g["uh"] += np.outer(da_c, r * h_prev)
        g["bh"] += da_c
        drh = p.uh.T @ da_c
        dr = drh * h_prev
        dh_prev = dh_prev + drh * r
        da_z = dz * z * (1.0 - z)
        g["wz"] += np.outer(da_z, e)
        g["uz"] += np.outer(da_z, h_prev)
        g["bz"] += da_z
        dh_prev = dh_prev + p.uz.T @ da_z
        da_r = dr * r * (1.0 - r)
        g["wr"] += np.outer(da_r, e)
        g["ur"] += np.outer(da_r, h_prev)
        g["br"] += da_r
        dh_prev = dh_prev + p.ur.T @ da_r
        carry = dh_prev
    return g


def encode(model: GruAttentionModel, embeddings: np.ndarray) -> np.ndarray:
    """Per-token states [backward; forward], both directions from zero state."""
    seq = [embeddings[t] for t in range(len(embeddings))]
    if not seq:
        raise DataError("cannot encode an empty sequence")
    fwd_states, _ = _gru_run(model.fwd, seq)
    bwd_states, _ = _gru_run(model.bwd, seq[::-1])
    bwd_states = bwd_states[::-1]
    return np.array([np.concatenate([b, f]) for b, f in zip(bwd_states, fwd_states)])


def attend(attn: AttentionParams, states: np.ndarray):
    """Additive attention over encoder states; returns (weights, context)."""
    u_hat = np.tanh(states @ attn.w_proj.T + attn.b_proj)
    u = u_hat @ attn.w_score
    alpha = _softmax(u)
    context = alpha @ states
    return alpha, context


def _lookup(tokens: list[str], table: EmbeddingTable):
    used = [t for t in tokens if t in table]
    if not used:
        raise DataError("no token in the sequence has an embedding")
    return used, np.array([table[t] for t in used])


def forward(model: GruAttentionModel, tokens: list[str], table: EmbeddingTable):
    """Class distribution and attention trace for one token sequence."""
    used, emb = _lookup(tokens, table)
    states = encode(model, emb)
    alpha, context = attend(model.attn, states)
    probs = _softmax(model.w_out @ context + model.b_out)
    return probs, AttentionTrace(tokens=used, weights=alpha)


def attention_of(model: GruAttentionModel, tokens: list[str], table: EmbeddingTable) -> AttentionTrace:
    _, trace = forward(model, tokens, table)
    return trace


def predict_dnn(model: GruAttentionModel, tokens: list[str], table: EmbeddingTable):
    probs, _ = forward(model, tokens, table)
    return model.classes[int(np.argmax(probs))], probs


PARAM_NAMES = (
    [f"fwd.{n}" for n in ("wz", "wr", "wh", "uz", "ur", "uh", "bz", "br", "bh")]
    + [f"bwd.{n}" for n in ("wz", "wr", "wh", "uz", "ur", "uh", "bz", "br", "bh")]
    + ["attn.w_proj", "attn.b_proj", "attn.w_score", "w_out", "b_out"]
)


def param_arrays(model: GruAttentionModel) -> dict[str, np.ndarray]:
    """Live parameter tensors keyed by canonical names (mutable in place)."""
    out = {}
    for name in PARAM_NAMES:
        obj = model
        for part in name.split("."):
            obj = getattr(obj, part)
        out[name] = obj
    return out


def seq_loss_and_grads(model: GruAttentionModel, embeddings: np.ndarray, target_idx: int):
    """Cross-entropy loss and per-parameter gradients for one sequence."""
    seq = [embeddings[t] for t in range(len(embeddings))]
    fwd_states, fwd_caches = _gru_run(model.fwd, seq)
    bwd_states_rev, bwd_caches = _gru_run(model.bwd, seq[::-1])
    bwd_states = bwd_states_rev[::-1]
    states = np.array([np.concatenate([b, f]) for b, f in zip(bwd_states, fwd_states)])

    attn = model.attn
    u_hat = np.tanh(states @ attn.w_proj.T + attn.b_proj)
    u = u_hat @ attn.w_score
    alpha = _softmax(u)
    context = alpha @ states
    probs = _softmax(model.w_out @ context + model.b_out)
    loss = -float(np.log(max(probs[target_idx], 1e-300)))

    dlogits = probs.copy()
    dlogits[target_idx] -= 1.0
    g_wout = np.outer(dlogits, context)
    g_bout = dlogits.copy()
    dcontext = model.w_out.T @ dlogits

    dalpha = states @ dcontext
    dstates = alpha[:, None] * dcontext[None, :]
    du = alpha * (dalpha - float(alpha @ dalpha))
    g_wscore = u_hat.T @ du
    du_hat = du[:, None] * attn.w_score[None, :]
    da = du_hat * (1.0 - u_hat * u_hat)
    g_wproj = da.T @ states
    g_bproj = da.sum(axis=0)
    dstates = dstates + da @ attn.w_proj

    h = model.hidden
    d_bwd = dstates[:, :h]
    d_fwd = dstates[:, h:]
    g_fwd = _gru_backprop(model.fwd, fwd_caches, [d_fwd[t] for t in range(len(seq))])
    g_bwd = _gru_backprop(model.bwd, bwd_caches, [d_bwd[t] for t in range(len(seq))][::-1])

    grads = {f"fwd.{k}": v for k, v in g_fwd.items()}
    grads.update({f"bwd.{k}": v for k, v in g_bwd.items()})
    grads["attn.w_proj"] = g_wproj
    grads["attn.b_proj"] = g_bproj
    grads["attn.w_score"] = g_wscore
    grads["w_out"] = g_wout
    grads["b_out"] = g_bout
    return loss, grads


def dataset_loss(model, sequences, targets) -> float:
    total = 0.0
    for emb, y in zip(sequences, targets):
        seq = [emb[t] for t in range(len(emb))]
        fwd_states, _ = _gru_run(model.fwd, seq)
        bwd_states, _ = _gru_run(model.bwd, seq[::-1])
        states = np.array(
            [np.concatenate([b, f]) for b, f in zip(bwd_states[::-1], fwd_states)]
        )
        alpha, context = attend(model.attn, states)
        probs = _softmax(model.w_out @ context + model.b_out)
        total += -float(np.log(max(probs[y], 1e-300)))
    return total / len(sequences)


def train_dnn(
    token_lists: list[list[str]],
    labels: list[str],
    table: EmbeddingTable,
    config: RnnConfig = RnnConfig(),
    val_token_lists: list[list[str]] | None = None,
    val_labels: list[str] | None = None,
) -> GruAttentionModel:
    """Train by mini-batch gradient descent with fixed-order gradient reduction.

    The learning rate halves whenever the monitored loss (validation when
    provided, else training) fails to improve.
    """
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise DataError(f"need at least 2 classes, got {classes}")
    class_idx = {c: i for i, c in enumerate(classes)}

    sequences, targets = [], []
    skipped = 0
    for toks, lab in zip(token_lists, labels):
        used = [t for t in toks if t in table]
        if not used:
            skipped += 1
            continue
        sequences.append(np.array([table[t] for t in used]))
        targets.append(class_idx[lab])
    if not sequences:
        raise DataError("every training sequence lacks embeddings")

    val = None
    if val_token_lists is not None and val_labels is not None:
        val = ([], [])
        for toks, lab in zip(val_token_lists, val_labels):
            used = [t for t in toks if t in table]
            if used and lab in class_idx:
                val[0].append(np.array([table[t] for t in used]))
                val[1].append(class_idx[lab])

    rng = np.random.default_rng(config.seed)
    model = init_model(classes, table.dim, config, rng)
    model.metadata.update({"seed": config.seed, "skipped_no_embedding": skipped})

    lr = config.lr
    best = np.inf
    params = param_arrays(model)
    history = []
    for epoch in range(config.epochs):
        perm = rng.permutation(len(sequences))
        epoch_loss = 0.0
        for start in range(0, len(perm), config.batch_size):
            batch = perm[start: start + config.batch_size]
            acc = {name: np.zeros_like(arr) for name, arr in params.items()}
            for i in batch:
                loss, grads = seq_loss_and_grads(model, sequences[i], targets[i])
                epoch_loss += loss
                for name in acc:
                    acc[name] += grads[name]
            scale = lr / len(batch)
            for name, arr in params.items():
                arr -= scale * acc[name]
        epoch_loss /= len(sequences)
        if not np.isfinite(epoch_loss):
            raise NumericError(f"training diverged at epoch {epoch}")
        monitored = dataset_loss(model, *val) if val and val[0] else epoch_loss
        history.append({"epoch": epoch, "train_loss": epoch_loss, "monitored": monitored})
        if monitored >= best - 1e-5:
            lr *= config.lr_decay
        else:
            best = monitored
    model.metadata["history"] = history
    return model


# --- serialization: JSON header line + little-endian float64 tensors ---

_MAGIC = b"OCCAUDIT-GRUATTN v1\n"


def save_model(model: GruAttentionModel, path) -> None:
    params = param_arrays(model)
    header = {
        "classes": model.classes,
        "embed_dim": model.embed_dim,
        "hidden": model.hidden,
        "attn_dim": int(model.attn.b_proj.shape[0]),
        "shapes": {name: list(arr.shape) for name, arr in params.items()},
        "metadata": model.metadata,
    }
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        for name in PARAM_NAMES:
            fh.write(np.ascontiguousarray(params[name], dtype="<f8").tobytes())


def load_model(path) -> GruAttentionModel:
    with open(path, "rb") as fh:
        magic = fh.readline()
        if magic != _MAGIC:
            raise DataError(f"{path}: not a GRU-attention model file")
        header = json.loads(fh.readline().decode("utf-8"))
        tensors = {}
        for name in PARAM_NAMES:
            shape = tuple(header["shapes"][name])
            count = int(np.prod(shape)) if shape else 1
            buf = fh.read(count * 8)
            if len(buf) != count * 8:
                raise DataError(f"{path}: truncated tensor {name}")
            tensors[name] = np.frombuffer(buf, dtype="<f8").reshape(shape).copy()

    def gru(prefix):
        return GruParams(**{n: tensors[f"{prefix}.{n}"] for n in
                            ("wz", "wr", "wh", "uz", "ur", "uh", "bz", "br", "bh")})

    return GruAttentionModel(
        fwd=gru("fwd"),
        bwd=gru("bwd"),
        attn=AttentionParams(
            w_proj=tensors["attn.w_proj"],
            b_proj=tensors["attn.b_proj"],
            w_score=tensors["attn.w_score"],
        ),
        w_out=tensors["w_out"],
        b_out=tensors["b_out"],
        classes=list(header["classes"]),
        embed_dim=header["embed_dim"],
        metadata=header.get("metadata", {}),
    )
