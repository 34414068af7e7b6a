"""One-versus-all L2-regularized logistic regression.

Trained per class by deterministic full-batch gradient descent with
backtracking step halving, so identical inputs always yield identical
models.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, NumericError


@dataclass
class LinearConfig:
    lam: float = 1.0
    max_epochs: int = 500
    tol: float = 1e-8
    lr0: float = 1.0
    min_step: float = 1e-12


@dataclass
class LinearModel:
    classes: list[str]
    weights: np.ndarray  # (C, F)
    biases: np.ndarray  # (C,)
    lam: float
    metadata: dict = field(default_factory=dict)

    def save(self, path) -> None:
        obj = {
            "format": "occaudit-linear",
            "version": 1,
            "classes": self.classes,
            "lam": self.lam,
            "weights": [[float(x) for x in row] for row in self.weights],
            "biases": [float(x) for x in self.biases],
            "metadata": self.metadata,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "LinearModel":
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        if obj.get("format") != "occaudit-linear":
            raise DataError(f"{path}: not a linear model file")
        return cls(
            classes=list(obj["classes"]),
            weights=np.array(obj["weights"]),
            biases=np.array(obj["biases"]),
            lam=obj["lam"],
            metadata=obj.get("metadata", {}),
        )


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def binary_loss_and_grad(
    w: np.ndarray, b: float, x: np.ndarray, t: np.ndarray, lam: float
) -> tuple[float, np.ndarray, float]:
    """Mean logistic loss + (lam/2)*||w||^2 (bias unregularized) and gradients."""
    z = x @ w + b
    # log(1 + exp(z)) - t*z, numerically stable
    loss = float(np.mean(np.logaddexp(0.0, z) - t * z)) + 0.5 * lam * float(w @ w)
    p = _sigmoid(z)
    resid = (p - t) / len(t)
    grad_w = x.T @ resid + lam * w
    grad_b = float(np.sum(resid))
    return loss, grad_w, grad_b


def train_linear(
    features: np.ndarray,
    labels: list[str],
    config: LinearConfig = LinearConfig(),
    seed: int = 0,
) -> LinearModel:
    """Fit one binary logistic classifier per class on dense features."""
    x = np.asarray(features, dtype=float)
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise DataError(f"need at least 2 classes, got {classes}")
    n, f = x.shape
    y = np.array(labels)
    weights = np.zeros((len(classes), f))
    biases = np.zeros(len(classes))
    final_losses = []
    epochs_used = []
    for ci, cls in enumerate(classes):
        t = (y == cls).astype(float)
        w = np.zeros(f)
        b = 0.0
        step = config.lr0
        loss, gw, gb = binary_loss_and_grad(w, b, x, t, config.lam)
        epoch = 0
        while epoch < config.max_epochs:
            epoch += 1
            while True:
                w_new = w - step * gw
                b_new = b - step * gb
                new_loss, new_gw, new_gb = binary_loss_and_grad(w_new, b_new, x, t, config.lam)
                if np.isfinite(new_loss) and new_loss <= loss:
                    break
                step *= 0.5
                if step < config.min_step:
                    break
            if step < config.min_step:
                break
            rel = abs(loss - new_loss) / max(1.0, abs(loss))
            w, b, loss, gw, gb = w_new, b_new, new_loss, new_gw, new_gb
            step *= 1.2
            if rel < config.tol:
                break
        if not np.isfinite(loss):
            raise NumericError(f"non-finite loss while training class {cls!r}")
        weights[ci] = w
        biases[ci] = b
        final_losses.append(loss)
        epochs_used.append(epoch)
    return LinearModel(
        classes=classes,
        weights=weights,
        biases=biases,
        lam=config.lam,
        metadata={
            "seed": seed,
            "epochs": epochs_used,
            "final_loss": final_losses,
            "n_train": n,
        },
    )


def predict_scores(model: LinearModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != model.weights.shape[1]:
        raise DataError(
            f"feature dimension {x.shape[-1]} does not match model ({model.weights.shape[1]})"
        )
    return _sigmoid(x @ model.weights.T + model.biases)


def predict_linear(model: LinearModel, x: np.ndarray) -> tuple[str, np.ndarray]:
    """Argmax of per-class sigmoid scores; ties go to the lowest class index."""
    scores = predict_scores(model, x)
    return model.classes[int(np.argmax(scores))], scores


def predict_batch(model: LinearModel, x: np.ndarray) -> list[str]:
    scores = predict_scores(model, x)
    return [model.classes[i] for i in np.argmax(scores, axis=1)]
