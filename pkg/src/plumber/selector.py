"""Pipeline selection: text features, trained scorer, argmax choice.

The scorer is a multi-output linear regressor predicting each pipeline's
per-document micro F1 from text features, trained by full-batch gradient
descent on a ridge-regularized squared loss. Text enters through a
pluggable encoder; the shipped encoder is eight handcrafted statistics
plus an L2-normalized hashed bag of tokens, which keeps selection fully
deterministic and offline. Predictions are clipped to [0, 1] only at
selection time so the training objective stays smooth.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from .errors import PlumberError
from .feedback import FeedbackStore, blend
from .native.lexicon import Lexicon, default_lexicon
from .native.tokenize import tokenize, tokenize_sentences
from .registry import Pipeline, Registry

HANDCRAFTED_DIM = 8
DEFAULT_HASH_DIM = 256
FEATURE_LAYOUT_VERSION = 1

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_FNV_MASK = (1 << 64) - 1


class DimensionMismatch(PlumberError):
    code = "dimension_mismatch"


class DivergenceDetected(PlumberError):
    code = "divergence_detected"


class ModelMissing(PlumberError):
    code = "model_missing"


class StaleModel(PlumberError):
    code = "stale_model"


class NoPipelineMatchesConstraints(PlumberError):
    code = "no_pipeline_match"


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _FNV_MASK
    return h


class TextEncoder(Protocol):
    """Anything that maps text to a fixed-length feature vector."""

    @property
    def dim(self) -> int: ...

    def encode(self, text: str) -> np.ndarray: ...


class HashedTokenEncoder:
    """The shipped encoder: handcrafted statistics + hashed token counts."""

    def __init__(self, hash_dim: int = DEFAULT_HASH_DIM, lexicon: Lexicon | None = None):
        if hash_dim <= 0:
            raise DimensionMismatch("hash_dim must be positive")
        self.hash_dim = hash_dim
        self.lexicon = lexicon or default_lexicon()

    @property
    def dim(self) -> int:
        return HANDCRAFTED_DIM + self.hash_dim

    def encode(self, text: str) -> np.ndarray:
        return featurize(text, self.hash_dim, self.lexicon)


def featurize(
    text: str, hash_dim: int = DEFAULT_HASH_DIM, lexicon: Lexicon | None = None
) -> np.ndarray:
    lexicon = lexicon or default_lexicon()
    sentences = tokenize_sentences(text)
    tokens = tokenize(text)
    n_tokens = len(tokens)
    n_sentences = len(sentences)
    n_pronouns = sum(1 for t in tokens if t.core.lower() in lexicon.pronouns)
    n_caps = sum(1 for t in tokens if t.core[0].isupper())
    n_digits = sum(1 for t in tokens if t.core.isdigit())
    mean_sentence_len = (
        sum(len(s) for s in sentences) / n_sentences if n_sentences else 0.0
    )
    commas = text.count(",")

    vec = np.zeros(HANDCRAFTED_DIM + hash_dim)
    vec[0] = min(1.0, n_tokens / 100.0)
    vec[1] = min(1.0, n_sentences / 10.0)
    vec[2] = min(1.0, n_pronouns / 10.0)
    vec[3] = n_pronouns / n_tokens if n_tokens else 0.0
    vec[4] = n_caps / n_tokens if n_tokens else 0.0
    vec[5] = n_digits / n_tokens if n_tokens else 0.0
    vec[6] = min(1.0, mean_sentence_len / 50.0)
    vec[7] = min(1.0, commas / n_tokens) if n_tokens else 0.0

    for t in tokens:
        vec[HANDCRAFTED_DIM + fnv1a64(t.core.lower().encode("utf-8")) % hash_dim] += 1.0
    norm = np.linalg.norm(vec[HANDCRAFTED_DIM:])
    if norm > 0:
        vec[HANDCRAFTED_DIM:] /= norm
    return vec


@dataclass(frozen=True)
class Hyperparameters:
    eta: float = 0.05
    lam: float = 1e-4
    epochs: int = 500
    seed: int = 0
    hash_dim: int = DEFAULT_HASH_DIM

    def __post_init__(self):
        if self.eta <= 0:
            raise DimensionMismatch("learning rate must be positive")
        if self.lam < 0 or self.epochs < 0 or self.hash_dim <= 0:
            raise DimensionMismatch("hyperparameters out of range")


@dataclass
class TrainingSet:
    """Feature matrix X (N x D) with per-pipeline F1 targets Y (N x P)."""

    X: np.ndarray
    Y: np.ndarray
    pipeline_ids: tuple[str, ...]

    def __post_init__(self):
        if self.X.ndim != 2 or self.Y.ndim != 2 or self.X.shape[0] != self.Y.shape[0]:
            raise DimensionMismatch(
                f"X {self.X.shape} and Y {self.Y.shape} are inconsistent"
            )
        if self.Y.shape[1] != len(self.pipeline_ids):
            raise DimensionMismatch("one target column per pipeline required")
        if np.any(self.Y < 0) or np.any(self.Y > 1):
            raise DimensionMismatch("targets must lie in [0, 1]")


@dataclass
class SelectorModel:
    pipeline_ids: tuple[str, ...]
    W: np.ndarray  # (P, D)
    b: np.ndarray  # (P,)
    hyper: Hyperparameters = field(default_factory=Hyperparameters)

    def __post_init__(self):
        if self.W.shape != (len(self.pipeline_ids), self.W.shape[1]):
            raise DimensionMismatch("weight rows must match pipeline_ids")
        if self.b.shape != (len(self.pipeline_ids),):
            raise DimensionMismatch("bias length must match pipeline_ids")

    def predict(self, x: np.ndarray) -> np.ndarray:
        if x.shape != (self.W.shape[1],):
            raise DimensionMismatch(
                f"feature vector has dim {x.shape}, model expects {self.W.shape[1]}"
            )
        return self.W @ x + self.b

    def scores(self, x: np.ndarray) -> dict[str, float]:
        raw = np.clip(self.predict(x), 0.0, 1.0)
        return {pid: float(s) for pid, s in zip(self.pipeline_ids, raw)}


def loss(model: SelectorModel, training: TrainingSet) -> float:
    if training.X.shape[1] != model.W.shape[1]:
        raise DimensionMismatch("feature dim differs between model and data")
    if training.Y.shape[1] != model.W.shape[0]:
        raise DimensionMismatch("target dim differs between model and data")
    n = training.X.shape[0]
    with np.errstate(over="ignore", invalid="ignore"):  # inf loss signals divergence
        residual = training.X @ model.W.T + model.b - training.Y
        data_term = float(np.sum(residual**2)) / (2 * n)
        reg_term = model.hyper.lam / 2 * float(np.sum(model.W**2))
        return data_term + reg_term


def gradients(model: SelectorModel, training: TrainingSet) -> tuple[np.ndarray, np.ndarray]:
    n = training.X.shape[0]
    residual = training.X @ model.W.T + model.b - training.Y  # (N, P)
    grad_w = residual.T @ training.X / n + model.hyper.lam * model.W
    grad_b = residual.mean(axis=0)
    return grad_w, grad_b


def train(
    training: TrainingSet, hyper: Hyperparameters | None = None
) -> tuple[SelectorModel, list[float]]:
    """Full-batch gradient descent from zero initialization.

    Returns the final model and the post-update loss per epoch. The seed
    only drives optional example shuffling, which is off by default, so
    training is deterministic.
    """
    hyper = hyper or Hyperparameters()
    n, d = training.X.shape
    p = training.Y.shape[1]
    if n < 1 or p < 1:
        raise DimensionMismatch("need at least one example and one pipeline")
    model = SelectorModel(
        pipeline_ids=training.pipeline_ids,
        W=np.zeros((p, d)),
        b=np.zeros(p),
        hyper=hyper,
    )
    trajectory: list[float] = []
    for _ in range(hyper.epochs):
        grad_w, grad_b = gradients(model, training)
        model.W = model.W - hyper.eta * grad_w
        model.b = model.b - hyper.eta * grad_b
        current = loss(model, training)
        if not np.isfinite(current):
            raise DivergenceDetected(
                f"loss became non-finite after {len(trajectory) + 1} epochs; reduce eta"
            )
        trajectory.append(current)
    return model, trajectory


def save_model(path: str | Path, model: SelectorModel) -> None:
    obj = {
        "pipeline_ids": list(model.pipeline_ids),
        "W": model.W.tolist(),
        "b": model.b.tolist(),
        "hyperparameters": {
            "eta": model.hyper.eta,
            "lambda": model.hyper.lam,
            "epochs": model.hyper.epochs,
            "seed": model.hyper.seed,
            "hash_dim": model.hyper.hash_dim,
        },
        "feature_layout_version": FEATURE_LAYOUT_VERSION,
    }
    Path(path).write_text(json.dumps(obj, indent=2), encoding="utf-8")


def load_model(path: str | Path) -> SelectorModel:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if obj.get("feature_layout_version") != FEATURE_LAYOUT_VERSION:
        raise ModelMissing(
            f"model file {path} uses unsupported feature layout "
            f"{obj.get('feature_layout_version')!r}"
        )
    hp = obj["hyperparameters"]
    return SelectorModel(
        pipeline_ids=tuple(obj["pipeline_ids"]),
        W=np.array(obj["W"], dtype=float),
        b=np.array(obj["b"], dtype=float),
        hyper=Hyperparameters(
            eta=hp["eta"],
            lam=hp["lambda"],
            epochs=hp["epochs"],
            seed=hp["seed"],
            hash_dim=hp["hash_dim"],
        ),
    )


def build_training_set(
    corpus_texts: Sequence[str],
    profiles: Sequence,
    hash_dim: int = DEFAULT_HASH_DIM,
    lexicon: Lexicon | None = None,
) -> TrainingSet:
    """Pair featurized corpus texts with per-pipeline per-document F1."""
    ordered = sorted(profiles, key=lambda p: p.pipeline_id)
    for profile in ordered:
        if len(profile.per_document_f1) != len(corpus_texts):
            raise DimensionMismatch(
                f"profile {profile.pipeline_id} covers {len(profile.per_document_f1)} "
                f"documents, corpus has {len(corpus_texts)}"
            )
    X = np.stack([featurize(text, hash_dim, lexicon) for text in corpus_texts])
    Y = np.array([[p.per_document_f1[i] for p in ordered] for i in range(len(corpus_texts))])
    return TrainingSet(X=X, Y=Y, pipeline_ids=tuple(p.pipeline_id for p in ordered))


class Selector:
    """Manual pass-through validation plus automatic model-based choice."""

    def __init__(
        self,
        registry: Registry,
        model: SelectorModel | None = None,
        encoder: TextEncoder | None = None,
        feedback: FeedbackStore | None = None,
        blend_feedback: bool = True,
        beta: float = 0.3,
    ):
        self.registry = registry
        self.model = model
        self.encoder = encoder
        self.feedback = feedback
        self.blend_feedback = blend_feedback
        self.beta = beta

    def select_manual(
        self, coref_id: str, extractor_id: str, linking_ids: Sequence[str], kg: str
    ) -> tuple[Pipeline, dict[str, float]]:
        return (
            self.registry.validate_manual_selection(coref_id, extractor_id, tuple(linking_ids), kg),
            {},
        )

    def select_automatic(
        self, text: str, kg: str | None = None
    ) -> tuple[Pipeline, dict[str, float]]:
        if self.model is None:
            raise ModelMissing("no selector model loaded; train one with `plumber train`")
        pool, _ = self.registry.enumerate_pipelines()
        by_id = {p.id: p for p in pool}
        missing = [pid for pid in self.model.pipeline_ids if pid not in by_id]
        if missing:
            raise StaleModel(
                f"model refers to pipelines absent from the pool: {', '.join(sorted(missing))}"
            )

        encoder = self.encoder or HashedTokenEncoder(self.model.hyper.hash_dim)
        scores = self.model.scores(encoder.encode(text))
        if self.blend_feedback and self.feedback is not None:
            scores = {
                pid: blend(s, self.feedback.stats_for(pid), self.beta)
                for pid, s in scores.items()
            }

        eligible = [
            pid for pid in self.model.pipeline_ids if kg is None or by_id[pid].kg == kg
        ]
        if not eligible:
            raise NoPipelineMatchesConstraints(f"no scored pipeline aligns to KG {kg!r}")
        best = min(eligible, key=lambda pid: (-scores[pid], pid))
        return by_id[best], scores
