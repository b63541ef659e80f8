"""Narrative-structure tagging of text segments with a multinomial bag-of-words model."""

from __future__ import annotations

import hashlib
import json
import os
import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .corpus import tokenize
from .io import atomic_write_text, read_rows

DEFAULT_CATEGORIES = ("tension", "punishment", "reward", "victory")

MODEL_FORMAT = "storyarcs-structure-model"
MODEL_VERSION = 1


class ModelFormatError(ValueError):
    """Model file is truncated, tampered with, or from another version."""


@dataclass(frozen=True)
class LabeledSegment:
    text: str
    label: str


@dataclass(frozen=True)
class StructureModel:
    categories: tuple[str, ...]
    vocabulary: dict[str, int]
    log_priors: np.ndarray  # (n_categories,)
    log_likelihoods: np.ndarray  # (n_categories, n_features)
    smoothing_alpha: float = 1.0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StructureModel):
            return NotImplemented
        return (
            self.categories == other.categories
            and self.vocabulary == other.vocabulary
            and self.smoothing_alpha == other.smoothing_alpha
            and np.array_equal(self.log_priors, other.log_priors)
            and np.array_equal(self.log_likelihoods, other.log_likelihoods)
        )


@dataclass(frozen=True)
class StructurePrediction:
    label: str
    log_scores: dict[str, float]


def train(
    data: Sequence[LabeledSegment],
    alpha: float = 1.0,
    categories: Sequence[str] | None = None,
) -> StructureModel:
    """Fit log priors from label frequencies and additively smoothed word likelihoods.

    ``categories`` fixes the category order (and so the tie-break); by
    default it is the sorted set of labels in ``data``.
    """
    if not alpha > 0:
        raise ValueError(f"smoothing alpha must be > 0, got {alpha}")
    if categories is None:
        categories = sorted({d.label for d in data})
    categories = tuple(categories)
    if not categories:
        raise ValueError("category coverage: no training data")
    if len(set(categories)) != len(categories):
        raise ValueError("category names must be unique")
    cat_index = {c: i for i, c in enumerate(categories)}
    unknown = sorted({d.label for d in data} - set(categories))
    if unknown:
        raise ValueError(f"labels not in the declared categories: {unknown}")

    docs = [(cat_index[d.label], Counter(tokenize(d.text).words)) for d in data]
    doc_counts = Counter(c for c, _ in docs)
    empty = [c for c in categories if doc_counts[cat_index[c]] == 0]
    if empty:
        raise ValueError(f"category coverage: no training examples for {empty}")

    vocab_words = sorted({w for _, counts in docs for w in counts})
    vocabulary = {w: i for i, w in enumerate(vocab_words)}
    counts = np.zeros((len(categories), len(vocabulary)))
    for c, words in docs:
        for w, k in words.items():
            counts[c, vocabulary[w]] += k

    n_docs = np.array([doc_counts[i] for i in range(len(categories))], dtype=float)
    log_priors = np.log(n_docs) - np.log(n_docs.sum())
    smoothed = counts + alpha
    if vocabulary:
        log_likelihoods = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    else:
        log_likelihoods = smoothed
    return StructureModel(categories, vocabulary, log_priors, log_likelihoods, float(alpha))


def predict(model: StructureModel, text: str) -> StructurePrediction:
    scores = model.log_priors.copy()
    for w, k in Counter(tokenize(text).words).items():
        j = model.vocabulary.get(w)
        if j is not None:
            scores += k * model.log_likelihoods[:, j]
    # np.argmax returns the first maximum, i.e. category order breaks ties
    best = int(np.argmax(scores))
    return StructurePrediction(model.categories[best], dict(zip(model.categories, map(float, scores))))


def evaluate(model: StructureModel, data: Sequence[LabeledSegment]) -> dict:
    """Accuracy plus per-class precision and recall."""
    predicted = [predict(model, d.text).label for d in data]
    actual = [d.label for d in data]
    per_class = {}
    for c in model.categories:
        tp = sum(p == c and a == c for p, a in zip(predicted, actual))
        n_pred = sum(p == c for p in predicted)
        n_true = sum(a == c for a in actual)
        per_class[c] = {
            "precision": tp / n_pred if n_pred else None,
            "recall": tp / n_true if n_true else None,
            "support": n_true,
        }
    correct = sum(p == a for p, a in zip(predicted, actual))
    return {
        "n": len(data),
        "accuracy": correct / len(data) if data else None,
        "per_class": per_class,
    }


def split(
    data: Sequence[LabeledSegment], train_ratio: float = 0.8, seed: int = 0
) -> tuple[list[LabeledSegment], list[LabeledSegment]]:
    """Stratified seeded split; every category keeps at least one example on each side.

    ``train_ratio=1.0`` keeps everything for training.
    """
    if not 0 < train_ratio <= 1:
        raise ValueError(f"train ratio must be in (0, 1], got {train_ratio}")
    by_label: dict[str, list[LabeledSegment]] = {}
    for d in data:
        by_label.setdefault(d.label, []).append(d)
    if not by_label:
        raise ValueError("category coverage: no training data")
    rng = random.Random(seed)
    train_set, test_set = [], []
    for label in sorted(by_label):
        items = by_label[label][:]
        rng.shuffle(items)
        if train_ratio == 1:
            train_set.extend(items)
            continue
        if len(items) < 2:
            raise ValueError(
                f"category coverage: {label!r} has {len(items)} example(s); "
                "need at least 2 to hold one out"
            )
        n_train = min(max(1, round(train_ratio * len(items))), len(items) - 1)
        train_set.extend(items[:n_train])
        test_set.extend(items[n_train:])
    return train_set, test_set


def load_labeled(path: str | os.PathLike) -> list[LabeledSegment]:
    """Two-column ``label<TAB>text`` (or comma) file; a ``label,text`` header is optional."""
    header, rows = read_rows(path)
    if not header:
        return []
    if [h.lower() for h in header[:2]] != ["label", "text"]:
        rows = [header] + rows
    out = []
    for lineno, row in enumerate(rows, start=1):
        if len(row) < 2 or not row[0]:
            raise ValueError(f"{path}: row {lineno}: expected label and text")
        out.append(LabeledSegment(text=",".join(row[1:]), label=row[0]))
    return out


def _body(model: StructureModel) -> dict:
    vocab = sorted(model.vocabulary, key=model.vocabulary.__getitem__)
    return {
        "categories": list(model.categories),
        "vocabulary": vocab,
        "smoothing_alpha": model.smoothing_alpha,
        "log_priors": [float(x) for x in model.log_priors],
        "log_likelihoods": [[float(x) for x in row] for row in model.log_likelihoods],
    }


def _digest(body: dict) -> str:
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def model_to_json(model: StructureModel) -> str:
    body = _body(model)
    return json.dumps({"format": MODEL_FORMAT, "version": MODEL_VERSION, "sha256": _digest(body), **body})


def model_from_json(text: str) -> StructureModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"model file is not valid JSON: {e}") from None
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ModelFormatError("not a structure model file")
    if doc.get("version") != MODEL_VERSION:
        raise ModelFormatError(f"unsupported model version {doc.get('version')!r}; expected {MODEL_VERSION}")
    keys = ("categories", "vocabulary", "smoothing_alpha", "log_priors", "log_likelihoods")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise ModelFormatError(f"model file missing fields: {missing}")
    body = {k: doc[k] for k in keys}
    if doc.get("sha256") != _digest(body):
        # category order is part of the contract: any reordering lands here
        raise ModelFormatError("model checksum mismatch; file was modified after saving")
    categories = tuple(body["categories"])
    vocab = body["vocabulary"]
    priors = np.array(body["log_priors"], dtype=float)
    lik = np.array(body["log_likelihoods"], dtype=float)
    if priors.shape != (len(categories),) or lik.shape != (len(categories), len(vocab)):
        raise ModelFormatError("model arrays do not match categories/vocabulary")
    return StructureModel(categories, {w: i for i, w in enumerate(vocab)}, priors, lik, float(body["smoothing_alpha"]))


def save_model(model: StructureModel, path: str | os.PathLike) -> Path:
    return atomic_write_text(path, model_to_json(model))


def load_model(path: str | os.PathLike) -> StructureModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_json(fh.read())


def make_synthetic_corpus(
    categories: Sequence[str] = DEFAULT_CATEGORIES,
    per_class: int = 40,
    markers_per_class: int = 8,
    shared_vocab: int = 50,
    words_per_doc: int = 30,
    marker_rate: float = 0.3,
    overlap: float = 0.0,
    seed: int = 0,
    markers: Mapping[str, Sequence[str]] | None = None,
    filler: Sequence[str] | None = None,
) -> list[LabeledSegment]:
    """Synthetic labeled segments: class-exclusive marker words mixed into shared filler.

    With ``overlap > 0`` that fraction of each document's marker slots draws
    from another class's markers, blurring the class boundaries.
    """
    rng = random.Random(seed)
    if markers is None:
        markers = {c: [f"{c}{_alpha_suffix(i)}" for i in range(markers_per_class)] for c in categories}
    if filler is None:
        filler = [f"filler{_alpha_suffix(i)}" for i in range(shared_vocab)]
    out = []
    for c in categories:
        others = [o for o in categories if o != c]
        for _ in range(per_class):
            words = []
            for _ in range(words_per_doc):
                if rng.random() < marker_rate:
                    source = c
                    if others and rng.random() < overlap:
                        source = rng.choice(others)
                    words.append(rng.choice(markers[source]))
                else:
                    words.append(rng.choice(filler))
            out.append(LabeledSegment(" ".join(words), c))
    rng.shuffle(out)
    return out


def _alpha_suffix(i: int) -> str:
    # tokenize keeps letters only, so number words with letters
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(ord("a") + r) + s
    return s
