"""Unigram language model over item labels.

Estimates how common a phrase is in text, which the classifier uses as the
rarity feature -log p(phrase). Add-alpha smoothing with a single shared
unseen-token class: p(t) = (count(t) + alpha) / (total + alpha * (vocab + 1)),
so the probabilities of all seen tokens plus the unseen class sum to one.
"""

from __future__ import annotations

import gzip
import json
import math
from typing import Iterable

from kblinker.artifacts import read_artifact, write_artifact
from kblinker.tokenization import tokens_of

ARTIFACT_KIND = "language-model"
TOKENIZER_VERSION = 1


class UnigramLM:
    def __init__(self, counts: dict[str, int], smoothing_alpha: float = 1.0):
        if smoothing_alpha <= 0:
            raise ValueError("smoothing_alpha must be > 0")
        self.counts = counts
        self.total_tokens = sum(counts.values())
        self.vocab_size = len(counts)
        self.smoothing_alpha = smoothing_alpha

    def token_log_prob(self, token: str) -> float:
        alpha = self.smoothing_alpha
        denom = self.total_tokens + alpha * (self.vocab_size + 1)
        return math.log((self.counts.get(token, 0) + alpha) / denom)

    def phrase_log_prob(self, phrase: str) -> float:
        """Sum of token log-probabilities; the empty token sequence scores 0."""
        return sum(self.token_log_prob(t) for t in tokens_of(phrase))

    # -- persistence ---------------------------------------------------------

    def save(self, path, store_revision: int | None = None) -> None:
        meta = {
            "smoothing_alpha": self.smoothing_alpha,
            "tokenizer_version": TOKENIZER_VERSION,
            "total_tokens": self.total_tokens,
            "vocab_size": self.vocab_size,
            "store_revision": store_revision,
        }
        payload = gzip.compress(
            json.dumps(self.counts, ensure_ascii=False, sort_keys=True).encode("utf-8")
        )
        write_artifact(path, ARTIFACT_KIND, meta, payload)

    @classmethod
    def load(cls, path) -> tuple["UnigramLM", dict]:
        meta, payload = read_artifact(path, ARTIFACT_KIND)
        if meta.get("tokenizer_version") != TOKENIZER_VERSION:
            from kblinker.artifacts import ArtifactError

            raise ArtifactError(
                f"language model was built with tokenizer version "
                f"{meta.get('tokenizer_version')}, expected {TOKENIZER_VERSION}"
            )
        counts = json.loads(gzip.decompress(payload).decode("utf-8"))
        return cls(counts, smoothing_alpha=meta["smoothing_alpha"]), meta


def train_lm(phrases: Iterable[str], smoothing_alpha: float = 1.0) -> UnigramLM:
    """Count tokens over a finite phrase stream with the canonical tokenizer."""
    counts: dict[str, int] = {}
    empty = True
    for phrase in phrases:
        empty = False
        for token in tokens_of(phrase):
            counts[token] = counts.get(token, 0) + 1
    if empty:
        raise ValueError("empty corpus: no phrases to train on")
    return UnigramLM(counts, smoothing_alpha=smoothing_alpha)


def phrase_log_prob(lm: UnigramLM, phrase: str) -> float:
    return lm.phrase_log_prob(phrase)
