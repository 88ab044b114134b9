"""Word-vector table with exact nearest-neighbor lookup.

The table is a flat file (``word<TAB>f1 f2 ... fD``) loaded once and then
immutable, so concurrent reads need no locking. Search is brute force:
corpora here are small and correctness beats speed.
"""

from __future__ import annotations

import logging
import unicodedata
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidArgument, MalformedVectorTable, ZeroNorm

logger = logging.getLogger(__name__)


def normalize_word(word: str) -> str:
    return unicodedata.normalize("NFC", word).lower()


def cosine_similarity(a: Sequence[float], b: Sequence[float]) -> float:
    """dot(a,b) / (|a|·|b|), clamped to [-1, 1] against float drift."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape or va.ndim != 1:
        raise DimensionMismatch(f"vector dimensions differ: {va.shape} vs {vb.shape}")
    norm_a = float(np.linalg.norm(va))
    norm_b = float(np.linalg.norm(vb))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroNorm("cosine similarity is undefined for zero-norm vectors")
    value = float(np.dot(va, vb) / (norm_a * norm_b))
    return max(-1.0, min(1.0, value))


class VectorTable:
    """Immutable word → vector map, loaded from a flat text file."""

    def __init__(self, words: list[str], matrix: np.ndarray):
        if matrix.ndim != 2 or len(words) != matrix.shape[0]:
            raise ValueError("words and matrix rows must align")
        self._words = words
        self._matrix = matrix
        self._norms = np.linalg.norm(matrix, axis=1)
        self._index = {w: i for i, w in enumerate(words)}

    @property
    def dimension(self) -> int:
        return self._matrix.shape[1]

    def __len__(self) -> int:
        return len(self._words)

    def __contains__(self, word: str) -> bool:
        return normalize_word(word) in self._index

    def words(self) -> list[str]:
        return list(self._words)

    def vector(self, word: str) -> np.ndarray | None:
        idx = self._index.get(normalize_word(word))
        return None if idx is None else self._matrix[idx]

    def neighbors(self, word: str, k: int) -> list[str]:
        """The k words most cosine-similar to ``word``, best first.

        The query word itself is excluded. Ties break lexicographically so
        results are stable across runs. Unknown words yield an empty list:
        user text routinely contains out-of-vocabulary tokens.
        """
        if k < 1:
            raise InvalidArgument(f"neighbor count must be >= 1, got {k}")
        query = normalize_word(word)
        idx = self._index.get(query)
        if idx is None:
            return []
        qvec = self._matrix[idx]
        sims = self._matrix @ qvec / (self._norms * self._norms[idx])
        ranked = sorted(
            ((float(sims[i]), self._words[i]) for i in range(len(self._words)) if i != idx),
            key=lambda pair: (-pair[0], pair[1]),
        )
        return [w for _, w in ranked[:k]]

    @classmethod
    def load(cls, path: str | Path) -> "VectorTable":
        """Parse a table file; malformed lines raise with their line number."""
        path = Path(path)
        words: list[str] = []
        rows: list[np.ndarray] = []
        seen: set[str] = set()
        dimension: int | None = None
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                stripped = line.strip("\n")
                if not stripped.strip() or stripped.lstrip().startswith("#"):
                    continue
                if "\t" not in stripped:
                    raise MalformedVectorTable(
                        f"{path}:{lineno}: expected 'word<TAB>floats', no tab found"
                    )
                raw_word, raw_values = stripped.split("\t", 1)
                word = normalize_word(raw_word.strip())
                if not word:
                    raise MalformedVectorTable(f"{path}:{lineno}: empty word")
                try:
                    values = np.array(
                        [float(v) for v in raw_values.split()], dtype=np.float64
                    )
                except ValueError as exc:
                    raise MalformedVectorTable(
                        f"{path}:{lineno}: non-numeric component ({exc})"
                    ) from None
                if dimension is None:
                    if len(values) < 2:
                        raise MalformedVectorTable(
                            f"{path}:{lineno}: dimension must be >= 2, got {len(values)}"
                        )
                    dimension = len(values)
                elif len(values) != dimension:
                    raise MalformedVectorTable(
                        f"{path}:{lineno}: expected {dimension} components, got {len(values)}"
                    )
                if not np.any(values):
                    raise MalformedVectorTable(
                        f"{path}:{lineno}: all-zero vector for {word!r}"
                    )
                if word in seen:
                    logger.warning(
                        "%s:%d: duplicate word %r; keeping first occurrence",
                        path, lineno, word,
                    )
                    continue
                seen.add(word)
                words.append(word)
                rows.append(values)
        if dimension is None:
            raise MalformedVectorTable(f"{path}: no data lines")
        return cls(words, np.vstack(rows))
