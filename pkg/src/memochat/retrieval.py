"""Keyword extraction, embedding expansion, and record scoring.

Pipeline: extract content words from the partner's utterance, expand each
keyword into its nearest-neighbor words, pool everything into a vocabulary
multiset, then score every memory record by how many vocabulary entries
(counted with multiplicity) appear among the record's words.

Tokenization is Unicode-aware with a CJK path: runs of Han/kana characters
are segmented by greedy longest-match against the vector table's vocabulary,
falling back to single characters, so Mandarin text works without a
segmenter dependency. A real POS tagger can replace keyword extraction by
swapping the tokenizer seam.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .embeddings import VectorTable
from .errors import InvalidArgument
from .model import MemoryRecord, PartnerPersona

DEFAULT_NEIGHBOR_K = 40
DEFAULT_TOP_N = 3
DEFAULT_STARTER_MAX = 4

_WORD_RE = re.compile(r"\w+", re.UNICODE)

_CJK_RANGES = (
    (0x3400, 0x4DBF),   # CJK extension A
    (0x4E00, 0x9FFF),   # CJK unified
    (0xF900, 0xFAFF),   # CJK compatibility
    (0x3040, 0x30FF),   # hiragana + katakana
)


def _is_cjk(ch: str) -> bool:
    code = ord(ch)
    return any(lo <= code <= hi for lo, hi in _CJK_RANGES)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One word per line, ``#`` comments ignored, NFC-lowercased."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                words.add(unicodedata.normalize("NFC", word).lower())
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    """The bundled English + Chinese lists."""
    data = resources.files("memochat").joinpath("data")
    merged: set[str] = set()
    for name in ("stopwords_en.txt", "stopwords_zh.txt"):
        text = data.joinpath(name).read_text(encoding="utf-8")
        for line in text.splitlines():
            word = line.strip()
            if word and not word.startswith("#"):
                merged.add(unicodedata.normalize("NFC", word).lower())
    return frozenset(merged)


class Tokenizer:
    """Lowercased NFC tokens split on Unicode word boundaries.

    ``lexicon`` (typically the vector table's vocabulary) drives the greedy
    longest-match segmentation of CJK runs; without one, CJK runs fall back
    to one token per character.
    """

    def __init__(self, lexicon: Iterable[str] = ()):
        self._cjk_lexicon: set[str] = set()
        self._max_cjk_len = 1
        for word in lexicon:
            norm = unicodedata.normalize("NFC", word).lower()
            if len(norm) > 1 and all(_is_cjk(ch) for ch in norm):
                self._cjk_lexicon.add(norm)
                self._max_cjk_len = max(self._max_cjk_len, len(norm))

    def tokenize(self, text: str) -> list[str]:
        normalized = unicodedata.normalize("NFC", text).lower()
        tokens: list[str] = []
        for match in _WORD_RE.finditer(normalized):
            chunk = match.group()
            if any(_is_cjk(ch) for ch in chunk):
                tokens.extend(self._split_mixed(chunk))
            else:
                tokens.append(chunk)
        return tokens

    def _split_mixed(self, chunk: str) -> list[str]:
        tokens: list[str] = []
        run = ""
        run_is_cjk = _is_cjk(chunk[0])
        for ch in chunk:
            if _is_cjk(ch) == run_is_cjk:
                run += ch
            else:
                tokens.extend(self._segment(run) if run_is_cjk else [run])
                run, run_is_cjk = ch, _is_cjk(ch)
        tokens.extend(self._segment(run) if run_is_cjk else [run])
        return tokens

    def _segment(self, run: str) -> list[str]:
        tokens = []
        i = 0
        while i < len(run):
            matched = None
            limit = min(self._max_cjk_len, len(run) - i)
            for length in range(limit, 1, -1):
                candidate = run[i : i + length]
                if candidate in self._cjk_lexicon:
                    matched = candidate
                    break
            if matched is None:
                matched = run[i]
            tokens.append(matched)
            i += len(matched)
        return tokens


def extract_keywords(
    utterance: str, stopwords: frozenset[str], tokenizer: Tokenizer
) -> list[str]:
    """Content words of an utterance: stopwords and short Latin-script tokens
    dropped, first occurrence kept, duplicates removed."""
    keywords: list[str] = []
    seen: set[str] = set()
    for token in tokenizer.tokenize(utterance):
        if token in stopwords:
            continue
        if len(token) < 2 and not all(_is_cjk(ch) for ch in token):
            continue
        if token not in seen:
            seen.add(token)
            keywords.append(token)
    return keywords


def build_vocabulary(
    keywords: Sequence[str], table: VectorTable, k: int = DEFAULT_NEIGHBOR_K
) -> Counter:
    """Multiset of each keyword plus its k neighbors.

    A word reachable from m keywords gets multiplicity m, so records that
    overlap several keywords score higher than single-topic matches. The
    keyword itself joins the set so exact matches outrank fuzzy ones.
    """
    if k < 1:
        raise InvalidArgument(f"neighbor count must be >= 1, got {k}")
    vocab: Counter = Counter()
    for keyword in keywords:
        vocab[keyword] += 1
        for neighbor in table.neighbors(keyword, k):
            vocab[neighbor] += 1
    return vocab


def record_words(record: MemoryRecord, tokenizer: Tokenizer) -> set[str]:
    """The record's deduplicated word set; stopwords intentionally kept."""
    return set(tokenizer.tokenize(record.text))


def score_record(record: MemoryRecord, vocab: Counter, tokenizer: Tokenizer) -> int:
    words = record_words(record, tokenizer)
    return sum(count for entry, count in vocab.items() if entry in words)


def _rank_key(score: int, record: MemoryRecord) -> tuple:
    # descending score, then most recent, then id for a total order
    return (-score, -record.created_at.timestamp(), record.id)


class Retriever:
    """Binds a vector table, stopword list, and knob settings together."""

    def __init__(
        self,
        table: VectorTable,
        stopwords: frozenset[str] | None = None,
        neighbor_k: int = DEFAULT_NEIGHBOR_K,
        top_n: int = DEFAULT_TOP_N,
        starter_max: int = DEFAULT_STARTER_MAX,
    ):
        self.table = table
        self.stopwords = default_stopwords() if stopwords is None else stopwords
        self.neighbor_k = neighbor_k
        self.top_n = top_n
        self.starter_max = starter_max
        self.tokenizer = Tokenizer(table.words())

    def extract_keywords(self, utterance: str) -> list[str]:
        return extract_keywords(utterance, self.stopwords, self.tokenizer)

    def build_vocabulary(self, keywords: Sequence[str]) -> Counter:
        return build_vocabulary(keywords, self.table, self.neighbor_k)

    def score_record(self, record: MemoryRecord, vocab: Counter) -> int:
        return score_record(record, vocab, self.tokenizer)

    def retrieve_relevant(
        self,
        utterance: str,
        records: Sequence[MemoryRecord],
        n: int | None = None,
    ) -> list[MemoryRecord]:
        """Top records by vocabulary overlap with the utterance.

        Zero-scoring records are excluded outright: padding the prompt with
        irrelevant memories would only inject noise.
        """
        n = self.top_n if n is None else n
        if n < 1:
            raise InvalidArgument(f"result count must be >= 1, got {n}")
        vocab = self.build_vocabulary(self.extract_keywords(utterance))
        scored = [(self.score_record(r, vocab), r) for r in records]
        ranked = sorted(
            (pair for pair in scored if pair[0] > 0),
            key=lambda pair: _rank_key(pair[0], pair[1]),
        )
        return [r for _, r in ranked[:n]]

    def select_starter_records(
        self,
        records: Sequence[MemoryRecord],
        persona: PartnerPersona,
        max_starters: int | None = None,
    ) -> list[MemoryRecord]:
        """Up to ``max_starters`` records matching the persona's topics.

        Greedy by score with a diversity constraint: a candidate whose
        best-matching topic is already represented is deferred, then used to
        backfill if diversity alone cannot reach the limit. When nothing
        scores (or there are no usable topics), the most recent records are
        returned instead so conversations can always start.
        """
        max_starters = self.starter_max if max_starters is None else max_starters
        if max_starters < 1:
            raise InvalidArgument(f"starter count must be >= 1, got {max_starters}")

        topic_keywords = [
            (topic, self.extract_keywords(topic))
            for topic in persona.topic_preferences
        ]
        topic_keywords = [(t, kw) for t, kw in topic_keywords if kw]

        by_recency = sorted(records, key=lambda r: (-r.created_at.timestamp(), r.id))
        if not topic_keywords:
            return by_recency[:max_starters]

        all_keywords: list[str] = []
        seen: set[str] = set()
        for _, kws in topic_keywords:
            for kw in kws:
                if kw not in seen:
                    seen.add(kw)
                    all_keywords.append(kw)
        total_vocab = self.build_vocabulary(all_keywords)
        topic_vocabs = [(t, self.build_vocabulary(kws)) for t, kws in topic_keywords]

        candidates = []
        for record in records:
            total = self.score_record(record, total_vocab)
            if total == 0:
                continue
            best_topic = max(
                topic_vocabs,
                key=lambda tv: self.score_record(record, tv[1]),
            )[0]
            candidates.append((total, record, best_topic))
        if not candidates:
            return by_recency[:max_starters]

        candidates.sort(key=lambda item: _rank_key(item[0], item[1]))
        picked: list[MemoryRecord] = []
        deferred: list[MemoryRecord] = []
        represented: set[str] = set()
        for _, record, topic in candidates:
            if len(picked) == max_starters:
                break
            if topic in represented:
                deferred.append(record)
            else:
                represented.add(topic)
                picked.append(record)
        for record in deferred:
            if len(picked) == max_starters:
                break
            picked.append(record)
        return picked
