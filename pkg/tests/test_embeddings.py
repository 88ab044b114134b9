"""Vector table: cosine math, neighbor ordering, file parsing."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from memochat.embeddings import VectorTable, cosine_similarity, normalize_word
from memochat.errors import DimensionMismatch, InvalidArgument, MalformedVectorTable, ZeroNorm

# Frozen before the build from a 50-digit arbitrary-precision evaluation of
# 32 / (sqrt(14) * sqrt(77)).
COS_123_456 = 0.9746318461970763


def test_cosine_identity():
    v = [0.3, -1.2, 4.5]
    assert cosine_similarity(v, v) == pytest.approx(1.0, abs=1e-9)


def test_cosine_orthogonal():
    assert cosine_similarity([1, 0], [0, 1]) == pytest.approx(0.0, abs=1e-12)


def test_cosine_matches_precomputed_oracle():
    assert cosine_similarity([1, 2, 3], [4, 5, 6]) == pytest.approx(COS_123_456, abs=1e-12)


def test_cosine_zero_norm_rejected():
    with pytest.raises(ZeroNorm):
        cosine_similarity([0.0, 0.0], [1.0, 2.0])


def test_cosine_dimension_mismatch_rejected():
    with pytest.raises(DimensionMismatch):
        cosine_similarity([1.0, 2.0], [1.0, 2.0, 3.0])


finite_floats = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
)


@given(
    st.lists(finite_floats, min_size=2, max_size=8),
    st.lists(finite_floats, min_size=2, max_size=8),
)
def test_cosine_symmetric(a, b):
    if len(a) != len(b):
        a, b = a[: min(len(a), len(b))], b[: min(len(a), len(b))]
    # squared tiny components can underflow the norm to zero
    assume(np.linalg.norm(a) > 0 and np.linalg.norm(b) > 0)
    assert cosine_similarity(a, b) == pytest.approx(cosine_similarity(b, a), abs=1e-12)


@given(
    st.lists(finite_floats, min_size=3, max_size=3),
    st.lists(finite_floats, min_size=3, max_size=3),
    st.floats(min_value=1e-3, max_value=1e3),
)
def test_cosine_scale_invariant(a, b, c):
    scaled = [c * x for x in a]
    assume(
        np.linalg.norm(a) > 0
        and np.linalg.norm(b) > 0
        and np.linalg.norm(scaled) > 0
    )
    assert cosine_similarity(scaled, b) == pytest.approx(cosine_similarity(a, b), abs=1e-9)


def test_cosine_stays_in_unit_interval():
    # near-parallel vectors can drift past 1.0 in floating point
    a = [0.1] * 8
    b = [0.1 + 1e-17] * 8
    assert -1.0 <= cosine_similarity(a, b) <= 1.0


# -- neighbors ---------------------------------------------------------------


def test_neighbors_mini_table_exact_order(mini_table):
    # by-hand cosines against east(1,0): northeast=0.7071, north=0, south=0,
    # west=-1; the north/south tie breaks lexicographically.
    assert mini_table.neighbors("east", 3) == ["northeast", "north", "south"]
    assert mini_table.neighbors("east", 4) == ["northeast", "north", "south", "west"]


def test_neighbors_excludes_query_word(mini_table):
    assert "east" not in mini_table.neighbors("east", 10)


def test_neighbors_unknown_word_is_empty(mini_table):
    assert mini_table.neighbors("inland", 5) == []


def test_neighbors_k_cap(toy_table):
    result = toy_table.neighbors("park", 40)
    assert len(result) == 40
    assert len(set(result)) == 40
    assert "park" not in result


def test_neighbors_k_must_be_positive(mini_table):
    with pytest.raises(InvalidArgument):
        mini_table.neighbors("east", 0)


def test_neighbors_deterministic(toy_table):
    assert toy_table.neighbors("weather", 40) == toy_table.neighbors("weather", 40)


def _brute_force_neighbors(table: VectorTable, word: str, k: int) -> list[str]:
    query = table.vector(word)
    if query is None:
        return []
    scored = []
    for other in table.words():
        if other == normalize_word(word):
            continue
        scored.append((cosine_similarity(query, table.vector(other)), other))
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [w for _, w in scored[:k]]


def test_neighbors_equal_brute_force_on_random_tables(tmp_path):
    rng = random.Random(99)
    for trial in range(5):
        n_words = rng.randint(3, 60)
        dim = rng.randint(2, 6)
        lines = []
        for i in range(n_words):
            vec = [rng.uniform(-1, 1) for _ in range(dim)]
            if not any(vec):
                vec[0] = 1.0
            lines.append(f"w{i:03d}\t" + " ".join(f"{x:.5f}" for x in vec))
        path = tmp_path / f"table{trial}.txt"
        path.write_text("\n".join(lines), encoding="utf-8")
        table = VectorTable.load(path)
        for k in (1, 2, 5, n_words, n_words + 10):
            query = f"w{rng.randrange(n_words):03d}"
            assert table.neighbors(query, k) == _brute_force_neighbors(table, query, k), (
                f"trial={trial} k={k} query={query}"
            )


def test_neighbors_equal_brute_force_on_toy_table(toy_table):
    for word in ("park", "weather", "孙子", "apple"):
        for k in (3, 40):
            assert toy_table.neighbors(word, k) == _brute_force_neighbors(toy_table, word, k)


# -- file parsing ------------------------------------------------------------


def test_load_infers_and_enforces_dimension(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("a\t1 2 3\nb\t1 2\n", encoding="utf-8")
    with pytest.raises(MalformedVectorTable, match=r"bad\.txt:2"):
        VectorTable.load(path)


def test_load_rejects_zero_vector_with_line_number(tmp_path):
    path = tmp_path / "zero.txt"
    path.write_text("a\t1 2\nb\t0 0\n", encoding="utf-8")
    with pytest.raises(MalformedVectorTable, match=r"zero\.txt:2"):
        VectorTable.load(path)


def test_load_rejects_garbage_with_line_number(tmp_path):
    path = tmp_path / "garbage.txt"
    path.write_text("a\t1 2\nb\tone two\n", encoding="utf-8")
    with pytest.raises(MalformedVectorTable, match=r"garbage\.txt:2"):
        VectorTable.load(path)


def test_load_skips_comments_and_blank_lines(tmp_path):
    path = tmp_path / "ok.txt"
    path.write_text("# header\n\na\t1 2\n# middle\nb\t3 4\n", encoding="utf-8")
    table = VectorTable.load(path)
    assert len(table) == 2


def test_load_normalizes_case_and_keeps_first_duplicate(tmp_path):
    path = tmp_path / "dup.txt"
    path.write_text("Apple\t1 0\napple\t0 1\n", encoding="utf-8")
    table = VectorTable.load(path)
    assert len(table) == 1
    assert list(table.vector("APPLE")) == [1.0, 0.0]


def test_load_rejects_one_dimensional_table(tmp_path):
    path = tmp_path / "thin.txt"
    path.write_text("a\t1\n", encoding="utf-8")
    with pytest.raises(MalformedVectorTable):
        VectorTable.load(path)
