"""Phrase-vector coherence tests."""

from __future__ import annotations

import numpy as np
import pytest

from voxfeat.coherence import (
    COHERENCE_FEATURE_NAMES,
    EmbeddingTable,
    bundled_embeddings_path,
    coherence_feature_vector,
    coherence_features,
    coherence_series,
    load_embeddings,
    phrase_vector,
)
from voxfeat.errors import DimensionMismatch, EmptyFile
from voxfeat.textfeat import Token, Transcript, tokenize


def table(**vectors):
    dim = len(next(iter(vectors.values())))
    return EmbeddingTable(dim, {w: np.asarray(v, dtype=float) for w, v in vectors.items()})


def sent(*words, pos=None):
    return tuple(
        Token(w, w.lower(), pos=(pos[i] if pos else None)) for i, w in enumerate(words)
    )


class TestLoadEmbeddings:
    def test_with_header(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("2 2\na 1 0\nb 0 1\n")
        emb = load_embeddings(p)
        assert emb.dim == 2
        assert set(emb.vectors) == {"a", "b"}

    def test_headerless_inferred_dim(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("word 1 2 3 4 5\n")
        assert load_embeddings(p).dim == 5

    def test_dimension_mismatch(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("2 2\na 1 0\nb 0 1 7\n")
        with pytest.raises(DimensionMismatch):
            load_embeddings(p)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("\n\n")
        with pytest.raises(EmptyFile):
            load_embeddings(p)

    def test_duplicate_last_wins(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("a 1 0\na 0 2\n")
        np.testing.assert_array_equal(load_embeddings(p).vectors["a"], [0.0, 2.0])

    def test_bundled_table_loads(self):
        emb = load_embeddings(bundled_embeddings_path())
        assert emb.dim == 8
        assert len(emb.vectors) <= 50
        assert "the" in emb


class TestPhraseVector:
    def test_single_word_identity(self):
        emb = table(cat=[1.0, 2.0])
        np.testing.assert_array_equal(phrase_vector(sent("cat"), emb), [1.0, 2.0])

    def test_mean_of_two(self):
        emb = table(a=[1.0, 0.0], b=[0.0, 1.0])
        np.testing.assert_array_equal(phrase_vector(sent("a", "b"), emb), [0.5, 0.5])

    def test_all_oov_absent(self):
        emb = table(cat=[1.0, 0.0])
        assert phrase_vector(sent("dog", "bird"), emb) is None

    def test_oov_words_ignored(self):
        emb = table(cat=[2.0, 4.0])
        np.testing.assert_array_equal(phrase_vector(sent("zz", "cat"), emb), [2.0, 4.0])


class TestCoherenceSeries:
    def test_repeated_sentence_exactly_one(self):
        emb = table(the=[0.3, 0.7], cat=[0.9, 0.1])
        t = Transcript(tuple(sent("the", "cat") for _ in range(5)))
        for q in (0, 1, 2, 3):
            series = coherence_series(t, emb, q)
            assert series.size == 5 - (q + 1)
            assert np.all(series == 1.0)

    def test_orthogonal_alternation(self):
        emb = table(a=[1.0, 0.0], b=[0.0, 1.0])
        t = Transcript((sent("a"), sent("b"), sent("a")))
        np.testing.assert_array_equal(coherence_series(t, emb, 0), [0.0, 0.0])
        np.testing.assert_array_equal(coherence_series(t, emb, 1), [1.0])

    def test_too_few_phrases_empty(self):
        emb = table(a=[1.0, 0.0])
        t = Transcript((sent("a"), sent("a"), sent("a")))
        assert coherence_series(t, emb, 3).size == 0

    def test_cosine_bounds_random_sweep(self):
        rng = np.random.default_rng(31)
        words = [f"w{i}" for i in range(20)]
        for _ in range(50):
            emb = EmbeddingTable(6, {w: rng.standard_normal(6) for w in words})
            sentences = tuple(
                sent(*(words[j] for j in rng.integers(0, 20, rng.integers(1, 6))))
                for _ in range(rng.integers(4, 10))
            )
            t = Transcript(sentences)
            for q in (0, 1, 2, 3):
                series = coherence_series(t, emb, q)
                assert np.all(series >= -1.0 - 1e-12)
                assert np.all(series <= 1.0 + 1e-12)

    def test_scale_invariance(self):
        rng = np.random.default_rng(32)
        words = [f"w{i}" for i in range(8)]
        base = {w: rng.standard_normal(4) for w in words}
        t = Transcript(tuple(sent(words[i], words[(i + 3) % 8]) for i in range(6)))
        a = coherence_series(t, EmbeddingTable(4, base), 0)
        scaled = {w: 7.5 * v for w, v in base.items()}
        b = coherence_series(t, EmbeddingTable(4, scaled), 0)
        np.testing.assert_allclose(a, b, rtol=1e-12)

    def test_oov_sentence_skipped_transparently(self):
        emb = table(a=[1.0, 0.0], b=[0.0, 1.0])
        t1 = Transcript((sent("a"), sent("b"), sent("a")))
        t2 = Transcript((sent("a"), sent("zzz"), sent("b"), sent("a")))
        for q in (0, 1, 2, 3):
            np.testing.assert_array_equal(
                coherence_series(t1, emb, q), coherence_series(t2, emb, q)
            )

    def test_invalid_order(self):
        emb = table(a=[1.0])
        with pytest.raises(ValueError):
            coherence_series(Transcript((sent("a"),)), emb, 4)


class TestCoherenceFeatures:
    def test_repeated_sentence_raw_one_normalized_zero(self):
        emb = table(the=[0.3, 0.7], cat=[0.9, 0.1])
        t = Transcript(tuple(sent("the", "cat") for _ in range(6)))
        cf = coherence_features(t, emb)
        for q in (0, 1, 2, 3):
            assert cf.per_order[q]["mean"] == 1.0
            assert cf.per_order[q]["n_mean"] == 0.0

    def test_markers_and_phrase_length(self):
        emb = table(the=[1.0, 0.0], cat=[0.0, 1.0])
        t = Transcript((sent("the", "big", "cat", "sat", pos=["DET", "ADJ", "NOUN", "VERB"]),))
        cf = coherence_features(t, emb)
        assert cf.max_phrase_length == 4
        assert cf.determiner_rate == 0.25

    def test_single_sentence_stats_nan(self):
        emb = table(cat=[1.0, 1.0])
        t = Transcript((sent("cat"),))
        cf = coherence_features(t, emb)
        for q in (0, 1, 2, 3):
            assert np.isnan(cf.per_order[q]["mean"])
        assert cf.max_phrase_length == 1

    def test_untagged_determiner_rate_nan(self):
        emb = table(cat=[1.0, 0.0])
        cf = coherence_features(Transcript((sent("cat"),)), emb)
        assert np.isnan(cf.determiner_rate)

    def test_skipped_count(self):
        emb = table(cat=[1.0, 0.0])
        t = Transcript((sent("cat"), sent("qqq"), sent("cat")))
        cf = coherence_features(t, emb)
        assert cf.skipped_phrases == 1

    def test_feature_vector_names(self):
        emb = table(cat=[1.0, 0.0])
        cf = coherence_features(Transcript((sent("cat"),)), emb)
        fv = coherence_feature_vector(cf, "s")
        assert fv.names == COHERENCE_FEATURE_NAMES
        assert len(COHERENCE_FEATURE_NAMES) == 4 * 10 + 2

    def test_max_stat_ordering(self):
        rng = np.random.default_rng(33)
        words = [f"w{i}" for i in range(10)]
        emb = EmbeddingTable(5, {w: rng.standard_normal(5) for w in words})
        sentences = tuple(
            sent(*(words[j] for j in rng.integers(0, 10, 3))) for _ in range(12)
        )
        cf = coherence_features(Transcript(sentences), emb)
        for q in (0, 1, 2, 3):
            stats = cf.per_order[q]
            if not np.isnan(stats["mean"]):
                assert stats["min"] <= stats["mean"] <= stats["max"]

    def test_tokenize_integration_with_bundled_table(self):
        emb = load_embeddings(bundled_embeddings_path())
        t = tokenize("The cat sat on the mat. The dog ran. The cat sat on the mat.")
        cf = coherence_features(t, emb)
        assert cf.per_order[0]["mean"] is not None
        series = coherence_series(t, emb, 1)
        assert series.size == 1
        assert series[0] == 1.0  # identical first and third sentence
