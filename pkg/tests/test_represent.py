import numpy as np
import pytest
from hypothesis import given, strategies as st

from occaudit.errors import DataError
from occaudit.represent import (
    EmbeddingTable,
    bow_vector,
    build_vocab,
    load_embeddings,
    save_embeddings,
    synth_embeddings,
    tokenize,
    we_vector,
)


class TestTokenize:
    def test_punctuation_split(self):
        assert tokenize("She graduated, with honours!") == ["she", "graduated", "with", "honours"]

    def test_empty(self):
        assert tokenize("") == []

    def test_hyphen_and_digits(self):
        assert tokenize("Lehigh-University 1998") == ["lehigh", "university", "1998"]


class TestBuildVocab:
    def test_min_freq_one(self):
        v = build_vocab([["a", "a", "b"]], min_freq=1)
        assert v.tokens == ("a", "b")

    def test_min_freq_two(self):
        v = build_vocab([["a", "a", "b"]], min_freq=2)
        assert v.tokens == ("a",)

    def test_lexicographic_tie_break(self):
        v = build_vocab([["zebra", "apple", "zebra", "apple", "mango"]], min_freq=1)
        assert v.tokens == ("apple", "zebra", "mango")

    def test_empty_vocab_error(self):
        with pytest.raises(DataError):
            build_vocab([["a"]], min_freq=5)

    def test_index_round_trip(self):
        v = build_vocab([["x", "y", "z", "x"]], min_freq=1)
        for i, tok in enumerate(v.tokens):
            assert v.index[tok] == i

    def test_tsv_round_trip(self, tmp_path):
        v = build_vocab([["x", "y", "z", "x"]], min_freq=1)
        v.to_tsv(tmp_path / "v.tsv")
        from occaudit.represent import Vocabulary

        again = Vocabulary.from_tsv(tmp_path / "v.tsv")
        assert again == v


class TestBowVector:
    @pytest.fixture
    def vocab(self):
        return build_vocab([["a", "a", "b", "c"]], min_freq=1)

    def test_presence_not_counts(self, vocab):
        vec = bow_vector(["a", "a", "b"], vocab)
        assert vec.indices == (vocab.index["a"], vocab.index["b"])

    def test_empty_tokens(self, vocab):
        assert bow_vector([], vocab).indices == ()

    def test_all_oov(self, vocab):
        assert bow_vector(["zzz", "qqq"], vocab).indices == ()

    @given(st.lists(st.sampled_from(["a", "b", "c", "oov"]), max_size=10))
    def test_duplication_idempotent(self, tokens):
        vocab = build_vocab([["a", "b", "c"]], min_freq=1)
        assert bow_vector(tokens + tokens, vocab) == bow_vector(tokens, vocab)


class TestWeVector:
    @pytest.fixture
    def table(self):
        return EmbeddingTable(
            vectors={"a": np.array([1.0, 0.0]), "b": np.array([0.0, 1.0])}, dim=2
        )

    def test_mean_of_types(self, table):
        assert np.allclose(we_vector(["a", "b"], table), [0.5, 0.5])

    def test_no_in_table_types(self, table):
        assert np.allclose(we_vector(["zzz"], table), [0.0, 0.0])

    def test_type_level_semantics(self, table):
        assert np.allclose(we_vector(["a", "a", "b"], table), we_vector(["a", "b"], table))

    def test_occurrence_mode_differs(self, table):
        occ = we_vector(["a", "a", "b"], table, unique_types=False)
        assert np.allclose(occ, [2 / 3, 1 / 3])

    @given(st.permutations(["a", "b", "a", "zzz"]))
    def test_permutation_invariant(self, tokens):
        table = EmbeddingTable(
            vectors={"a": np.array([1.0, 0.0]), "b": np.array([0.0, 1.0])}, dim=2
        )
        assert np.allclose(we_vector(list(tokens), table), we_vector(["a", "b"], table))


class TestEmbeddingIO:
    def test_load(self, tmp_path):
        p = tmp_path / "emb.txt"
        p.write_text("2 3\nfoo 1 2 3\nbar 0.5 -1 0\n")
        table = load_embeddings(p)
        assert table.dim == 3
        assert np.allclose(table["bar"], [0.5, -1.0, 0.0])

    def test_dimension_mismatch(self, tmp_path):
        p = tmp_path / "emb.txt"
        p.write_text("1 3\nfoo 1 2\n")
        with pytest.raises(DataError):
            load_embeddings(p)

    def test_duplicate_token(self, tmp_path):
        p = tmp_path / "emb.txt"
        p.write_text("2 2\nfoo 1 2\nfoo 3 4\n")
        with pytest.raises(DataError):
            load_embeddings(p)

    def test_malformed_header(self, tmp_path):
        p = tmp_path / "emb.txt"
        p.write_text("hello\nfoo 1 2\n")
        with pytest.raises(DataError):
            load_embeddings(p)

    def test_save_round_trip(self, tmp_path):
        vocab = build_vocab([["x", "y", "z"]], min_freq=1)
        table = synth_embeddings(vocab, dim=4, seed=3)
        save_embeddings(table, tmp_path / "emb.txt")
        again = load_embeddings(tmp_path / "emb.txt")
        for tok in vocab.tokens:
            assert np.array_equal(again[tok], table[tok])


class TestSynthEmbeddings:
    @pytest.fixture
    def vocab(self):
        return build_vocab([["x", "y", "z"]], min_freq=1)

    def test_deterministic(self, vocab):
        a = synth_embeddings(vocab, dim=8, seed=1)
        b = synth_embeddings(vocab, dim=8, seed=1)
        for tok in vocab.tokens:
            assert np.array_equal(a[tok], b[tok])

    def test_unit_norm(self, vocab):
        table = synth_embeddings(vocab, dim=8, seed=1)
        for tok in vocab.tokens:
            assert abs(np.linalg.norm(table[tok]) - 1.0) < 1e-12

    def test_seed_changes_table(self, vocab):
        a = synth_embeddings(vocab, dim=8, seed=1)
        b = synth_embeddings(vocab, dim=8, seed=2)
        assert not np.array_equal(a["x"], b["x"])
