import pytest
from hypothesis import given, strategies as st

from occaudit.corpus import Biography
from occaudit.errors import DataError
from occaudit.scrub import (
    DEFAULT_INDICATORS,
    IndicatorConfig,
    scrub,
    scrub_text,
    swap_indicators,
    swap_text,
)


def _bio(feature_text, first="Nancy"):
    return Biography(
        first=first, middle=None, last="Lee", occupation="nurse", gender="female",
        full_text=f"{first} Lee is a nurse. {feature_text}", feature_text=feature_text,
    )


class TestDefaults:
    def test_scrub_list_is_eleven_indicators(self):
        assert DEFAULT_INDICATORS.scrub_list == frozenset(
            {"he", "she", "her", "his", "him", "hers", "himself", "herself",
             "mr", "mrs", "ms"}
        )

    def test_mapping_covers_scrub_list(self):
        assert set(DEFAULT_INDICATORS.mapping) == set(DEFAULT_INDICATORS.scrub_list)


class TestScrub:
    def test_paper_example(self):
        bio = _bio("She graduated from Lehigh University. Nancy has years of experience.")
        assert scrub(bio) == "graduated from Lehigh University. has years of experience."

    def test_no_indicators_unchanged(self):
        bio = _bio("Works on databases and teaches classes.", first="Alex")
        assert scrub(bio) == "Works on databases and teaches classes."

    def test_punctuation_stripped_token_match(self):
        bio = _bio("Mr. Smith said he left", first="Nancy")
        assert scrub(bio) == "Smith said left"

    def test_output_has_no_indicator_tokens(self):
        bio = _bio("She told him that her idea, his plan, and Mrs. Jones agreed. Nancy laughed.")
        out = scrub(bio).lower()
        tokens = {t.strip(".,;:!?\"'()") for t in out.split()}
        assert not tokens & DEFAULT_INDICATORS.scrub_list
        assert "nancy" not in tokens


class TestSwap:
    def test_female_to_male(self):
        assert swap_text("She praised her team", "X") == "He praised his team"

    def test_male_to_female(self):
        assert swap_text("He gave his notes to him", "X") == "She gave her notes to her"

    def test_first_name_deleted(self):
        bio = _bio("Nancy praised her team.")
        assert swap_indicators(bio) == "praised his team."

    def test_capitalization_preserved(self):
        assert swap_text("Mrs. Jones met Mr. Smith", "X") == "Mr. Jones met Ms. Smith"

    def test_punctuation_reattached(self):
        assert swap_text("(she) left, with him.", "X") == "(he) left, with her."

    @given(
        st.lists(
            st.sampled_from(["he", "she", "his", "her", "himself", "herself",
                             "team", "work", "plan"]),
            min_size=1, max_size=12,
        )
    )
    def test_restricted_involution(self, tokens):
        # restricted to {he, she, his, her, himself, herself} the map is
        # an involution, so a double swap restores the text
        text = " ".join(tokens)
        assert swap_text(swap_text(text, "Zzz"), "Zzz") == text

    @given(
        st.lists(
            st.sampled_from(sorted(DEFAULT_INDICATORS.scrub_list) +
                            ["work", "plan", "Nancy", "team"]),
            max_size=15,
        )
    )
    def test_scrub_of_swap_equals_scrub(self, tokens):
        text = " ".join(tokens)
        swapped = swap_text(text, "Nancy")
        assert scrub_text(swapped, "Nancy") == scrub_text(text, "Nancy")

    def test_non_indicator_tokens_preserved(self):
        text = "Dr. Reed wrote the paper; she edited it herself."
        out = swap_text(text, "Zzz")
        kept = [t for t in text.split() if t.strip(".,;:!?\"'()").lower()
                not in DEFAULT_INDICATORS.scrub_list]
        swapped_kept = [t for t in out.split() if t.strip(".,;:!?\"'()").lower()
                        not in DEFAULT_INDICATORS.scrub_list]
        assert kept == swapped_kept


class TestConfigIO:
    def test_tsv_round_trip(self, tmp_path):
        path = tmp_path / "ind.tsv"
        DEFAULT_INDICATORS.to_tsv(path)
        again = IndicatorConfig.from_tsv(path)
        assert again.mapping == DEFAULT_INDICATORS.mapping

    def test_scrub_only_token(self, tmp_path):
        path = tmp_path / "ind.tsv"
        path.write_text("lady\t\nshe\the\n")
        cfg = IndicatorConfig.from_tsv(path)
        assert cfg.mapping == {"lady": None, "she": "he"}
        assert swap_text("the lady said she left", "X", cfg) == "the said he left"

    def test_duplicate_token_rejected(self, tmp_path):
        path = tmp_path / "ind.tsv"
        path.write_text("she\the\nshe\thim\n")
        with pytest.raises(DataError):
            IndicatorConfig.from_tsv(path)
