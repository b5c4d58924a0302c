import random
from collections import Counter

import pytest

from plumber.errors import DocumentTooLarge, InvalidValue
from plumber.model import (
    Document,
    KGRef,
    LinkedTerm,
    Mention,
    Span,
    TextTriple,
    char_trigrams,
    jaccard,
    normalize_surface,
)


class TestNormalizeSurface:
    def test_empty(self):
        assert normalize_surface("") == ""

    def test_punctuation_and_collapse(self):
        assert normalize_surface("Albert  Einstein!") == "albert einstein"

    def test_abbreviation(self):
        assert normalize_surface("U.S.A.") == "usa"

    def test_whitespace_kinds_become_single_space(self):
        assert normalize_surface("a\t b\nc") == "a b c"

    def test_idempotent(self):
        rng = random.Random(7)
        alphabet = "aB cD!?.,;:'0129 \t\n-_éÜß乐"
        for _ in range(300):
            s = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 40)))
            once = normalize_surface(s)
            assert normalize_surface(once) == once


class TestCharTrigrams:
    def test_empty(self):
        assert char_trigrams("") == Counter()

    def test_two_chars(self):
        assert char_trigrams("ab") == Counter({"#ab": 1, "ab#": 1})

    def test_three_chars(self):
        assert char_trigrams("cat") == Counter({"#ca": 1, "cat": 1, "at#": 1})

    def test_single_char(self):
        assert char_trigrams("a") == Counter({"#a#": 1})

    def test_count_matches_length(self):
        rng = random.Random(3)
        for _ in range(100):
            s = "".join(rng.choice("abcde") for _ in range(rng.randrange(1, 30)))
            assert sum(char_trigrams(s).values()) == len(s)


class TestJaccard:
    def test_both_empty(self):
        assert jaccard(Counter(), Counter()) == 1.0

    def test_identical(self):
        c = char_trigrams("einstein")
        assert jaccard(c, c) == 1.0

    def test_partial_overlap(self):
        a = Counter({"x": 1, "y": 1})
        b = Counter({"y": 1, "z": 1})
        assert jaccard(a, b) == pytest.approx(1 / 3)

    def test_symmetric_and_bounded(self):
        rng = random.Random(11)
        for _ in range(200):
            a = Counter(rng.choices("abcdef", k=rng.randrange(0, 10)))
            b = Counter(rng.choices("abcdef", k=rng.randrange(0, 10)))
            ab, ba = jaccard(a, b), jaccard(b, a)
            assert ab == ba
            assert 0.0 <= ab <= 1.0
            assert jaccard(a, a) == 1.0


class TestSpan:
    def test_valid(self):
        assert Span(0, 3).end == 3

    @pytest.mark.parametrize("start,end", [(-1, 2), (2, 2), (3, 1)])
    def test_invalid(self, start, end):
        with pytest.raises(InvalidValue):
            Span(start, end)

    def test_check_within(self):
        Span(0, 3).check_within("abc")
        with pytest.raises(InvalidValue):
            Span(0, 4).check_within("abc")


class TestDocument:
    def test_requires_id(self):
        with pytest.raises(InvalidValue):
            Document(id="", text="x")

    def test_length_cap(self):
        Document(id="ok", text="x" * 100_000)
        with pytest.raises(DocumentTooLarge):
            Document(id="big", text="x" * 100_001)


class TestMention:
    def test_at_extracts_surface(self):
        m = Mention.at("Einstein developed relativity.", 0, 8)
        assert m.surface == "Einstein"
        assert (m.span.start, m.span.end) == (0, 8)

    def test_at_validates_bounds(self):
        with pytest.raises(InvalidValue):
            Mention.at("abc", 1, 9)


class TestTriplesAndRefs:
    def test_text_triple_rejects_empty_normalized_surface(self):
        m = Mention("ok", Span(0, 2))
        junk = Mention("!!!", Span(3, 6))
        with pytest.raises(InvalidValue):
            TextTriple(subject=m, predicate=junk, object=m)

    def test_kgref_requires_scheme(self):
        KGRef(iri="http://kg/e/1", kg="toykg")
        with pytest.raises(InvalidValue):
            KGRef(iri="kg/e/1", kg="toykg")

    def test_unlinked_term_confidence_zero(self):
        m = Mention("x", Span(0, 1))
        assert LinkedTerm.unlinked(m).confidence == 0.0
        with pytest.raises(InvalidValue):
            LinkedTerm(mention=m, ref=None, confidence=0.4)

    def test_confidence_bounds(self):
        m = Mention("x", Span(0, 1))
        ref = KGRef(iri="http://kg/e/1", kg="toykg")
        with pytest.raises(InvalidValue):
            LinkedTerm(mention=m, ref=ref, confidence=1.5)
