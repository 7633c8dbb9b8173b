import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compareviz.config import EngineConfig
from compareviz.data import load_dataset
from compareviz.errors import (AmbiguityError, NotAComparisonError,
                               UnsupportedComparisonError)
from compareviz.parsing import (Cardinality, Plurality, RefKind, SchemaMatcher,
                                classify_cardinality, classify_concreteness,
                                match_reference, normalize_token, parse)


# ---------------------------------------------------------------------------
# normalize_token
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("raw,expected", [
    ("books", "book"),
    ("colour", "color"),
    ("colours", "color"),
    ("", ""),
    ("costly", "cost"),
    ("highly", "high"),
    ("Movies", "movy"),
    ("PG-13", "pg13"),
    ("Women's", "women"),
    ("Mass", "mass"),
    ("prices", "price"),
    ("ratings", "rating"),
    ("family", "family"),
    ("this", "this"),
])
def test_normalize_examples(raw, expected):
    assert normalize_token(raw) == expected


@given(st.text(max_size=40))
@settings(max_examples=300, deadline=None)
def test_normalize_idempotent(s):
    once = normalize_token(s)
    assert normalize_token(once) == once


# ---------------------------------------------------------------------------
# match_reference
# ---------------------------------------------------------------------------

def test_match_attribute_plural_phrase(netflix):
    m = match_reference("IMDB ratings", netflix)
    assert m.kind == "attribute" and m.attribute == "IMDB rating"


def test_match_value(netflix):
    m = match_reference("squid game", netflix)
    assert m.kind == "value"
    assert m.attribute == "Title" and m.value == "Squid Game"


def test_match_none(netflix):
    assert match_reference("popularity", netflix).kind == "none"


def test_match_ambiguous_attribute(netflix):
    # An exact name match beats partial ones: plural "ratings" resolves to
    # the content-rating column, not the IMDB/Rotten-tomatoes ones.
    m = match_reference("ratings", netflix)
    assert m.kind == "attribute" and m.attribute == "Rating"
    # A phrase contained in two attribute names equally well is ambiguous.
    ds = load_dataset("Team,Home score,Away score\nx,1,2\ny,3,4\n")
    with pytest.raises(AmbiguityError) as err:
        match_reference("score", ds)
    assert sorted(err.value.candidates) == ["Away score", "Home score"]


def test_fuzzy_match_behind_flag(netflix):
    config = EngineConfig(fuzzy_match=True)
    m = match_reference("budgett", netflix, config)
    assert m.kind == "attribute" and m.attribute == "Budget"
    assert match_reference("budgett", netflix).kind == "none"


# ---------------------------------------------------------------------------
# classification via parse
# ---------------------------------------------------------------------------

def test_one_to_one(netflix, lexicon):
    p = parse("compare the IMDB ratings of Squid Game and Midnight Mass",
              netflix, lexicon.terms)
    assert p.cardinality is Cardinality.ONE_TO_ONE
    assert p.concreteness.cell == "ev-ea"
    assert p.attribute_ref.attribute == "IMDB rating"


def test_one_to_many(netflix, lexicon):
    p = parse("compare the performance of Starling to other PG-13 movies",
              netflix, lexicon.terms)
    assert p.cardinality is Cardinality.ONE_TO_MANY
    assert p.concreteness.cell == "ev-ia"
    singleton = [r for r in p.value_refs if r.plurality is Plurality.SINGLETON]
    assert singleton and singleton[0].matches[0].value == "Starling"
    others = [r for r in p.value_refs if r.plurality is Plurality.SET][0]
    assert others.complement
    assert ("Rating", "PG-13") in [(m.attribute, m.value) for m in others.matches]


def test_within_set(netflix, lexicon):
    p = parse("compare the budgets across all US movies", netflix, lexicon.terms)
    assert p.cardinality is Cardinality.WITHIN_SET
    assert p.attribute_ref.attribute == "Budget"


def test_set_to_set(netflix, lexicon):
    p = parse("compare crime shows to thriller shows in terms of box office",
              netflix, lexicon.terms)
    assert p.cardinality is Cardinality.SET_TO_SET
    assert p.attribute_ref.attribute == "Box office"


def test_sales_ev_ea(sales, lexicon):
    p = parse("compare the sales for Washington and California", sales, lexicon.terms)
    assert p.cardinality is Cardinality.ONE_TO_ONE
    assert p.concreteness.cell == "ev-ea"


def test_implicit_attribute(netflix, lexicon):
    p = parse("compare the popularity of all movies in 2021", netflix, lexicon.terms)
    assert p.attribute_ref.kind is RefKind.IMPLICIT
    assert p.cardinality is Cardinality.WITHIN_SET


def test_explicit_one_to_many_with_event(olympics, lexicon):
    p = parse("compare the number of silver medals won by Rebecca Adlington "
              "to all other participants in the Women's Swimming Event",
              olympics, lexicon.terms)
    assert p.cardinality is Cardinality.ONE_TO_MANY
    assert p.concreteness.cell == "ev-ea"
    assert p.attribute_ref.attribute == "Silver"


def test_single_set_gradable(olympics, lexicon):
    p = parse("compare athletes who won a high number of gold medals",
              olympics, lexicon.terms)
    assert p.cardinality is Cardinality.WITHIN_SET
    assert p.value_refs[0].modifier == "high"
    assert p.attribute_ref.attribute == "Gold"


def test_not_a_comparison(netflix, lexicon):
    with pytest.raises(NotAComparisonError):
        parse("what time is it", netflix, lexicon.terms)
    with pytest.raises(NotAComparisonError):
        parse("show all movies", netflix, lexicon.terms)


def test_cross_attribute_rejected(olympics, lexicon):
    with pytest.raises(UnsupportedComparisonError):
        parse("compare the gold medals obtained by Rebecca Adlington to the "
              "bronze medals obtained by Michael Phelps", olympics, lexicon.terms)


def test_arity_rejected(netflix, lexicon):
    with pytest.raises(UnsupportedComparisonError):
        parse("compare the budgets of Squid Game, Dark and Starling",
              netflix, lexicon.terms)


def test_title_containing_joiner_stays_whole(books, lexicon):
    p = parse("compare the price of Harry Potter and the Cursed Child to Becoming",
              books, lexicon.terms)
    assert p.cardinality is Cardinality.ONE_TO_ONE
    surfaces = {r.matches[0].value for r in p.value_refs}
    assert surfaces == {"Harry Potter and the Cursed Child", "Becoming"}


def test_mixed_concreteness_flagged(books, lexicon):
    p = parse("compare a cheap book to Becoming in terms of price",
              books, lexicon.terms)
    assert p.concreteness.values == "implicit"
    assert p.concreteness.mixed_values is True
    assert p.concreteness.cell == "iv-ea"


# ---------------------------------------------------------------------------
# classify_* unit operations
# ---------------------------------------------------------------------------

def test_classify_cardinality_direct(netflix, lexicon):
    p1 = parse("compare Squid Game to Dark on IMDB rating", netflix, lexicon.terms)
    assert classify_cardinality(p1.value_refs) is Cardinality.ONE_TO_ONE
    assert classify_concreteness(p1.value_refs, p1.attribute_ref).cell == "ev-ea"


def test_classify_cardinality_empty():
    with pytest.raises(NotAComparisonError):
        classify_cardinality([])


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

SWAP_TEMPLATES = [
    ("compare the performance of {a} to {b}", "Starling", "other PG-13 movies"),
    ("compare the IMDB ratings of {a} and {b}", "Squid Game", "Midnight Mass"),
    ("compare {a} to {b} in terms of box office", "crime shows", "thriller shows"),
]


@pytest.mark.parametrize("template,a,b", SWAP_TEMPLATES)
def test_order_agnostic(netflix, lexicon, template, a, b):
    p1 = parse(template.format(a=a, b=b), netflix, lexicon.terms)
    p2 = parse(template.format(a=b, b=a), netflix, lexicon.terms)
    assert p1.cardinality == p2.cardinality
    assert p1.concreteness.cell == p2.concreteness.cell
    key = lambda r: (r.surface, r.kind, r.plurality)
    assert sorted(map(key, p1.value_refs)) == sorted(map(key, p2.value_refs))


def test_parse_deterministic(books, lexicon):
    utterance = "compare the popularity of a cheap book and an expensive book"
    assert parse(utterance, books, lexicon.terms) == parse(utterance, books, lexicon.terms)


def test_explicit_iff_matched(books, lexicon):
    p = parse("compare the price of The Alchemist to other books", books, lexicon.terms)
    for ref in p.value_refs:
        if ref.matches:
            assert ref.kind is RefKind.EXPLICIT
        if ref.kind is RefKind.IMPLICIT:
            assert not ref.matches or ref.modifier
