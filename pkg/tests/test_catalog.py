import itertools

import pytest

from compareviz.catalog import (PREFERENCE_TIERS, catalog_document, design,
                                design_catalog, recommend)
from compareviz.errors import ResolutionError
from compareviz.parsing import Cardinality, parse
from compareviz.resolver import ResolutionPlan, build_plan

from conftest import BOOKS_QUERY_MATRIX

GROUPS = {
    Cardinality.ONE_TO_ONE: "ABCD",
    Cardinality.ONE_TO_MANY: "EFGH",
    Cardinality.WITHIN_SET: "IJKL",
    Cardinality.SET_TO_SET: "MNOP",
}


def test_catalog_has_16_designs():
    catalog = design_catalog()
    assert len(catalog) == 16
    assert [d.id for d in catalog] == list("ABCDEFGHIJKLMNOP")
    for cardinality, letters in GROUPS.items():
        group = [d for d in catalog if d.cardinality is cardinality]
        assert [d.id for d in group] == list(letters)


def test_lookup_E():
    d = design("E")
    assert d.chart_type == "bar" and d.orientation == "horizontal"
    assert "highlight-query-singleton" in d.annotation_rules
    assert "sorted-descending" in d.annotation_rules


def test_lookup_B():
    d = design("B")
    assert d.chart_type == "unit"
    assert "value-labels-on-bars" in d.annotation_rules


def test_catalog_document_serializable():
    doc = catalog_document()
    assert len(doc["designs"]) == 16
    assert doc["preference_tiers"]["1-n"] == [["E"], ["F"], ["G", "H"]]


def _ranks(recommendations):
    return {r.design.id: r.rank for r in recommendations}


def _tiers(recommendations):
    return {r.design.id: r.tier for r in recommendations}


@pytest.fixture(scope="module")
def matrix_recommendations(books, lexicon):
    out = {}
    for (cardinality, cell), utterance in BOOKS_QUERY_MATRIX.items():
        parsed = parse(utterance, books, lexicon.terms)
        assert parsed.cardinality.value == cardinality, utterance
        assert parsed.concreteness.cell == cell, utterance
        plan = build_plan(parsed, books, lexicon)
        out[(cardinality, cell)] = recommend(parsed, plan)
    return out


def test_every_cell_has_four_ranked_designs(matrix_recommendations):
    for (cardinality, _), recs in matrix_recommendations.items():
        assert sorted(r.rank for r in recs) == [1, 2, 3, 4]
        letters = {r.design.id for r in recs}
        assert letters == set(GROUPS[Cardinality(cardinality)])
        tiers = [r.tier for r in sorted(recs, key=lambda r: r.rank)]
        assert tiers == sorted(tiers)  # tier non-decreasing with rank


def test_ordinal_constraints(matrix_recommendations):
    for (cardinality, cell), recs in matrix_recommendations.items():
        ranks = _ranks(recs)
        if cardinality == "1-1":
            assert max(ranks["A"], ranks["B"]) < min(ranks["C"], ranks["D"])
        elif cardinality == "1-n":
            assert ranks["E"] < ranks["F"] < min(ranks["G"], ranks["H"])
        elif cardinality == "n":
            assert max(ranks["I"], ranks["J"]) < ranks["K"] < ranks["L"]
        else:
            assert max(ranks["M"], ranks["N"], ranks["O"]) < ranks["P"]


def test_ranking_identical_across_concreteness(matrix_recommendations):
    for cardinality in ("1-1", "1-n", "n", "n-m"):
        cells = [matrix_recommendations[(cardinality, cell)]
                 for cell in ("ev-ea", "ev-ia", "iv-ea", "iv-ia")]
        baselines = [(_ranks(recs), _tiers(recs)) for recs in cells]
        assert all(b == baselines[0] for b in baselines)


def test_nm_tiers(matrix_recommendations):
    recs = matrix_recommendations[("n-m", "iv-ia")]
    ranks, tiers = _ranks(recs), _tiers(recs)
    assert [ranks[letter] for letter in "MNOP"] == [1, 2, 3, 4]
    assert [tiers[letter] for letter in "MNOP"] == [1, 1, 1, 2]


def test_scatterplots_never_rank_first(matrix_recommendations):
    for recs in matrix_recommendations.values():
        for r in recs:
            if r.design.chart_type == "scatter":
                assert r.rank > 1


def test_recommend_deterministic(books, lexicon):
    parsed = parse(BOOKS_QUERY_MATRIX[("1-n", "ev-ea")], books, lexicon.terms)
    plan = build_plan(parsed, books, lexicon)
    first = [(r.design.id, r.rank, r.tier, r.rationale) for r in recommend(parsed, plan)]
    second = [(r.design.id, r.rank, r.tier, r.rationale) for r in recommend(parsed, plan)]
    assert first == second


def test_recommend_requires_plan_coverage(books, lexicon):
    parsed = parse("compare the popularity of expensive books", books, lexicon.terms)
    with pytest.raises(ResolutionError):
        recommend(parsed, ResolutionPlan())


def test_tiers_cover_every_letter_once():
    for cardinality, tiers in PREFERENCE_TIERS.items():
        letters = list(itertools.chain.from_iterable(tiers))
        assert sorted(letters) == sorted(GROUPS[cardinality])
