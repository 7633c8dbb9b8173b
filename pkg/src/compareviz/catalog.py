"""The fixed 16-design chart catalog and its preference ordering.

Four designs per comparison cardinality (letters A-P). The ranking within a
cardinality is a fixed tier table validated against user preferences; it is
identical across all four concreteness cells, so the recommender needs only
the cardinality. Within a tier, catalog-letter order breaks ties so the
output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ResolutionError, SchemaError
from .parsing import Cardinality, ParsedComparison, RefKind
from .resolver import ResolutionPlan

RANKING_SOURCE = "built-in preference ordering v1"


@dataclass(frozen=True)
class DesignDescriptor:
    id: str  # letter A..P
    cardinality: Cardinality
    chart_type: str  # bar | unit | dot | scatter | box
    orientation: str  # vertical | horizontal | n/a
    arrangement: str  # single | grouped | stacked-adjacent | small-multiples
    annotation_rules: frozenset[str]
    summary: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "cardinality": self.cardinality.value,
            "chart_type": self.chart_type,
            "orientation": self.orientation,
            "arrangement": self.arrangement,
            "annotation_rules": sorted(self.annotation_rules),
            "summary": self.summary,
        }


def _design(letter, cardinality, chart_type, orientation, arrangement, rules, summary):
    return DesignDescriptor(letter, cardinality, chart_type, orientation,
                            arrangement, frozenset(rules), summary)


_C11 = Cardinality.ONE_TO_ONE
_C1N = Cardinality.ONE_TO_MANY
_CN = Cardinality.WITHIN_SET
_CNM = Cardinality.SET_TO_SET

_CATALOG: tuple[DesignDescriptor, ...] = (
    _design("A", _C11, "bar", "vertical", "single",
            {"value-labels-on-bars", "legend-for-implicit-titles"},
            "simple two-bar chart, one color per entity, values on top of the bars"),
    _design("B", _C11, "unit", "vertical", "stacked-adjacent",
            {"value-labels-on-bars", "legend-for-implicit-titles"},
            "adjacent unit chart, one labeled glyph per entity with the value in large type"),
    _design("C", _C11, "unit", "horizontal", "stacked-adjacent",
            {"value-labels-on-bars", "legend-for-implicit-titles"},
            "horizontal unit chart, entities stacked with large value labels"),
    _design("D", _C11, "bar", "vertical", "grouped",
            {"legend-for-implicit-titles"},
            "grouped bar chart with a color legend for the two entities"),
    _design("E", _C1N, "bar", "horizontal", "single",
            {"sorted-descending", "highlight-query-singleton", "legend-for-implicit-titles"},
            "horizontal multi-bar chart sorted descending, query entity highlighted"),
    _design("F", _C1N, "bar", "horizontal", "single",
            {"value-labels-on-bars", "highlight-query-singleton", "legend-for-implicit-titles"},
            "horizontal two-bar chart: the entity versus an aggregate of the others"),
    _design("G", _C1N, "dot", "horizontal", "single",
            {"sorted-descending", "highlight-query-singleton", "legend-for-implicit-titles"},
            "dot plot sorted descending, query entity highlighted"),
    _design("H", _C1N, "scatter", "n/a", "single",
            {"highlight-query-singleton", "legend-for-implicit-titles"},
            "scatterplot strip of the measure, query entity highlighted"),
    _design("I", _CN, "bar", "horizontal", "single",
            {"sorted-descending", "legend-for-implicit-titles"},
            "horizontal multi-bar chart of the set, sorted descending"),
    _design("J", _CN, "bar", "vertical", "small-multiples",
            {"sorted-descending", "legend-for-implicit-titles"},
            "small multiples, one simple bar per entity, ordered by the measure"),
    _design("K", _CN, "scatter", "n/a", "single",
            {"legend-for-implicit-titles"},
            "scatterplot strip of the measure for every entity in the set"),
    _design("L", _CN, "box", "horizontal", "single",
            {"legend-for-implicit-titles"},
            "box plot summarizing the measure across the set"),
    _design("M", _CNM, "bar", "vertical", "grouped",
            {"legend-for-implicit-titles"},
            "grouped bar chart, entity bars grouped and colored by set"),
    _design("N", _CNM, "bar", "vertical", "small-multiples",
            {"legend-for-implicit-titles"},
            "small multiples bar chart, one panel per set"),
    _design("O", _CNM, "bar", "vertical", "single",
            {"value-labels-on-bars", "legend-for-implicit-titles"},
            "simple vertical bar chart, one aggregated bar per set"),
    _design("P", _CNM, "scatter", "n/a", "single",
            {"legend-for-implicit-titles"},
            "scatterplot strip of the measure, colored by set"),
)

_BY_ID = {d.id: d for d in _CATALOG}

# Ordinal preference tiers per cardinality (tier 1 = most preferred).
PREFERENCE_TIERS: dict[Cardinality, tuple[tuple[str, ...], ...]] = {
    _C11: (("A", "B"), ("C", "D")),
    _C1N: (("E",), ("F",), ("G", "H")),
    _CN: (("I", "J"), ("K",), ("L",)),
    _CNM: (("M", "N", "O"), ("P",)),
}


def design_catalog() -> tuple[DesignDescriptor, ...]:
    """The fixed 16 catalog designs, A through P."""
    return _CATALOG


def design(letter: str) -> DesignDescriptor:
    try:
        return _BY_ID[letter.upper()]
    except KeyError:
        raise SchemaError(f"no design {letter!r} in the catalog (A..P)")


def catalog_document() -> dict:
    """Serializable catalog + tier tables for auditing the ranking."""
    return {
        "designs": [d.to_dict() for d in _CATALOG],
        "preference_tiers": {card.value: [list(t) for t in tiers]
                             for card, tiers in PREFERENCE_TIERS.items()},
        "ranking_source": RANKING_SOURCE,
    }


@dataclass(frozen=True)
class Recommendation:
    design: DesignDescriptor
    rank: int  # 1..4
    tier: int  # 1-based preference tier
    rationale: str

    def to_dict(self) -> dict:
        return {
            "design": self.design.to_dict(),
            "rank": self.rank,
            "tier": self.tier,
            "rationale": self.rationale,
        }


def recommend(parsed: ParsedComparison,
              plan: ResolutionPlan) -> list[Recommendation]:
    """The four designs of the parse's cardinality in preference order.

    The plan must cover every implicit reference of the parse; the ranking
    itself depends only on the cardinality.
    """
    _check_plan_coverage(parsed, plan)
    tiers = PREFERENCE_TIERS[parsed.cardinality]
    recommendations = []
    rank = 1
    for tier_index, letters in enumerate(tiers, start=1):
        for letter in letters:
            descriptor = _BY_ID[letter]
            tier_desc = f"tier {tier_index} of {len(tiers)}"
            rationale = (f"{descriptor.summary}; {tier_desc} for "
                         f"{parsed.cardinality.value} comparisons "
                         f"({RANKING_SOURCE})")
            recommendations.append(Recommendation(
                design=descriptor, rank=rank, tier=tier_index, rationale=rationale))
            rank += 1
    return recommendations


def _check_plan_coverage(parsed: ParsedComparison, plan: ResolutionPlan) -> None:
    if parsed.attribute_ref.kind is RefKind.IMPLICIT:
        if plan.attribute_entry() is None:
            raise ResolutionError(
                f"plan does not cover the implicit attribute "
                f"{parsed.attribute_ref.surface!r}")
    for ref in parsed.value_refs:
        if ref.kind is RefKind.IMPLICIT and plan.value_entry(ref.surface) is None:
            raise ResolutionError(
                f"plan does not cover the implicit value {ref.surface!r}")
