"""
Ranked chart recommendations and Vega-Lite emission
===================================================

Each comparison cardinality owns four catalog designs (A-P, sixteen total)
ranked by a fixed preference ordering. Emission turns a ranked design into a
self-contained Vega-Lite v5 document: rows inlined, multi-bar charts sorted
descending, the queried entity highlighted, values labeled on simple bars,
aggregates named on their axis, and interpretation provenance in the
subtitle. Serialization is canonical, so documents are byte-stable.
"""

from pathlib import Path

from compareviz import (Engine, build_plan, default_lexicon, emit,
                        load_dataset, parse, recommend, serialize_spec)

SAMPLES = Path(__file__).parent.parent / "sample_data"
OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

books = load_dataset((SAMPLES / "books.csv").read_text())
lexicon = default_lexicon()

utterance = "compare the price of The Alchemist to other books"
parsed = parse(utterance, books, lexicon.terms)
plan = build_plan(parsed, books, lexicon)

print(utterance)
for recommendation in recommend(parsed, plan):
    spec = emit(recommendation, parsed, plan, books)
    path = OUT / f"rank{recommendation.rank}_{spec.design}.vl.json"
    path.write_text(serialize_spec(spec), encoding="utf-8")
    print(f"  rank {recommendation.rank} (tier {recommendation.tier}) "
          f"design {spec.design}: {recommendation.design.summary}")
    print(f"    -> {path}")

# The engine facade bundles the whole pipeline into one response document.
engine = Engine(books, lexicon=lexicon)
document = engine.respond("compare the popularity of high rated fiction books "
                          "and high rated non fiction books")
print("\nfull response for an implicit set-to-set comparison:")
print("  query id:", document["query_id"])
print("  designs: ", [r["design"]["id"] for r in document["recommendations"]])
print("  caption: ", document["recommendations"][0]["spec"]["description"])
