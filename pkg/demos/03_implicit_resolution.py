"""
Resolving implicit references with provenance
=============================================

Vague modifiers ("tall athlete") become predicates over a hinted column;
underspecified concepts ("performance") become measures, possibly derived
from several columns. Every interpretation carries a human-readable
provenance line, and the first interpretation is the default the charts use:
callers can switch to an alternate at any time.
"""

from pathlib import Path

from compareviz import build_plan, default_lexicon, load_dataset, parse

SAMPLES = Path(__file__).parent.parent / "sample_data"
lexicon = default_lexicon()

olympics = load_dataset((SAMPLES / "olympics.csv").read_text())
books = load_dataset((SAMPLES / "books.csv").read_text())

for utterance, dataset in [
    ("compare the performance of tall athletes", olympics),
    ("compare the physique of young athletes and senior athletes", olympics),
    ("compare the popularity of a cheap book and an expensive book", books),
]:
    parsed = parse(utterance, dataset, lexicon.terms)
    plan = build_plan(parsed, dataset, lexicon)
    print(f"\n{utterance}")
    for entry in plan.entries:
        print(f"  [{entry.role}] {entry.reference!r}")
        for i, interp in enumerate(entry.interpretations):
            marker = "*" if i == entry.chosen else " "
            print(f"   {marker} {i}: {interp.provenance}  "
                  f"(confidence {interp.confidence:.2f})")

# Switching the chosen interpretation re-points the rest of the pipeline.
parsed = parse("compare the popularity of all fiction books", books, lexicon.terms)
plan = build_plan(parsed, books, lexicon)
switched = plan.with_choice("popularity", 1)
print("\ndefault choice: ", plan.attribute_entry().choice.provenance)
print("switched choice:", switched.attribute_entry().choice.provenance)
