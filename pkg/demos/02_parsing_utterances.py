"""
Parsing comparison utterances
=============================

The parser classifies an utterance's cardinality (1-1, 1-n, n, n-m) and the
concreteness of its value/attribute references (explicit when they match the
schema after normalization, implicit otherwise). It is a deterministic rule
pipeline, so the same sentence always parses the same way.
"""

from pathlib import Path

from compareviz import NotAComparisonError, default_lexicon, load_dataset, parse

SAMPLES = Path(__file__).parent.parent / "sample_data"
netflix = load_dataset((SAMPLES / "netflix.csv").read_text())
lexicon = default_lexicon()

UTTERANCES = [
    "compare the IMDB ratings of Squid Game and Midnight Mass",
    "compare the performance of Starling to other PG-13 movies",
    "compare the budgets across all US movies",
    "compare crime shows to thriller shows in terms of box office",
    "compare the popularity of all movies in 2021",
    "compare a low budget movie to a high budget movie in terms of box office",
]

for utterance in UTTERANCES:
    parsed = parse(utterance, netflix, lexicon.terms)
    print(f"\n{utterance}")
    print(f"  cardinality {parsed.cardinality.value:4}  cell {parsed.concreteness.cell}"
          + ("  (mixed)" if parsed.concreteness.mixed_values else ""))
    attr = parsed.attribute_ref
    print(f"  attribute: {attr.attribute or attr.surface!r} ({attr.kind.value})")
    for ref in parsed.value_refs:
        extras = []
        if ref.matches:
            extras.append(", ".join(f"{m.attribute}={m.value}" for m in ref.matches))
        if ref.modifier:
            extras.append(f"modifier {ref.modifier!r}")
        if ref.complement:
            extras.append("complement")
        print(f"  value: {ref.surface!r} [{ref.kind.value}/{ref.plurality.value}]"
              + (f" ({'; '.join(extras)})" if extras else ""))

# Non-comparisons are rejected rather than guessed at.
try:
    parse("what time is it", netflix, lexicon.terms)
except NotAComparisonError as e:
    print(f"\nrejected: {e.message}")
