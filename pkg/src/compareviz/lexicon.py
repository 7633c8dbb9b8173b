"""Lexicon: the vocabulary that maps vague modifiers ("high rated") and
underspecified concepts ("popularity") onto dataset attributes.

The lexicon is data, not code: a JSON document validated at load time. The
shipped default covers streaming-, medals-, and bookstore-shaped schemas plus
generic gradable adjectives; deployments extend it with their own file or the
COMPAREVIZ_LEXICON environment variable (CLI).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .config import DEFAULT_CONFIG, EngineConfig
from .errors import ResolutionError, SchemaError
from .parsing import GRADABLE_ADJECTIVES, gradable_stem, normalize_phrase

ROLES = ("value-modifier", "attribute-concept")
POLARITIES = ("high", "low", "none")

# Wildcard hint pattern: ground on the comparison's own explicit attribute.
WILDCARD = "*"


@dataclass(frozen=True)
class ThresholdPolicy:
    kind: str  # "mean" | "median" | "percentile" | "constant"
    value: Optional[float] = None
    comparator: Optional[str] = None  # overrides the polarity default

    def __post_init__(self):
        if self.kind not in ("mean", "median", "percentile", "constant"):
            raise SchemaError(f"unknown threshold policy kind: {self.kind!r}")
        if self.kind in ("percentile", "constant") and self.value is None:
            raise SchemaError(f"threshold policy {self.kind!r} needs a value")


@dataclass(frozen=True)
class AttributeHint:
    pattern: str  # normalized sub-phrase of an attribute name, or "*"
    confidence: float
    policies: tuple[ThresholdPolicy, ...] = ()


@dataclass(frozen=True)
class FormulaHint:
    kind: str
    inputs: tuple[str, ...]  # patterns, grounded against schema attributes
    weights: Optional[tuple[float, ...]]
    confidence: float
    policies: tuple[ThresholdPolicy, ...] = ()


@dataclass(frozen=True)
class LexiconEntry:
    term: str  # normalized
    role: str
    polarity: str
    attribute_hints: tuple[AttributeHint, ...] = ()
    derived_formulas: tuple[FormulaHint, ...] = ()
    threshold_policies: tuple[ThresholdPolicy, ...] = (ThresholdPolicy("mean"),)

    def __post_init__(self):
        if self.role not in ROLES:
            raise SchemaError(f"unknown lexicon role: {self.role!r}")
        if self.polarity not in POLARITIES:
            raise SchemaError(f"unknown polarity: {self.polarity!r}")
        if not self.attribute_hints and not self.derived_formulas:
            raise SchemaError(f"lexicon entry {self.term!r} has neither hints nor formulas")
        confidences = [h.confidence for h in self.attribute_hints]
        if any(c1 <= c2 for c1, c2 in zip(confidences, confidences[1:])):
            raise SchemaError(
                f"lexicon entry {self.term!r}: hint confidences must strictly descend")
        if any(not 0 < h.confidence <= 1 for h in self.attribute_hints):
            raise SchemaError(f"lexicon entry {self.term!r}: confidences must be in (0, 1]")


@dataclass(frozen=True)
class Lexicon:
    entries: dict[str, LexiconEntry] = field(default_factory=dict)  # term/alias -> entry

    @property
    def terms(self) -> frozenset[str]:
        """All term and alias keys, for the parser's modifier detection."""
        return frozenset(self.entries)


def _norm_term(term: str) -> str:
    return " ".join(normalize_phrase(term))


def _parse_policies(raw, default=()) -> tuple[ThresholdPolicy, ...]:
    if not raw:
        return tuple(default)
    return tuple(ThresholdPolicy(kind=p["kind"], value=p.get("value"),
                                 comparator=p.get("comparator")) for p in raw)


def _parse_weights(raw, n_inputs: int, config: EngineConfig):
    if raw is None:
        return None
    if raw == "medal-default":
        return tuple(config.medal_weights)
    if raw == "equal":
        return tuple(1.0 for _ in range(n_inputs))
    return tuple(float(w) for w in raw)


def load_lexicon(document: dict, config: EngineConfig = DEFAULT_CONFIG) -> Lexicon:
    """Build a validated :class:`Lexicon` from its JSON document."""
    entries: dict[str, LexiconEntry] = {}
    for raw in document.get("entries", []):
        default_policies = _parse_policies(raw.get("policies"), (ThresholdPolicy("mean"),))
        hints = tuple(
            AttributeHint(
                pattern=h["pattern"],
                confidence=float(h["confidence"]),
                policies=_parse_policies(h.get("policies"), default_policies),
            )
            for h in raw.get("hints", [])
        )
        formulas = tuple(
            FormulaHint(
                kind=f["kind"],
                inputs=tuple(f["inputs"]),
                weights=_parse_weights(f.get("weights"), len(f["inputs"]), config),
                confidence=float(f["confidence"]),
                policies=_parse_policies(f.get("policies"), default_policies),
            )
            for f in raw.get("formulas", [])
        )
        entry = LexiconEntry(
            term=_norm_term(raw["term"]),
            role=raw["role"],
            polarity=raw.get("polarity", "none"),
            attribute_hints=hints,
            derived_formulas=formulas,
            threshold_policies=default_policies,
        )
        for key in [raw["term"], *raw.get("aliases", [])]:
            norm = _norm_term(key)
            if norm:
                entries[norm] = entry
    return Lexicon(entries=entries)


def load_lexicon_file(path: str, config: EngineConfig = DEFAULT_CONFIG) -> Lexicon:
    with open(path, encoding="utf-8") as f:
        return load_lexicon(json.load(f), config)


def default_lexicon(config: EngineConfig = DEFAULT_CONFIG) -> Lexicon:
    doc = json.loads(
        resources.files("compareviz").joinpath("data/default_lexicon.json").read_text("utf-8"))
    return load_lexicon(doc, config)


def _synthesize(stem: str) -> LexiconEntry:
    polarity = "low" if stem in ("low", "cheap", "short", "young", "small",
                                 "slow", "poor", "light", "worst") else "high"
    return LexiconEntry(
        term=stem,
        role="value-modifier",
        polarity=polarity,
        attribute_hints=(AttributeHint(WILDCARD, 0.4, (ThresholdPolicy("mean"),)),),
    )


def lookup_modifier(term: str, lexicon: Lexicon) -> LexiconEntry:
    """Entry for a (possibly multiword) modifier term.

    Falls back to the longest sub-phrase with an entry, then to a synthesized
    generic entry when the term contains a known gradable adjective. A term
    with no gradable structure is unresolvable.
    """
    tokens = normalize_phrase(term)
    norm = " ".join(tokens)
    if norm in lexicon.entries:
        return lexicon.entries[norm]
    for length in range(len(tokens) - 1, 0, -1):
        for start in range(0, len(tokens) - length + 1):
            candidate = " ".join(tokens[start:start + length])
            if candidate in lexicon.entries:
                return lexicon.entries[candidate]
    for token in tokens:
        stem = gradable_stem(token)
        if stem is not None:
            if stem in lexicon.entries:
                return lexicon.entries[stem]
            if stem in GRADABLE_ADJECTIVES:
                return _synthesize(stem)
    raise ResolutionError(
        f"cannot interpret {term!r}: no lexicon entry and no gradable adjective",
        {"term": term})
