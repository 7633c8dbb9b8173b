"""Comparison-utterance parsing.

The parser is a deterministic rule pipeline: a dependency-free tokenizer and
normalizer, phrase matching against schema attribute names and cell values,
then template patterns that carve an utterance into one attribute phrase and
one or two value phrases. No statistical model is involved, so identical
input always yields an identical parse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence

from .config import DEFAULT_CONFIG, EngineConfig
from .data import AttributeKind, Dataset
from .errors import AmbiguityError, NotAComparisonError, UnsupportedComparisonError

# ---------------------------------------------------------------------------
# Token normalization
# ---------------------------------------------------------------------------

# British -> American spellings seen in analytics vocabularies.
SPELLING_VARIANTS = {
    "colour": "color",
    "favourite": "favorite",
    "centre": "center",
    "theatre": "theater",
    "metre": "meter",
    "litre": "liter",
    "grey": "gray",
    "behaviour": "behavior",
    "analyse": "analyze",
    "organisation": "organization",
    "programme": "program",
    "honour": "honor",
    "labour": "labor",
}

# Adjective stems whose "-ly" adverb form should reduce to the stem
# ("costly" -> "cost", "highly" -> "high"). Kept as an allowlist because a
# blanket "-ly" rule mangles roots like "family" or "supply".
_LY_STEMS = {
    "high", "low", "cheap", "cost", "tall", "short", "long", "young", "old",
    "strong", "weak", "quick", "slow", "rich", "poor", "recent", "frequent",
}

# Gradable adjectives understood even without a lexicon entry.
GRADABLE_ADJECTIVES = {
    "high", "low", "cheap", "expensive", "tall", "short", "long", "young",
    "senior", "strong", "successful", "top", "best", "worst", "big", "small",
    "large", "fast", "slow", "popular", "costly", "old", "new", "heavy",
    "light", "rich", "poor",
}

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['\-][A-Za-z0-9]+)*")
_SIBILANT_ES = ("ches", "shes", "sses", "xes", "zes")


def normalize_token(s: str) -> str:
    """Lowercase, strip punctuation, reduce plurals, map spelling variants,
    and stem a small set of "-ly" adverbs. Total and idempotent."""
    t = re.sub(r"[^a-z0-9]+", "", s.lower())
    if not t:
        return ""
    t = SPELLING_VARIANTS.get(t, t)
    if t.endswith("ly") and t[:-2] in _LY_STEMS:
        t = t[:-2]
    if t.endswith(("ss", "us", "is")):
        pass
    elif t.endswith("ies") and len(t) >= 5:
        t = t[:-3] + "y"
    elif t.endswith(_SIBILANT_ES):
        t = t[:-2]
    elif t.endswith("s") and len(t) >= 4:
        t = t[:-1]
    return SPELLING_VARIANTS.get(t, t)


def tokenize(s: str) -> list[str]:
    """Raw word tokens, keeping internal hyphens/apostrophes ("PG-13")."""
    return _TOKEN_RE.findall(s)


def normalize_phrase(s: str) -> list[str]:
    """Normalized tokens of a phrase, empties dropped."""
    return [n for n in (normalize_token(t) for t in tokenize(s)) if n]


def gradable_stem(token: str) -> Optional[str]:
    """Base adjective for a (possibly comparative/superlative) token."""
    t = normalize_token(token)
    if t in GRADABLE_ADJECTIVES:
        return t
    for suffix in ("est", "er"):
        if t.endswith(suffix):
            stem = t[: -len(suffix)]
            if stem in GRADABLE_ADJECTIVES:
                return stem
            if stem + "e" in GRADABLE_ADJECTIVES:  # "larger" -> "large"
                return stem + "e"
    if t in ("highest", "lowest", "most", "least"):
        return "high" if t in ("highest", "most") else "low"
    return None


# ---------------------------------------------------------------------------
# Reference model
# ---------------------------------------------------------------------------

class RefKind(str, Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"


class Plurality(str, Enum):
    SINGLETON = "singleton"
    SET = "set"


class Cardinality(str, Enum):
    ONE_TO_ONE = "1-1"
    ONE_TO_MANY = "1-n"
    WITHIN_SET = "n"
    SET_TO_SET = "n-m"


@dataclass(frozen=True)
class ValueMatch:
    """One schema cell value located inside a phrase."""
    attribute: str
    value: object


@dataclass(frozen=True)
class ValueReference:
    surface: str
    kind: RefKind
    plurality: Plurality
    # Explicit cell-value matches found in the phrase. For an explicit
    # reference the first one is the primary match; for an implicit reference
    # they act as extra row filters ("high rated fiction books").
    matches: tuple[ValueMatch, ...] = ()
    # Normalized vague-modifier term for implicit references ("high rated").
    modifier: Optional[str] = None
    # "other PG-13 movies": the set is the complement of the sibling
    # reference within the matched filters.
    complement: bool = False

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "kind": self.kind.value,
            "plurality": self.plurality.value,
            "matches": [{"attribute": m.attribute, "value": m.value} for m in self.matches],
            "modifier": self.modifier,
            "complement": self.complement,
        }


@dataclass(frozen=True)
class AttributeReference:
    surface: str
    kind: RefKind
    attribute: Optional[str] = None  # resolved schema attribute when explicit

    def to_dict(self) -> dict:
        return {"surface": self.surface, "kind": self.kind.value, "attribute": self.attribute}


@dataclass(frozen=True)
class Concreteness:
    values: str  # "explicit" | "implicit"
    attribute: str
    mixed_values: bool = False

    @property
    def cell(self) -> str:
        return ("ev" if self.values == "explicit" else "iv") + "-" + \
               ("ea" if self.attribute == "explicit" else "ia")

    def to_dict(self) -> dict:
        return {"values": self.values, "attribute": self.attribute,
                "cell": self.cell, "mixed_flag": self.mixed_values}


@dataclass(frozen=True)
class ParsedComparison:
    utterance: str
    value_refs: tuple[ValueReference, ...]
    attribute_ref: AttributeReference
    cardinality: Cardinality
    concreteness: Concreteness
    diagnostics: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "utterance": self.utterance,
            "cardinality": self.cardinality.value,
            "concreteness": self.concreteness.to_dict(),
            "attribute": self.attribute_ref.to_dict(),
            "values": [r.to_dict() for r in self.value_refs],
            "diagnostics": list(self.diagnostics),
        }


# ---------------------------------------------------------------------------
# Schema/value matching
# ---------------------------------------------------------------------------

# Tokens ignored when matching an attribute phrase against schema names.
_ATTR_FILLERS = {"the", "a", "an", "of", "number", "total", "amount", "average", "mean"}

# Common words never treated as a single-token value match; a one-word match
# on any of these is far more likely noise than a reference to a cell value
# (a dataset whose entity labels collide with these is simply not matchable).
_VALUE_GUARD = {
    "the", "a", "an", "of", "in", "on", "at", "to", "and", "or", "for",
    "with", "by", "all", "other", "others", "every", "each", "versus", "per",
    "than", "you", "i", "we", "they", "he", "she", "it", "who", "what",
}

_COMPLEMENT_CUES = {"other", "others", "rest", "else"}
_UNIVERSAL_CUES = {"all", "every", "each", "everyone", "everybody"}


@dataclass(frozen=True)
class ValueSpan:
    start: int  # token index, inclusive
    end: int    # token index, exclusive
    attribute: str
    value: object


@dataclass(frozen=True)
class ReferenceMatch:
    """Outcome of matching one phrase against the schema."""
    kind: str  # "attribute" | "value" | "none"
    attribute: Optional[str] = None
    value: object = None


def _edit_distance_leq1(a: str, b: str) -> bool:
    if a == b:
        return True
    la, lb = len(a), len(b)
    if abs(la - lb) > 1:
        return False
    if la == lb:
        return sum(x != y for x, y in zip(a, b)) == 1
    if la > lb:
        a, b, la, lb = b, a, lb, la
    i = j = diff = 0
    while i < la and j < lb:
        if a[i] != b[j]:
            diff += 1
            if diff > 1:
                return False
            j += 1
        else:
            i += 1
            j += 1
    return True


class SchemaMatcher:
    """Matches phrases against normalized attribute names and cell values.

    Built once per dataset and reused across parses; all lookups are pure.
    """

    def __init__(self, dataset: Dataset, config: EngineConfig = DEFAULT_CONFIG):
        self.dataset = dataset
        self.config = config
        self.entity_attribute = dataset.entity_attribute().name
        self._attr_tokens: dict[str, tuple[str, ...]] = {
            attr.name: tuple(normalize_phrase(attr.name)) for attr in dataset.schema
        }
        self._numeric = {a.name for a in dataset.schema if a.kind is AttributeKind.NUMERIC}
        index: dict[tuple[str, ...], list[ValueMatch]] = {}

        def register(key: tuple[str, ...], match: ValueMatch):
            bucket = index.setdefault(key, [])
            if not any(m.attribute == match.attribute and m.value == match.value
                       for m in bucket):
                bucket.append(match)

        for attr in dataset.schema:
            if attr.kind is AttributeKind.NUMERIC:
                continue
            for cell in dict.fromkeys(dataset.column(attr.name)):
                if cell is None:
                    continue
                key = tuple(normalize_phrase(str(cell)))
                if not key:
                    continue
                match = ValueMatch(attr.name, cell)
                register(key, match)
                # "The Alchemist" should also match the article-less phrase.
                if len(key) > 1 and key[0] in ("the", "a", "an"):
                    register(key[1:], match)
        self._value_index = index
        self._max_key_len = max((len(k) for k in index), default=0)

    # -- attributes ---------------------------------------------------------

    def match_attribute(self, phrase: str) -> Optional[str]:
        """Schema attribute named by the phrase, or None.

        A phrase matches when its content tokens contain the attribute's
        tokens or vice versa; fuller matches score higher, an exact name
        match wins outright, and an unresolved tie raises AmbiguityError.
        """
        tokens = [t for t in normalize_phrase(phrase)
                  if t not in _ATTR_FILLERS and gradable_stem(t) is None]
        if not tokens:
            return None
        pset = set(tokens)
        scored: list[tuple[int, str]] = []
        for name, atoks in self._attr_tokens.items():
            aset = set(atoks)
            if not aset:
                continue
            if aset == pset:
                scored.append((100, name))
            elif aset < pset:
                scored.append((10 + len(aset), name))
            elif pset < aset:
                scored.append((1 + len(pset), name))
            elif self.config.fuzzy_match and len(tokens) == 1 and len(atoks) == 1 \
                    and _edit_distance_leq1(tokens[0], atoks[0]):
                scored.append((1, name))
        if not scored:
            return None
        scored.sort(key=lambda pair: (-pair[0], pair[1]))
        best_score = scored[0][0]
        best = [name for score, name in scored if score == best_score]
        if len(best) > 1:
            raise AmbiguityError(
                f"{phrase!r} matches several attributes equally well", sorted(best))
        return best[0]

    def attribute_mentions(self, tokens: Sequence[str],
                           skip: Sequence[ValueSpan] = ()) -> tuple[str, ...]:
        """Numeric attributes fully named inside a value phrase (tokens not
        covered by a value match). Used to detect cross-attribute comparisons
        and to recover a missing attribute slot."""
        occupied = {i for span in skip for i in range(span.start, span.end)}
        residual = {t for i, t in enumerate(tokens) if i not in occupied}
        found = []
        for name, atoks in self._attr_tokens.items():
            if name not in self._numeric:
                continue
            if atoks and set(atoks) <= residual:
                found.append(name)
        # Drop names subsumed by a longer mention ("Rating" inside "IMDB rating").
        keep = []
        for name in found:
            tokens_n = set(self._attr_tokens[name])
            if not any(name != o and tokens_n < set(self._attr_tokens[o]) for o in found):
                keep.append(name)
        return tuple(sorted(keep))

    # -- values -------------------------------------------------------------

    def find_value_spans(self, tokens: Sequence[str]) -> list[ValueSpan]:
        """Longest-first, leftmost, non-overlapping cell-value matches."""
        spans: list[ValueSpan] = []
        occupied: set[int] = set()
        for length in range(min(self._max_key_len, len(tokens)), 0, -1):
            for start in range(0, len(tokens) - length + 1):
                positions = range(start, start + length)
                if any(i in occupied for i in positions):
                    continue
                key = tuple(tokens[start:start + length])
                if length == 1 and key[0] in _VALUE_GUARD:
                    continue
                candidates = self._value_index.get(key)
                if not candidates and self.config.fuzzy_match and length == 1:
                    fuzzy = [m for k, ms in self._value_index.items()
                             if len(k) == 1 and _edit_distance_leq1(k[0], key[0])
                             for m in ms]
                    candidates = fuzzy or None
                if not candidates:
                    continue
                if len(candidates) > 1:
                    raise AmbiguityError(
                        f"{' '.join(key)!r} matches several values equally well",
                        [f"{m.attribute}={m.value}" for m in candidates])
                spans.append(ValueSpan(start, start + length,
                                       candidates[0].attribute, candidates[0].value))
                occupied.update(positions)
        spans.sort(key=lambda s: s.start)
        return spans

    def match(self, phrase: str) -> ReferenceMatch:
        """Explicit-attribute match, explicit-value match, or no-match."""
        attr = self.match_attribute(phrase)
        if attr is not None:
            return ReferenceMatch("attribute", attribute=attr)
        spans = self.find_value_spans(normalize_phrase(phrase))
        if spans:
            return ReferenceMatch("value", attribute=spans[0].attribute, value=spans[0].value)
        return ReferenceMatch("none")


def match_reference(phrase: str, dataset: Dataset,
                    config: EngineConfig = DEFAULT_CONFIG) -> ReferenceMatch:
    """One-shot form of :meth:`SchemaMatcher.match`."""
    return SchemaMatcher(dataset, config).match(phrase)


# ---------------------------------------------------------------------------
# Phrase analysis
# ---------------------------------------------------------------------------

def _is_plural(raw: str) -> bool:
    t = re.sub(r"[^a-z0-9]+", "", raw.lower())
    return len(t) >= 4 and t.endswith("s") and not t.endswith(("ss", "us", "is"))


def _find_modifier(tokens: Sequence[str], occupied: set[int],
                   lexicon_terms: frozenset[str]) -> Optional[str]:
    """Longest lexicon term (or builtin gradable) present outside value spans."""
    free = [(i, t) for i, t in enumerate(tokens) if i not in occupied]
    max_len = max((len(term.split()) for term in lexicon_terms), default=1)
    for length in range(min(max_len, len(free)), 0, -1):
        for offset in range(0, len(free) - length + 1):
            window = free[offset:offset + length]
            # require contiguity in the original phrase
            if window[-1][0] - window[0][0] != length - 1:
                continue
            term = " ".join(t for _, t in window)
            if term in lexicon_terms:
                return term
    for _, t in free:
        stem = gradable_stem(t)
        if stem is not None:
            return stem
    return None


def analyze_value_phrase(phrase: str, matcher: SchemaMatcher,
                         lexicon_terms: frozenset[str] = frozenset()) -> ValueReference:
    raw_tokens = tokenize(phrase)
    tokens = [normalize_token(t) for t in raw_tokens]
    spans = matcher.find_value_spans(tokens)
    occupied = {i for s in spans for i in range(s.start, s.end)}
    residual = [(i, raw, tok) for i, (raw, tok) in enumerate(zip(raw_tokens, tokens))
                if i not in occupied]

    modifier = _find_modifier(tokens, occupied, lexicon_terms)
    complement = any(tok in _COMPLEMENT_CUES for _, _, tok in residual)
    universal = any(tok in _UNIVERSAL_CUES for _, _, tok in residual)
    leading_article = bool(tokens) and tokens[0] in ("a", "an") and 0 not in occupied
    plural_noun = any(_is_plural(raw) for _, raw, _ in residual)
    matches = tuple(ValueMatch(s.attribute, s.value) for s in spans)

    if modifier is not None:
        kind = RefKind.IMPLICIT
    elif matches:
        kind = RefKind.EXPLICIT
    elif complement or universal:
        # "other books", "all others": fully determined by the dataset.
        kind = RefKind.EXPLICIT
    else:
        kind = RefKind.IMPLICIT

    primary_on_entity = bool(matches) and matches[0].attribute == matcher.entity_attribute

    if complement or universal:
        plurality = Plurality.SET
    elif leading_article:
        plurality = Plurality.SINGLETON
    elif primary_on_entity:
        plurality = Plurality.SINGLETON
    elif matches:
        plurality = Plurality.SET
    elif plural_noun:
        plurality = Plurality.SET
    else:
        plurality = Plurality.SINGLETON

    return ValueReference(
        surface=phrase.strip(),
        kind=kind,
        plurality=plurality,
        matches=matches,
        modifier=modifier,
        complement=complement,
    )


_NUMBER_OF_RE = re.compile(r"^(?:the\s+)?(?:number|total|amount|count)\s+of\s+", re.IGNORECASE)


def analyze_attribute_phrase(phrase: str, matcher: SchemaMatcher) -> AttributeReference:
    surface = phrase.strip()
    bare = _NUMBER_OF_RE.sub("", surface)
    attr = matcher.match_attribute(bare)
    if attr is not None:
        return AttributeReference(surface=surface, kind=RefKind.EXPLICIT, attribute=attr)
    return AttributeReference(surface=surface, kind=RefKind.IMPLICIT)


# ---------------------------------------------------------------------------
# Cardinality and concreteness
# ---------------------------------------------------------------------------

def classify_cardinality(refs: Sequence[ValueReference]) -> Cardinality:
    if not refs:
        raise NotAComparisonError("no entities to compare")
    if len(refs) > 2:
        raise UnsupportedComparisonError(
            f"comparisons of {len(refs)} reference groups are not supported",
            {"references": [r.surface for r in refs]})
    shapes = [r.plurality for r in refs]
    if len(refs) == 1:
        if shapes[0] is Plurality.SET:
            return Cardinality.WITHIN_SET
        raise NotAComparisonError(
            "a single entity is not a comparison; name a second entity or a set")
    if shapes[0] is Plurality.SINGLETON and shapes[1] is Plurality.SINGLETON:
        return Cardinality.ONE_TO_ONE
    if Plurality.SINGLETON in shapes:
        return Cardinality.ONE_TO_MANY
    return Cardinality.SET_TO_SET


def classify_concreteness(refs: Sequence[ValueReference],
                          attr_ref: AttributeReference) -> Concreteness:
    kinds = {r.kind for r in refs}
    mixed = len(kinds) == 2
    values = "explicit" if kinds == {RefKind.EXPLICIT} else "implicit"
    attribute = "explicit" if attr_ref.kind is RefKind.EXPLICIT else "implicit"
    return Concreteness(values=values, attribute=attribute, mixed_values=mixed)


# ---------------------------------------------------------------------------
# Utterance templates
# ---------------------------------------------------------------------------

_TEMPLATES: list[tuple[str, re.Pattern]] = [
    ("won-by", re.compile(
        r"^\s*(?:compare|contrast)\s+(?:the\s+)?(?P<attr>.+?)\s+"
        r"(?:won|earned|obtained|received|achieved|scored)\s+by\s+(?P<vals>.+?)\s*$",
        re.IGNORECASE)),
    ("in-terms-of", re.compile(
        r"^\s*(?:compare|contrast)\s+(?P<vals>.+)\s+"
        r"(?:in\s+terms\s+of|with\s+respect\s+to|regarding|based\s+on)\s+(?P<attr>.+?)\s*$",
        re.IGNORECASE)),
    ("across", re.compile(
        r"^\s*(?:compare|contrast)\s+(?:the\s+)?(?P<attr>.+?)\s+"
        r"(?:across|among|amongst)\s+(?P<vals>.+?)\s*$",
        re.IGNORECASE)),
    ("of-for", re.compile(
        r"^\s*(?:compare|contrast)\s+(?:the\s+)?(?P<attr>.+?)\s+"
        r"(?:of|for|between)\s+(?P<vals>.+?)\s*$",
        re.IGNORECASE)),
    ("on-by", re.compile(
        r"^\s*(?:compare|contrast)\s+(?P<vals>.+)\s+(?:on|by|per)\s+(?P<attr>.+?)\s*$",
        re.IGNORECASE)),
    ("versus-on", re.compile(
        r"^\s*(?P<vals>.+?\s+(?:vs\.?|versus)\s+.+?)\s+(?:on|in|by)\s+(?P<attr>.+?)\s*$",
        re.IGNORECASE)),
    ("difference", re.compile(
        r"^\s*(?:what\s+is\s+the\s+|show\s+(?:me\s+)?the\s+)?difference\s+"
        r"(?:in\s+(?P<attr>.+?)\s+)?between\s+(?P<vals>.+?)\s*$",
        re.IGNORECASE)),
    ("superlative", re.compile(
        r"^\s*(?:which|what|who)\s+(?P<vals>.+?)\s+(?:has|have|had|is|are|was|were)\s+"
        r"the\s+(?P<attr>.+?)\s*\??\s*$",
        re.IGNORECASE)),
    ("bare", re.compile(
        r"^\s*(?:compare|contrast)\s+(?P<vals>.+?)\s*$", re.IGNORECASE)),
    ("versus-bare", re.compile(
        r"^\s*(?P<vals>.+?\s+(?:vs\.?|versus)\s+.+?)\s*$", re.IGNORECASE)),
]

_JOINER_RE = re.compile(r"\s+(?:and|to|versus|vs\.?|with)\s+|\s*,\s*", re.IGNORECASE)


def _split_value_segment(segment: str, matcher: SchemaMatcher) -> list[str]:
    """Split a value segment on joiners, never inside a matched cell value
    ("Harry Potter and the Cursed Child" stays whole)."""
    raw_tokens = list(_TOKEN_RE.finditer(segment))
    tokens = [normalize_token(m.group(0)) for m in raw_tokens]
    spans = matcher.find_value_spans(tokens)
    protected: list[tuple[int, int]] = []
    for span in spans:
        start = raw_tokens[span.start].start()
        end = raw_tokens[span.end - 1].end()
        protected.append((start, end))

    parts = []
    last = 0
    for m in _JOINER_RE.finditer(segment):
        if any(m.start() < end and m.end() > start for start, end in protected):
            continue
        parts.append(segment[last:m.start()])
        last = m.end()
    parts.append(segment[last:])
    return [p.strip() for p in parts if p.strip()]


# An attribute phrase containing these tokens is a mis-carved value phrase
# ("compare athletes who won a high number of gold medals" must not yield
# the attribute "athletes who won a high number").
_ATTR_REJECT = {"who", "that", "which", "other", "others", "all", "every"}


def _attr_phrase_acceptable(phrase: Optional[str]) -> bool:
    if phrase is None:
        return True
    return not any(t in _ATTR_REJECT for t in normalize_phrase(phrase))


def parse(utterance: str, dataset: Dataset,
          lexicon_terms: frozenset[str] = frozenset(),
          config: EngineConfig = DEFAULT_CONFIG,
          matcher: Optional[SchemaMatcher] = None) -> ParsedComparison:
    """Parse an utterance into a :class:`ParsedComparison`.

    Raises :class:`NotAComparisonError` when no comparison structure is
    detected and :class:`UnsupportedComparisonError` for cross-attribute or
    >2-group comparisons.
    """
    if matcher is None:
        matcher = SchemaMatcher(dataset, config)
    diagnostics: list[str] = []

    template = None
    attr_phrase = None
    vals_segment = None
    for name, pattern in _TEMPLATES:
        m = pattern.match(utterance)
        if not m:
            continue
        groups = m.groupdict()
        if not _attr_phrase_acceptable(groups.get("attr")):
            continue
        template = name
        attr_phrase = groups.get("attr")
        vals_segment = groups.get("vals")
        break
    if template is None:
        raise NotAComparisonError(
            "no comparison structure detected: expected a compare verb, "
            "'versus'-joined references, or a superlative question",
            {"utterance": utterance})
    diagnostics.append(f"template: {template}")

    if template == "superlative":
        # "which book has the highest price": the set is everything, the
        # superlative carries both the measure phrase and the modifier.
        vals_segment = "all " + vals_segment

    parts = _split_value_segment(vals_segment, matcher)
    if not parts:
        raise NotAComparisonError("no entities to compare", {"utterance": utterance})
    refs = [analyze_value_phrase(p, matcher, lexicon_terms) for p in parts]

    if template == "superlative" and attr_phrase is not None and len(refs) == 1:
        stems = [gradable_stem(t) for t in tokenize(attr_phrase)]
        stem = next((s for s in stems if s), None)
        if stem is not None:
            refs = [replace(refs[0], modifier=stem, kind=RefKind.IMPLICIT)]
            diagnostics.append(f"superlative modifier: {stem}")

    if attr_phrase is not None:
        attribute_ref = analyze_attribute_phrase(attr_phrase, matcher)
    else:
        attribute_ref = None

    # Attribute names inside value phrases: reject cross-attribute
    # comparisons, or recover the attribute when no slot was present.
    mention_sets = []
    for ref in refs:
        tokens = [normalize_token(t) for t in tokenize(ref.surface)]
        spans = matcher.find_value_spans(tokens)
        mentions = matcher.attribute_mentions(tokens, spans)
        if mentions:
            mention_sets.append((ref.surface, mentions))
    distinct_mentions = {m for _, ms in mention_sets for m in ms}
    slot_attr = attribute_ref.attribute if attribute_ref and attribute_ref.attribute else None
    if len(mention_sets) >= 2 and len(distinct_mentions) > 1:
        raise UnsupportedComparisonError(
            "comparisons that use a different attribute for each value are not supported",
            {"mentions": {surface: list(ms) for surface, ms in mention_sets}})
    if slot_attr and distinct_mentions and distinct_mentions != {slot_attr}:
        raise UnsupportedComparisonError(
            "comparisons that use a different attribute for each value are not supported",
            {"attribute": slot_attr, "mentions": sorted(distinct_mentions)})
    if attribute_ref is None:
        if len(distinct_mentions) == 1:
            name = next(iter(distinct_mentions))
            attribute_ref = AttributeReference(surface=name, kind=RefKind.EXPLICIT,
                                               attribute=name)
            diagnostics.append(f"attribute recovered from value phrase: {name}")
        else:
            attribute_ref = AttributeReference(surface="", kind=RefKind.IMPLICIT)
            diagnostics.append("no attribute phrase found")

    cardinality = classify_cardinality(refs)
    concreteness = classify_concreteness(refs, attribute_ref)
    for ref in refs:
        if ref.kind is RefKind.EXPLICIT and ref.matches:
            primary = ref.matches[0]
            diagnostics.append(f"matched {primary.attribute} = {primary.value}")
        elif ref.modifier:
            diagnostics.append(f"vague modifier: {ref.modifier}")

    return ParsedComparison(
        utterance=utterance,
        value_refs=tuple(refs),
        attribute_ref=attribute_ref,
        cardinality=cardinality,
        concreteness=concreteness,
        diagnostics=tuple(diagnostics),
    )
