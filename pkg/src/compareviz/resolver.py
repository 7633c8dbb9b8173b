"""Implicit-reference resolution.

Maps implicit value phrases ("tall athlete") and implicit attribute phrases
("popularity") onto concrete predicates or measures, each carrying a
human-readable provenance line that names every attribute and threshold
policy involved.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .config import DEFAULT_CONFIG, EngineConfig
from .data import (AttributeKind, Dataset, DerivedAttributeFormula, Predicate,
                   ThresholdSpec)
from .errors import ResolutionError
from .lexicon import (WILDCARD, AttributeHint, Lexicon, LexiconEntry,
                      ThresholdPolicy, lookup_modifier)
from .parsing import (AttributeReference, ParsedComparison, RefKind,
                      ValueReference, normalize_phrase)

__all__ = [
    "Interpretation", "PlanEntry", "ResolutionPlan",
    "lookup_modifier", "resolve_attribute", "resolve_value", "build_plan",
]


@dataclass(frozen=True)
class Interpretation:
    """One concrete reading of an implicit reference."""

    target: str  # the implicit surface phrase
    kind: str  # "predicate" | "measure"
    confidence: float
    provenance: str
    predicate: Optional[Predicate] = None
    measure: Optional[str] = None  # attribute name (base or derived)
    formula: Optional[DerivedAttributeFormula] = None  # derivation, when needed

    def to_dict(self) -> dict:
        doc = {
            "kind": self.kind,
            "confidence": round(self.confidence, 6),
            "provenance": self.provenance,
        }
        if self.predicate is not None:
            threshold = self.predicate.threshold
            doc["predicate"] = {
                "attribute": self.predicate.attribute,
                "comparator": self.predicate.comparator,
                "threshold": ({"policy": threshold.policy, "value": threshold.value}
                              if isinstance(threshold, ThresholdSpec)
                              else {"policy": "constant", "value": threshold}),
            }
        if self.measure is not None:
            doc["measure"] = self.measure
        if self.formula is not None:
            doc["formula"] = {
                "kind": self.formula.kind,
                "inputs": list(self.formula.inputs),
                "weights": list(self.formula.weights) if self.formula.weights else None,
            }
        return doc


@dataclass(frozen=True)
class PlanEntry:
    reference: str  # surface phrase of the implicit reference
    role: str  # "value" | "attribute"
    interpretations: tuple[Interpretation, ...]
    chosen: int = 0

    @property
    def choice(self) -> Interpretation:
        return self.interpretations[self.chosen]

    def to_dict(self) -> dict:
        return {
            "reference": self.reference,
            "role": self.role,
            "chosen": self.chosen,
            "interpretations": [i.to_dict() for i in self.interpretations],
        }


@dataclass(frozen=True)
class ResolutionPlan:
    entries: tuple[PlanEntry, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.entries)

    def find(self, reference: str, role: Optional[str] = None) -> PlanEntry:
        for prefix in ("value:", "attribute:"):
            if reference.startswith(prefix):
                role, reference = prefix[:-1], reference[len(prefix):]
        for entry in self.entries:
            if entry.reference == reference and (role is None or entry.role == role):
                return entry
        raise ResolutionError(f"no implicit reference {reference!r} in this plan",
                              {"known": [e.reference for e in self.entries]})

    def with_choice(self, reference: str, index: int) -> "ResolutionPlan":
        entry = self.find(reference)
        if not 0 <= index < len(entry.interpretations):
            raise ResolutionError(
                f"interpretation index {index} out of range for {reference!r} "
                f"(0..{len(entry.interpretations) - 1})",
                {"reference": reference, "index": index,
                 "available": len(entry.interpretations)})
        new_entries = tuple(replace(e, chosen=index) if e is entry else e
                            for e in self.entries)
        return ResolutionPlan(entries=new_entries)

    def chosen_map(self) -> dict[str, int]:
        """Non-default choices only, so the default plan hashes the same
        whether it was implied or chosen explicitly."""
        return {f"{e.role}:{e.reference}": e.chosen
                for e in self.entries if e.chosen != 0}

    def attribute_entry(self) -> Optional[PlanEntry]:
        for entry in self.entries:
            if entry.role == "attribute":
                return entry
        return None

    def value_entry(self, surface: str) -> Optional[PlanEntry]:
        for entry in self.entries:
            if entry.role == "value" and entry.reference == surface:
                return entry
        return None

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries]}


# ---------------------------------------------------------------------------
# Grounding helpers
# ---------------------------------------------------------------------------

def _numeric_attributes(dataset: Dataset) -> list[str]:
    return [a.name for a in dataset.schema if a.kind is AttributeKind.NUMERIC]


def _ground_pattern(pattern: str, dataset: Dataset,
                    fallback_attribute: Optional[str]) -> list[str]:
    """Numeric schema attributes matching a hint pattern, in schema order."""
    if pattern == WILDCARD:
        if fallback_attribute is not None and \
                dataset.attribute(fallback_attribute).kind is AttributeKind.NUMERIC:
            return [dataset.attribute(fallback_attribute).name]
        return []
    ptokens = set(normalize_phrase(pattern))
    matches = []
    for name in _numeric_attributes(dataset):
        atokens = set(normalize_phrase(name))
        if ptokens <= atokens:
            matches.append(name)
    return matches


def _ground_formula(hint, dataset: Dataset) -> Optional[DerivedAttributeFormula]:
    inputs = []
    for pattern in hint.inputs:
        grounded = _ground_pattern(pattern, dataset, None)
        if not grounded:
            return None
        inputs.append(grounded[0])
    return DerivedAttributeFormula(kind=hint.kind, inputs=tuple(inputs),
                                   weights=hint.weights)


def _policy_threshold(policy: ThresholdPolicy) -> ThresholdSpec:
    return ThresholdSpec(policy=policy.kind, value=policy.value)


def _default_comparator(polarity: str) -> str:
    return "<" if polarity == "low" else ">"


def _weights_note(formula: DerivedAttributeFormula) -> str:
    if formula.kind == "weighted-sum-of" and formula.weights:
        inside = ", ".join(f"{w:g}" for w in formula.weights)
        return f" (weights {inside})"
    return ""


# ---------------------------------------------------------------------------
# Resolution operations
# ---------------------------------------------------------------------------

def resolve_value(ref: ValueReference, dataset: Dataset, lexicon: Lexicon,
                  config: EngineConfig = DEFAULT_CONFIG,
                  fallback_attribute: Optional[str] = None) -> list[Interpretation]:
    """Predicates realizing an implicit value reference, best first."""
    term = ref.modifier or ref.surface
    entry = lookup_modifier(term, lexicon)
    comparator_default = _default_comparator(entry.polarity)
    target = ref.surface

    candidates: list[Interpretation] = []
    for h_idx, hint in enumerate(entry.attribute_hints):
        policies = hint.policies or entry.threshold_policies
        for attribute in _ground_pattern(hint.pattern, dataset, fallback_attribute):
            for p_idx, policy in enumerate(policies):
                predicate = Predicate(
                    attribute=attribute,
                    comparator=policy.comparator or comparator_default,
                    threshold=_policy_threshold(policy),
                )
                confidence = hint.confidence - 0.005 * p_idx - 0.001 * h_idx
                candidates.append(Interpretation(
                    target=target, kind="predicate", confidence=confidence,
                    provenance=f"{term} = {predicate.describe()}",
                    predicate=predicate,
                ))
    for f_idx, fhint in enumerate(entry.derived_formulas):
        formula = _ground_formula(fhint, dataset)
        if formula is None:
            continue
        policies = fhint.policies or entry.threshold_policies
        for p_idx, policy in enumerate(policies):
            predicate = Predicate(
                attribute=formula.name,
                comparator=policy.comparator or comparator_default,
                threshold=_policy_threshold(policy),
            )
            confidence = fhint.confidence - 0.005 * p_idx - 0.001 * f_idx
            candidates.append(Interpretation(
                target=target, kind="predicate", confidence=confidence,
                provenance=f"{term} = {predicate.describe()}{_weights_note(formula)}",
                predicate=predicate, formula=formula,
            ))

    if not candidates and fallback_attribute is not None:
        grounded = _ground_pattern(WILDCARD, dataset, fallback_attribute)
        for policy in entry.threshold_policies:
            for attribute in grounded:
                predicate = Predicate(attribute=attribute,
                                      comparator=policy.comparator or comparator_default,
                                      threshold=_policy_threshold(policy))
                candidates.append(Interpretation(
                    target=target, kind="predicate", confidence=0.3,
                    provenance=f"{term} = {predicate.describe()}",
                    predicate=predicate,
                ))

    interpretations = _finalize(candidates, config)
    if not interpretations:
        hints = [h.pattern for h in entry.attribute_hints] + \
                [f"{f.kind}({', '.join(f.inputs)})" for f in entry.derived_formulas]
        raise ResolutionError(
            f"cannot realize {term!r} on this dataset: "
            f"no numeric attribute matches hints {hints}",
            {"term": term, "hints": hints})
    return interpretations


def resolve_attribute(ref: AttributeReference, dataset: Dataset, lexicon: Lexicon,
                      config: EngineConfig = DEFAULT_CONFIG) -> list[Interpretation]:
    """Measures realizing an implicit attribute reference, best first."""
    surface = ref.surface.strip()
    if not surface:
        raise ResolutionError(
            "the utterance names no attribute to compare on; "
            "add a measure (e.g. 'in terms of price')")
    tokens = normalize_phrase(surface)
    norm = " ".join(tokens)
    entry: Optional[LexiconEntry] = lexicon.entries.get(norm)
    if entry is None:
        try:
            entry = lookup_modifier(surface, lexicon)
        except ResolutionError:
            entry = None
    if entry is None:
        # Last resort: a direct sub-phrase of some numeric attribute.
        fallback_hint = AttributeHint(pattern=norm, confidence=0.4)
        entry = LexiconEntry(term=norm, role="attribute-concept", polarity="none",
                             attribute_hints=(fallback_hint,))

    candidates: list[Interpretation] = []
    for h_idx, hint in enumerate(entry.attribute_hints):
        if hint.pattern == WILDCARD:
            continue
        for attribute in _ground_pattern(hint.pattern, dataset, None):
            candidates.append(Interpretation(
                target=surface, kind="measure",
                confidence=hint.confidence - 0.001 * h_idx,
                provenance=f"{surface} interpreted as {attribute} "
                           f"(lexicon: {entry.term} → {hint.pattern})",
                measure=attribute,
            ))
    for f_idx, fhint in enumerate(entry.derived_formulas):
        formula = _ground_formula(fhint, dataset)
        if formula is None:
            continue
        candidates.append(Interpretation(
            target=surface, kind="measure",
            confidence=fhint.confidence - 0.001 * f_idx,
            provenance=f"{surface} interpreted as {formula.name}{_weights_note(formula)}",
            measure=formula.name, formula=formula,
        ))

    interpretations = _finalize(candidates, config)
    if not interpretations:
        hints = [h.pattern for h in entry.attribute_hints if h.pattern != WILDCARD] + \
                [f"{f.kind}({', '.join(f.inputs)})" for f in entry.derived_formulas]
        raise ResolutionError(
            f"cannot interpret attribute {surface!r}: no schema attribute matches "
            f"hints {hints}", {"attribute": surface, "hints": hints})
    return interpretations


def _realization_key(i: Interpretation):
    if i.predicate is not None:
        threshold = i.predicate.threshold
        tkey = (threshold.policy, threshold.value) if isinstance(threshold, ThresholdSpec) \
            else ("constant", threshold)
        return ("predicate", i.predicate.attribute, i.predicate.comparator, tkey)
    return ("measure", i.measure)


def _finalize(candidates: list[Interpretation],
              config: EngineConfig) -> list[Interpretation]:
    """Dedupe identical realizations (keep the most confident), order by
    confidence, cap the fan-out."""
    best: dict = {}
    order: list = []
    for cand in candidates:
        key = _realization_key(cand)
        if key not in best or cand.confidence > best[key].confidence:
            if key not in best:
                order.append(key)
            best[key] = cand
    ranked = sorted((best[k] for k in order), key=lambda i: -i.confidence)
    return ranked[: config.max_interpretations]


def build_plan(parsed: ParsedComparison, dataset: Dataset, lexicon: Lexicon,
               config: EngineConfig = DEFAULT_CONFIG) -> ResolutionPlan:
    """Interpretations for every implicit reference in the parse.

    An ev-ea parse yields an empty plan. Any unresolvable reference raises a
    :class:`ResolutionError` naming the failing phrase; implicit references
    are never silently dropped.
    """
    entries: list[PlanEntry] = []
    explicit_attr = parsed.attribute_ref.attribute \
        if parsed.attribute_ref.kind is RefKind.EXPLICIT else None

    if parsed.attribute_ref.kind is RefKind.IMPLICIT:
        try:
            interpretations = resolve_attribute(parsed.attribute_ref, dataset,
                                                lexicon, config)
        except ResolutionError as e:
            raise ResolutionError(
                f"cannot build a plan: attribute reference "
                f"{parsed.attribute_ref.surface!r} failed ({e.message})",
                e.details)
        entries.append(PlanEntry(reference=parsed.attribute_ref.surface,
                                 role="attribute",
                                 interpretations=tuple(interpretations)))

    for ref in parsed.value_refs:
        if ref.kind is not RefKind.IMPLICIT:
            continue
        try:
            interpretations = resolve_value(ref, dataset, lexicon, config,
                                            fallback_attribute=explicit_attr)
        except ResolutionError as e:
            raise ResolutionError(
                f"cannot build a plan: value reference {ref.surface!r} "
                f"failed ({e.message})", e.details)
        entries.append(PlanEntry(reference=ref.surface, role="value",
                                 interpretations=tuple(interpretations)))

    return ResolutionPlan(entries=tuple(entries))
