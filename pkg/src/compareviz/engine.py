"""Pipeline facade: one object owning a dataset, its statistics cache, and a
lexicon, answering comparison utterances with a full response document
(parse, resolution plan, four ranked chart specs).

Responses are pure functions of (dataset, utterance, chosen interpretations,
config), and the canonical serialization is byte-stable, so repeated queries
return identical bodies.
"""

from __future__ import annotations

import hashlib
import json
from typing import Optional

from . import catalog as catalog_module
from .catalog import recommend
from .charts import ChartSpec, emit, serialize_spec
from .config import DEFAULT_CONFIG, EngineConfig
from .data import Dataset, load_dataset
from .lexicon import Lexicon, default_lexicon
from .parsing import ParsedComparison, SchemaMatcher, parse
from .resolver import ResolutionPlan, build_plan


def canonical_json(document: dict) -> str:
    """The canonical response serialization: sorted keys, 2-space indent,
    UTF-8 text with a trailing LF."""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def query_id(utterance: str, chosen: dict[str, int]) -> str:
    """Content hash of (utterance, chosen interpretations); identical inputs
    produce identical ids, making retries idempotent."""
    payload = json.dumps({"utterance": utterance,
                          "chosen": dict(sorted(chosen.items()))},
                         sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


class Engine:
    """Answers comparison utterances over one immutable dataset."""

    def __init__(self, dataset: Dataset, lexicon: Optional[Lexicon] = None,
                 config: EngineConfig = DEFAULT_CONFIG):
        self.dataset = dataset
        self.config = config
        self.lexicon = lexicon if lexicon is not None else default_lexicon(config)
        self.matcher = SchemaMatcher(dataset, config)

    @classmethod
    def from_csv(cls, data, metadata: Optional[dict] = None,
                 lexicon: Optional[Lexicon] = None,
                 config: EngineConfig = DEFAULT_CONFIG) -> "Engine":
        return cls(load_dataset(data, metadata), lexicon=lexicon, config=config)

    # -- pipeline stages ------------------------------------------------------

    def classify(self, utterance: str) -> ParsedComparison:
        return parse(utterance, self.dataset, self.lexicon.terms,
                     self.config, matcher=self.matcher)

    def plan(self, parsed: ParsedComparison,
             chosen: Optional[dict[str, int]] = None) -> ResolutionPlan:
        plan = build_plan(parsed, self.dataset, self.lexicon, self.config)
        for reference, index in (chosen or {}).items():
            plan = plan.with_choice(reference, index)
        return plan

    def respond(self, utterance: str,
                chosen: Optional[dict[str, int]] = None) -> dict:
        """The full response document for one utterance."""
        parsed = self.classify(utterance)
        plan = self.plan(parsed, chosen)
        recommendations = recommend(parsed, plan)
        recs = []
        for recommendation in recommendations:
            spec = emit(recommendation, parsed, plan, self.dataset, self.config)
            recs.append({
                **recommendation.to_dict(),
                "spec": spec.to_document(),
            })
        return {
            "query_id": query_id(utterance, plan.chosen_map()),
            "utterance": utterance,
            "parse": parsed.to_dict(),
            "plan": plan.to_dict(),
            "recommendations": recs,
        }

    def emit_specs(self, utterance: str,
                   chosen: Optional[dict[str, int]] = None) -> list[ChartSpec]:
        parsed = self.classify(utterance)
        plan = self.plan(parsed, chosen)
        return [emit(r, parsed, plan, self.dataset, self.config)
                for r in recommend(parsed, plan)]

    # -- serialization helpers --------------------------------------------------

    def respond_json(self, utterance: str,
                     chosen: Optional[dict[str, int]] = None) -> str:
        return canonical_json(self.respond(utterance, chosen))

    @staticmethod
    def catalog_document() -> dict:
        return catalog_module.catalog_document()

    @staticmethod
    def serialize_spec(spec: ChartSpec) -> str:
        return serialize_spec(spec)
