"""compareviz: a deterministic engine that parses natural-language comparison
utterances over tabular data, resolves vague and underspecified references
into concrete predicates with provenance, and recommends ranked declarative
chart specifications."""

from .catalog import (DesignDescriptor, Recommendation, catalog_document,
                      design, design_catalog, recommend)
from .charts import ChartSpec, emit, encoded_fields, serialize_spec
from .config import DEFAULT_CONFIG, EngineConfig
from .data import (AttributeDescriptor, AttributeKind, ColumnStats, Dataset,
                   DerivedAttributeFormula, Predicate, ThresholdSpec,
                   apply_filter, column_stats, derive_attribute, infer_schema,
                   load_dataset)
from .engine import Engine, canonical_json, query_id
from .errors import (AmbiguityError, CompareVizError, DatasetError,
                     EmptyResultError, NotAComparisonError, ResolutionError,
                     SchemaError, UnsupportedComparisonError)
from .lexicon import (Lexicon, LexiconEntry, default_lexicon, load_lexicon,
                      load_lexicon_file, lookup_modifier)
from .parsing import (AttributeReference, Cardinality, Concreteness,
                      ParsedComparison, Plurality, RefKind, SchemaMatcher,
                      ValueReference, classify_cardinality,
                      classify_concreteness, match_reference, normalize_token,
                      parse)
from .resolver import (Interpretation, PlanEntry, ResolutionPlan, build_plan,
                       resolve_attribute, resolve_value)

__version__ = "0.1.0"
