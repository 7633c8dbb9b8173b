"""Chart emission: instantiate a catalog design against a dataset, parse and
resolution plan, producing a Vega-Lite v5 document.

Emission rules: multi-bar designs are sorted descending by the measure; the
1-n singleton is highlighted in an accent color; simple designs annotate
bars with their values; implicit entity phrases appear as labels/legends and
every implicit interpretation's provenance line lands in the caption
(rendered as the chart subtitle and the document description). Aggregating
designs always name the aggregate in the axis title. Serialization is
canonical (sorted keys, LF) so identical inputs yield identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .catalog import Recommendation
from .config import DEFAULT_CONFIG, EngineConfig
from .data import (AttributeKind, ColumnStats, Dataset, ThresholdSpec,
                   apply_filter, column_stats, derive_attribute)
from .errors import EmptyResultError, ResolutionError, SchemaError
from .parsing import (Cardinality, ParsedComparison, Plurality, RefKind,
                      ValueReference)
from .resolver import Interpretation, ResolutionPlan

VEGA_LITE_SCHEMA = "https://vega.github.io/schema/vega-lite/v5.json"


@dataclass
class ChartSpec:
    """A declarative chart document plus the engine-level metadata that
    produced it. ``body`` holds the Vega-Lite mark/encoding structure."""

    design: str
    title: str
    caption: str
    mark: str
    data_rows: list[dict]
    encodings: dict[str, dict]
    transforms: list[dict]
    highlight: Optional[str]
    interactive: list[str]
    body: dict = dc_field(default_factory=dict)

    def to_document(self) -> dict:
        doc: dict = {"$schema": VEGA_LITE_SCHEMA}
        if self.caption:
            doc["title"] = {"text": self.title, "subtitle": self.caption,
                            "subtitleFontStyle": "italic"}
            doc["description"] = self.caption
        else:
            doc["title"] = {"text": self.title}
        doc["data"] = {"values": self.data_rows}
        doc.update(self.body)
        doc["usermeta"] = {
            "design": self.design,
            "mark": self.mark,
            "encodings": self.encodings,
            "transforms": self.transforms,
            "highlight": self.highlight,
            "interactive": self.interactive,
            "caption": self.caption,
        }
        return doc

    @classmethod
    def from_document(cls, doc: dict) -> "ChartSpec":
        meta = doc.get("usermeta", {})
        title = doc.get("title", "")
        if isinstance(title, dict):
            title = title.get("text", "")
        body = {k: v for k, v in doc.items()
                if k not in ("$schema", "title", "description", "data", "usermeta")}
        return cls(
            design=meta.get("design", ""),
            title=title,
            caption=meta.get("caption", ""),
            mark=meta.get("mark", ""),
            data_rows=list(doc.get("data", {}).get("values", [])),
            encodings=meta.get("encodings", {}),
            transforms=meta.get("transforms", []),
            highlight=meta.get("highlight"),
            interactive=meta.get("interactive", []),
            body=body,
        )


def serialize_spec(spec: ChartSpec) -> str:
    """Canonical serialization: UTF-8 text, sorted keys, LF newlines."""
    return json.dumps(spec.to_document(), sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"


def spec_from_json(text: str) -> ChartSpec:
    return ChartSpec.from_document(json.loads(text))


def encoded_fields(doc: dict) -> set[str]:
    """Every data field referenced anywhere in a chart document's encodings,
    facets, or predicates (used to check field minimality)."""
    fields: set[str] = set()

    def walk(node):
        if isinstance(node, dict):
            for key, value in node.items():
                if key == "field" and isinstance(value, str):
                    fields.add(value)
                elif key == "usermeta":
                    continue
                else:
                    walk(value)
        elif isinstance(node, list):
            for item in node:
                walk(item)

    walk({k: v for k, v in doc.items() if k != "data"})
    return fields


# ---------------------------------------------------------------------------
# Row materialization
# ---------------------------------------------------------------------------

@dataclass
class _MaterializedRef:
    ref: ValueReference
    label: str  # display label (entity name or the implicit/set phrase)
    indices: tuple[int, ...]  # ordered row indices in the working dataset
    polarity_max: bool = True  # extremal direction used for singletons


def _equality_indices(dataset: Dataset, attribute: str, value) -> set[int]:
    column = dataset.column(attribute)
    return {i for i, cell in enumerate(column) if cell == value}


def _ref_filter_description(ref: ValueReference) -> str:
    parts = [f"{m.attribute} = {m.value}" for m in ref.matches]
    if ref.complement:
        parts.append("excluding the compared entity")
    return " and ".join(parts) if parts else "all rows"


class _Emitter:
    def __init__(self, parsed: ParsedComparison, plan: ResolutionPlan,
                 dataset: Dataset, config: EngineConfig):
        self.parsed = parsed
        self.plan = plan
        self.config = config
        self.dataset = dataset  # working copy, grows derived attributes
        self.transforms: list[dict] = []
        self._stats_cache: dict[str, ColumnStats] = {}

    # -- dataset plumbing ---------------------------------------------------

    def _stats(self, attribute: str) -> ColumnStats:
        if attribute not in self._stats_cache:
            self._stats_cache[attribute] = column_stats(self.dataset, attribute)
        return self._stats_cache[attribute]

    def _ensure_derived(self, interpretation: Interpretation):
        if interpretation.formula is None:
            return
        before = len(self.dataset.schema)
        self.dataset = derive_attribute(self.dataset, interpretation.formula)
        if len(self.dataset.schema) != before:
            self.transforms.append({
                "type": "derive",
                "attribute": interpretation.formula.name,
                "kind": interpretation.formula.kind,
                "inputs": list(interpretation.formula.inputs),
                "weights": list(interpretation.formula.weights)
                if interpretation.formula.weights else None,
            })

    # -- measure ------------------------------------------------------------

    def resolve_measure(self) -> str:
        attr_ref = self.parsed.attribute_ref
        if attr_ref.kind is RefKind.EXPLICIT:
            descriptor = self.dataset.attribute(attr_ref.attribute)
            if descriptor.kind is not AttributeKind.NUMERIC:
                raise SchemaError(
                    f"attribute {descriptor.name!r} is {descriptor.kind.value}; "
                    f"comparisons need a numeric measure")
            return descriptor.name
        entry = self.plan.attribute_entry()
        if entry is None:
            raise ResolutionError(
                f"no interpretation for implicit attribute {attr_ref.surface!r}")
        choice = entry.choice
        self._ensure_derived(choice)
        return choice.measure

    # -- value references -----------------------------------------------------

    def materialize(self, ref: ValueReference,
                    sibling_indices: set[int]) -> _MaterializedRef:
        if ref.kind is RefKind.EXPLICIT:
            return self._materialize_explicit(ref, sibling_indices)
        return self._materialize_implicit(ref)

    def _materialize_explicit(self, ref: ValueReference,
                              sibling_indices: set[int]) -> _MaterializedRef:
        indices = set(range(self.dataset.row_count))
        for match in ref.matches:
            indices &= _equality_indices(self.dataset, match.attribute, match.value)
            self.transforms.append({
                "type": "filter",
                "description": f"{match.attribute} = {match.value}"})
        if ref.complement and sibling_indices:
            indices -= sibling_indices
            self.transforms.append({
                "type": "filter",
                "description": "exclude the entity being compared against"})
        if not indices:
            raise EmptyResultError(
                f"no rows match {ref.surface!r} ({_ref_filter_description(ref)})",
                {"reference": ref.surface,
                 "filter": _ref_filter_description(ref)})
        if ref.plurality is Plurality.SINGLETON and ref.matches:
            label = str(ref.matches[0].value)
        else:
            label = ref.surface
        return _MaterializedRef(ref=ref, label=label, indices=tuple(sorted(indices)))

    def _materialize_implicit(self, ref: ValueReference) -> _MaterializedRef:
        entry = self.plan.value_entry(ref.surface)
        if entry is None:
            raise ResolutionError(f"no interpretation for {ref.surface!r} in the plan")
        choice = entry.choice
        self._ensure_derived(choice)
        predicate = choice.predicate
        stats = self._stats(predicate.attribute)
        indices = set(apply_filter(self.dataset, predicate, stats))
        threshold = predicate.threshold
        resolved = threshold.resolve(stats) if isinstance(threshold, ThresholdSpec) \
            else float(threshold)
        self.transforms.append({
            "type": "filter",
            "description": predicate.describe(),
            "resolved_threshold": round(resolved, 9),
        })
        for match in ref.matches:
            indices &= _equality_indices(self.dataset, match.attribute, match.value)
            self.transforms.append({
                "type": "filter",
                "description": f"{match.attribute} = {match.value}"})
        if not indices:
            raise EmptyResultError(
                f"no rows match {ref.surface!r}: {predicate.describe()} "
                f"(threshold {resolved:g})",
                {"reference": ref.surface, "predicate": predicate.describe(),
                 "threshold": resolved})
        polarity_max = predicate.comparator in (">", ">=")
        ordered: tuple[int, ...]
        if ref.plurality is Plurality.SINGLETON:
            # A singular implicit phrase ("a cheap book") names one entity:
            # the extremal matching row, ties broken by entity label.
            column = self.dataset.column(predicate.attribute)
            labels = self.dataset.column(self.dataset.entity_attribute().name)
            if polarity_max:
                extremal = min(indices, key=lambda i: (-column[i], str(labels[i])))
            else:
                extremal = min(indices, key=lambda i: (column[i], str(labels[i])))
            ordered = (extremal,)
            self.transforms.append({
                "type": "limit",
                "description": f"single entity: {'highest' if polarity_max else 'lowest'} "
                               f"{predicate.attribute} among matches"})
        else:
            ordered = tuple(sorted(indices))
        return _MaterializedRef(ref=ref, label=ref.surface, indices=ordered,
                                polarity_max=polarity_max)

    # -- row building ---------------------------------------------------------

    def rows_for(self, mat: _MaterializedRef, measure: str,
                 top_k: Optional[int]) -> list[dict]:
        entity = self.dataset.entity_attribute().name
        labels = self.dataset.column(entity)
        values = self.dataset.column(measure)
        rows = [(str(labels[i]), values[i]) for i in mat.indices
                if values[i] is not None]
        rows.sort(key=lambda pair: (-pair[1], pair[0]))
        if top_k is not None and len(rows) > top_k:
            rows = rows[:top_k]
            self.transforms.append({"type": "limit", "top_k": top_k, "by": measure})
        return [{entity: label, measure: value} for label, value in rows]


# ---------------------------------------------------------------------------
# Design assembly
# ---------------------------------------------------------------------------

def _group_field_name(dataset: Dataset) -> str:
    names = {a.name.lower() for a in dataset.schema}
    for candidate in ("Group", "Comparison group", "Compared group"):
        if candidate.lower() not in names:
            return candidate
    raise SchemaError("dataset reserves every group-label column name")


def _measure_axis(measure: str, title: Optional[str] = None) -> dict:
    enc = {"field": measure, "type": "quantitative"}
    if title:
        enc["title"] = title
    return enc


def _category_axis(category: str, sort: Optional[str] = None) -> dict:
    enc = {"field": category, "type": "nominal"}
    if sort:
        enc["sort"] = sort
    return enc


def _highlight_color(category: str, label: str, config: EngineConfig) -> dict:
    return {
        "condition": {"test": {"field": category, "equal": label},
                      "value": config.accent_color},
        "value": config.base_color,
    }


def _two_color(category: str, config: EngineConfig, legend: bool) -> dict:
    enc = {"field": category, "type": "nominal",
           "scale": {"range": [config.base_color, config.alt_color]}}
    if not legend:
        enc["legend"] = None
    return enc


def _value_label_layer(encoding: dict, horizontal: bool, font_size: int = 12) -> dict:
    mark: dict = {"type": "text", "fontSize": font_size}
    if horizontal:
        mark.update({"align": "left", "dx": 4, "baseline": "middle"})
    else:
        mark.update({"baseline": "bottom", "dy": -4})
    text_encoding = dict(encoding)
    measure_channel = "x" if horizontal else "y"
    text_encoding["text"] = {"field": encoding[measure_channel]["field"],
                             "type": "quantitative"}
    return {"mark": mark, "encoding": text_encoding}


def emit(recommendation: Recommendation, parsed: ParsedComparison,
         plan: ResolutionPlan, dataset: Dataset,
         config: EngineConfig = DEFAULT_CONFIG) -> ChartSpec:
    """Instantiate one recommended design into a concrete chart spec."""
    emitter = _Emitter(parsed, plan, dataset, config)
    measure = emitter.resolve_measure()
    design = recommendation.design.id
    cardinality = parsed.cardinality

    refs = list(parsed.value_refs)
    materialized: list[_MaterializedRef] = []
    sibling: set[int] = set()
    # Singletons first so complements can subtract them.
    for ref in sorted(refs, key=lambda r: r.plurality is Plurality.SET):
        mat = emitter.materialize(ref, sibling)
        sibling |= set(mat.indices)
        materialized.append(mat)
    materialized.sort(key=lambda m: refs.index(m.ref))

    caption = " | ".join(e.choice.provenance for e in plan.entries)
    interactive = ["tooltip"]
    if plan.entries:
        interactive.append("interpretation-controls")
    if cardinality in (Cardinality.WITHIN_SET, Cardinality.ONE_TO_MANY):
        interactive.append("filter-controls")

    if cardinality is Cardinality.ONE_TO_ONE:
        spec = _emit_one_to_one(design, emitter, materialized, measure, config)
    elif cardinality is Cardinality.ONE_TO_MANY:
        spec = _emit_one_to_many(design, emitter, materialized, measure, config)
    elif cardinality is Cardinality.WITHIN_SET:
        spec = _emit_within_set(design, emitter, materialized, measure, config)
    else:
        spec = _emit_set_to_set(design, emitter, materialized, measure, config)

    spec.caption = caption
    spec.transforms = emitter.transforms
    spec.interactive = interactive
    if not spec.data_rows:
        raise EmptyResultError(
            f"no rows with a {measure!r} value remain for this comparison",
            {"measure": measure})
    return spec


def _labels_title(measure_title: str, labels: list[str]) -> str:
    return f"{measure_title}: " + " vs ".join(labels) if labels else measure_title


# -- 1-1 ---------------------------------------------------------------------

def _emit_one_to_one(design: str, emitter: _Emitter,
                     mats: list[_MaterializedRef], measure: str,
                     config: EngineConfig) -> ChartSpec:
    rows = []
    for mat in mats:
        rows.extend(emitter.rows_for(mat, measure, top_k=None))
    entity = emitter.dataset.entity_attribute().name
    title = _labels_title(measure, [m.label for m in mats])

    if design == "A":
        encoding = {
            "x": _category_axis(entity),
            "y": _measure_axis(measure),
            "color": _two_color(entity, config, legend=False),
        }
        body = {"layer": [{"mark": {"type": "bar"}, "encoding": encoding},
                          _value_label_layer(encoding, horizontal=False)]}
        mark = "bar"
    elif design in ("B", "C"):
        size = {"field": measure, "type": "quantitative", "legend": None,
                "scale": {"range": [400, 3600]}}
        if design == "B":
            encoding = {"x": _category_axis(entity),
                        "size": size,
                        "color": _two_color(entity, config, legend=False)}
            circle = {"mark": {"type": "circle", "opacity": 1, "y": 70},
                      "encoding": encoding}
            text = {"mark": {"type": "text", "fontSize": 24, "y": 170},
                    "encoding": {"x": _category_axis(entity),
                                 "text": {"field": measure, "type": "quantitative"}}}
            body = {"height": 200, "layer": [circle, text]}
        else:
            encoding = {"y": _category_axis(entity),
                        "size": size,
                        "color": _two_color(entity, config, legend=False)}
            circle = {"mark": {"type": "circle", "opacity": 1, "x": 70},
                      "encoding": encoding}
            text = {"mark": {"type": "text", "fontSize": 24, "x": 200, "align": "left"},
                    "encoding": {"y": _category_axis(entity),
                                 "text": {"field": measure, "type": "quantitative"}}}
            body = {"width": 300, "layer": [circle, text]}
        mark = "unit"
    elif design == "D":
        encoding = {
            "x": {**_category_axis(entity), "axis": {"labels": False, "title": None}},
            "y": _measure_axis(measure),
            "color": _two_color(entity, config, legend=True),
        }
        body = {"mark": {"type": "bar"}, "encoding": encoding}
        mark = "bar"
    else:
        raise SchemaError(f"design {design!r} is not a 1-1 design")

    return ChartSpec(design=design, title=title, caption="", mark=mark,
                     data_rows=rows, encodings=encoding, transforms=[],
                     highlight=None, interactive=[], body=body)


# -- 1-n ---------------------------------------------------------------------

def _emit_one_to_many(design: str, emitter: _Emitter,
                      mats: list[_MaterializedRef], measure: str,
                      config: EngineConfig) -> ChartSpec:
    singleton = next(m for m in mats if m.ref.plurality is Plurality.SINGLETON)
    others = next(m for m in mats if m is not singleton)
    entity = emitter.dataset.entity_attribute().name
    title = _labels_title(measure, [m.label for m in mats])

    singleton_rows = emitter.rows_for(singleton, measure, top_k=None)
    if not singleton_rows:
        raise EmptyResultError(
            f"the entity {singleton.label!r} has no {measure!r} value",
            {"reference": singleton.label, "measure": measure})
    highlight = singleton_rows[0][entity]

    if design == "F":
        group = _group_field_name(emitter.dataset)
        other_values = [row[measure] for row in
                        emitter.rows_for(others, measure, top_k=None)]
        if not other_values:
            raise EmptyResultError(
                f"no rows remain in {others.label!r} to aggregate",
                {"reference": others.label})
        aggregate = sum(other_values) / len(other_values)
        emitter.transforms.append({"type": "aggregate", "op": config.aggregate,
                                   "groupby": group, "over": len(other_values)})
        s_values = [row[measure] for row in singleton_rows]
        rows = [
            {group: singleton.label, measure: sum(s_values) / len(s_values)},
            {group: f"{others.label} ({config.aggregate})", measure: aggregate},
        ]
        axis_title = f"{config.aggregate.capitalize()} of {measure}"
        encoding = {
            "y": {**_category_axis(group), "sort": None, "title": None},
            "x": _measure_axis(measure, title=axis_title),
            "color": _highlight_color(group, singleton.label, config),
        }
        body = {"layer": [{"mark": {"type": "bar"}, "encoding": encoding},
                          _value_label_layer(encoding, horizontal=True)]}
        return ChartSpec(design=design, title=title, caption="", mark="bar",
                         data_rows=rows, encodings=encoding, transforms=[],
                         highlight=singleton.label, interactive=[], body=body)

    other_rows = emitter.rows_for(others, measure, top_k=config.top_k)
    rows = singleton_rows + [r for r in other_rows if r[entity] != highlight]

    if design == "E":
        encoding = {
            "y": {**_category_axis(entity), "sort": "-x"},
            "x": _measure_axis(measure),
            "color": _highlight_color(entity, highlight, config),
        }
        body = {"mark": {"type": "bar"}, "encoding": encoding}
        mark = "bar"
    elif design == "G":
        encoding = {
            "y": {**_category_axis(entity), "sort": "-x"},
            "x": _measure_axis(measure),
            "color": _highlight_color(entity, highlight, config),
        }
        body = {"mark": {"type": "point", "filled": True, "size": 90},
                "encoding": encoding}
        mark = "dot"
    elif design == "H":
        encoding = {
            "x": _measure_axis(measure),
            "color": _highlight_color(entity, highlight, config),
        }
        body = {"mark": {"type": "circle", "size": 90, "opacity": 0.85},
                "encoding": encoding}
        mark = "scatter"
    else:
        raise SchemaError(f"design {design!r} is not a 1-n design")

    return ChartSpec(design=design, title=title, caption="", mark=mark,
                     data_rows=rows, encodings=encoding, transforms=[],
                     highlight=highlight, interactive=[], body=body)


# -- n -------------------------------------------------------------------------

def _emit_within_set(design: str, emitter: _Emitter,
                     mats: list[_MaterializedRef], measure: str,
                     config: EngineConfig) -> ChartSpec:
    mat = mats[0]
    entity = emitter.dataset.entity_attribute().name
    rows = emitter.rows_for(mat, measure, top_k=config.top_k)
    title = _labels_title(measure, [mat.label])

    if design == "I":
        encoding = {
            "y": {**_category_axis(entity), "sort": "-x"},
            "x": _measure_axis(measure),
            "color": {"value": config.base_color},
        }
        body = {"mark": {"type": "bar"}, "encoding": encoding}
        mark = "bar"
    elif design == "J":
        inner_encoding = {"y": _measure_axis(measure),
                          "color": {"value": config.base_color}}
        body = {
            "facet": {"column": {"field": entity, "type": "nominal",
                                 "sort": {"field": measure, "op": "max",
                                          "order": "descending"},
                                 "header": {"labelAngle": -35, "labelAlign": "right"}}},
            "spec": {"width": 60, "mark": {"type": "bar"},
                     "encoding": inner_encoding},
        }
        encoding = {"column": {"field": entity, "type": "nominal"}, **inner_encoding}
        mark = "bar"
    elif design == "K":
        encoding = {"x": _measure_axis(measure), "color": {"value": config.base_color}}
        body = {"mark": {"type": "circle", "size": 90, "opacity": 0.85},
                "encoding": encoding}
        mark = "scatter"
    elif design == "L":
        encoding = {"x": _measure_axis(measure), "color": {"value": config.base_color}}
        body = {"mark": {"type": "boxplot"}, "encoding": encoding}
        mark = "box"
    else:
        raise SchemaError(f"design {design!r} is not an n design")

    return ChartSpec(design=design, title=title, caption="", mark=mark,
                     data_rows=rows, encodings=encoding, transforms=[],
                     highlight=None, interactive=[], body=body)


# -- n-m -----------------------------------------------------------------------

def _emit_set_to_set(design: str, emitter: _Emitter,
                     mats: list[_MaterializedRef], measure: str,
                     config: EngineConfig) -> ChartSpec:
    entity = emitter.dataset.entity_attribute().name
    group = _group_field_name(emitter.dataset)
    title = _labels_title(measure, [m.label for m in mats])

    per_set_rows: list[tuple[str, list[dict]]] = []
    for mat in mats:
        rows = emitter.rows_for(mat, measure, top_k=config.top_k)
        per_set_rows.append((mat.label, rows))

    if design == "O":
        rows = []
        for label, set_rows in per_set_rows:
            values = [r[measure] for r in set_rows]
            if not values:
                raise EmptyResultError(
                    f"no rows remain in {label!r} to aggregate", {"reference": label})
            rows.append({group: label, measure: sum(values) / len(values)})
        emitter.transforms.append({"type": "aggregate", "op": config.aggregate,
                                   "groupby": group})
        axis_title = f"{config.aggregate.capitalize()} of {measure}"
        encoding = {
            "x": {**_category_axis(group), "sort": None, "title": None},
            "y": _measure_axis(measure, title=axis_title),
            "color": _two_color(group, config, legend=True),
        }
        body = {"layer": [{"mark": {"type": "bar"}, "encoding": encoding},
                          _value_label_layer(encoding, horizontal=False)]}
        return ChartSpec(design=design, title=title, caption="", mark="bar",
                         data_rows=rows, encodings=encoding, transforms=[],
                         highlight=None, interactive=[], body=body)

    rows = []
    for label, set_rows in per_set_rows:
        for row in set_rows:
            rows.append({group: label, **row})

    if design == "M":
        encoding = {
            "x": {**_category_axis(group), "title": None},
            "xOffset": {"field": entity, "sort": "-y"},
            "y": _measure_axis(measure),
            "color": _two_color(group, config, legend=True),
        }
        body = {"mark": {"type": "bar"}, "encoding": encoding}
        mark = "bar"
    elif design == "N":
        inner = {
            "x": {**_category_axis(entity), "sort": "-y",
                  "axis": {"labelAngle": -35}},
            "y": _measure_axis(measure),
            "color": _two_color(group, config, legend=False),
        }
        body = {
            "facet": {"column": {"field": group, "type": "nominal"}},
            "spec": {"mark": {"type": "bar"}, "encoding": inner},
        }
        encoding = {"column": {"field": group, "type": "nominal"}, **inner}
        mark = "bar"
    elif design == "P":
        encoding = {
            "x": _measure_axis(measure),
            "color": _two_color(group, config, legend=True),
        }
        body = {"mark": {"type": "circle", "size": 90, "opacity": 0.85},
                "encoding": encoding}
        mark = "scatter"
    else:
        raise SchemaError(f"design {design!r} is not an n-m design")

    return ChartSpec(design=design, title=title, caption="", mark=mark,
                     data_rows=rows, encodings=encoding, transforms=[],
                     highlight=None, interactive=[], body=body)
