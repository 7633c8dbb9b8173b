"""Tabular dataset model: typed schema inference, column statistics, derived
attributes, and row filtering.

A loaded :class:`Dataset` is immutable; every operation is a pure read and a
derivation returns a new dataset value, so concurrent use needs no locking.
Cells are ``str`` (categorical), ``float`` (numeric), ``int`` or ``str``
(temporal: year or ISO date), or ``None`` for a missing cell. Missing cells
are excluded from statistics and never satisfy a predicate.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from .errors import DatasetError, SchemaError

_YEAR_RE = re.compile(r"^\d{4}$")
_ISO_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


class AttributeKind(str, Enum):
    CATEGORICAL = "categorical"
    NUMERIC = "numeric"
    TEMPORAL = "temporal"


@dataclass(frozen=True)
class AttributeDescriptor:
    name: str
    kind: AttributeKind
    unit: Optional[str] = None


def _canon(name: str) -> str:
    """Case/whitespace-insensitive key used for attribute lookups."""
    return " ".join(name.lower().split())


@dataclass(frozen=True)
class Dataset:
    schema: tuple[AttributeDescriptor, ...]
    rows: tuple[tuple, ...]

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.schema)

    def index_of(self, name: str) -> int:
        key = _canon(name)
        for i, attr in enumerate(self.schema):
            if _canon(attr.name) == key:
                return i
        raise SchemaError(f"unknown attribute: {name!r}",
                          {"attribute": name, "known": list(self.attribute_names)})

    def attribute(self, name: str) -> AttributeDescriptor:
        return self.schema[self.index_of(name)]

    def column(self, name: str) -> list:
        i = self.index_of(name)
        return [row[i] for row in self.rows]

    def entity_attribute(self) -> AttributeDescriptor:
        """The label column used to name entities in charts: the categorical
        attribute with the most distinct values (schema order breaks ties)."""
        best = None
        best_count = -1
        for attr in self.schema:
            if attr.kind is not AttributeKind.CATEGORICAL:
                continue
            count = len({c for c in self.column(attr.name) if c is not None})
            if count > best_count:
                best, best_count = attr, count
        if best is None:
            raise SchemaError("dataset has no categorical attribute to label entities")
        return best


# ---------------------------------------------------------------------------
# Schema inference and CSV loading
# ---------------------------------------------------------------------------

def _parse_number(cell: str) -> Optional[float]:
    try:
        value = float(cell.replace(",", "")) if "," in cell else float(cell)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def _parse_temporal(cell: str):
    if _YEAR_RE.match(cell):
        return int(cell)
    if _ISO_DATE_RE.match(cell):
        return cell
    return None


def infer_schema(header: Sequence[str], sample: Iterable[Sequence[str]],
                 overrides: Optional[dict] = None) -> tuple[AttributeDescriptor, ...]:
    """Infer one :class:`AttributeDescriptor` per column.

    A column is numeric if every non-missing cell parses as a finite number,
    temporal if every non-missing cell is a 4-digit year or ISO date, else
    categorical. ``overrides`` maps column name -> {"kind": ..., "unit": ...}
    from the sidecar metadata document.
    """
    names = [h.strip() for h in header]
    if any(not n for n in names):
        raise DatasetError("empty column name in header")
    seen: dict[str, str] = {}
    for n in names:
        key = _canon(n)
        if key in seen:
            raise DatasetError(f"duplicate column name after normalization: {n!r} vs {seen[key]!r}")
        seen[key] = n

    columns: list[list[str]] = [[] for _ in names]
    for row in sample:
        for i, cell in enumerate(row):
            columns[i].append(cell)

    overrides = {_canon(k): v for k, v in (overrides or {}).items()}
    descriptors = []
    for name, cells in zip(names, columns):
        non_missing = [c.strip() for c in cells if c is not None and c.strip() != ""]
        # Temporal wins over numeric: a column of 4-digit years parses as
        # numbers too, but names a point in time.
        if non_missing and all(_parse_temporal(c) is not None for c in non_missing):
            kind = AttributeKind.TEMPORAL
        elif non_missing and all(_parse_number(c) is not None for c in non_missing):
            kind = AttributeKind.NUMERIC
        else:
            kind = AttributeKind.CATEGORICAL
        unit = None
        override = overrides.get(_canon(name))
        if override:
            if "kind" in override:
                try:
                    kind = AttributeKind(override["kind"])
                except ValueError:
                    raise DatasetError(f"unknown kind {override['kind']!r} for column {name!r}")
            unit = override.get("unit")
        descriptors.append(AttributeDescriptor(name=name, kind=kind, unit=unit))
    return tuple(descriptors)


def _coerce(cell: str, kind: AttributeKind, column: str, row_index: int):
    cell = cell.strip()
    if cell == "":
        return None
    if kind is AttributeKind.NUMERIC:
        value = _parse_number(cell)
        if value is None:
            raise DatasetError(
                f"row {row_index}: cell {cell!r} in numeric column {column!r} is not a finite number",
                {"row": row_index, "column": column})
        return value
    if kind is AttributeKind.TEMPORAL:
        value = _parse_temporal(cell)
        if value is None:
            raise DatasetError(
                f"row {row_index}: cell {cell!r} in temporal column {column!r} is not a year or ISO date",
                {"row": row_index, "column": column})
        return value
    return cell


def load_dataset(data: Union[str, bytes], metadata: Optional[dict] = None) -> Dataset:
    """Load an RFC-4180 CSV (UTF-8, header row, empty string = missing cell).

    ``metadata`` is the optional sidecar document: a mapping of column name to
    ``{"kind": ..., "unit": ...}``, or ``{"columns": {...}}`` wrapping the same.
    Row order is preserved. A row whose cell count differs from the header
    raises a :class:`DatasetError` naming the row index (1-based, data rows).
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if not data.strip():
        raise DatasetError("empty input: no header row")

    reader = csv.reader(io.StringIO(data))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError("empty input: no header row")
    raw_rows = [row for row in reader if row]  # skip fully blank records
    for i, row in enumerate(raw_rows, start=1):
        if len(row) != len(header):
            raise DatasetError(
                f"row {i}: expected {len(header)} cells, found {len(row)}",
                {"row": i, "expected": len(header), "found": len(row)})

    overrides = None
    if metadata:
        overrides = metadata.get("columns", metadata)
    schema = infer_schema(header, raw_rows, overrides)
    rows = tuple(
        tuple(_coerce(cell, attr.kind, attr.name, i)
              for cell, attr in zip(row, schema))
        for i, row in enumerate(raw_rows, start=1)
    )
    return Dataset(schema=schema, rows=rows)


# ---------------------------------------------------------------------------
# Column statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ColumnStats:
    """Statistics over a numeric column's non-missing cells.

    Percentiles use the nearest-rank method; the median is defined as the
    nearest-rank 50th percentile so that percentile(50) == median holds for
    every column length.
    """

    attribute: str
    count: int
    mean: float
    min: float
    max: float
    distinct_count: int
    sorted_values: tuple[float, ...]

    @property
    def median(self) -> float:
        return self.percentile(50)

    def percentile(self, p: float) -> float:
        if not 0 <= p <= 100:
            raise ValueError(f"percentile must be in [0, 100], got {p}")
        n = len(self.sorted_values)
        rank = max(1, math.ceil(p / 100.0 * n))
        return self.sorted_values[rank - 1]


def column_stats(dataset: Dataset, attribute: str) -> ColumnStats:
    attr = dataset.attribute(attribute)
    if attr.kind is not AttributeKind.NUMERIC:
        raise SchemaError(f"attribute {attr.name!r} is {attr.kind.value}, not numeric",
                          {"attribute": attr.name, "kind": attr.kind.value})
    values = [c for c in dataset.column(attr.name) if c is not None]
    if not values:
        raise SchemaError(f"attribute {attr.name!r} has no non-missing cells",
                          {"attribute": attr.name})
    ordered = tuple(sorted(values))
    return ColumnStats(
        attribute=attr.name,
        count=len(values),
        mean=math.fsum(values) / len(values),
        min=ordered[0],
        max=ordered[-1],
        distinct_count=len(set(values)),
        sorted_values=ordered,
    )


# ---------------------------------------------------------------------------
# Derived attributes
# ---------------------------------------------------------------------------

FORMULA_KINDS = ("sum-of", "difference-of", "weighted-sum-of")


@dataclass(frozen=True)
class DerivedAttributeFormula:
    kind: str
    inputs: tuple[str, ...]
    weights: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.kind not in FORMULA_KINDS:
            raise SchemaError(f"unknown formula kind: {self.kind!r}")
        if self.kind == "difference-of" and len(self.inputs) != 2:
            raise SchemaError("difference-of takes exactly two inputs")
        if self.weights is not None and len(self.weights) != len(self.inputs):
            raise SchemaError(
                f"{len(self.weights)} weights for {len(self.inputs)} inputs",
                {"inputs": list(self.inputs)})
        if self.kind == "weighted-sum-of" and self.weights is None:
            raise SchemaError("weighted-sum-of requires weights")

    @property
    def name(self) -> str:
        """Display/field name of the derived attribute (also used on chart axes)."""
        if self.kind == "sum-of":
            return "Sum of " + ", ".join(self.inputs)
        if self.kind == "difference-of":
            return f"{self.inputs[0]} minus {self.inputs[1]}"
        return "Weighted sum of " + ", ".join(self.inputs)

    def evaluate(self, cells: Sequence[Optional[float]]) -> Optional[float]:
        if any(c is None for c in cells):
            return None
        if self.kind == "sum-of":
            return math.fsum(cells)
        if self.kind == "difference-of":
            return cells[0] - cells[1]
        return math.fsum(w * c for w, c in zip(self.weights, cells))


def derive_attribute(dataset: Dataset, formula: DerivedAttributeFormula) -> Dataset:
    """Return a new dataset with the formula's numeric attribute appended.

    Rows with any missing input get a missing derived cell. Re-deriving an
    already-present identical column returns an equal dataset (idempotent).
    """
    indices = []
    for name in formula.inputs:
        attr = dataset.attribute(name)
        if attr.kind is not AttributeKind.NUMERIC:
            raise SchemaError(f"formula input {attr.name!r} is {attr.kind.value}, not numeric")
        indices.append(dataset.index_of(name))

    values = [formula.evaluate([row[i] for i in indices]) for row in dataset.rows]

    existing = {_canon(a.name) for a in dataset.schema}
    if _canon(formula.name) in existing:
        current = dataset.column(formula.name)
        if current == values:
            return dataset
        raise SchemaError(f"attribute {formula.name!r} already exists with different values")

    schema = dataset.schema + (AttributeDescriptor(formula.name, AttributeKind.NUMERIC),)
    rows = tuple(row + (v,) for row, v in zip(dataset.rows, values))
    return Dataset(schema=schema, rows=rows)


# ---------------------------------------------------------------------------
# Predicates and filtering
# ---------------------------------------------------------------------------

COMPARATORS = {
    ">": lambda a, b: a > b,
    "<": lambda a, b: a < b,
    ">=": lambda a, b: a >= b,
    "<=": lambda a, b: a <= b,
    "=": lambda a, b: a == b,
}

_ORDINAL_SUFFIX = {1: "st", 2: "nd", 3: "rd"}


def _ordinal(p: float) -> str:
    n = int(p) if float(p).is_integer() else p
    if isinstance(n, int):
        suffix = "th" if 10 <= n % 100 <= 20 else _ORDINAL_SUFFIX.get(n % 10, "th")
        return f"{n}{suffix}"
    return f"{n}th"


@dataclass(frozen=True)
class ThresholdSpec:
    """Symbolic threshold: resolved to a constant against a column's stats."""

    policy: str  # "mean" | "median" | "percentile" | "constant"
    value: Optional[float] = None  # p for percentile, c for constant

    def __post_init__(self):
        if self.policy not in ("mean", "median", "percentile", "constant"):
            raise SchemaError(f"unknown threshold policy: {self.policy!r}")
        if self.policy in ("percentile", "constant") and self.value is None:
            raise SchemaError(f"policy {self.policy!r} needs a value")

    def resolve(self, stats: ColumnStats) -> float:
        if self.policy == "mean":
            return stats.mean
        if self.policy == "median":
            return stats.median
        if self.policy == "percentile":
            return stats.percentile(self.value)
        return self.value

    def describe(self, attribute: str) -> str:
        if self.policy == "mean":
            return f"mean({attribute})"
        if self.policy == "median":
            return f"median({attribute})"
        if self.policy == "percentile":
            return f"{_ordinal(self.value)} percentile of {attribute}"
        return f"{self.value:g}"


@dataclass(frozen=True)
class Predicate:
    attribute: str  # base or derived attribute name
    comparator: str  # > < >= <= =
    threshold: Union[float, int, ThresholdSpec]

    def __post_init__(self):
        if self.comparator not in COMPARATORS:
            raise SchemaError(f"unknown comparator: {self.comparator!r}")

    def describe(self) -> str:
        if isinstance(self.threshold, ThresholdSpec):
            rhs = self.threshold.describe(self.attribute)
        else:
            rhs = f"{self.threshold:g}"
        return f"{self.attribute} {self.comparator} {rhs}"


def apply_filter(dataset: Dataset, predicate: Predicate,
                 stats: Optional[ColumnStats] = None) -> frozenset[int]:
    """Row indices whose cell satisfies the resolved comparison.

    Missing cells never satisfy. ``stats`` is required when the threshold is
    symbolic; when omitted it is computed from the dataset.
    """
    attr = dataset.attribute(predicate.attribute)
    if attr.kind is not AttributeKind.NUMERIC:
        raise SchemaError(f"cannot filter on {attr.kind.value} attribute {attr.name!r}")
    if isinstance(predicate.threshold, ThresholdSpec):
        if stats is None:
            stats = column_stats(dataset, attr.name)
        if _canon(stats.attribute) != _canon(attr.name):
            raise SchemaError(
                f"threshold for {attr.name!r} cannot resolve from stats of {stats.attribute!r}")
        threshold = predicate.threshold.resolve(stats)
    else:
        threshold = float(predicate.threshold)
    compare = COMPARATORS[predicate.comparator]
    column = dataset.column(attr.name)
    return frozenset(i for i, cell in enumerate(column)
                     if cell is not None and compare(cell, threshold))
