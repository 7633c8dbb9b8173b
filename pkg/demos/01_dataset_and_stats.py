"""
Loading tabular data, inferring a schema, and computing column statistics
==========================================================================

The dataset layer ingests RFC-4180 CSV, types each column as categorical,
numeric, or temporal, and exposes the statistics that vague-phrase
resolution needs (mean, median, nearest-rank percentiles).
"""

from pathlib import Path

from compareviz import (DerivedAttributeFormula, Predicate, ThresholdSpec,
                        apply_filter, column_stats, derive_attribute,
                        load_dataset)

SAMPLES = Path(__file__).parent.parent / "sample_data"

books = load_dataset((SAMPLES / "books.csv").read_text())
print("columns:")
for attr in books.schema:
    print(f"  {attr.name:12} {attr.kind.value}")
print("rows:", books.row_count)

# Column statistics: the vocabulary used to resolve "high rated", "cheap", ...
stats = column_stats(books, "Price")
print(f"\nPrice: mean={stats.mean:.2f} median={stats.median} "
      f"p95={stats.percentile(95)} range=[{stats.min}, {stats.max}]")

# Filters with symbolic thresholds resolve against the statistics.
cheap = apply_filter(books, Predicate("Price", "<", ThresholdSpec("mean")), stats)
print(f"books priced below the mean: {len(cheap)} of {books.row_count}")

# Derived attributes: new numeric columns computed from existing ones.
olympics = load_dataset((SAMPLES / "olympics.csv").read_text())
formula = DerivedAttributeFormula("sum-of", ("Gold", "Silver", "Bronze"))
olympics = derive_attribute(olympics, formula)
totals = olympics.column(formula.name)
names = olympics.column("Name")
best = max(range(len(totals)), key=lambda i: totals[i])
print(f"\nmost decorated athlete in the sample: {names[best]} "
      f"({totals[best]:.0f} medals, column {formula.name!r})")

# A sidecar metadata document can override inferred kinds and add units.
weird = load_dataset("Code,Reading\n1001,5.1\n1002,4.8\n",
                     metadata={"columns": {"Code": {"kind": "categorical"},
                                           "Reading": {"unit": "mm"}}})
print("\noverridden kinds:", {a.name: a.kind.value for a in weird.schema})
