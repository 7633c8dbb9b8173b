"""Acceptance criteria, one test per criterion, each printing a pass/fail
line. Run with `pytest tests/test_acceptance.py -v -s` to see every line.
"""

import math
import random
import statistics
import time

import pytest
from fastapi.testclient import TestClient

from compareviz.catalog import recommend
from compareviz.charts import emit, encoded_fields
from compareviz.config import EngineConfig
from compareviz.data import (AttributeDescriptor, AttributeKind, Dataset,
                             Predicate, ThresholdSpec, apply_filter,
                             column_stats)
from compareviz.engine import Engine
from compareviz.parsing import RefKind, parse
from compareviz.resolver import (build_plan, resolve_attribute, resolve_value)
from compareviz.service import create_app

from conftest import BOOKS_QUERY_MATRIX, read_sample
from paper_forms import EXPECTED_17, signature
from test_resolver import implicit_attr, implicit_value


def report(name: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    print(line)
    assert ok, line


# ---------------------------------------------------------------------------
# 1. Utterance classification suite (8/8, < 1s)
# ---------------------------------------------------------------------------

def test_criterion_1_classification(netflix, olympics, sales, lexicon):
    cases = [
        ("compare the IMDB ratings of Squid Game and Midnight Mass", netflix,
         {"cardinality": "1-1"}),
        ("compare the performance of Starling to other PG-13 movies", netflix,
         {"cardinality": "1-n"}),
        ("compare the budgets across all US movies", netflix,
         {"cardinality": "n"}),
        ("compare crime shows to thriller shows in terms of box office", netflix,
         {"cardinality": "n-m"}),
        ("compare the sales for Washington and California", sales,
         {"cardinality": "1-1", "cell": "ev-ea"}),
        ("compare the popularity of all movies in 2021", netflix,
         {"attribute_kind": "implicit"}),
        ("compare the number of silver medals won by Rebecca Adlington to all "
         "other participants in the Women's Swimming Event", olympics,
         {"cardinality": "1-n", "cell": "ev-ea"}),
        ("compare the performance of other PG-13 movies to Starling", netflix,
         {"same_as": 1}),
    ]
    started = time.perf_counter()
    parses = [parse(utterance, ds, lexicon.terms) for utterance, ds, _ in cases]
    elapsed = time.perf_counter() - started

    passed = 0
    for i, ((utterance, _, want), parsed) in enumerate(zip(cases, parses)):
        ok = True
        if "cardinality" in want:
            ok &= parsed.cardinality.value == want["cardinality"]
        if "cell" in want:
            ok &= parsed.concreteness.cell == want["cell"]
        if "attribute_kind" in want:
            ok &= parsed.attribute_ref.kind.value == want["attribute_kind"]
        if "same_as" in want:
            other = parses[want["same_as"]]
            key = lambda r: (r.surface, r.kind, r.plurality)
            ok &= (parsed.cardinality == other.cardinality
                   and parsed.concreteness.cell == other.concreteness.cell
                   and sorted(map(key, parsed.value_refs))
                   == sorted(map(key, other.value_refs)))
        if ok:
            passed += 1
        else:
            print(f"  classification miss: {utterance!r} -> "
                  f"{parsed.cardinality.value} {parsed.concreteness.cell}")
    report("criterion 1 (classification)", passed == 8 and elapsed < 1.0,
           f"{passed}/8 utterances, {elapsed * 1000:.0f} ms")


# ---------------------------------------------------------------------------
# 2. Implicit-resolution suite (17/17)
# ---------------------------------------------------------------------------

def test_criterion_2_implicit_resolution(netflix, olympics, lexicon):
    datasets = {"netflix": netflix, "olympics": olympics}
    passed = 0
    for label, dataset_name, role, term, forms in EXPECTED_17:
        dataset = datasets[dataset_name]
        if role == "attribute":
            interps = resolve_attribute(implicit_attr(term), dataset, lexicon)
        else:
            interps = resolve_value(implicit_value(term), dataset, lexicon)
        got = {signature(i) for i in interps}
        if got & set(forms):
            passed += 1
        else:
            print(f"  resolution miss: {label}: {sorted(got)}")
    report("criterion 2 (implicit resolution)", passed == len(EXPECTED_17),
           f"{passed}/{len(EXPECTED_17)} terms realize a listed form")


# ---------------------------------------------------------------------------
# 3. Ranking constraints (16/16 cells)
# ---------------------------------------------------------------------------

def test_criterion_3_ranking(books, lexicon):
    per_cardinality: dict[str, list] = {}
    passed = 0
    for (cardinality, cell), utterance in BOOKS_QUERY_MATRIX.items():
        parsed = parse(utterance, books, lexicon.terms)
        plan = build_plan(parsed, books, lexicon)
        recs = recommend(parsed, plan)
        ranks = {r.design.id: r.rank for r in recs}
        ok = sorted(ranks.values()) == [1, 2, 3, 4]
        if cardinality == "1-1":
            ok &= max(ranks["A"], ranks["B"]) < min(ranks["C"], ranks["D"])
        elif cardinality == "1-n":
            ok &= ranks["E"] < ranks["F"] < min(ranks["G"], ranks["H"])
        elif cardinality == "n":
            ok &= max(ranks["I"], ranks["J"]) < ranks["K"] < ranks["L"]
        else:
            ok &= max(ranks["M"], ranks["N"], ranks["O"]) < ranks["P"]
        per_cardinality.setdefault(cardinality, []).append(
            [(r.design.id, r.rank, r.tier) for r in recs])
        if ok:
            passed += 1
        else:
            print(f"  ranking violation in cell ({cardinality}, {cell}): {ranks}")
    consistent = all(all(x == runs[0] for x in runs)
                     for runs in per_cardinality.values())
    report("criterion 3 (ranking constraints)", passed == 16 and consistent,
           f"{passed}/16 cells ordinally correct, "
           f"consistent across concreteness: {consistent}")


# ---------------------------------------------------------------------------
# 4. Filter oracle (1000 random columns, 0 mismatches)
# ---------------------------------------------------------------------------

def _nearest_rank(values, p):
    ordered = sorted(values)
    rank = max(1, math.ceil(p / 100.0 * len(ordered)))
    return ordered[rank - 1]


def test_criterion_4_filter_oracle():
    rng = random.Random(20240809)
    comparators = [">", "<", ">=", "<=", "="]
    mismatches = 0
    percentile_mismatches = 0
    for _ in range(1000):
        n = rng.randint(1, 200)
        cells = []
        for _ in range(n):
            if rng.random() < 0.05:
                cells.append(None)
            elif rng.random() < 0.5:
                cells.append(float(rng.randint(-50, 50)))
            else:
                cells.append(round(rng.uniform(-1000, 1000), 3))
        if all(c is None for c in cells):
            cells[0] = 1.0
        ds = Dataset(
            schema=(AttributeDescriptor("x", AttributeKind.NUMERIC),),
            rows=tuple((c,) for c in cells))
        stats = column_stats(ds, "x")
        non_missing = [c for c in cells if c is not None]

        p = rng.choice([0, 5, 25, 50, 80, 95, 100])
        if stats.percentile(p) != _nearest_rank(non_missing, p):
            percentile_mismatches += 1

        policy = rng.choice([ThresholdSpec("mean"), ThresholdSpec("median"),
                             ThresholdSpec("percentile", p)])
        comparator = rng.choice(comparators)
        resolved = policy.resolve(stats)
        got = apply_filter(ds, Predicate("x", comparator, policy), stats)
        compare = {"<": lambda a, b: a < b, ">": lambda a, b: a > b,
                   ">=": lambda a, b: a >= b, "<=": lambda a, b: a <= b,
                   "=": lambda a, b: a == b}[comparator]
        expected = {i for i, c in enumerate(cells)
                    if c is not None and compare(c, resolved)}
        if got != expected:
            mismatches += 1
    report("criterion 4 (filter oracle)",
           mismatches == 0 and percentile_mismatches == 0,
           f"1000 columns: {mismatches} filter mismatches, "
           f"{percentile_mismatches} percentile mismatches")


# ---------------------------------------------------------------------------
# 5. Spec validity and minimality (64/64)
# ---------------------------------------------------------------------------

def test_criterion_5_spec_validity(books, lexicon, vega_lite_validator):
    passed = 0
    total = 0
    for (cardinality, cell), utterance in BOOKS_QUERY_MATRIX.items():
        parsed = parse(utterance, books, lexicon.terms)
        plan = build_plan(parsed, books, lexicon)
        measure = parsed.attribute_ref.attribute or plan.attribute_entry().choice.measure
        allowed = {"Book Title", "Group", measure}
        for rec in recommend(parsed, plan):
            total += 1
            spec = emit(rec, parsed, plan, books, EngineConfig())
            doc = spec.to_document()
            problems = []
            if list(vega_lite_validator.iter_errors(doc)):
                problems.append("schema-invalid")
            fields = encoded_fields(doc)
            if not fields <= allowed or measure not in fields:
                problems.append(f"fields {sorted(fields)} != {sorted(allowed)}")
            if cardinality == "1-n" and spec.highlight is None:
                problems.append("missing singleton highlight")
            if cell != "ev-ea":
                if not spec.caption or \
                        any(e.choice.provenance not in spec.caption
                            for e in plan.entries):
                    problems.append("caption missing provenance")
            if problems:
                print(f"  spec problem ({cardinality},{cell},{rec.design.id}): "
                      f"{problems}")
            else:
                passed += 1
    report("criterion 5 (spec validity and minimality)", passed == total == 64,
           f"{passed}/{total} specs valid, minimal, highlighted, captioned")


# ---------------------------------------------------------------------------
# 6. Determinism (byte-identical across 10 runs)
# ---------------------------------------------------------------------------

def test_criterion_6_determinism(lexicon):
    books_csv = read_sample("books.csv")
    baselines = None
    identical = True
    for _ in range(10):
        engine = Engine.from_csv(books_csv, lexicon=lexicon)
        outputs = [engine.respond_json(utterance)
                   for utterance in BOOKS_QUERY_MATRIX.values()]
        if baselines is None:
            baselines = outputs
        elif outputs != baselines:
            identical = False
            break
    report("criterion 6 (determinism)", identical,
           f"{len(BOOKS_QUERY_MATRIX)} utterances x 10 runs byte-identical: "
           f"{identical}")


# ---------------------------------------------------------------------------
# 7. Desk-scale performance (< 50 ms median over 100 runs)
# ---------------------------------------------------------------------------

def _seventy_row_csv() -> str:
    lines = read_sample("books.csv").strip().split("\n")
    header, rows = lines[0], lines[1:]
    extra = []
    for i in range(70 - len(rows)):
        base = rows[i].split(",")
        base[0] = f"{base[0]} (Vol. {i + 2})"
        extra.append(",".join(base))
    return "\n".join([header] + rows + extra) + "\n"


def test_criterion_7_performance():
    csv_text = _seventy_row_csv()
    assert csv_text.count("\n") == 71  # header + 70 rows
    client = TestClient(create_app())
    response = client.post("/datasets",
                           files={"file": ("books70.csv", csv_text, "text/csv")})
    assert response.status_code == 201
    assert response.json()["row_count"] == 70
    sid = response.json()["session_id"]
    payload = {"utterance": "compare the popularity of high rated fiction books "
                            "and high rated non fiction books"}
    timings = []
    for _ in range(100):
        started = time.perf_counter()
        result = client.post(f"/sessions/{sid}/query", json=payload)
        timings.append((time.perf_counter() - started) * 1000)
        assert result.status_code == 200
    median = statistics.median(timings)
    report("criterion 7 (desk-scale performance)", median < 50.0,
           f"median handle_query over 100 runs: {median:.2f} ms (< 50 ms)")
