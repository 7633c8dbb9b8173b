import json
from pathlib import Path

import jsonschema
import pytest

from compareviz.data import load_dataset
from compareviz.engine import Engine
from compareviz.lexicon import default_lexicon

TESTS_DIR = Path(__file__).parent
SAMPLE_DIR = TESTS_DIR.parent / "sample_data"


def read_sample(name: str) -> str:
    return (SAMPLE_DIR / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def netflix():
    return load_dataset(read_sample("netflix.csv"))


@pytest.fixture(scope="session")
def olympics():
    return load_dataset(read_sample("olympics.csv"))


@pytest.fixture(scope="session")
def books():
    return load_dataset(read_sample("books.csv"))


@pytest.fixture(scope="session")
def sales():
    return load_dataset(read_sample("sales.csv"))


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def netflix_engine(netflix, lexicon):
    return Engine(netflix, lexicon=lexicon)


@pytest.fixture(scope="session")
def olympics_engine(olympics, lexicon):
    return Engine(olympics, lexicon=lexicon)


@pytest.fixture(scope="session")
def books_engine(books, lexicon):
    return Engine(books, lexicon=lexicon)


@pytest.fixture(scope="session")
def sales_engine(sales, lexicon):
    return Engine(sales, lexicon=lexicon)


@pytest.fixture(scope="session")
def vega_lite_validator():
    schema = json.loads((TESTS_DIR / "data" / "vega-lite-schema-v5.json")
                        .read_text(encoding="utf-8"))
    return jsonschema.Draft7Validator(schema)


# The sixteen-cell query matrix over the bookstore dataset: one utterance per
# (cardinality x concreteness) combination, with implicit-entity phrasings
# matching the bundled lexicon.
BOOKS_QUERY_MATRIX = {
    ("1-1", "ev-ea"): "compare the user rating of The Alchemist and Becoming",
    ("1-1", "ev-ia"): "compare the popularity of The Alchemist and Becoming",
    ("1-1", "iv-ea"): "compare the user rating of a bestseller book in 2012 "
                      "and a bestseller book in 2015",
    ("1-1", "iv-ia"): "compare the popularity of a cheap book and an expensive book",
    ("1-n", "ev-ea"): "compare the price of The Alchemist to other books",
    ("1-n", "ev-ia"): "compare the popularity of The Alchemist to other books",
    ("1-n", "iv-ea"): "compare the price of a bestseller book to high rated books",
    ("1-n", "iv-ia"): "compare the popularity of a cheap book to high rated books",
    ("n", "ev-ea"): "compare the prices across all fiction books",
    ("n", "ev-ia"): "compare the popularity across all fiction books",
    ("n", "iv-ea"): "compare the prices of high rated books",
    ("n", "iv-ia"): "compare the popularity of expensive books",
    ("n-m", "ev-ea"): "compare fiction books to non fiction books in terms of price",
    ("n-m", "ev-ia"): "compare the popularity of fiction books and non fiction books",
    ("n-m", "iv-ea"): "compare high rated fiction books to high rated non fiction "
                      "books in terms of price",
    ("n-m", "iv-ia"): "compare the popularity of high rated fiction books and "
                      "high rated non fiction books",
}
