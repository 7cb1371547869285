from __future__ import annotations

import pytest

from indepkit import NULL, Relation, Schema, relation_from_csv

TABLE1_CSV = """a,e,s,r,g
25,bachelor,not-in-family,white,male
25,*,in-family,white,male
27,*,not-in-family,white,female
*,graduate,in-family,*,female
"""


@pytest.fixture
def table1() -> Relation:
    """The five-attribute census-style running example with inferred domains."""
    return relation_from_csv(TABLE1_CSV)


@pytest.fixture
def world1(table1) -> Relation:
    """A grounding of the running example in which education and status are
    fully crossed."""
    return Relation.from_rows(
        table1.schema,
        [
            ("25", "bachelor", "not-in-family", "white", "male"),
            ("25", "bachelor", "in-family", "white", "male"),
            ("27", "graduate", "not-in-family", "white", "female"),
            ("27", "graduate", "in-family", "white", "female"),
        ],
    )


@pytest.fixture
def two_column_seven_rows() -> Relation:
    """Seven rows over two columns, one repeated, used by the flow tests."""
    schema = Schema(("A", "B"), (("0", "1"), ("0", "1", "2")))
    rows = [
        ("0", NULL),
        ("1", NULL),
        (NULL, "2"),
        ("0", NULL),
        (NULL, "1"),
        (NULL, NULL),
        (NULL, "0"),
    ]
    return Relation.from_rows(schema, rows)
