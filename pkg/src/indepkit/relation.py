"""Incomplete-relation data model.

Relations are finite multisets of tuples over a schema whose attributes have
finite domains of non-null string values.  The reserved marker ``*`` (the
module constant ``NULL``) stands for an existing but unknown value and is
implicitly a member of every domain.  A *grounding* replaces every null cell,
independently for each copy of a tuple, with a value from that attribute's
domain.

Rows are stored positionally: a tuple of cell strings aligned with
``Schema.attributes``.  Multiplicities are kept explicitly on distinct rows
(canonical multiset form); duplicate rows merge on construction.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import GroundingLimitExceeded, ParseError, SchemaError


class NullMarker:
    """Singleton sentinel for the unknown-value marker, kept distinct from
    every domain string so that a literal asterisk value stays expressible."""

    _instance = None
    __slots__ = ()

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "*"

    def __str__(self) -> str:
        return "*"

    def __hash__(self) -> int:
        return 0x2A

    def __reduce__(self):
        return (NullMarker, ())


NULL = NullMarker()

# Cells are domain strings or the null marker.
Cell = str | NullMarker

COUNT_COLUMN = "#count"

# Columns with fewer observed values are padded with synthetic names so that
# every attribute keeps at least two non-null values plus one spare value per
# null cell (possible-independence search needs the spares).
_SYNTHETIC_PREFIX = "_v"


@dataclass(frozen=True)
class Schema:
    """Ordered attribute names plus, per attribute, its non-null domain."""

    attributes: tuple[str, ...]
    domains: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if len(self.attributes) != len(self.domains):
            raise SchemaError("one domain required per attribute")
        seen = set()
        for name in self.attributes:
            if not name:
                raise SchemaError("attribute names must be non-empty")
            if name in seen:
                raise SchemaError(f"duplicate attribute {name!r}")
            seen.add(name)
        for name, dom in zip(self.attributes, self.domains):
            values = set(dom)
            if len(values) != len(dom):
                raise SchemaError(f"domain of {name!r} lists a value twice")
            if NULL in values:
                raise SchemaError(
                    f"domain of {name!r} must not contain the null marker"
                )
            if len(values) < 2:
                raise SchemaError(f"domain of {name!r} needs at least 2 values")
        object.__setattr__(
            self, "_index", {a: i for i, a in enumerate(self.attributes)}
        )

    @classmethod
    def of(cls, attributes: Iterable[str], domains: Mapping[str, Iterable[str]]) -> Schema:
        attrs = tuple(attributes)
        missing = [a for a in attrs if a not in domains]
        if missing:
            raise SchemaError(f"no domain given for {', '.join(missing)}")
        return cls(attrs, tuple(tuple(domains[a]) for a in attrs))

    def index(self, attribute: str) -> int:
        try:
            return self._index[attribute]  # type: ignore[attr-defined]
        except KeyError:
            raise SchemaError(f"unknown attribute {attribute!r}") from None

    def domain(self, attribute: str) -> tuple[str, ...]:
        return self.domains[self.index(attribute)]

    def indices(self, attributes: Iterable[str]) -> tuple[int, ...]:
        """Positions of the given attributes, in schema order."""
        wanted = {self.index(a) for a in attributes}
        return tuple(i for i in range(len(self.attributes)) if i in wanted)

    def restrict(self, attributes: Iterable[str]) -> Schema:
        idx = self.indices(attributes)
        return Schema(
            tuple(self.attributes[i] for i in idx),
            tuple(self.domains[i] for i in idx),
        )


@dataclass(frozen=True, eq=False)
class Relation:
    """A finite multiset of rows over a schema.

    ``rows`` holds pairwise distinct value tuples, ``counts`` their positive
    multiplicities.  Instances are immutable and compare as multisets (row
    order is irrelevant for equality).
    """

    schema: Schema
    rows: tuple[tuple[Cell, ...], ...]
    counts: tuple[int, ...]

    @classmethod
    def from_rows(
        cls,
        schema: Schema,
        rows: Iterable[Sequence[Cell]],
        counts: Iterable[int] | None = None,
        validate: bool = True,
    ) -> Relation:
        """Build a relation, merging duplicate rows in first-seen order."""
        row_list = [tuple(r) for r in rows]
        count_list = list(counts) if counts is not None else [1] * len(row_list)
        if len(row_list) != len(count_list):
            raise SchemaError("one multiplicity required per row")
        if validate:
            width = len(schema.attributes)
            domain_sets = [set(d) for d in schema.domains]
            for row in row_list:
                if len(row) != width:
                    raise SchemaError(
                        f"row width {len(row)} does not match schema width {width}"
                    )
                for value, dom, attr in zip(row, domain_sets, schema.attributes):
                    if value != NULL and value not in dom:
                        raise SchemaError(
                            f"value {value!r} not in the domain of {attr!r}"
                        )
            for c in count_list:
                if not isinstance(c, int) or c < 1:
                    raise SchemaError(f"multiplicity must be a positive integer, got {c!r}")
        merged: dict[tuple[Cell, ...], int] = {}
        for row, c in zip(row_list, count_list):
            merged[row] = merged.get(row, 0) + c
        return cls(schema, tuple(merged), tuple(merged.values()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return self.schema == other.schema and dict(
            zip(self.rows, self.counts)
        ) == dict(zip(other.rows, other.counts))

    def __hash__(self) -> int:
        return hash((self.schema, frozenset(zip(self.rows, self.counts))))

    def __repr__(self) -> str:
        return (
            f"Relation({self.size} rows, {len(self.rows)} distinct, "
            f"attributes {', '.join(self.schema.attributes)})"
        )

    @property
    def size(self) -> int:
        """Total multiplicity."""
        return sum(self.counts)

    @property
    def row_count(self) -> int:
        """Number of distinct rows."""
        return len(self.rows)

    def multiplicity(self, row: Sequence[Cell]) -> int:
        key = tuple(row)
        for r, c in zip(self.rows, self.counts):
            if r == key:
                return c
        return 0

    def column(self, attribute: str) -> tuple[Cell, ...]:
        i = self.schema.index(attribute)
        return tuple(row[i] for row in self.rows)

    def distinct_nonnull(self, attribute: str) -> tuple[str, ...]:
        """Distinct non-null column values, in first-occurrence order."""
        i = self.schema.index(attribute)
        out: dict[str, None] = {}
        for row in self.rows:
            if row[i] != NULL:
                out[row[i]] = None
        return tuple(out)

    def null_cell_count(self, attribute: str) -> int:
        """Null cells in the column, counting each copy of a tuple."""
        i = self.schema.index(attribute)
        return sum(c for row, c in zip(self.rows, self.counts) if row[i] == NULL)

    def is_complete(self) -> bool:
        return all(NULL not in row for row in self.rows)

    def project(self, attributes: Iterable[str]) -> Relation:
        """Projection onto the given attributes; multiplicities are summed
        over rows that agree on them, so the total multiplicity is preserved."""
        idx = self.schema.indices(attributes)
        sub_schema = Schema(
            tuple(self.schema.attributes[i] for i in idx),
            tuple(self.schema.domains[i] for i in idx),
        )
        merged: dict[tuple[Cell, ...], int] = {}
        for row, c in zip(self.rows, self.counts):
            key = tuple(row[i] for i in idx)
            merged[key] = merged.get(key, 0) + c
        return Relation(sub_schema, tuple(merged), tuple(merged.values()))

    # -- groundings -------------------------------------------------------

    def _null_cells(self, column_indices: Sequence[int] | None = None):
        """Expanded copies plus the null-cell coordinates to ground.

        Cells are ordered by (row, copy, attribute position), which fixes the
        enumeration order of groundings.  ``column_indices`` restricts the
        cells to the given columns; other nulls are left in place.
        """
        allowed = None if column_indices is None else set(column_indices)
        copies: list[list[str]] = []
        cells: list[tuple[int, int]] = []
        for row, c in zip(self.rows, self.counts):
            for _ in range(c):
                k = len(copies)
                copies.append(list(row))
                for j, value in enumerate(row):
                    if value == NULL and (allowed is None or j in allowed):
                        cells.append((k, j))
        return copies, cells

    def count_groundings(self) -> int:
        """Product of |Dom(A)| over every null cell of every tuple copy."""
        per_row = [
            math.prod(len(self.schema.domains[j]) for j, v in enumerate(row) if v == NULL)
            for row in self.rows
        ]
        return math.prod(p**c for p, c in zip(per_row, self.counts))

    def grounding_assignments(
        self, column_indices: Sequence[int] | None = None
    ) -> Iterator[list[tuple[Cell, ...]]]:
        """Yield grounded copies (one list of rows per assignment of the null
        cells in the selected columns).  Internal fast path: rows are plain
        tuples and may repeat."""
        copies, cells = self._null_cells(column_indices)
        if not cells:
            yield [tuple(r) for r in copies]
            return
        choice_lists = [self.schema.domains[j] for _, j in cells]
        for assignment in itertools.product(*choice_lists):
            for (k, j), value in zip(cells, assignment):
                copies[k][j] = value
            yield [tuple(r) for r in copies]

    def groundings(self, limit: int | None = None) -> Iterator[Relation]:
        """Enumerate groundings as relations, in a fixed lexicographic order.

        With ``limit`` set, at most ``limit`` groundings are yielded; if more
        remain, ``GroundingLimitExceeded`` is raised after the last yield so
        that truncation is distinguishable from exhaustion.
        """
        for n, rows in enumerate(self.grounding_assignments()):
            if limit is not None and n >= limit:
                raise GroundingLimitExceeded(
                    f"more than {limit} groundings exist"
                )
            yield Relation.from_rows(self.schema, rows, validate=False)


def is_complete_row(row: Sequence[Cell]) -> bool:
    return NULL not in row


# -- CSV and JSON interchange ---------------------------------------------
#
# Relation files are CSV: first row attribute names, optional final column
# "#count" holding multiplicities, cell "*" meaning null and "\*" escaping a
# literal asterisk value.  Domains may come from a sidecar JSON object that
# maps each attribute to its array of non-null values.


def _read_cell(cell: str) -> Cell:
    cell = cell.strip()
    if cell == "*":
        return NULL
    if cell == "\\*":
        return "*"
    return cell


def _write_cell(value: Cell) -> str:
    if value is NULL:
        return "*"
    if value == "*":
        return "\\*"
    return value


def _synthetic_names(taken: set[str], how_many: int) -> list[str]:
    names: list[str] = []
    i = 1
    while len(names) < how_many:
        name = f"{_SYNTHETIC_PREFIX}{i}"
        if name not in taken:
            names.append(name)
            taken.add(name)
        i += 1
    return names


def infer_domains(
    attributes: Sequence[str], rows: Sequence[Sequence[Cell]], counts: Sequence[int]
) -> dict[str, tuple[str, ...]]:
    """Observed column values, padded to at least two non-null values plus one
    fresh value per null cell in the column."""
    domains: dict[str, tuple[str, ...]] = {}
    for j, attr in enumerate(attributes):
        observed: dict[str, None] = {}
        null_cells = 0
        for row, c in zip(rows, counts):
            if row[j] == NULL:
                null_cells += c
            else:
                observed[row[j]] = None
        base = list(observed)
        target = max(len(base), 2) + null_cells
        base += _synthetic_names(set(base), target - len(base))
        domains[attr] = tuple(base)
    return domains


def relation_from_csv(text: str, domains: Mapping[str, Iterable[str]] | None = None) -> Relation:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty relation file") from None
    header = [h.strip() for h in header]
    with_counts = bool(header) and header[-1] == COUNT_COLUMN
    attributes = header[:-1] if with_counts else header
    if not attributes:
        raise ParseError("relation file has no attribute columns")
    rows: list[tuple[Cell, ...]] = []
    counts: list[int] = []
    for lineno, record in enumerate(reader, start=2):
        if not record or all(not cell.strip() for cell in record):
            continue
        if len(record) != len(header):
            raise ParseError(
                f"line {lineno}: expected {len(header)} cells, got {len(record)}"
            )
        cells = [_read_cell(c) for c in record[: len(attributes)]]
        if with_counts:
            raw = record[-1].strip()
            try:
                count = int(raw)
            except ValueError:
                raise ParseError(f"line {lineno}: bad multiplicity {raw!r}") from None
            if count < 1:
                raise ParseError(f"line {lineno}: multiplicity must be positive")
        else:
            count = 1
        rows.append(tuple(cells))
        counts.append(count)
    if domains is None:
        schema = Schema.of(attributes, infer_domains(attributes, rows, counts))
    else:
        schema = Schema.of(attributes, {a: tuple(vs) for a, vs in domains.items()})
    return Relation.from_rows(schema, rows, counts)


def relation_to_csv(relation: Relation) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    with_counts = any(c != 1 for c in relation.counts)
    header = list(relation.schema.attributes)
    if with_counts:
        header.append(COUNT_COLUMN)
    writer.writerow(header)
    for row, c in zip(relation.rows, relation.counts):
        record = [_write_cell(v) for v in row]
        if with_counts:
            record.append(str(c))
        writer.writerow(record)
    return out.getvalue()


def domains_from_json(text: str) -> dict[str, tuple[str, ...]]:
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ParseError("domain file must be a JSON object")
    out: dict[str, tuple[str, ...]] = {}
    for attr, values in data.items():
        if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
            raise ParseError(f"domain of {attr!r} must be an array of strings")
        out[attr] = tuple(values)
    return out


def domains_to_json(schema: Schema) -> str:
    return json.dumps(
        {a: list(d) for a, d in zip(schema.attributes, schema.domains)},
        indent=2,
    )


def read_relation(path: str, domains_path: str | None = None) -> Relation:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    domains = None
    if domains_path is not None:
        with open(domains_path, encoding="utf-8") as fh:
            domains = domains_from_json(fh.read())
    return relation_from_csv(text, domains)
