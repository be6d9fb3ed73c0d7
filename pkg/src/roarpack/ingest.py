"""Real-data harness: build a bitmap index from a CSV table, persist it, and
run the stratified-sampling AND/OR comparison across the four schemes.

The index maps, per column, each distinct cell value (an opaque string) to
the bitmap of 0-based row identifiers holding it.  Rows are indexed in file
order, unsorted.  Persisted form is a directory of serialized bitmaps plus a
``manifest.jsonl``: a header record with row count and column order, then
one record per bitmap (column, value, file, cardinality).
"""

import csv
import json
import random
import time
from dataclasses import dataclass
from pathlib import Path

from .bench import child_seed
from .roaring import FormatError, RoaringBitmap, union_many
from .schemes import SCHEME_IMPLS, SCHEMES, CorrectnessError

ATTRIBUTE_DRAWS = 200  # sampled attributes (with replacement) -> 100 pairs


class IngestError(ValueError):
    """CSV cannot be indexed."""


class IndexLoadError(ValueError):
    """Persisted index is missing pieces or inconsistent."""


class AttributeIndex:
    __slots__ = ("columns", "rows", "bitmaps")

    def __init__(self, columns, rows, bitmaps):
        self.columns = list(columns)
        self.rows = rows
        self.bitmaps = bitmaps  # column -> {value: RoaringBitmap}

    def __eq__(self, other):
        if not isinstance(other, AttributeIndex):
            return NotImplemented
        return (
            self.columns == other.columns
            and self.rows == other.rows
            and self.bitmaps == other.bitmaps
        )

    def __repr__(self):
        n = sum(len(v) for v in self.bitmaps.values())
        return f"AttributeIndex(columns={len(self.columns)}, rows={self.rows}, bitmaps={n})"

    def validate(self):
        """Per column, the bitmaps must partition [0, rows)."""
        for col in self.columns:
            col_bitmaps = list(self.bitmaps[col].values())
            total = sum(len(b) for b in col_bitmaps)
            if total != self.rows:
                raise ValueError(
                    f"column {col!r}: cardinalities sum to {total}, expected {self.rows}"
                )
            if self.rows:
                u = union_many(col_bitmaps)
                if len(u) != self.rows or u.select(self.rows - 1) != self.rows - 1:
                    raise ValueError(f"column {col!r}: bitmaps do not partition the row range")


def build_index(csv_path):
    """Index every column of a rectangular, headered CSV file."""
    with open(csv_path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{csv_path}: empty file") from None
        if not header:
            raise IngestError(f"{csv_path}: empty header row")
        if len(set(header)) != len(header):
            raise IngestError(f"{csv_path}: duplicate column names in header")
        per_column = [{} for _ in header]
        rows = 0
        for rownum, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise IngestError(
                    f"{csv_path}: data row {rownum} has {len(row)} fields, expected {len(header)}"
                )
            rid = rownum - 1
            for mapping, cell in zip(per_column, row):
                mapping.setdefault(cell, []).append(rid)
            rows += 1
    bitmaps = {
        col: {value: RoaringBitmap(ids) for value, ids in mapping.items()}
        for col, mapping in zip(header, per_column)
    }
    return AttributeIndex(header, rows, bitmaps)


def index_save(index, directory):
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    with open(d / "manifest.jsonl", "w") as f:
        f.write(json.dumps({"rows": index.rows, "columns": index.columns}) + "\n")
        seq = 0
        for col in index.columns:
            for value, bitmap in index.bitmaps[col].items():
                name = f"{seq:06d}.rbm"
                seq += 1
                (d / name).write_bytes(bitmap.serialize())
                record = {"column": col, "value": value, "file": name, "cardinality": len(bitmap)}
                f.write(json.dumps(record) + "\n")


def index_load(directory):
    d = Path(directory)
    manifest = d / "manifest.jsonl"
    if not manifest.exists():
        raise IndexLoadError(f"{manifest}: manifest missing")
    with open(manifest) as f:
        lines = f.read().splitlines()
    if not lines:
        raise IndexLoadError(f"{manifest}: empty manifest")
    try:
        head = json.loads(lines[0])
        rows = head["rows"]
        columns = head["columns"]
    except (ValueError, KeyError, TypeError) as e:
        raise IndexLoadError(f"{manifest}: bad header record ({e})") from None
    bitmaps = {col: {} for col in columns}
    for line in lines[1:]:
        try:
            rec = json.loads(line)
            col, value, name, card = rec["column"], rec["value"], rec["file"], rec["cardinality"]
        except (ValueError, KeyError, TypeError) as e:
            raise IndexLoadError(f"{manifest}: bad record ({e})") from None
        label = f"{col}={value!r} ({name})"
        if col not in bitmaps:
            raise IndexLoadError(f"{label}: unknown column")
        if value in bitmaps[col]:
            raise IndexLoadError(f"{label}: duplicate entry")
        path = d / name
        if not path.exists():
            raise IndexLoadError(f"{label}: bitmap file missing")
        try:
            bitmap = RoaringBitmap.deserialize(path.read_bytes())
        except FormatError as e:
            raise IndexLoadError(f"{label}: {e}") from None
        if len(bitmap) != card:
            raise IndexLoadError(
                f"{label}: manifest cardinality {card} != bitmap cardinality {len(bitmap)}"
            )
        bitmaps[col][value] = bitmap
    index = AttributeIndex(columns, rows, bitmaps)
    try:
        index.validate()
    except ValueError as e:
        raise IndexLoadError(str(e)) from None
    return index


@dataclass(frozen=True)
class SamplePlan:
    """200 (column, value) picks pairing up into 100 AND/OR inputs."""

    seed: int
    picks: tuple

    @property
    def pairs(self):
        return [(self.picks[2 * k], self.picks[2 * k + 1]) for k in range(len(self.picks) // 2)]


def sample_plan(index, seed):
    """Sample columns uniformly with replacement, then one bitmap per pick
    uniformly within the column.  Consecutive picks form the pairs."""
    if not any(index.bitmaps[c] for c in index.columns):
        raise ValueError("index holds no bitmaps")
    rng = random.Random(child_seed(seed, "sample-plan"))
    values_per_column = {c: list(index.bitmaps[c]) for c in index.columns}
    picks = []
    for _ in range(ATTRIBUTE_DRAWS):
        col = index.columns[rng.randrange(len(index.columns))]
        values = values_per_column[col]
        picks.append((col, values[rng.randrange(len(values))]))
    return SamplePlan(seed=seed, picks=tuple(picks))


@dataclass
class SchemeTotals:
    size_bits: int
    and_ns: int
    or_ns: int


@dataclass
class ComparisonReport:
    """Totals per scheme over the sampled pairs, reported relative to the
    first scheme (roaring)."""

    plan: SamplePlan
    totals: dict

    def factor_rows(self):
        base = self.totals["roaring"]
        rows = []
        for scheme in ("concise", "wah", "bitset"):
            t = self.totals[scheme]
            rows.append(
                (
                    scheme,
                    t.size_bits / base.size_bits,
                    t.and_ns / base.and_ns,
                    t.or_ns / base.or_ns,
                )
            )
        return rows


def sample_and_compare(index, seed):
    """Convert each sampled bitmap to every scheme, time the 100 pairwise
    ANDs and ORs, and verify every result against the roaring result."""
    plan = sample_plan(index, seed)
    sampled_values = [list(index.bitmaps[col][val]) for col, val in plan.picks]
    built = {
        s: [SCHEME_IMPLS[s].build(vals) for vals in sampled_values] for s in SCHEMES
    }
    totals = {
        s: SchemeTotals(
            size_bits=sum(SCHEME_IMPLS[s].size_bits(o) for o in built[s]), and_ns=0, or_ns=0
        )
        for s in SCHEMES
    }
    n_pairs = ATTRIBUTE_DRAWS // 2
    reference = {}
    for op in ("and", "or"):
        for k in range(n_pairs):
            i, j = 2 * k, 2 * k + 1
            for s in SCHEMES:
                impl = SCHEME_IMPLS[s]
                combine = impl.intersect if op == "and" else impl.union
                a, b = built[s][i], built[s][j]
                t0 = time.perf_counter_ns()
                result = combine(a, b)
                elapsed = time.perf_counter_ns() - t0
                if op == "and":
                    totals[s].and_ns += elapsed
                else:
                    totals[s].or_ns += elapsed
                decoded = impl.decode(result)
                if s == "roaring":
                    reference[(op, k)] = decoded
                elif decoded != reference[(op, k)]:
                    raise CorrectnessError(
                        f"{s} {op} disagrees with roaring on pair {k} "
                        f"({plan.picks[i]} vs {plan.picks[j]})"
                    )
    return ComparisonReport(plan=plan, totals=totals)


def write_report(report, path):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["scheme", "size_factor", "and_time_factor", "or_time_factor"])
        for scheme, size_f, and_f, or_f in report.factor_rows():
            writer.writerow([scheme, repr(size_f), repr(and_f), repr(or_f)])
