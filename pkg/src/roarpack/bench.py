"""Synthetic benchmark protocol and CSV emission.

One experiment cell is a BenchSpec (distribution, density, draw count, seed,
repetition count, scheme subset) plus a command.  Every repetition draws a
fresh pseudo-random set: ``draws`` floats y in [0,1) are sampled, each is
mapped to floor(y * max) for the uniform distribution or floor(y^2 * max)
for the discretized Beta(0.5,1), with max = draws / density, and the results
collapse into a set.

Randomness is fully pinned: the generator is numpy's default PCG64, and
every cell/repetition seed derives from the master seed through
``child_seed`` (first 8 bytes, little-endian, of SHA-256 over
"<master>:<label>").  Rerunning a spec reproduces the same sets; only the
timing columns vary.

Timings use a monotonic nanosecond clock around the operation alone, after
10 unrecorded warm-up runs per cell.  Before anything is timed, each
operation's result is checked against a plain sorted-set oracle; a mismatch
aborts the benchmark.
"""

import csv
import hashlib
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .schemes import SCHEME_IMPLS, SCHEMES, CorrectnessError

GENERATOR = "pcg64"  # numpy.random.default_rng
WARMUP_RUNS = 10
DENSITY_MIN = 2.0**-10
DENSITY_MAX = 2.0**-1

CSV_FIELDS = (
    "scheme",
    "dist",
    "density",
    "metric",
    "mean",
    "min",
    "stddev",
    "runs",
    "realized_cardinality",
)


def child_seed(master, label):
    """Deterministic 64-bit seed derived from a master seed and a label."""
    digest = hashlib.sha256(f"{master}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def parse_densities(text):
    """Parse "2^-6", comma lists, and power-of-two ranges like "2^-10..2^-1"."""
    out = []
    for token in text.split(","):
        token = token.strip()
        if ".." in token:
            lo, hi = token.split("..", 1)
            ka = _parse_exponent(lo)
            kb = _parse_exponent(hi)
            if ka < kb:
                ka, kb = kb, ka
            out.extend(2.0**-k for k in range(ka, kb - 1, -1))
        else:
            out.append(2.0 ** -_parse_exponent(token))
    return out


def _parse_exponent(token):
    token = token.strip()
    if not token.startswith("2^-"):
        raise ValueError(f"expected a density like 2^-6, got {token!r}")
    try:
        k = int(token[3:])
    except ValueError:
        raise ValueError(f"expected a density like 2^-6, got {token!r}") from None
    if not 1 <= k <= 10:
        raise ValueError(f"density {token!r} outside 2^-10 .. 2^-1")
    return k


def _max_value(density, draws):
    if not 0 < density <= 0.5:
        raise ValueError(f"density {density} outside (0, 0.5]")
    mv = draws / density
    if mv != int(mv):
        raise ValueError(f"draws/density must be integral, got {mv}")
    return int(mv)


@dataclass(frozen=True)
class BenchSpec:
    """One synthetic experiment cell."""

    distribution: str
    density: float
    draws: int = 100_000
    seed: int = 1
    repetitions: int = 100
    schemes: tuple = SCHEMES

    def __post_init__(self):
        if self.distribution not in ("uniform", "beta"):
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if not DENSITY_MIN <= self.density <= DENSITY_MAX:
            raise ValueError(f"density {self.density} outside [2^-10, 2^-1]")
        if self.draws < 1:
            raise ValueError("draws must be positive")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        unknown = [s for s in self.schemes if s not in SCHEME_IMPLS]
        if unknown:
            raise ValueError(f"unknown schemes: {unknown}")
        self.max_value  # validates integrality

    @property
    def max_value(self):
        return _max_value(self.density, self.draws)


@dataclass
class BenchRow:
    scheme: str
    dist: str
    density: float
    metric: str
    mean: float
    min: float
    stddev: float
    runs: int
    realized_cardinality: float

    def as_csv_row(self):
        return [
            self.scheme,
            self.dist,
            repr(self.density),
            self.metric,
            repr(self.mean),
            repr(self.min),
            repr(self.stddev),
            self.runs,
            repr(self.realized_cardinality),
        ]


def draw_values(distribution, density, draws, seed):
    """The raw draw stream (duplicates included) as an int64 array."""
    if distribution not in ("uniform", "beta"):
        raise ValueError(f"unknown distribution {distribution!r}")
    max_value = _max_value(density, draws)
    rng = np.random.default_rng(seed)
    y = rng.random(draws)
    if distribution == "beta":
        y = y * y
    return np.floor(y * max_value).astype(np.int64)


def generate_set(distribution, density, draws, seed):
    """Sorted duplicate-free set realized by the draw stream."""
    return np.unique(draw_values(distribution, density, draws, seed)).tolist()


def gen_uniform(density, draws, seed):
    return generate_set("uniform", density, draws, seed)


def gen_beta(density, draws, seed):
    return generate_set("beta", density, draws, seed)


def _rep_seed(spec, label):
    return child_seed(spec.seed, f"{spec.distribution}:{spec.density!r}:{spec.draws}:{label}")


def _rep_set(spec, label):
    return generate_set(spec.distribution, spec.density, spec.draws, _rep_seed(spec, label))


def _summary(spec, scheme, metric, samples, realized):
    return BenchRow(
        scheme=scheme,
        dist=spec.distribution,
        density=spec.density,
        metric=metric,
        mean=statistics.fmean(samples),
        min=min(samples),
        stddev=statistics.stdev(samples) if len(samples) > 1 else 0.0,
        runs=len(samples),
        realized_cardinality=statistics.fmean(realized),
    )


def run_compression(spec):
    """bits_per_int per scheme, averaged over repetitions with fresh seeds."""
    samples = {s: [] for s in spec.schemes}
    realized = []
    for rep in range(spec.repetitions):
        values = _rep_set(spec, f"rep{rep}")
        realized.append(len(values))
        for s in spec.schemes:
            impl = SCHEME_IMPLS[s]
            obj = impl.build(values)
            samples[s].append(impl.size_bits(obj) / len(values))
    return [_summary(spec, s, "bits_per_int", samples[s], realized) for s in spec.schemes]


def run_pairwise(spec, op):
    """and_ns / or_ns per scheme over fresh input pairs, oracle-gated."""
    if op not in ("and", "or"):
        raise ValueError(f"op must be 'and' or 'or', got {op!r}")
    times = {s: [] for s in spec.schemes}
    realized = []
    for rep in range(spec.repetitions):
        va = _rep_set(spec, f"rep{rep}:a")
        vb = _rep_set(spec, f"rep{rep}:b")
        realized.append((len(va) + len(vb)) / 2)
        sa, sb = set(va), set(vb)
        expected = sorted(sa & sb) if op == "and" else sorted(sa | sb)
        for s in spec.schemes:
            impl = SCHEME_IMPLS[s]
            xa = impl.build(va)
            xb = impl.build(vb)
            combine = impl.intersect if op == "and" else impl.union
            if impl.decode(combine(xa, xb)) != expected:
                raise CorrectnessError(
                    f"{s} {op} disagrees with the set oracle at "
                    f"dist={spec.distribution} density={spec.density} rep={rep}"
                )
            if rep == 0:
                for _ in range(WARMUP_RUNS):
                    combine(xa, xb)
            t0 = time.perf_counter_ns()
            combine(xa, xb)
            times[s].append(time.perf_counter_ns() - t0)
    return [_summary(spec, s, f"{op}_ns", times[s], realized) for s in spec.schemes]


def run_append(spec):
    """Time adding one element above the current maximum."""
    times = {s: [] for s in spec.schemes}
    realized = []
    for rep in range(spec.repetitions):
        values = _rep_set(spec, f"rep{rep}")
        realized.append(len(values))
        target = values[-1] + 1
        for s in spec.schemes:
            impl = SCHEME_IMPLS[s]
            base = impl.build(values)
            if rep == 0:
                for _ in range(WARMUP_RUNS):
                    impl.append(impl.mutable_copy(base), target)
            victim = impl.mutable_copy(base)
            t0 = time.perf_counter_ns()
            result = impl.append(victim, target)
            times[s].append(time.perf_counter_ns() - t0)
            if impl.cardinality(result) != len(values) + 1 or not impl.contains(result, target):
                raise CorrectnessError(
                    f"{s} append broke the set at dist={spec.distribution} "
                    f"density={spec.density} rep={rep}"
                )
    return [_summary(spec, s, "append_ns", times[s], realized) for s in spec.schemes]


def run_remove(spec):
    """Time deleting one uniformly chosen member."""
    times = {s: [] for s in spec.schemes}
    realized = []
    for rep in range(spec.repetitions):
        values = _rep_set(spec, f"rep{rep}")
        realized.append(len(values))
        pick = np.random.default_rng(_rep_seed(spec, f"rep{rep}:victim"))
        target = values[int(pick.integers(len(values)))]
        for s in spec.schemes:
            impl = SCHEME_IMPLS[s]
            base = impl.build(values)
            if rep == 0:
                for _ in range(WARMUP_RUNS):
                    impl.remove(impl.mutable_copy(base), target)
            victim = impl.mutable_copy(base)
            t0 = time.perf_counter_ns()
            result = impl.remove(victim, target)
            times[s].append(time.perf_counter_ns() - t0)
            if impl.cardinality(result) != len(values) - 1 or impl.contains(result, target):
                raise CorrectnessError(
                    f"{s} remove broke the set at dist={spec.distribution} "
                    f"density={spec.density} rep={rep}"
                )
    return [_summary(spec, s, "remove_ns", times[s], realized) for s in spec.schemes]


_COMMANDS = {
    "compress": lambda spec, op: run_compression(spec),
    "pairwise": lambda spec, op: run_pairwise(spec, op),
    "append": lambda spec, op: run_append(spec),
    "remove": lambda spec, op: run_remove(spec),
}


def run_cell(cell):
    spec, command, op = cell
    return _COMMANDS[command](spec, op)


def run_cells(cells, parallel=False):
    """Run experiment cells sequentially (default, to keep the timer quiet)
    or across processes; never parallel inside a timed region."""
    if parallel:
        with ProcessPoolExecutor() as pool:
            chunks = list(pool.map(run_cell, cells))
    else:
        chunks = [run_cell(c) for c in cells]
    return [row for chunk in chunks for row in chunk]


def write_rows(rows, path):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_FIELDS)
        for row in rows:
            writer.writerow(row.as_csv_row())


def write_gnuplot(rows, stem):
    """Per-metric data files, one density per line, one column per scheme."""
    metrics = []
    for row in rows:
        if row.metric not in metrics:
            metrics.append(row.metric)
    paths = []
    for metric in metrics:
        sub = [r for r in rows if r.metric == metric]
        schemes = [s for s in SCHEMES if any(r.scheme == s for r in sub)]
        densities = sorted({r.density for r in sub})
        cell = {(r.scheme, r.density): r.mean for r in sub}
        path = f"{stem}.{metric}.dat"
        with open(path, "w") as f:
            f.write("# density " + " ".join(schemes) + "\n")
            for d in densities:
                means = (repr(cell[(s, d)]) for s in schemes if (s, d) in cell)
                f.write(repr(d) + " " + " ".join(means) + "\n")
        paths.append(path)
    return paths
