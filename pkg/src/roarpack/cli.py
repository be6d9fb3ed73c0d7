"""Command line front end: synthetic benchmarks and the CSV index harness."""

import click

from . import bench as bench_mod
from . import ingest as ingest_mod
from .schemes import SCHEMES, CorrectnessError


@click.group()
def main():
    """Compressed-bitmap benchmarks and bitmap-index tools."""


def _bench_options(f):
    options = [
        click.option("--dist", type=click.Choice(["uniform", "beta"]), default="uniform",
                     show_default=True, help="Synthetic value distribution."),
        click.option("--densities", default="2^-10..2^-1", show_default=True,
                     help="Density grid: 2^-K tokens, comma lists, or A..B ranges."),
        click.option("--draws", type=int, default=100_000, show_default=True),
        click.option("--reps", type=int, default=100, show_default=True),
        click.option("--seed", type=int, default=1, show_default=True),
        click.option("--schemes", default=",".join(SCHEMES), show_default=True),
        click.option("--out", type=click.Path(dir_okay=False), default="results.csv",
                     show_default=True),
        click.option("--gnuplot", is_flag=True,
                     help="Also emit per-metric .dat files, one curve per scheme."),
        click.option("--parallel", is_flag=True,
                     help="Run cells across processes (never inside a timed region)."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _parse_schemes(text):
    names = [s.strip() for s in text.split(",") if s.strip()]
    unknown = [s for s in names if s not in SCHEMES]
    if unknown:
        raise click.BadParameter(f"unknown schemes: {', '.join(unknown)}")
    if not names:
        raise click.BadParameter("at least one scheme required")
    return tuple(dict.fromkeys(names))


def _run_bench(command, ops, dist, densities, draws, reps, seed, schemes, out, gnuplot, parallel):
    try:
        grid = bench_mod.parse_densities(densities)
    except ValueError as e:
        raise click.BadParameter(str(e))
    scheme_tuple = _parse_schemes(schemes)
    cells = []
    for density in grid:
        spec = bench_mod.BenchSpec(
            distribution=dist,
            density=density,
            draws=draws,
            seed=seed,
            repetitions=reps,
            schemes=scheme_tuple,
        )
        for op in ops:
            cells.append((spec, command, op))
    try:
        rows = bench_mod.run_cells(cells, parallel=parallel)
    except CorrectnessError as e:
        raise click.ClickException(f"correctness gate failed: {e}")
    bench_mod.write_rows(rows, out)
    click.echo(f"wrote {len(rows)} rows to {out}")
    if gnuplot:
        stem = out[:-4] if out.endswith(".csv") else out
        for path in bench_mod.write_gnuplot(rows, stem):
            click.echo(f"wrote {path}")


@main.group()
def bench():
    """Synthetic experiments over seeded pseudo-random sets."""


@bench.command("compress")
@_bench_options
def bench_compress(**kwargs):
    """Measure bits per stored integer for each scheme."""
    _run_bench("compress", [None], **kwargs)


@bench.command("pairwise")
@click.option("--op", type=click.Choice(["and", "or", "both"]), default="both",
              show_default=True, help="Which pairwise operations to time.")
@_bench_options
def bench_pairwise(op, **kwargs):
    """Time intersections/unions of two fresh sets per repetition."""
    ops = ["and", "or"] if op == "both" else [op]
    _run_bench("pairwise", ops, **kwargs)


@bench.command("append")
@_bench_options
def bench_append(**kwargs):
    """Time adding an element above the current maximum."""
    _run_bench("append", [None], **kwargs)


@bench.command("remove")
@_bench_options
def bench_remove(**kwargs):
    """Time removing one randomly chosen member."""
    _run_bench("remove", [None], **kwargs)


@main.group()
def index():
    """Bitmap indexes over CSV tables."""


@index.command("build")
@click.option("--csv", "csv_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def index_build(csv_path, out_dir):
    """Index every column of a CSV file into per-value bitmaps."""
    try:
        idx = ingest_mod.build_index(csv_path)
        idx.validate()
        ingest_mod.index_save(idx, out_dir)
    except (ingest_mod.IngestError, ValueError) as e:
        raise click.ClickException(str(e))
    n = sum(len(v) for v in idx.bitmaps.values())
    click.echo(f"indexed {idx.rows} rows, {len(idx.columns)} columns, {n} bitmaps -> {out_dir}")


@index.command("bench")
@click.option("--index", "index_dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--out", default="report.csv", show_default=True,
              type=click.Path(dir_okay=False))
def index_bench(index_dir, seed, out):
    """Sample 100 bitmap pairs and report size/time factors vs roaring."""
    try:
        idx = ingest_mod.index_load(index_dir)
        report = ingest_mod.sample_and_compare(idx, seed)
    except (ingest_mod.IndexLoadError, CorrectnessError, ValueError) as e:
        raise click.ClickException(str(e))
    ingest_mod.write_report(report, out)
    click.echo(f"{'scheme':<8}  {'size':>8}  {'AND time':>9}  {'OR time':>9}")
    for scheme, size_f, and_f, or_f in report.factor_rows():
        click.echo(f"{scheme:<8}  {size_f:8.2f}  {and_f:9.2f}  {or_f:9.2f}")
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
