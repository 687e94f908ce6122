#!/usr/bin/env python3
"""
FC Affine Enumerator CLI

Command-line interface for computing and verifying length generating
functions of fully commutative affine permutations.
"""

import click
import sys
from pathlib import Path
from typing import Tuple

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src import __version__
from src.core.abacus import (
    Abacus,
    abacus_from_coset_rep,
    abacus_length,
    classify,
    is_fc_coset_rep,
    lmr_profile,
    normalize,
    render,
    AbacusClass,
)
from src.core.affine import (
    AffinePermutation,
    Side,
    coxeter_length,
    descent_set,
    is_fully_commutative,
    parabolic_decompose,
    parse_window,
    render_window,
)
from src.core.errors import EnumerationError
from src.core.formulas import SeriesAssembler
from src.core.golden import load_golden_table
from src.core.oracle import Oracle, finite_321_stats
from src.core.verification import SCOPES, Verifier, generate_report
from src.models import (
    AbacusExport,
    ClassificationExport,
    HistogramExport,
    PeriodicityExport,
    SeriesExport,
    StatRow,
    StatsExport,
)
from src.utils.cache_manager import SeriesCache
from src.utils.config_loader import ConfigLoader
from src.utils.logger import setup_colored_logger


# Setup logger
logger = setup_colored_logger()

FORMATS = click.Choice(['text', 'json'])


def _fail(message: str) -> None:
    logger.error(message)
    sys.exit(1)


def _require_rank(n: int) -> None:
    if n < 2:
        raise click.BadParameter(f"n must be at least 2, got {n}", param_hint="--n")


def _join_window(values: Tuple[str, ...]) -> str:
    """Accept "-4,-1,1,14" as well as "-4 -1 1 14" after the -- sentinel."""
    return ",".join(v.strip(",") for v in values if v.strip(","))


@click.group()
@click.option('--config', '-c', type=click.Path(exists=True),
              help='Path to configuration file')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                                               case_sensitive=False),
              help='Override the configured log level')
@click.version_option(__version__)
@click.pass_context
def cli(ctx, config, log_level):
    """Fully commutative affine permutation enumerator"""
    config_loader = ConfigLoader(config) if config else ConfigLoader()

    level = log_level or config_loader.get('logging.level', 'INFO')
    setup_colored_logger(level=level,
                         log_file=config_loader.get('logging.file'),
                         format_string=config_loader.get('logging.format'))

    ctx.ensure_object(dict)
    ctx.obj['config'] = config_loader


@cli.command()
@click.option('--n', 'n', type=int, required=True, help='Rank of the affine symmetric group')
@click.option('--qcap', type=int, help='Highest power of q to compute')
@click.option('--format', 'fmt', type=FORMATS, default=None, help='Output format')
@click.option('--no-cache', is_flag=True, help='Recompute even if cached')
@click.pass_context
def series(ctx, n, qcap, fmt, no_cache):
    """Print the coefficients of f_n(q)."""
    config = ctx.obj['config']
    _require_rank(n)
    fmt = fmt or config.get('series.format', 'text')

    try:
        cache = None
        if config.get('cache.enabled', True) and not no_cache:
            cache = SeriesCache(config.get_path('cache.dir'), version=__version__)
        assembler = SeriesAssembler(config, cache=cache)
        q_cap = assembler.resolve_qcap(n, qcap)
        coefficients = assembler.coefficients(n, q_cap)
    except (EnumerationError, ValueError) as e:
        _fail(f"Error computing f_{n}: {e}")
        return

    if fmt == 'json':
        export = SeriesExport(n=n, q_cap=q_cap, coefficients=[str(c) for c in coefficients])
        click.echo(export.model_dump_json(indent=2))
    else:
        click.echo(",".join(str(c) for c in coefficients))


@cli.command()
@click.option('--scope', type=click.Choice(SCOPES), default='all', help='Checks to run')
@click.option('--n', 'n', type=int, help='Restrict golden/oracle checks to one rank')
@click.option('--maxlen', type=int, help='Length bound for the oracle comparison')
@click.option('--golden-file', type=click.Path(exists=True), help='Alternative golden table')
@click.option('--format', 'fmt', type=FORMATS, default='text', help='Report format')
@click.pass_context
def verify(ctx, scope, n, maxlen, golden_file, fmt):
    """Check formulas against golden tables, the oracle and module invariants."""
    config = ctx.obj['config']
    try:
        table = load_golden_table(golden_file, verify_checksum=False) if golden_file else None
        report = Verifier(config, golden_table=table).run(scope, n=n, max_len=maxlen)
    except (EnumerationError, ValueError, FileNotFoundError) as e:
        _fail(f"Verification aborted: {e}")
        return

    if fmt == 'json':
        click.echo(report.model_dump_json(indent=2))
    else:
        click.echo(generate_report(report))

    if not report.passed:
        for failure in report.failures:
            logger.error(f"{failure.name}: {failure.first_mismatch or failure.detail}")
        sys.exit(1)


@cli.command()
@click.argument('window', nargs=-1, required=True)
@click.option('--format', 'fmt', type=FORMATS, default='text', help='Output format')
@click.option('--labels', is_flag=True, help='Print positions next to beads')
def abacus(window, fmt, labels):
    """
    Render the abacus of a sorted window.

    Pass negative entries after --, e.g. ``abacus -- -4,-1,1,14``. Lowest-bead
    positions that are not balanced are shifted to balance first.
    """
    try:
        values = parse_window(_join_window(window))
    except ValueError as e:
        _fail(f"Invalid window: {e}")
        return
    if any(a >= b for a, b in zip(values, values[1:])):
        raise click.BadParameter(f"{render_window(values)} is not strictly increasing",
                                 param_hint='WINDOW')

    try:
        n = len(values)
        if sum(values) == n * (n + 1) // 2:
            balanced = abacus_from_coset_rep(AffinePermutation(n, values))
        else:
            balanced = Abacus.from_positions(n, values).balance()
        normalized = normalize(balanced)
        kind = classify(normalized)
        fc = is_fc_coset_rep(normalized)
        profile = lmr_profile(normalized) if kind is AbacusClass.SHORT and fc else None
    except (EnumerationError, ValueError) as e:
        _fail(f"Invalid window: {e}")
        return

    export = AbacusExport(
        n=n,
        balanced=list(balanced.lowest_beads),
        normalized=list(normalized.lowest_beads),
        length=abacus_length(balanced),
        classification=kind.value,
        fully_commutative=fc,
        profile=None if profile is None else str(profile),
    )
    if fmt == 'json':
        click.echo(export.model_dump_json(indent=2))
        return

    click.echo(f"Balanced abacus {render_window(export.balanced)}:")
    click.echo(render(balanced, labels=labels))
    click.echo(f"\nNormalized abacus {render_window(export.normalized)}:")
    click.echo(render(normalized, labels=labels))
    click.echo(f"\nLength: {export.length}")
    click.echo(f"Class: {export.classification}")
    click.echo(f"Fully commutative: {'yes' if fc else 'no'}")
    if export.profile:
        click.echo(f"Profile: {export.profile}")


@cli.command('classify')
@click.argument('window', nargs=-1, required=True)
@click.option('--format', 'fmt', type=FORMATS, default='text', help='Output format')
def classify_window(window, fmt):
    """FC test and parabolic decomposition of a window."""
    try:
        values = parse_window(_join_window(window))
        w = AffinePermutation(len(values), values)
        w0, u = parabolic_decompose(w)
        normalized = normalize(abacus_from_coset_rep(w0))
        kind = classify(normalized)
        profile = None
        if kind is AbacusClass.SHORT and is_fc_coset_rep(normalized):
            profile = lmr_profile(normalized)
    except (EnumerationError, ValueError) as e:
        _fail(f"Invalid window: {e}")
        return

    export = ClassificationExport(
        n=w.n,
        window=list(w.window),
        length=coxeter_length(w),
        fully_commutative=is_fully_commutative(w),
        coset_representative=list(w0.window),
        finite_factor=list(u.one_line),
        right_descents=sorted(descent_set(w, Side.RIGHT)),
        left_descents=sorted(descent_set(w, Side.LEFT)),
        abacus_class=kind.value,
        profile=None if profile is None else str(profile),
    )
    if fmt == 'json':
        click.echo(export.model_dump_json(indent=2))
        return

    click.echo(f"Window: {render_window(export.window)}")
    click.echo(f"Length: {export.length}")
    click.echo(f"Fully commutative: {'yes' if export.fully_commutative else 'no'}")
    click.echo(f"Coset representative: {render_window(export.coset_representative)}")
    click.echo(f"Finite factor: {render_window(export.finite_factor)}")
    click.echo(f"Right descents: {export.right_descents}")
    click.echo(f"Left descents: {export.left_descents}")
    click.echo(f"Abacus class: {export.abacus_class}")
    if export.profile:
        click.echo(f"Profile: {export.profile}")


@cli.command()
@click.option('--max-size', type=int, default=6, show_default=True,
              help='Largest permutation size')
@click.option('--format', 'fmt', type=FORMATS, default='text', help='Output format')
def stats(max_size, fmt):
    """Dump (size, inversions, left run, right run, descents) counts of 321-avoiders."""
    if max_size < 0:
        raise click.BadParameter("must be non-negative", param_hint="--max-size")
    table = finite_321_stats(max_size)
    rows = [
        StatRow(size=s.size, inversions=s.inversions, left_run=s.left_run,
                right_run=s.right_run, descents=s.descents, count=str(c))
        for s, c in sorted(table.records.items(),
                           key=lambda item: (item[0].size, item[0].inversions, item[0].left_run,
                                             item[0].right_run, item[0].descents))
    ]
    if fmt == 'json':
        click.echo(StatsExport(max_size=max_size, rows=rows).model_dump_json(indent=2))
        return

    click.echo(f"{'size':>4} {'inv':>4} {'i':>3} {'j':>3} {'d':>3} {'count':>8}")
    for row in rows:
        click.echo(f"{row.size:>4} {row.inversions:>4} {row.left_run:>3} "
                   f"{row.right_run:>3} {row.descents:>3} {row.count:>8}")


@cli.command()
@click.option('--n', 'n', type=int, required=True, help='Rank of the affine symmetric group')
@click.option('--maxlen', type=int, required=True, help='Longest length to enumerate')
@click.option('--fc-only', is_flag=True, help='Expand only FC elements (totals become null)')
@click.pass_context
def histogram(ctx, n, maxlen, fc_only):
    """Per-length element and FC counts from breadth-first search, as JSON."""
    config = ctx.obj['config']
    _require_rank(n)
    try:
        h = Oracle(config).histogram(n, maxlen, fc_only=fc_only)
    except (EnumerationError, ValueError) as e:
        _fail(f"Search failed: {e}")
        return
    click.echo(HistogramExport.from_histogram(h).model_dump_json(indent=2))


@cli.command()
@click.option('--n', 'n', type=int, required=True, help='Rank of the affine symmetric group')
@click.option('--qcap', type=int, help='Highest power of q to inspect')
@click.option('--format', 'fmt', type=FORMATS, default='text', help='Output format')
@click.pass_context
def periodicity(ctx, n, qcap, fmt):
    """Period and onset of the eventually periodic tail of f_n."""
    config = ctx.obj['config']
    _require_rank(n)
    assembler = SeriesAssembler(config)
    q_cap = assembler.resolve_qcap(n, qcap)
    try:
        report = Oracle(config).periodicity(n, assembler.coefficients(n, q_cap))
    except (EnumerationError, ValueError) as e:
        _fail(f"Periodicity check failed for f_{n}: {e}")
        return

    export = PeriodicityExport.from_report(report)
    if fmt == 'json':
        click.echo(export.model_dump_json(indent=2))
        return
    click.echo(f"f_{n}: period {export.period}, tail {', '.join(export.tail)}")
    click.echo(f"Onset: q^{export.onset} (bound q^{export.guaranteed_onset}, "
               f"expected q^{export.conjectured_onset})")


@cli.command()
@click.option('--n', 'n', type=int, required=True, help='Rank of the affine symmetric group')
@click.option('--qcap', type=int, help='Highest power of q to compute')
@click.option('--format', 'fmt', type=FORMATS, default='text', help='Output format')
@click.pass_context
def shortcut(ctx, n, qcap, fmt):
    """f_n from a bounded search continued by periodicity."""
    config = ctx.obj['config']
    _require_rank(n)
    q_cap = SeriesAssembler(config).resolve_qcap(n, qcap)
    try:
        coefficients = Oracle(config).shortcut(n, q_cap)
    except (EnumerationError, ValueError) as e:
        _fail(f"Shortcut failed for n={n}: {e}")
        return

    padded = coefficients.padded(q_cap + 1)
    if fmt == 'json':
        export = SeriesExport(n=n, q_cap=q_cap, source="shortcut",
                              coefficients=[str(c) for c in padded])
        click.echo(export.model_dump_json(indent=2))
    else:
        click.echo(",".join(str(c) for c in padded))


def main():
    """Main entry point."""
    cli(obj={})


if __name__ == '__main__':
    main()
