"""
morse_cli.py
Command-line front door for the Morse cobordism toolkit.

Usage:
    python morse_cli.py validate data/bad_odd_euler.json
    python morse_cli.py invariant data/symmetric.json
    python morse_cli.py product data/f.json data/fprime.json
    python morse_cli.py obstruct data/f.json data/fprime.json --K 5 --format csv
    python morse_cli.py verify-lemma1 --f1 circle_cos:3 --f2 sphere_height --weights 0.7071,0.7071

Exit status: 0 on success, 1 when a verdict fails, 2 on input errors.
"""

from __future__ import annotations

import functools
import logging
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import click

from utils.catalog import parse_catalog_spec
from utils.config import DEFAULT_WEIGHTS, LabSettings
from utils.descriptor_io import dumps_descriptor, load_descriptor, write_descriptor
from utils.exceptions import InputError, PreconditionError, VerificationError
from utils.morse_algebra import (
    ExtraMiddlePair,
    check_theorem3,
    cobordism_invariant,
    diagonal_product,
    is_cobordant,
    phi,
    stabilize,
    validate,
)
from utils.numerical_lab import verify_lemma1
from utils.obstruction import obstruction_table, verify_theorem4
from utils.reports import (
    descriptor_frame,
    invariant_frame,
    invariant_text,
    render_lemma1,
    render_obstruction,
    to_json,
    violations_text,
)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_INPUT = 2

FORMATS = click.Choice(["json", "csv", "text"])
MIDDLE_PAIR = click.Choice([mode.value for mode in ExtraMiddlePair])
DESCRIPTOR = click.Path(dir_okay=False)

logger = logging.getLogger("morse_cli")


def reports_errors(command):
    """Map package exceptions to the 0/1/2 exit-status contract."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except InputError as exc:
            click.echo(f"Error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        except VerificationError as exc:
            click.echo(f"Verification failed: {exc}", err=True)
            sys.exit(EXIT_VERDICT)

    return wrapper


def parse_weights(text: str) -> tuple[float, float]:
    parts = text.split(",")
    try:
        a, b = (float(p) for p in parts)
    except ValueError as exc:
        raise PreconditionError(f"--weights expects two comma-separated numbers, got {text!r}") from exc
    return a, b


def emit_descriptor(d, fmt: str, output) -> None:
    if output:
        write_descriptor(d, output)
        logger.info("wrote %s", output)
    if fmt == "text":
        click.echo(descriptor_frame(d).to_string(index=False))
    elif fmt == "csv":
        click.echo(descriptor_frame(d).to_csv(index=False, lineterminator="\n").rstrip("\n"))
    else:
        click.echo(dumps_descriptor(d))


@click.group()
@click.version_option(version="1.0.0", prog_name="morse-cobordism")
@click.option("-v", "--verbose", count=True, help="Log INFO (-v) or DEBUG (-vv) to stderr.")
def cli(verbose: int):
    """
    Cobordism invariants of Morse functions and the diagonal product obstruction.

    Examples:

        python morse_cli.py invariant data/symmetric.json

        python morse_cli.py obstruct data/f.json data/fprime.json --K 10
    """
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


@cli.command("validate")
@click.argument("path", type=DESCRIPTOR)
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@reports_errors
def validate_cmd(path: str, fmt: str):
    """List every violated invariant of a descriptor (exit 2 if any)."""
    violations = validate(load_descriptor(path))
    if fmt == "json":
        click.echo(to_json([{"invariant": v.invariant, "reason": v.reason} for v in violations]))
    else:
        click.echo(violations_text(violations))
    sys.exit(EXIT_INPUT if violations else EXIT_OK)


@cli.command("invariant")
@click.argument("path", type=DESCRIPTOR)
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@reports_errors
def invariant_cmd(path: str, fmt: str):
    """Print the cobordism invariant (token, phi vector, optional Z/2 datum)."""
    inv = cobordism_invariant(load_descriptor(path))
    if fmt == "json":
        click.echo(to_json(inv.to_dict()))
    elif fmt == "csv":
        click.echo(invariant_frame(inv).to_csv(index=False, lineterminator="\n").rstrip("\n"))
    else:
        click.echo(invariant_text(inv))


@cli.command("phi")
@click.argument("path", type=DESCRIPTOR)
@click.option("--j", "j", type=int, required=True, help="Index 0 <= j <= m.")
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@reports_errors
def phi_cmd(path: str, j: int, fmt: str):
    """Print phi_j = C_j - C_{m-j}."""
    value = phi(load_descriptor(path), j)
    if fmt == "json":
        click.echo(to_json({"j": j, "phi": value}))
    else:
        click.echo(f"phi_{j}: {value}")


@cli.command("product")
@click.argument("first", type=DESCRIPTOR)
@click.argument("second", type=DESCRIPTOR)
@click.option("--format", "fmt", type=FORMATS, default="json", show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="Also write the result here.")
@reports_errors
def product_cmd(first: str, second: str, fmt: str, output):
    """Critical data of the diagonal Morse function of two descriptors."""
    emit_descriptor(diagonal_product(load_descriptor(first), load_descriptor(second)), fmt, output)


@cli.command("theorem3")
@click.argument("first", type=DESCRIPTOR)
@click.argument("second", type=DESCRIPTOR)
@click.option("--j", "j", type=int, required=True, help="0 <= j < m1 (m1 <= m2).")
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@reports_errors
def theorem3_cmd(first: str, second: str, j: int, fmt: str):
    """phi_{m1+m2-j} of the diagonal function from the factor counts."""
    check = check_theorem3(load_descriptor(first), load_descriptor(second), j)
    if fmt == "json":
        click.echo(to_json(check.to_dict()))
    else:
        click.echo(f"phi_{check.index}: {check.theorem3_phi} (convolution: {check.convolution_phi})")
    if not check.agrees:
        sys.exit(EXIT_VERDICT)


@cli.command("stabilize")
@click.argument("path", type=DESCRIPTOR)
@click.option("--k", "k", type=int, required=True, help="Cancelling pairs per index.")
@click.option("--extra-middle-pair", type=MIDDLE_PAIR, default="auto", show_default=True)
@click.option("--format", "fmt", type=FORMATS, default="json", show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="Also write the result here.")
@reports_errors
def stabilize_cmd(path: str, k: int, extra_middle_pair: str, fmt: str, output):
    """Add cancelling handle pairs without changing the source manifold."""
    emit_descriptor(stabilize(load_descriptor(path), k, ExtraMiddlePair(extra_middle_pair)), fmt, output)


@cli.command("cobordant")
@click.argument("first", type=DESCRIPTOR)
@click.argument("second", type=DESCRIPTOR)
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@reports_errors
def cobordant_cmd(first: str, second: str, fmt: str):
    """Decide fold cobordism (exit 1 when not cobordant)."""
    result = is_cobordant(load_descriptor(first), load_descriptor(second))
    if fmt == "json":
        click.echo(to_json({"cobordant": result}))
    else:
        click.echo(f"cobordant: {str(result).lower()}")
    sys.exit(EXIT_OK if result else EXIT_VERDICT)


@cli.command("obstruct")
@click.argument("f", type=DESCRIPTOR)
@click.argument("fprime", type=DESCRIPTOR)
@click.option("--K", "K", type=int, default=5, show_default=True, help="Family size (k = 0..K).")
@click.option("--extra-middle-pair", type=MIDDLE_PAIR, default="auto", show_default=True)
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@reports_errors
def obstruct_cmd(f: str, fprime: str, K: int, extra_middle_pair: str, fmt: str):
    """Tabulate the diagonal products of f with the stabilized family of f'."""
    d, d_prime = load_descriptor(f), load_descriptor(fprime)
    mode = ExtraMiddlePair(extra_middle_pair)
    settings = LabSettings.from_env()
    if K >= 1:
        report = verify_theorem4(d, d_prime, K, mode, n_jobs=settings.n_jobs)
        click.echo(render_obstruction(list(report.rows), report, fmt))
        sys.exit(EXIT_OK if report.passed else EXIT_VERDICT)
    rows = obstruction_table(d, d_prime, K, mode, n_jobs=settings.n_jobs)
    click.echo(render_obstruction(rows, None, fmt))


@cli.command("verify-lemma1")
@click.option("--f1", "f1", required=True, help="Catalog spec, e.g. circle_cos:3.")
@click.option("--f2", "f2", required=True, help="Catalog spec, e.g. sphere_height.")
@click.option(
    "--weights",
    default=",".join(f"{w:.12g}" for w in DEFAULT_WEIGHTS),
    show_default=True,
    help="Positive projection weights a,b.",
)
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@reports_errors
def verify_lemma1_cmd(f1: str, f2: str, weights: str, fmt: str):
    """Numerically check index additivity for a diagonal function."""
    report = verify_lemma1(
        parse_catalog_spec(f1),
        parse_catalog_spec(f2),
        parse_weights(weights),
        LabSettings.from_env(),
    )
    click.echo(render_lemma1(report, fmt))
    sys.exit(EXIT_OK if report.passed else EXIT_VERDICT)


if __name__ == "__main__":
    cli()
