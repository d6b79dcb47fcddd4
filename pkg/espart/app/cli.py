"""Command-line entry point: python -m app.cli <command> ...

Every command prints (or writes with --out) a RunReport document. Exit codes: 0 success,
2 input/config error, 3 hypothesis or extraction failure, 4 validation failure, 5 not found.
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional
import typer
from pydantic import TypeAdapter, ValidationError
from app.core.errors import ConfigError, EspartError, InputError
from app.core.init_app import configure_logging
from app.models.descriptors import HkwDescriptor, PointSetDescriptor
from app.schemas.reports import DensityReport
from app.services.document_service import DocumentService
from app.services.run_service import RunService
import logging

logger = logging.getLogger(__name__)

cli = typer.Typer(add_completion=False, no_args_is_help=True, help="Uniform partitions of exponential Riesz sequences.")

document_service = DocumentService()
run_service = RunService()

generator_adapter = TypeAdapter(PointSetDescriptor)

CONFIG_OPTION = typer.Option(None, "--config", help="JSON document of option defaults.")
OUT_OPTION = typer.Option(None, "--out", help="Write the report here instead of standard output.")


@cli.callback()
def main(log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level.")):
    configure_logging(log_level)


def resolve(flags: Dict[str, Any], config: Optional[Path], defaults: Dict[str, Any]) -> Dict[str, Any]:
    """flags > --config document > defaults."""
    document = document_service.load_config(config)
    resolved = {}
    for name, default in defaults.items():
        if flags.get(name) is not None:
            resolved[name] = flags[name]
        else:
            resolved[name] = document.get(name, default)
    return resolved


def parse_floats(value: Any, name: str) -> List[float]:
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    try:
        return [float(v) for v in str(value).split(",") if v.strip()]
    except ValueError:
        raise InputError(f"--{name} must be a comma-separated list of numbers, got {value!r}")


def emit(report, out: Optional[Path]) -> None:
    text = document_service.write(report, out)
    if out is None:
        typer.echo(text)
    raise typer.Exit(report.exit_code)


def fail(e: Exception) -> None:
    if isinstance(e, ValidationError):
        e = InputError(f"invalid input: {e.errors()[0]['msg']}")
    logger.error(f"{type(e).__name__}: {e}")
    typer.echo(json.dumps(e.to_dict(), indent=2, default=str), err=True)
    raise typer.Exit(e.exit_code)


@cli.command()
def density(
    pointset: Path = typer.Argument(..., help="Point-set document or column file."),
    r: Optional[float] = typer.Option(None, "--r", help="Density exponent."),
    h_min: Optional[float] = typer.Option(None, "--h-min"),
    h_max: Optional[float] = typer.Option(None, "--h-max"),
    h_steps: Optional[int] = typer.Option(None, "--h-steps"),
    csv: Optional[Path] = typer.Option(None, "--csv", help="Also write the curves as CSV."),
    config: Optional[Path] = CONFIG_OPTION,
    out: Optional[Path] = OUT_OPTION,
):
    """Beurling density estimates of a point window."""
    try:
        opts = resolve(
            {"r": r, "h_min": h_min, "h_max": h_max, "h_steps": h_steps},
            config,
            {"r": 1.0, "h_min": None, "h_max": None, "h_steps": None},
        )
        w = document_service.load_points(pointset)
        report = run_service.density(w, opts["r"], opts["h_min"], opts["h_max"], opts["h_steps"])
        if csv is not None:
            document_service.write_density_csv(DensityReport.model_validate(report.outputs), csv)
    except (EspartError, ValidationError) as e:
        fail(e)
    emit(report, out)


@cli.command()
def partition(
    cover: Path = typer.Argument(..., help="Cover document or hkw descriptor."),
    pointset: Path = typer.Argument(..., help="Point-set document or column file."),
    alpha: Optional[float] = typer.Option(None, "--alpha"),
    validate: Optional[bool] = typer.Option(None, "--validate/--no-validate"),
    window_sizes: Optional[str] = typer.Option(None, "--window-sizes", help="Comma-separated section sizes."),
    set_file: Optional[Path] = typer.Option(None, "--set", help="Covered set E (default: the realized cover)."),
    config: Optional[Path] = CONFIG_OPTION,
    out: Optional[Path] = OUT_OPTION,
):
    """Extract the partition modulus N and its certificate; optionally validate on Gram sections."""
    try:
        opts = resolve(
            {"alpha": alpha, "validate": validate, "window_sizes": window_sizes},
            config,
            {"alpha": None, "validate": False, "window_sizes": None},
        )
        sizes = None
        if opts["window_sizes"] is not None:
            sizes = [int(v) for v in parse_floats(opts["window_sizes"], "window-sizes")]
        c = document_service.load_cover(cover)
        w = document_service.load_points(pointset)
        E = document_service.load_set(set_file) if set_file is not None else None
        report = run_service.partition(c, w, opts["alpha"], bool(opts["validate"]), sizes, E)
    except (EspartError, ValidationError) as e:
        fail(e)
    emit(report, out)


@cli.command()
def gram(
    set_file: Path = typer.Argument(..., help="Interval-union document."),
    pointset: Path = typer.Argument(..., help="Frequencies of the section."),
    complement: Optional[bool] = typer.Option(None, "--complement/--no-complement"),
    target_lower: Optional[float] = typer.Option(None, "--target-lower"),
    matrix: bool = typer.Option(False, "--matrix", help="Include the matrix as [re, im] pairs."),
    config: Optional[Path] = CONFIG_OPTION,
    out: Optional[Path] = OUT_OPTION,
):
    """Extremal eigenvalues of a Gram section and the margin over a target lower bound."""
    try:
        opts = resolve(
            {"complement": complement, "target_lower": target_lower},
            config,
            {"complement": False, "target_lower": 0.0},
        )
        E = document_service.load_set(set_file)
        w = document_service.load_points(pointset)
        report = run_service.gram(E, w, bool(opts["complement"]), float(opts["target_lower"]), matrix)
    except (EspartError, ValidationError) as e:
        fail(e)
    emit(report, out)


@cli.command()
def mv(
    pointset: Optional[Path] = typer.Argument(None, help="Frequencies (omit with --random-suite)."),
    coeffs: Optional[str] = typer.Option(None, "--coeffs", help="JSON list or file of coefficients."),
    interval: Optional[str] = typer.Option(None, "--interval", help="a,b"),
    delta: Optional[float] = typer.Option(None, "--delta"),
    random_suite: Optional[int] = typer.Option(None, "--random-suite"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    config: Optional[Path] = CONFIG_OPTION,
    out: Optional[Path] = OUT_OPTION,
):
    """Montgomery-Vaughan check of one polynomial, or a seeded random suite."""
    try:
        opts = resolve(
            {"interval": interval, "delta": delta, "random_suite": random_suite, "seed": seed},
            config,
            {"interval": "0,1", "delta": None, "random_suite": None, "seed": 0},
        )
        ends = parse_floats(opts["interval"], "interval")
        if len(ends) != 2:
            raise InputError("--interval takes exactly two numbers")
        w = document_service.load_points(pointset) if pointset is not None else None
        coefficients = document_service.load_inline_or_file(coeffs) if coeffs is not None else None
        if coefficients is not None and not isinstance(coefficients, list):
            raise InputError("coefficients must be a list")
        report = run_service.mv(w, coefficients, (ends[0], ends[1]), opts["delta"],
                                opts["random_suite"], int(opts["seed"]))
    except (EspartError, ValidationError) as e:
        fail(e)
    emit(report, out)


@cli.command()
def gen(
    example: str = typer.Option(..., "--example", help="hkw, easycor, integers or power."),
    n_max: Optional[int] = typer.Option(None, "--n-max"),
    rule: Optional[str] = typer.Option(None, "--rule", help="geometric or slow (hkw)."),
    c: Optional[float] = typer.Option(None, "--c"),
    rho: Optional[float] = typer.Option(None, "--rho"),
    beta: Optional[float] = typer.Option(None, "--beta"),
    j_max: Optional[int] = typer.Option(None, "--j-max"),
    schedule: Optional[str] = typer.Option(None, "--schedule", help="desk or tower (easycor)."),
    lo: Optional[int] = typer.Option(None, "--lo"),
    hi: Optional[int] = typer.Option(None, "--hi"),
    exponent: Optional[float] = typer.Option(None, "--exponent"),
    config: Optional[Path] = CONFIG_OPTION,
    out: Optional[Path] = OUT_OPTION,
):
    """Generate a cover or a frequency set from a descriptor."""
    try:
        document = document_service.load_config(config)
        flags = {
            "n_max": n_max, "beta": beta, "j_max": j_max, "schedule": schedule,
            "lo": lo, "hi": hi, "exponent": exponent,
        }
        descriptor: Dict[str, Any] = {**document, **{k: v for k, v in flags.items() if v is not None}}
        descriptor["kind"] = example.lower()
        if descriptor["kind"] == "hkw":
            rule_doc = dict(descriptor.get("rule") or {})
            for key, value in (("kind", rule), ("c", c), ("rho", rho)):
                if value is not None:
                    rule_doc[key] = value
            descriptor["rule"] = rule_doc
            for key in ("beta", "j_max", "schedule", "lo", "hi", "exponent"):
                descriptor.pop(key, None)
            parsed = HkwDescriptor.model_validate(descriptor)
        elif descriptor["kind"] in ("easycor", "integers", "power"):
            parsed = generator_adapter.validate_python(descriptor)
        else:
            raise ConfigError(f"unknown example {example!r}")
        report = run_service.gen(parsed)
    except (EspartError, ValidationError) as e:
        fail(e)
    emit(report, out)


@cli.command()
def progression(
    pointset: Path = typer.Argument(..., help="Integer point set."),
    subsample_n: Optional[int] = typer.Option(None, "--subsample-N"),
    delta: Optional[float] = typer.Option(None, "--delta"),
    log_base: Optional[str] = typer.Option(None, "--log-base", help="e, 2 or 10."),
    search_budget: Optional[int] = typer.Option(None, "--search-budget"),
    config: Optional[Path] = CONFIG_OPTION,
    out: Optional[Path] = OUT_OPTION,
):
    """Search a subsample for an arithmetic progression meeting the step/length condition."""
    try:
        opts = resolve(
            {"subsample_N": subsample_n, "delta": delta, "log_base": log_base, "search_budget": search_budget},
            config,
            {"subsample_N": 1, "delta": 1.0, "log_base": None, "search_budget": None},
        )
        w = document_service.load_points(pointset)
        report = run_service.progression(w, int(opts["subsample_N"]), float(opts["delta"]),
                                         opts["log_base"], opts["search_budget"])
    except (EspartError, ValidationError) as e:
        fail(e)
    emit(report, out)


if __name__ == "__main__":
    cli()
