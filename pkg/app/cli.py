"""
Command-line front end.

    gsca validate  INSTANCE        mu axioms and mu-symmetry (or grading axioms of a presentation)
    gsca quadrics  INSTANCE        q_k = z^T M_k z, raw and monic
    gsca normalize INSTANCE        normalizing-sequence search for span{q_k}
    gsca bpf       INSTANCE        base-point freeness
    gsca hilbert   INSTANCE        Hilbert function and growth estimate
    gsca analyze   INSTANCE        everything above in one report
    gsca search    GRID            analyze over a parameter grid

Exit codes: 0 when a verdict was computed (negative verdicts included),
1 on validation failure, 2 on unreadable input, 3 on any other toolkit error.
"""

import argparse
import itertools
import json
import logging
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError
from sympy import Rational, sympify
from sympy.core.sympify import SympifyError

from . import report
from .config import config
from .errors import ParseError, ToolkitError, ValidationFailed
from .graph import analyze
from .models import AnalysisOptions, GridSpec, InstanceFile
from .tools.freealg import Presentation, validate_presentation
from .tools.geometry import is_base_point_free
from .tools.gsca import build_gsca, eliminate_y
from .tools.ncgb import MIN_WINDOW, growth_estimate, hilbert_function
from .tools.scalars import FieldSpec, Matrix
from .tools.skewring import (
    MuMatrix,
    QuadricSystem,
    find_normalizing_sequence,
    mu_symmetry_violations,
    mu_violations,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARSE = 2
EXIT_ERROR = 3

_EXPRESSION_PATTERN = re.compile(r"^[0-9A-Za-z_+\-*/^()\s]*$")
_IDENTIFIER_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_POWER_PATTERN = re.compile(r"\^\s*(?:\(\s*([+-]?\d+)\s*\)|([+-]?\d+))?(\s*\^)?")
# product of all literal exponents in one entry
MAX_EXPONENT = 4096


# ---------- instance loading ----------


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}", module="cli") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})", module="cli") from e


def load_instance(path: str) -> InstanceFile:
    try:
        return InstanceFile.model_validate(_read_json(path))
    except ValidationError as e:
        raise ParseError(f"{path}: {_first_error(e)}", module="cli") from e


def load_grid(path: str) -> GridSpec:
    try:
        return GridSpec.model_validate(_read_json(path))
    except ValidationError as e:
        raise ParseError(f"{path}: {_first_error(e)}", module="cli") from e


def _first_error(error: ValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first["loc"])
    return f"{location}: {first['msg']}" if location else first["msg"]


def _check_exponents(text: str) -> None:
    """Exponents must be integer literals, unchained, with a bounded product."""
    total = 1
    for match in _POWER_PATTERN.finditer(text.replace("**", "^")):
        literal = match.group(1) or match.group(2)
        if literal is None or match.group(3):
            raise ParseError(f"exponents in {text!r} must be unchained integer literals", module="cli")
        total *= max(abs(int(literal)), 1)
        if total > MAX_EXPONENT:
            raise ParseError(f"exponents in {text!r} exceed {MAX_EXPONENT}", module="cli")


def evaluate_scalar(text: str, values: Dict[str, Rational]) -> Rational:
    """
    Exact value of a scalar expression over + - * / ^ and parentheses.

    Names must be declared parameters; the result must be rational.
    """
    text = str(text).strip()
    if not text or not _EXPRESSION_PATTERN.match(text):
        raise ParseError(f"invalid scalar expression {text!r}", module="cli")
    for name in _IDENTIFIER_PATTERN.findall(text):
        if name not in values:
            raise ParseError(f"unknown parameter {name!r} in {text!r}", module="cli")
    _check_exponents(text)
    # parameter names such as "lambda" are Python keywords; bind them under placeholders
    placeholders = {name: f"_param{i}" for i, name in enumerate(values)}
    expression = _IDENTIFIER_PATTERN.sub(lambda m: placeholders[m.group(0)], text).replace("^", "**")
    try:
        value = sympify(
            expression,
            locals={placeholders[name]: v for name, v in values.items()},
            rational=True,
        )
    except (SympifyError, SyntaxError, TypeError, ZeroDivisionError) as e:
        raise ParseError(f"cannot evaluate {text!r}: {e}", module="cli") from e
    if not getattr(value, "is_Rational", False) or value.free_symbols:
        raise ParseError(f"{text!r} does not evaluate to a rational number", module="cli")
    return value


def field_of(instance: InstanceFile) -> FieldSpec:
    try:
        return FieldSpec(kind=instance.field.kind, p=instance.field.p)
    except ValidationError as e:
        raise ParseError(f"field: {_first_error(e)}", module="cli") from e


def resolve_parameters(instance: InstanceFile) -> Dict[str, Rational]:
    """Parameters in file order; later parameters may use earlier ones."""
    values: Dict[str, Rational] = {}
    for name, expression in instance.parameters.items():
        values[name] = evaluate_scalar(expression, values)
    return values


def resolve_entries(instance: InstanceFile) -> Tuple[FieldSpec, List[List[Any]], List[List[List[Any]]]]:
    """Field plus mu and matrix entries as field scalars, parameters substituted."""
    field = field_of(instance)
    values = resolve_parameters(instance)

    def scalar(text: str):
        return field.convert(evaluate_scalar(text, values))

    mu = [[scalar(x) for x in row] for row in instance.mu]
    matrices = [[[scalar(x) for x in row] for row in m] for m in instance.matrices]
    return field, mu, matrices


def options_for(instance: InstanceFile, args: argparse.Namespace) -> AnalysisOptions:
    """Instance-file options overridden by command-line flags."""
    merged: Dict[str, Any] = dict(instance.options)
    if getattr(args, "max_degree", None) is not None:
        merged["max_degree"] = args.max_degree
    if getattr(args, "bpf_mode", None) is not None:
        merged["bpf_mode"] = args.bpf_mode
    if getattr(args, "budget", None) is not None:
        merged["budget"] = args.budget
    if getattr(args, "precedence", None) is not None:
        merged["precedence"] = args.precedence
    try:
        return AnalysisOptions(**merged)
    except ValidationError as e:
        raise ParseError(f"options: {_first_error(e)}", module="cli") from e


def _zero_based(options: AnalysisOptions) -> Optional[List[int]]:
    """The 1-based --precedence as generator indices."""
    return [i - 1 for i in options.precedence] if options.precedence else None


def _checked(instance: InstanceFile) -> Tuple[MuMatrix, List[Matrix]]:
    """mu and the matrices, or ValidationFailed naming the first broken entry."""
    if instance.is_presentation:
        raise ValidationFailed("this command needs mu and matrices, not a bare presentation")
    field, mu_rows, matrix_rows = resolve_entries(instance)
    problems = mu_violations(field, mu_rows)
    if problems:
        (i, j), message = problems[0]
        raise ValidationFailed(f"mu entry ({i},{j}): {message}")
    mu = MuMatrix(field, tuple(tuple(r) for r in mu_rows))
    matrices = [Matrix.from_rows(field, m) for m in matrix_rows]
    for k, m in enumerate(matrices, 1):
        broken = mu_symmetry_violations(m, mu)
        if broken:
            i, j = broken[0]
            raise ValidationFailed(f"M_{k} entry ({i},{j}): M_{i}{j} != mu_{i}{j} * M_{j}{i}")
    return mu, matrices


# ---------- commands ----------


def cmd_validate(args: argparse.Namespace) -> Tuple[Dict[str, Any], str, int]:
    instance = load_instance(args.instance)
    if instance.is_presentation:
        spec = instance.presentation
        presentation = Presentation.parse(field_of(instance), spec.generators, spec.relations, spec.degrees)
        document = report.validation_json(validate_presentation(presentation))
        return document, report.validation_text(document), EXIT_OK if document["graded"] else EXIT_VALIDATION

    field, mu_rows, matrix_rows = resolve_entries(instance)
    problems = mu_violations(field, mu_rows)
    symmetry: List[str] = []
    first: Optional[List[int]] = list(problems[0][0]) if problems else None
    if not problems:
        mu = MuMatrix(field, tuple(tuple(r) for r in mu_rows))
        for k, rows in enumerate(matrix_rows, 1):
            for i, j in mu_symmetry_violations(Matrix.from_rows(field, rows), mu):
                symmetry.append(f"M_{k}: M_{i}{j} != mu_{i}{j} * M_{j}{i}")
                if first is None:
                    first = [i, j]
    document = report.instance_validation_json([m for _, m in problems], symmetry, first)
    valid = not problems and not symmetry
    return document, report.validation_text(document), EXIT_OK if valid else EXIT_VALIDATION


def cmd_quadrics(args: argparse.Namespace) -> Tuple[Dict[str, Any], str, int]:
    mu, matrices = _checked(load_instance(args.instance))
    system = QuadricSystem.build(mu, matrices)
    return report.quadric_system_json(system), report.quadric_system_text(system), EXIT_OK


def cmd_normalize(args: argparse.Namespace) -> Tuple[Dict[str, Any], str, int]:
    instance = load_instance(args.instance)
    options = options_for(instance, args)
    mu, matrices = _checked(instance)
    system = QuadricSystem.build(mu, matrices)
    result = find_normalizing_sequence(
        system.monic,
        system.ring,
        degree_bound=options.max_degree,
        budget=options.budget,
        coefficients=options.coefficients,
        precedence=_zero_based(options),
    )
    return report.normalizing_json(result), report.normalizing_text(result), EXIT_OK


def cmd_bpf(args: argparse.Namespace) -> Tuple[Dict[str, Any], str, int]:
    instance = load_instance(args.instance)
    options = options_for(instance, args)
    mu, matrices = _checked(instance)
    verdict = is_base_point_free(QuadricSystem.build(mu, matrices), options.mode)
    return report.bpf_json(verdict), report.bpf_text(verdict), EXIT_OK


def cmd_hilbert(args: argparse.Namespace) -> Tuple[Dict[str, Any], str, int]:
    instance = load_instance(args.instance)
    options = options_for(instance, args)
    if instance.is_presentation:
        spec = instance.presentation
        presentation = Presentation.parse(field_of(instance), spec.generators, spec.relations, spec.degrees)
    else:
        mu, matrices = _checked(instance)
        presentation = eliminate_y(build_gsca(mu, matrices)).presentation
    data = hilbert_function(presentation, options.max_degree, _zero_based(options))
    estimate = growth_estimate(data) if len(data.dims) >= MIN_WINDOW else None
    document = {
        "hilbert": report.hilbert_json(data),
        "growth": report.growth_json(estimate) if estimate else None,
    }
    return document, report.hilbert_text(data, estimate), EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> Tuple[Dict[str, Any], str, int]:
    instance = load_instance(args.instance)
    if instance.is_presentation:
        raise ValidationFailed("analyze needs mu and matrices, not a bare presentation")
    options = options_for(instance, args)
    field, mu_rows, matrix_rows = resolve_entries(instance)
    result = analyze(field, mu_rows, matrix_rows, options)
    return report.analysis_json(result), report.analysis_text(result), EXIT_OK


def _grid_point(job: Tuple[int, InstanceFile, Dict[str, str], Dict[str, Any]]) -> Dict[str, Any]:
    """Analyze one grid point; errors are recorded in the row, never raised."""
    index, base, assignment, overrides = job
    row: Dict[str, Any] = {"index": index, "parameters": assignment}
    try:
        instance = base.model_copy(update={"parameters": {**base.parameters, **assignment}})
        options = AnalysisOptions(**{**instance.options, **overrides})
        field, mu_rows, matrix_rows = resolve_entries(instance)
        result = analyze(field, mu_rows, matrix_rows, options)
    except ToolkitError as e:
        row.update(normalizing="unknown", bpf="unknown", error=e.diagnostic)
        return row
    except ValidationError as e:
        row.update(normalizing="unknown", bpf="unknown", error=f"cli: {_first_error(e)}")
        return row
    row.update(
        normalizing=result.normalizing_verdict,
        bpf=result.bpf_verdict,
        report=report.analysis_json(result),
    )
    return row


def grid_points(grid: GridSpec) -> List[Dict[str, str]]:
    """Cartesian product of the grid in file order; an empty grid has no points."""
    if not grid.grid:
        return []
    names = list(grid.grid)
    return [dict(zip(names, values)) for values in itertools.product(*(grid.grid[n] for n in names))]


def summarize(rows: Sequence[Dict[str, Any]]) -> Dict[str, Any]:
    counts: Dict[str, int] = {}
    for row in rows:
        key = f"normalizing={row['normalizing']} bpf={row['bpf']}"
        counts[key] = counts.get(key, 0) + 1
    return {
        "points": len(rows),
        "counts": dict(sorted(counts.items())),
        "errors": sum(1 for row in rows if "error" in row),
    }


def run_search(grid: GridSpec, overrides: Dict[str, Any], workers: int) -> List[Dict[str, Any]]:
    jobs = [(i, grid.base, point, overrides) for i, point in enumerate(grid_points(grid))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_grid_point, jobs))
    return [_grid_point(job) for job in jobs]


def cmd_search(args: argparse.Namespace) -> Tuple[Dict[str, Any], str, int]:
    grid = load_grid(args.grid)
    if grid.base.is_presentation:
        raise ValidationFailed("grid search needs a base instance with mu and matrices")
    overrides = {
        key: value
        for key, value in (
            ("max_degree", args.max_degree),
            ("bpf_mode", args.bpf_mode),
            ("budget", args.budget),
            ("precedence", args.precedence),
        )
        if value is not None
    }
    rows = run_search(grid, overrides, args.workers or config.WORKERS)
    summary = summarize(rows)
    text = [f"grid search: {summary['points']} points, {summary['errors']} errors"]
    for row in rows:
        assignment = ", ".join(f"{k}={v}" for k, v in row["parameters"].items())
        status = row.get("error") or f"normalizing={row['normalizing']} bpf={row['bpf']}"
        text.append(f"  [{row['index']}] {assignment}: {status}")
    text.extend(f"  {key}: {count}" for key, count in summary["counts"].items())
    return {"points": rows, "summary": summary}, "\n".join(text) + "\n", EXIT_OK


# ---------- argument parsing ----------


def _precedence(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"precedence must be comma-separated indices, got {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=None, help="degree bound N (default from GSCA_MAX_DEGREE)")
    common.add_argument("--bpf-mode", default=None, help="exact or scan:p[,k]")
    common.add_argument("--budget", type=int, default=None, help="normality tests allowed in the search")
    common.add_argument("--precedence", type=_precedence, default=None, help="generator order, e.g. 2,1")
    common.add_argument("--output", choices=("json", "text"), default="json")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="gsca", description="Graded skew Clifford algebra toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, handler, help_text in (
        ("validate", cmd_validate, "check mu and mu-symmetry, or the grading axioms of a presentation"),
        ("quadrics", cmd_quadrics, "print the quadric system"),
        ("normalize", cmd_normalize, "search for a normalizing sequence"),
        ("bpf", cmd_bpf, "decide base-point freeness"),
        ("hilbert", cmd_hilbert, "Hilbert function and growth estimate"),
        ("analyze", cmd_analyze, "full analysis report"),
    ):
        command = sub.add_parser(name, parents=[common], help=help_text)
        command.add_argument("instance")
        command.set_defaults(handler=handler)
    search = sub.add_parser("search", parents=[common], help="analyze every point of a parameter grid")
    search.add_argument("grid")
    search.add_argument("--workers", type=int, default=None, help="worker processes (default GSCA_WORKERS)")
    search.set_defaults(handler=cmd_search)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = getattr(logging, config.LOG_LEVEL.upper())
    if verbosity == 1:
        level = min(level, logging.INFO)
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    started = time.perf_counter()
    try:
        document, text, code = args.handler(args)
    except ParseError as e:
        print(e.diagnostic, file=sys.stderr)
        return EXIT_PARSE
    except ValidationFailed as e:
        print(e.diagnostic, file=sys.stderr)
        return EXIT_VALIDATION
    except ToolkitError as e:
        print(e.diagnostic, file=sys.stderr)
        return EXIT_ERROR

    if args.output == "text":
        sys.stdout.write(text)
    elif args.command == "search":
        for row in document["points"]:
            sys.stdout.write(json.dumps(row, ensure_ascii=False) + "\n")
        summary = report.envelope("search", {"summary": document["summary"]}, time.perf_counter() - started)
        sys.stdout.write(json.dumps(summary, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(report.dumps(report.envelope(args.command, document, time.perf_counter() - started)) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
