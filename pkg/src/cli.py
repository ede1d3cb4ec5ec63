#!/usr/bin/env python3
"""
p-adic Hausdorff Lab CLI
Batch verification of the boundedness theorems plus direct access to the
constants, norms, operators and weight classification.

Exit codes: 0 when every scenario passes, 1 when any fails, 2 on a
configuration error.
"""

import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import click
import yaml

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.padic_hausdorff.config import ConfigManager, get_config, load_config
from src.padic_hausdorff.constants import ConstantKind, ConstantParams, theorem_constant
from src.padic_hausdorff.functions import AngularFactor
from src.padic_hausdorff.logging_config import setup_logging
from src.padic_hausdorff.models.geometry import PowerWeight
from src.padic_hausdorff.operators import PhiKernel, apply_commutator, apply_hausdorff
from src.padic_hausdorff.reporting import emit_report, format_number, summary_table
from src.padic_hausdorff.run_config import load_run_config, parse_angular, parse_function, parse_kernel
from src.padic_hausdorff.spaces import (
    SpaceParams,
    dot_herz_norm,
    evaluate_central_morrey,
    evaluate_cmo,
    evaluate_morrey_herz,
    herz_norm,
)
from src.padic_hausdorff.utils.error_handling import ConfigurationError, PadicLabError, SchemaError
from src.padic_hausdorff.validation import InputValidator
from src.padic_hausdorff.verify import run_grid
from src.padic_hausdorff.weights import classify_power_weight

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

SPACES = ("cmorrey", "herz", "dherz", "mherz", "cmo")


def _config_error(error: PadicLabError) -> None:
    """Print a configuration error with its field problems and exit with code 2."""
    click.echo(click.style(f"❌ Configuration error: {error.message}", fg="red"), err=True)
    for problem in getattr(error, "problems", []) or []:
        click.echo(f"  • {problem}", err=True)
    sys.exit(EXIT_CONFIG)


def _inline(text: Optional[str], what: str) -> Any:
    """Parse an inline YAML value given on the command line."""
    if text is None:
        return None
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise SchemaError(f"{what} is not valid inline YAML", problems=[f"{what}: {e}"])


def _prime_and_dimension(p: int, n: int) -> None:
    problems = [r.message for r in (InputValidator.validate_prime(p), InputValidator.validate_dimension(n)) if not r]
    if problems:
        raise SchemaError("invalid space", problems=problems)


@click.group()
@click.version_option(version="0.1.0", prog_name="p-adic Hausdorff Lab")
@click.option('--log-level', default=None, help='Logging level (DEBUG, INFO, WARNING, ERROR)')
@click.option('--config-file', type=click.Path(dir_okay=False), help='Lab configuration file (.yaml or .json)')
def cli(log_level: Optional[str], config_file: Optional[str]):
    """p-adic rough multilinear Hausdorff operator lab"""
    try:
        settings = load_config(config_file) if config_file else get_config()
    except ConfigurationError as e:
        _config_error(e)
        return
    try:
        setup_logging(level=log_level or settings.log_level, format=settings.log_format)
    except ValueError as e:
        _config_error(ConfigurationError(f"invalid logging setting: {e}"))


@cli.command()
@click.option('--config', 'config_path', required=True, type=click.Path(dir_okay=False),
              help='Run configuration (YAML or JSON)')
@click.option('--format', 'fmt', type=click.Choice(['csv', 'json']), default=None, help='Report format')
@click.option('--seed', type=click.IntRange(min=0), default=None, help='Random seed for sufficiency draws')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Report file (stdout if omitted)')
@click.option('--parallelism', type=click.IntRange(min=1), default=None, help='Concurrent scenarios')
@click.option('--reproducible', is_flag=True, help='Write wall_ms as 0 for byte-identical reports')
def verify(config_path: str, fmt: Optional[str], seed: Optional[int], out: Optional[str],
           parallelism: Optional[int], reproducible: bool):
    """Run every scenario of a configuration and emit the reports"""
    try:
        run = load_run_config(config_path)
    except SchemaError as e:
        _config_error(e)
        return

    if run.window is not None:
        ConfigManager().update("windows", sup_window=run.window)
    seed = run.seed if seed is None else seed
    fmt = fmt or run.format
    out = out or run.output

    reports = run_grid(run.scenarios, parallelism=parallelism or run.parallelism, seed=seed)
    try:
        text = emit_report(reports, fmt, out, reproducible=reproducible)
    except PadicLabError as e:
        click.echo(click.style(f"❌ Error: {e.message}", fg="red"), err=True)
        sys.exit(EXIT_FAIL)

    if out:
        click.echo(summary_table(reports))
    else:
        click.echo(text, nl=False)
    failed = [r for r in reports if not r.passed]
    if failed:
        click.echo(click.style(f"❌ {len(failed)} of {len(reports)} scenarios did not pass", fg="red"), err=True)
        sys.exit(EXIT_FAIL)
    click.echo(click.style(f"✅ All {len(reports)} scenarios passed", fg="green"), err=True)
    sys.exit(EXIT_PASS)


_PARAM_TUPLES = ("alphas", "qs", "lams", "ells")


def _constant_params(data: Dict[str, Any]) -> ConstantParams:
    if not isinstance(data, dict):
        raise SchemaError("--params must be an inline mapping", problems=["params: expected a mapping"])
    data = dict(data)
    p, n = data.pop("p", None), data.pop("n", None)
    _prime_and_dimension(p, n)
    kernel = parse_kernel(data.pop("kernel", {"kind": "finite_support", "values": {0: 1.0}}), n)
    allowed = set(ConstantParams.__dataclass_fields__) - {"p", "n", "kernel"}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise SchemaError("unknown constant parameters", problems=[f"params: unknown field {k!r}" for k in unknown])
    for name in _PARAM_TUPLES:
        if name in data:
            data[name] = tuple(float(v) for v in data[name])
    if "m" not in data:
        lengths = [len(data[name]) for name in _PARAM_TUPLES if name in data]
        data["m"] = lengths[0] if lengths else 1
    return ConstantParams(p=p, n=n, kernel=kernel, **data)


@cli.command()
@click.option('--kind', required=True, help='C1..C9, C41, C42, C6*, K or Ar')
@click.option('--params', 'params_text', required=True,
              help="Inline YAML, e.g. '{p: 2, n: 1, lam: -0.25, alpha: 0, kernel: {values: {1: 1}}}'")
@click.option('--json', 'output_json', is_flag=True, help='Output as JSON')
def constant(kind: str, params_text: str, output_json: bool):
    """Evaluate a theorem constant"""
    try:
        kind_enum = ConstantKind.parse(kind)
        params = _constant_params(_inline(params_text, "params"))
        value = theorem_constant(kind_enum, params)
    except PadicLabError as e:
        _config_error(e)
        return

    number = value.to_real()
    if output_json:
        click.echo(json.dumps({"kind": kind_enum.value, "value": format_number(number),
                               "log_p": format_number(value.log_value)}, indent=2))
        return
    if not value.is_finite:
        click.echo(click.style(f"{kind_enum.value} diverges", fg="yellow"))
        return
    click.echo(f"{kind_enum.value} = {format_number(number)}")


@cli.command()
@click.option('--space', required=True, type=click.Choice(SPACES), help='Function space')
@click.option('--function', 'function_text', required=True,
              help="Inline YAML, e.g. '{radial: {kind: power_law, exponent: -0.5}}'")
@click.option('--p', 'p', type=int, required=True, help='Prime')
@click.option('--n', 'n', type=int, default=1, help='Dimension')
@click.option('--q', type=float, default=1.0)
@click.option('--ell', type=float, default=1.0)
@click.option('--beta', type=float, default=0.0)
@click.option('--lam', type=float, default=0.0)
@click.option('--alpha', type=float, default=0.0, help='Weight exponent')
@click.option('--window', type=(int, int), default=None, help='Index window LO HI')
def norm(space: str, function_text: str, p: int, n: int, q: float, ell: float, beta: float,
         lam: float, alpha: float, window: Optional[Tuple[int, int]]):
    """Evaluate one space norm of one function"""
    try:
        _prime_and_dimension(p, n)
        if window is not None:
            checked = InputValidator.validate_window(list(window))
            if not checked:
                raise SchemaError("invalid window", problems=[checked.message])
            window = checked.sanitized_value
        f = parse_function(_inline(function_text, "function"), p, n)
        weight = PowerWeight(alpha)
        limited = False
        if space == "cmo":
            evaluation = evaluate_cmo(f, q, weight, window)
            value, limited = evaluation.value, evaluation.window_limited
        else:
            params = SpaceParams(q=q, ell=ell, beta=beta, lam=lam, weight=weight)
            if space == "cmorrey":
                evaluation = evaluate_central_morrey(f, params, window)
                value, limited = evaluation.value, evaluation.window_limited
            elif space == "mherz":
                evaluation = evaluate_morrey_herz(f, params, window)
                value, limited = evaluation.value, evaluation.window_limited
            elif space == "herz":
                value = herz_norm(f, params, window)
            else:
                value = dot_herz_norm(f, params, window)
    except PadicLabError as e:
        _config_error(e)
        return

    click.echo(f"{space} norm = {format_number(value.to_real())}")
    if limited:
        click.echo(click.style("⚠️  supremum attained at the window edge; value is window-limited", fg="yellow"))


@cli.command()
@click.option('--p', 'p', type=int, required=True, help='Prime')
@click.option('--n', 'n', type=int, default=1, help='Dimension')
@click.option('--kernel', 'kernel_text', default=None, help="Inline YAML kernel, default delta at 0")
@click.option('--omega', 'omega_text', default=None, help='Inline YAML angular factor, default 1')
@click.option('--function', 'function_texts', multiple=True, required=True, help='Input function (repeatable)')
@click.option('--symbol', 'symbol_texts', multiple=True, help='Commutator symbol (repeatable)')
@click.option('--k-min', type=int, default=-5)
@click.option('--k-max', type=int, default=5)
@click.option('--json', 'output_json', is_flag=True, help='Output as JSON')
def apply(p: int, n: int, kernel_text: Optional[str], omega_text: Optional[str],
          function_texts: Tuple[str, ...], symbol_texts: Tuple[str, ...],
          k_min: int, k_max: int, output_json: bool):
    """Evaluate the operator or its commutator on a grid of scales"""
    try:
        _prime_and_dimension(p, n)
        kernel_data = _inline(kernel_text, "kernel")
        kernel = parse_kernel(kernel_data, n) if kernel_data is not None else PhiKernel.delta(0)
        omega_data = _inline(omega_text, "omega")
        omega = parse_angular(omega_data, p, n) if omega_data is not None else AngularFactor.constant(p, n)
        fs = [parse_function(_inline(text, "function"), p, n) for text in function_texts]
        bs = [parse_function(_inline(text, "symbol"), p, n) for text in symbol_texts]
        if bs:
            profile = apply_commutator(p, n, kernel, omega, bs, fs)
        else:
            profile = apply_hausdorff(p, n, kernel, omega, fs)
        body = profile.as_piecewise(p)
        rows: List[Dict[str, Any]] = [{"k": k, "value": body(k).to_real()} for k in range(k_min, k_max + 1)]
    except PadicLabError as e:
        _config_error(e)
        return

    if output_json:
        click.echo(json.dumps([{"k": r["k"], "value": format_number(r["value"])} for r in rows], indent=2))
        return
    click.echo(click.style(f"\n{'Commutator' if bs else 'Operator'} output, |x|_p = p^k", fg="cyan", bold=True))
    for row in rows:
        click.echo(f"  k={row['k']:>4}  {format_number(row['value'])}")


@cli.command()
@click.option('--p', 'p', type=int, required=True, help='Prime')
@click.option('--n', 'n', type=int, default=1, help='Dimension')
@click.option('--alpha', type=float, required=True, help='Weight exponent of |x|_p^alpha')
@click.option('--ell', type=float, default=1.0, help='Muckenhoupt index')
@click.option('--json', 'output_json', is_flag=True, help='Output as JSON')
def classify(p: int, n: int, alpha: float, ell: float, output_json: bool):
    """Classify a power weight into A_ell and its reverse Holder index"""
    try:
        _prime_and_dimension(p, n)
        result = classify_power_weight(p, n, alpha, ell)
    except PadicLabError as e:
        _config_error(e)
        return

    index = result.reverse_holder_index
    if output_json:
        click.echo(json.dumps({
            "alpha": alpha,
            "ell": ell,
            "member": result.member,
            "reverse_holder_index": None if index is None else format_number(index),
            "locally_integrable": result.locally_integrable,
        }, indent=2))
        return
    mark = click.style("member", fg="green") if result.member else click.style("not a member", fg="red")
    click.echo(f"|x|_{p}^{alpha} on Q_{p}^{n}: {mark} of A_{ell}")
    if index is not None:
        shown = "inf" if math.isinf(index) else format_number(index)
        click.echo(f"Reverse Holder index: {shown}")


if __name__ == "__main__":
    cli()
