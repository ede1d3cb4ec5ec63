"""
Run Configuration
YAML run files for verification batches: top-level run settings plus a list
of scenario blocks with nested kernel, omega, functions and symbols
descriptors. Every problem is collected with the path of the offending field
before a single SchemaError is raised. JSON input is accepted as a YAML subset.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import yaml

from .config import get_config
from .functions import AngularFactor, ProfileKind, RadialProfile, SeparableFunction
from .models.report import Theorem, VerificationMode
from .operators import KernelKind, PhiKernel
from .scenario import Scenario, check_homogeneity, check_hypotheses
from .utils.error_handling import PadicLabError, SchemaError
from .validation import InputValidator, ValidationResult

logger = logging.getLogger(__name__)

Window = Tuple[int, int]

FORMATS = ("csv", "json")

RUN_FIELDS = {"seed", "format", "output", "parallelism", "window", "draws", "scenarios"}

SCENARIO_FIELDS = {
    "id", "theorem", "mode", "p", "n",
    "qs", "alphas", "lams", "betas", "ells", "rs",
    "q", "alpha", "beta", "ell", "lam", "lam_star", "beta_star", "q_star", "zeta", "delta",
    "kernel", "omega", "functions", "symbols", "draws", "window", "herz_indices",
}

EXPONENT_LISTS = ("qs", "ells", "rs")
NUMBER_LISTS = ("alphas", "lams", "betas")
EXPONENT_FIELDS = ("q", "q_star")
POSITIVE_FIELDS = ("ell",)
NUMBER_FIELDS = ("alpha", "beta", "lam", "lam_star", "beta_star", "zeta", "delta")


@dataclass
class RunConfig:
    """A validated verification batch."""
    scenarios: List[Scenario] = field(default_factory=list)
    output: Optional[str] = None
    format: str = "csv"
    seed: int = 0
    window: Optional[Window] = None
    parallelism: int = 1


class _Problems:
    """Collects field-level problems under a path prefix."""

    def __init__(self):
        self.messages: List[str] = []

    def add(self, path: str, message: str) -> None:
        self.messages.append(f"{path}: {message}")

    def take(self, path: str, result: ValidationResult) -> Any:
        if result:
            return result.sanitized_value
        for message in result.errors or [result.message]:
            self.add(path, message)
        return None

    def unknown(self, path: str, data: Dict[str, Any], allowed) -> None:
        for key in sorted(set(data) - set(allowed), key=str):
            self.add(path, f"unknown field {key!r}")


def _mapping(problems: _Problems, path: str, value: Any) -> Optional[Dict[str, Any]]:
    if not isinstance(value, dict):
        problems.add(path, f"expected a mapping, got {type(value).__name__}")
        return None
    return value


def _exponent_list(problems: _Problems, path: str, value: Any) -> Optional[List[float]]:
    if not isinstance(value, (list, tuple)):
        problems.add(path, f"expected a list, got {type(value).__name__}")
        return None
    values = [problems.take(path, InputValidator.validate_exponent(v, f"{path}[{i}]"))
              for i, v in enumerate(value)]
    return None if any(v is None for v in values) else values


def _number_list(problems: _Problems, path: str, value: Any) -> Optional[List[float]]:
    return problems.take(path, InputValidator.validate_list_input(value, path))


# ----------------------------------------------------------------------
# Descriptors
# ----------------------------------------------------------------------

def _parse_kernel(problems: _Problems, path: str, value: Any, n: int) -> Optional[PhiKernel]:
    data = _mapping(problems, path, value)
    if data is None:
        return None
    kind = str(data.get("kind", "finite_support")).lower()
    try:
        if kind == "hardy":
            problems.unknown(path, data, {"kind"})
            return PhiKernel.hardy(n)
        if kind == KernelKind.FINITE_SUPPORT.value:
            problems.unknown(path, data, {"kind", "values"})
            values = data.get("values", {})
            if isinstance(values, list):
                values = dict(values)
            if not isinstance(values, dict):
                problems.add(f"{path}.values", "expected a mapping from scale to value")
                return None
            return PhiKernel.from_mapping({int(g): float(v) for g, v in values.items()})
        if kind == KernelKind.TWO_SIDED_POWER_DECAY.value:
            problems.unknown(path, data, {"kind", "coefficient", "decay"})
            return PhiKernel.two_sided(data.get("coefficient", 1.0), data.get("decay", 1.0))
        if kind == KernelKind.PIECEWISE_POWER.value:
            problems.unknown(path, data, {"kind", "positive", "negative"})
            sides = {
                side: tuple(float(x) for x in data[side]) if data.get(side) is not None else None
                for side in ("positive", "negative")
            }
            return PhiKernel.piecewise_power(**sides)
    except PadicLabError as e:
        problems.add(path, e.message)
        return None
    except (TypeError, ValueError) as e:
        problems.add(path, f"malformed kernel ({e})")
        return None
    problems.add(f"{path}.kind", f"unknown kernel kind {kind!r}")
    return None


def _parse_angular(problems: _Problems, path: str, value: Any, p: int, n: int) -> Optional[AngularFactor]:
    data = _mapping(problems, path, value)
    if data is None:
        return None
    problems.unknown(path, data, {"level", "values", "value"})
    try:
        if "value" in data:
            return AngularFactor.constant(p, n, float(data["value"]))
        values = _number_list(problems, f"{path}.values", data.get("values", [1.0]))
        if values is None:
            return None
        return AngularFactor.from_values(p, n, int(data.get("level", 0)), values)
    except PadicLabError as e:
        problems.add(path, e.message)
    except (TypeError, ValueError) as e:
        problems.add(path, f"malformed angular factor ({e})")
    return None


_RADIAL_FIELDS = {
    ProfileKind.FINITE_WINDOW: {"start", "values"},
    ProfileKind.POWER_LAW: {"exponent", "coefficient"},
    ProfileKind.POWER_LAW_TRUNCATED_BELOW: {"exponent", "cutoff", "coefficient"},
    ProfileKind.LOG_SCALE: {"coefficient"},
}


def _parse_radial(problems: _Problems, path: str, value: Any) -> Optional[RadialProfile]:
    data = _mapping(problems, path, value)
    if data is None:
        return None
    name = str(data.get("kind", "")).lower()
    kinds = {kind.value: kind for kind in _RADIAL_FIELDS}
    if name not in kinds:
        problems.add(f"{path}.kind", f"unknown profile kind {name!r}, expected one of {sorted(kinds)}")
        return None
    kind = kinds[name]
    problems.unknown(path, data, _RADIAL_FIELDS[kind] | {"kind"})
    try:
        coefficient = float(data.get("coefficient", 1.0))
        if kind == ProfileKind.FINITE_WINDOW:
            values = _number_list(problems, f"{path}.values", data.get("values"))
            return None if values is None else RadialProfile.finite_window(int(data.get("start", 0)), values)
        if kind == ProfileKind.POWER_LAW:
            return RadialProfile.power_law(float(data.get("exponent", 0.0)), coefficient)
        if kind == ProfileKind.POWER_LAW_TRUNCATED_BELOW:
            return RadialProfile.truncated_below(
                float(data.get("exponent", 0.0)), int(data.get("cutoff", 0)), coefficient
            )
        return RadialProfile.log_scale(coefficient)
    except PadicLabError as e:
        problems.add(path, e.message)
    except (TypeError, ValueError) as e:
        problems.add(path, f"malformed profile ({e})")
    return None


def _parse_functions(problems: _Problems, path: str, value: Any, p: int, n: int) -> Optional[List[SeparableFunction]]:
    if not isinstance(value, list):
        problems.add(path, f"expected a list, got {type(value).__name__}")
        return None
    fs = []
    for i, item in enumerate(value):
        where = f"{path}[{i}]"
        data = _mapping(problems, where, item)
        if data is None:
            continue
        problems.unknown(where, data, {"radial", "angular"})
        radial = _parse_radial(problems, f"{where}.radial", data.get("radial"))
        angular = (_parse_angular(problems, f"{where}.angular", data["angular"], p, n)
                   if "angular" in data else AngularFactor.constant(p, n))
        if radial is not None and angular is not None:
            fs.append(SeparableFunction(radial, angular))
    return fs if len(fs) == len(value) else None


# ----------------------------------------------------------------------
# Scenarios
# ----------------------------------------------------------------------

def _parse_scenario(problems: _Problems, index: int, value: Any, draws: Optional[int]) -> Optional[Scenario]:
    path = f"scenarios[{index}]"
    data = _mapping(problems, path, value)
    if data is None:
        return None
    problems.unknown(path, data, SCENARIO_FIELDS)
    before = len(problems.messages)

    fields: Dict[str, Any] = {"scenario_id": str(data.get("id", f"scenario-{index}"))}
    try:
        fields["theorem"] = Theorem.parse(data.get("theorem"))
    except ValueError as e:
        problems.add(f"{path}.theorem", str(e))
    if "mode" in data:
        try:
            fields["mode"] = VerificationMode(str(data["mode"]).lower())
        except ValueError:
            problems.add(f"{path}.mode", f"mode must be sharpness or sufficiency, got {data['mode']!r}")
    p = problems.take(f"{path}.p", InputValidator.validate_prime(data.get("p"), "p"))
    n = problems.take(f"{path}.n", InputValidator.validate_dimension(data.get("n"), "n"))

    if "qs" not in data:
        problems.add(f"{path}.qs", "required field missing")
    for name in EXPONENT_LISTS:
        if name in data:
            fields[name] = _exponent_list(problems, f"{path}.{name}", data[name])
    for name in NUMBER_LISTS:
        if name in data:
            fields[name] = _number_list(problems, f"{path}.{name}", data[name])
    for name in EXPONENT_FIELDS:
        if data.get(name) is not None:
            fields[name] = problems.take(f"{path}.{name}", InputValidator.validate_exponent(data[name], name))
    for name in POSITIVE_FIELDS:
        if data.get(name) is not None:
            fields[name] = problems.take(
                f"{path}.{name}",
                InputValidator.validate_numeric_range(
                    data[name], name, min_value=0.0, min_inclusive=False, allow_infinite=True
                ),
            )
    for name in NUMBER_FIELDS:
        if data.get(name) is not None:
            fields[name] = problems.take(
                f"{path}.{name}", InputValidator.validate_numeric_range(data[name], name)
            )
    if data.get("draws", draws) is not None:
        fields["draws"] = problems.take(
            f"{path}.draws",
            InputValidator.validate_numeric_range(data.get("draws", draws), "draws", min_value=1),
        )
    if "window" in data:
        fields["window"] = problems.take(f"{path}.window", InputValidator.validate_window(data["window"]))
    if "herz_indices" in data:
        indices = data["herz_indices"]
        if not isinstance(indices, list) or not all(isinstance(r, int) and r >= 1 for r in indices):
            problems.add(f"{path}.herz_indices", "expected a list of integers >= 1")
        else:
            fields["herz_indices"] = tuple(indices)

    if p is not None and n is not None:
        if "kernel" in data:
            fields["kernel"] = _parse_kernel(problems, f"{path}.kernel", data["kernel"], n)
        if "omega" in data:
            fields["omega"] = _parse_angular(problems, f"{path}.omega", data["omega"], p, n)
        for name in ("functions", "symbols"):
            if name in data:
                parsed = _parse_functions(problems, f"{path}.{name}", data[name], p, n)
                fields[name] = tuple(parsed) if parsed is not None else None

    if len(problems.messages) > before:
        return None
    if "draws" in fields:
        fields["draws"] = int(fields["draws"])
    for name in EXPONENT_LISTS + NUMBER_LISTS:
        if name in fields:
            fields[name] = tuple(fields[name])
    try:
        scenario = Scenario(p=p, n=n, **fields)
    except PadicLabError as e:
        problems.add(path, e.message)
        return None

    for relation in check_homogeneity(scenario):
        problems.add(path, f"homogeneity relation '{relation}' fails for {scenario.theorem.value}")
    for message in check_hypotheses(scenario):
        problems.add(path, f"hypothesis of {scenario.theorem.value} fails: {message}")
    return scenario


def parse_config(text: str) -> RunConfig:
    """
    Parse and validate a YAML (or JSON) run configuration.

    Raises:
        SchemaError: with every field-level problem found
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"line {mark.line + 1}" if mark is not None else "config"
        raise SchemaError("config is not valid YAML", problems=[f"{where}: {e}"])
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise SchemaError("config must be a mapping", problems=["<root>: expected a mapping"])

    settings = get_config().verification
    problems = _Problems()
    problems.unknown("<root>", data, RUN_FIELDS)

    config = RunConfig(seed=settings.seed, parallelism=settings.parallelism)
    if data.get("seed") is not None:
        seed = problems.take("seed", InputValidator.validate_integer(data["seed"], "seed"))
        if seed is not None and seed < 0:
            problems.add("seed", f"seed must be a nonnegative integer, got {seed}")
        config.seed = seed if seed is not None else config.seed
    if data.get("format") is not None:
        fmt = str(data["format"]).lower()
        if fmt not in FORMATS:
            problems.add("format", f"format must be one of {FORMATS}, got {data['format']!r}")
        config.format = fmt
    if data.get("output") is not None:
        config.output = str(data["output"])
    if data.get("parallelism") is not None:
        workers = problems.take(
            "parallelism", InputValidator.validate_numeric_range(data["parallelism"], "parallelism", min_value=1)
        )
        config.parallelism = int(workers) if workers is not None else config.parallelism
    if data.get("window") is not None:
        config.window = problems.take("window", InputValidator.validate_window(data["window"]))

    scenarios = data.get("scenarios", [])
    if not isinstance(scenarios, list):
        problems.add("scenarios", f"expected a list, got {type(scenarios).__name__}")
        scenarios = []
    for index, item in enumerate(scenarios):
        scenario = _parse_scenario(problems, index, item, data.get("draws"))
        if scenario is not None:
            config.scenarios.append(scenario)

    ids = [s.scenario_id for s in config.scenarios]
    for duplicate in sorted({i for i in ids if ids.count(i) > 1}):
        problems.add("scenarios", f"scenario id {duplicate!r} is used more than once")

    if problems.messages:
        logger.warning(f"Run config rejected with {len(problems.messages)} problem(s)")
        raise SchemaError(
            f"config has {len(problems.messages)} problem(s)", problems=problems.messages
        )
    logger.info(f"Parsed run config with {len(config.scenarios)} scenario(s), seed {config.seed}")
    return config


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """
    Read and parse a run configuration file.

    Raises:
        SchemaError: when the file cannot be read or fails validation
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SchemaError(f"cannot read config {path}", problems=[f"{path}: {e}"])
    return parse_config(text)


# ----------------------------------------------------------------------
# Serialization
# ----------------------------------------------------------------------

def kernel_descriptor(kernel: PhiKernel) -> Dict[str, Any]:
    if kernel.kind == KernelKind.FINITE_SUPPORT:
        return {"kind": kernel.kind.value, "values": {g: v for g, v in kernel.support}}
    if kernel.kind == KernelKind.TWO_SIDED_POWER_DECAY:
        return {"kind": kernel.kind.value, "coefficient": kernel.coefficient, "decay": kernel.decay}
    return {
        "kind": kernel.kind.value,
        "positive": list(kernel.positive) if kernel.positive is not None else None,
        "negative": list(kernel.negative) if kernel.negative is not None else None,
    }


def angular_descriptor(a: AngularFactor) -> Dict[str, Any]:
    return {"level": a.level, "values": list(a.values)}


def function_descriptor(f: SeparableFunction) -> Dict[str, Any]:
    radial = f.radial
    if radial.kind == ProfileKind.COMPOSITE:
        raise SchemaError("composite profiles cannot be written to a run config",
                          problems=["functions: composite profile"])
    body: Dict[str, Any] = {"kind": radial.kind.value}
    getters: Dict[str, Callable[[RadialProfile], Any]] = {
        "start": lambda r: r.start,
        "values": lambda r: list(r.values),
        "exponent": lambda r: r.exponent,
        "cutoff": lambda r: r.cutoff,
        "coefficient": lambda r: r.coefficient,
    }
    for name in sorted(_RADIAL_FIELDS[radial.kind]):
        body[name] = getters[name](radial)
    return {"radial": body, "angular": angular_descriptor(f.angular)}


def scenario_descriptor(s: Scenario) -> Dict[str, Any]:
    """Plain-data form of a scenario that parses back to an equal one."""
    data: Dict[str, Any] = {
        "id": s.scenario_id,
        "theorem": s.theorem.value,
        "mode": s.mode.value,
        "p": s.p,
        "n": s.n,
    }
    for name in EXPONENT_LISTS + NUMBER_LISTS:
        data[name] = list(getattr(s, name))
    for name in EXPONENT_FIELDS + POSITIVE_FIELDS + NUMBER_FIELDS:
        value = getattr(s, name)
        if value is not None:
            data[name] = value
    data["kernel"] = kernel_descriptor(s.kernel)
    data["omega"] = angular_descriptor(s.omega)
    if s.functions:
        data["functions"] = [function_descriptor(f) for f in s.functions]
    if s.symbols:
        data["symbols"] = [function_descriptor(b) for b in s.symbols]
    if s.draws is not None:
        data["draws"] = s.draws
    if s.window is not None:
        data["window"] = list(s.window)
    data["herz_indices"] = list(s.herz_indices)
    return data


def serialize_config(config: RunConfig) -> str:
    """YAML text that parse_config reads back to an equivalent RunConfig."""
    data: Dict[str, Any] = {
        "seed": config.seed,
        "format": config.format,
        "parallelism": config.parallelism,
    }
    if config.output is not None:
        data["output"] = config.output
    if config.window is not None:
        data["window"] = list(config.window)
    data["scenarios"] = [scenario_descriptor(s) for s in config.scenarios]
    return yaml.safe_dump(data, sort_keys=False)



# ----------------------------------------------------------------------
# Single descriptors
# ----------------------------------------------------------------------

def _single(parse: Callable[[_Problems], Any], what: str) -> Any:
    problems = _Problems()
    value = parse(problems)
    if problems.messages or value is None:
        raise SchemaError(f"invalid {what} descriptor", problems=problems.messages or [f"{what}: missing"])
    return value


def parse_kernel(value: Any, n: int) -> PhiKernel:
    """
    Build a kernel from its descriptor.

    Raises:
        SchemaError: when the descriptor is malformed
    """
    return _single(lambda problems: _parse_kernel(problems, "kernel", value, n), "kernel")


def parse_angular(value: Any, p: int, n: int) -> AngularFactor:
    return _single(lambda problems: _parse_angular(problems, "omega", value, p, n), "angular")


def parse_function(value: Any, p: int, n: int) -> SeparableFunction:
    """Build one separable function from its descriptor."""
    parsed = _single(lambda problems: _parse_functions(problems, "function", [value], p, n), "function")
    return parsed[0]
