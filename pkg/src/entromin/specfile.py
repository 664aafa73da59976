"""Line-oriented problem-spec files.

Three key=value sections describe one problem:

    [family]
    name = geometric            # or arithmetic, powerlaw, loglevels,
                                # weighted-geometric, lattice3d, constant,
                                # divergent, explicit
    # family parameters, e.g.  offset = 0.0 / slope = 1.0
    # explicit families:  p = 1,1,1   sigma = 2,2,5   tail = arithmetic
    #                     tail.offset = 2   tail.slope = 1

    [problem]
    entropy = mb                # mb | be | fd
    mode = solve                # solve | classify | forward | sweep | verify
    u = 1.0
    v = 2.0                     # forward mode uses x/y; sweep uses
                                # u_min,u_max,u_steps,v_min,v_max,v_steps

    [tolerances]
    tol = 1e-10
    epsilon = 1e-6

Parsing is exact and diffable: parse -> serialize -> parse is the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigurationError, EmpError
from .sequences import (
    Arithmetic,
    ExplicitPrefix,
    ExplosiveWeights,
    Lattice3D,
    LogLevels,
    PowerLaw,
    SequenceFamily,
    WeightedGeometric,
)

__all__ = ["ParseError", "ProblemSpec", "parse_spec", "serialize_spec"]

_MODES = ("solve", "classify", "forward", "sweep", "verify")
_ENTROPIES = ("mb", "be", "fd")
_GRID_KEYS = ("u_min", "u_max", "u_steps", "v_min", "v_max", "v_steps")


class ParseError(EmpError):
    """Malformed spec file; carries a 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class ProblemSpec:
    family_name: str
    family_params: tuple[tuple[str, str], ...]  # canonical (key, raw value) pairs
    entropy: str = "mb"
    mode: str = "solve"
    u: Optional[float] = None
    v: Optional[float] = None
    x: Optional[float] = None
    y: Optional[float] = None
    grid: Optional[tuple[float, float, int, float, float, int]] = None
    tol: float = 1e-10
    epsilon: float = 1e-6

    def build_family(self) -> SequenceFamily:
        return _build_family(self.family_name, dict(self.family_params))


def _parse_float(raw: str, line: int, key: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ParseError(line, f"{key}: not a number: {raw!r}") from exc


def _parse_int(raw: str, line: int, key: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ParseError(line, f"{key}: not an integer: {raw!r}") from exc


def _float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in raw.split(",") if tok.strip())


_SIMPLE_FAMILIES = {
    "arithmetic": (Arithmetic, {"offset": 0.0, "slope": 1.0}),
    "geometric": (Arithmetic, {"offset": 0.0, "slope": 1.0}),
    "powerlaw": (PowerLaw, {"scale": 1.0, "exponent": 1.0}),
    "loglevels": (LogLevels, {"scale": 1.0}),
    "weighted-geometric": (WeightedGeometric, {"rate": 1.0, "power": 3.0}),
    "lattice3d": (Lattice3D, {"scale": 1.0}),
    "divergent": (ExplosiveWeights, {"rate": 1.0}),
}


def _build_family(name: str, params: dict[str, str]) -> SequenceFamily:
    if name == "constant":
        level = float(params.get("level", "1.0"))
        return Arithmetic(offset=level, slope=0.0)
    if name == "explicit":
        if "p" not in params or "sigma" not in params:
            raise ConfigurationError("explicit family needs p and sigma lists")
        weights = _float_list(params["p"])
        levels = _float_list(params["sigma"])
        tail_name = params.get("tail", "arithmetic")
        tail_params = {
            k[len("tail.") :]: v for k, v in params.items() if k.startswith("tail.")
        }
        tail = _build_family(tail_name, tail_params)
        return ExplicitPrefix(weights, levels, tail)
    if name not in _SIMPLE_FAMILIES:
        raise ConfigurationError(f"unknown family {name!r}")
    cls, defaults = _SIMPLE_FAMILIES[name]
    kwargs = dict(defaults)
    for key, raw in params.items():
        if key not in defaults:
            raise ConfigurationError(f"family {name!r} has no parameter {key!r}")
        kwargs[key] = float(raw)
    return cls(**kwargs)


def parse_spec(text: str) -> ProblemSpec:
    section = None
    family: dict[str, str] = {}
    problem: dict[str, str] = {}
    tolerances: dict[str, str] = {}
    lines: dict[str, int] = {}
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("family", "problem", "tolerances"):
                raise ParseError(i, f"unknown section [{section}]")
            continue
        if "=" not in line:
            raise ParseError(i, f"expected key = value, got {line!r}")
        if section is None:
            raise ParseError(i, "key outside any section")
        key, _, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not value:
            raise ParseError(i, f"empty value for {key!r}")
        target = {"family": family, "problem": problem, "tolerances": tolerances}[section]
        if key in target:
            raise ParseError(i, f"duplicate key {key!r}")
        target[key] = value
        lines[f"{section}.{key}"] = i

    if "name" not in family:
        raise ParseError(0, "missing [family] name")
    name = family.pop("name")
    mode = problem.pop("mode", "solve")
    if mode not in _MODES:
        raise ParseError(lines.get("problem.mode", 0), f"unknown mode {mode!r}")
    entropy = problem.pop("entropy", "mb")
    if entropy not in _ENTROPIES:
        raise ParseError(lines.get("problem.entropy", 0), f"unknown entropy {entropy!r}")

    u = v = x = y = None
    grid = None
    if mode == "sweep":
        vals = []
        for key in _GRID_KEYS:
            if key not in problem:
                raise ParseError(0, f"sweep mode requires {key}")
            ln = lines.get(f"problem.{key}", 0)
            raw = problem.pop(key)
            vals.append(
                _parse_int(raw, ln, key) if key.endswith("steps") else _parse_float(raw, ln, key)
            )
        grid = tuple(vals)
        if grid[2] < 1 or grid[5] < 1:
            raise ParseError(0, "sweep step counts must be >= 1")
    elif mode == "forward":
        for key in ("x", "y"):
            if key not in problem:
                raise ParseError(0, f"forward mode requires {key}")
        x = _parse_float(problem.pop("x"), lines.get("problem.x", 0), "x")
        y = _parse_float(problem.pop("y"), lines.get("problem.y", 0), "y")
    elif mode in ("solve", "classify"):
        for key in ("u", "v"):
            if key not in problem:
                raise ParseError(0, f"{mode} mode requires {key}")
        u = _parse_float(problem.pop("u"), lines.get("problem.u", 0), "u")
        v = _parse_float(problem.pop("v"), lines.get("problem.v", 0), "v")
    if problem:
        stray = sorted(problem)[0]
        raise ParseError(lines.get(f"problem.{stray}", 0), f"unexpected key {stray!r}")

    tol = _parse_float(tolerances.pop("tol", "1e-10"), lines.get("tolerances.tol", 0), "tol")
    epsilon = _parse_float(
        tolerances.pop("epsilon", "1e-6"), lines.get("tolerances.epsilon", 0), "epsilon"
    )
    if tolerances:
        stray = sorted(tolerances)[0]
        raise ParseError(lines.get(f"tolerances.{stray}", 0), f"unexpected key {stray!r}")
    if not (tol > 0.0 and math.isfinite(tol)):
        raise ParseError(lines.get("tolerances.tol", 0), "tol must be positive")

    params = tuple(sorted(family.items()))
    return ProblemSpec(name, params, entropy, mode, u, v, x, y, grid, tol, epsilon)


def serialize_spec(spec: ProblemSpec) -> str:
    out = ["[family]", f"name = {spec.family_name}"]
    for key, value in spec.family_params:
        out.append(f"{key} = {value}")
    out += ["", "[problem]", f"entropy = {spec.entropy}", f"mode = {spec.mode}"]
    if spec.mode == "sweep":
        for key, value in zip(_GRID_KEYS, spec.grid):
            out.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    elif spec.mode == "forward":
        out.append(f"x = {spec.x!r}")
        out.append(f"y = {spec.y!r}")
    elif spec.mode in ("solve", "classify"):
        out.append(f"u = {spec.u!r}")
        out.append(f"v = {spec.v!r}")
    out += ["", "[tolerances]", f"tol = {spec.tol!r}", f"epsilon = {spec.epsilon!r}", ""]
    return "\n".join(out)
