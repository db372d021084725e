"""Run configuration: a flat INI file with one section per parameter group.

Numeric values accept literal ``pi`` arithmetic ("pi/2", "2pi", "3*pi/4").
Sections:

    [pulse]   shape = circular | piecewise | sampled, plus shape fields,
              r0, T (optional for circular: defaults to loops * 2*pi/|nu|)
    [raman]   optional channel parameters; derives r0 and, for circular
              shapes, g0/phase0 defaults from the effective couplings
    [space]   dim
    [run]     method, dt, n_steps, closure_tol
    [output]  path, format
    [scan]    kind = rwa | truncation, r0_values / dims, dt, dim
    [sweep]   max_points plus one "field = value list" entry per swept field

Every violated precondition is reported with its section.key path, all at
once, before any computation starts.
"""

import configparser
import math
import re
from dataclasses import dataclass, field

from .errors import ConfigError
from .model import Circular, PiecewiseConstant, PulseSpec, RamanParams, Sampled, effective_couplings

_ALLOWED_EXPR = re.compile(r"^[0-9pij+\-*/().eE\s]+$")
_BARE_PI = re.compile(r"(?<=[0-9.)])pi")

GATE_METHOD_CHOICES = ("analytic", "numeric_rwa", "numeric_rotating")
FORMAT_CHOICES = ("csv", "json")
SCAN_KINDS = ("rwa", "truncation")

_SWEEPABLE = ("g0", "nu", "phase0", "r0", "T")


def parse_scalar(text: str):
    """Evaluate a numeric literal that may use pi arithmetic and complex j."""
    s = text.strip()
    if not s:
        raise ValueError("empty value")
    if not _ALLOWED_EXPR.match(s):
        raise ValueError(f"invalid numeric expression {text!r}")
    s = _BARE_PI.sub("*pi", s)
    try:
        value = eval(s, {"__builtins__": {}}, {"pi": math.pi})
    except Exception as exc:
        raise ValueError(f"cannot parse {text!r}: {exc}") from None
    if not isinstance(value, (int, float, complex)):
        raise ValueError(f"{text!r} is not a number")
    return value


def parse_real(text: str) -> float:
    value = parse_scalar(text)
    if isinstance(value, complex):
        raise ValueError(f"{text!r} must be real")
    return float(value)


def parse_complex(text: str) -> complex:
    return complex(parse_scalar(text))


def parse_int(text: str) -> int:
    value = parse_scalar(text)
    if isinstance(value, complex) or value != int(value):
        raise ValueError(f"{text!r} must be an integer")
    return int(value)


def parse_real_list(text: str) -> list[float]:
    return [parse_real(tok) for tok in text.split()]


def parse_segments(text: str) -> list[tuple[float, complex]]:
    """Parse "duration value; duration value; ..." segment lists."""
    segments = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split()
        if len(parts) != 2:
            raise ValueError(f"segment {chunk!r} must be 'duration value'")
        segments.append((parse_real(parts[0]), parse_complex(parts[1])))
    if not segments:
        raise ValueError("no segments given")
    return segments


@dataclass
class ScanConfig:
    kind: str
    r0_values: list[float] = field(default_factory=list)
    dims: list[int] = field(default_factory=list)
    dt: float = 0.001
    dim: int = 16


@dataclass
class SweepConfig:
    fields: dict[str, list[float]]
    max_points: int = 4096


@dataclass
class RunConfig:
    pulse: PulseSpec
    dim: int = 32
    method: str = "analytic"
    dt: float | None = None
    n_steps: int = 100_000
    closure_tol: float | None = None
    out_path: str | None = None
    out_format: str = "csv"
    scan: ScanConfig | None = None
    sweep: SweepConfig | None = None


class _Reader:
    """Pulls typed values out of one parsed INI file, collecting path-tagged errors."""

    def __init__(self, parser: configparser.ConfigParser):
        self.parser = parser
        self.errors: list[str] = []
        self.seen: set[tuple[str, str]] = set()

    def get(self, section, key, convert, default=None, required=False):
        self.seen.add((section, key))
        if not self.parser.has_option(section, key):
            if required:
                self.errors.append(f"{section}.{key}: required key is missing")
            return default
        raw = self.parser.get(section, key)
        try:
            return convert(raw)
        except ValueError as exc:
            self.errors.append(f"{section}.{key}: {exc}")
            return default

    def check(self, condition, path, message):
        if not condition:
            self.errors.append(f"{path}: {message}")
        return condition

    def warn_unknown(self, section):
        if not self.parser.has_section(section):
            return
        for key in self.parser.options(section):
            if (section, key) not in self.seen:
                self.errors.append(f"{section}.{key}: unknown key")


def _build_pulse(reader: _Reader) -> PulseSpec | None:
    parser = reader.parser
    if not parser.has_section("pulse"):
        reader.errors.append("pulse: section is required")
        return None

    raman = None
    if parser.has_section("raman"):
        kwargs = {}
        for key, conv in (
            ("omega_p", parse_real),
            ("omega_s", parse_real),
            ("omega_g", parse_real),
            ("omega_c", parse_real),
            ("omega_0", parse_real),
            ("rabi_p", parse_complex),
            ("rabi_s", parse_complex),
            ("rabi_g", parse_complex),
            ("kappa_e", parse_complex),
            ("delta_1", parse_real),
            ("delta_2", parse_real),
        ):
            kwargs[key] = reader.get("raman", key, conv, required=True)
        reader.warn_unknown("raman")
        if all(v is not None for v in kwargs.values()):
            try:
                raman = RamanParams(**kwargs)
            except ValueError as exc:
                reader.errors.append(f"raman: {exc}")

    derived_r0 = None
    derived_g = None
    if raman is not None:
        r, g = effective_couplings(raman)
        if abs(r.imag) > 1e-12 * max(1.0, abs(r)):
            reader.errors.append(
                "raman: derived classical coupling r is not real; "
                "gate operation requires a real constant classical drive"
            )
        elif r.real < 0 and not parser.has_option("pulse", "r0"):
            reader.errors.append(
                f"raman: derived classical coupling r = {r.real:.6g} is negative; "
                "flip a detuning sign or set pulse.r0 explicitly"
            )
        else:
            derived_r0 = r.real
        derived_g = g

    shape_name = reader.get("pulse", "shape", str.strip, default="circular")
    if not reader.check(
        shape_name in ("circular", "piecewise", "sampled"),
        "pulse.shape",
        f"must be circular, piecewise or sampled (got {shape_name!r})",
    ):
        return None

    r0 = reader.get("pulse", "r0", parse_real)
    if r0 is None:
        r0 = derived_r0 if derived_r0 is not None else 0.0

    shape = None
    T = reader.get("pulse", "T", parse_real)
    if shape_name == "circular":
        g0 = reader.get("pulse", "g0", parse_real)
        phase0 = reader.get("pulse", "phase0", parse_real)
        if g0 is None and derived_g is not None:
            g0 = abs(derived_g)
        if phase0 is None:
            phase0 = math.atan2(derived_g.imag, derived_g.real) if derived_g is not None else 0.0
        nu = reader.get("pulse", "nu", parse_real, required=True)
        loops = reader.get("pulse", "loops", parse_int, default=1)
        reader.check(g0 is not None, "pulse.g0", "required for circular shapes without a raman section")
        if None in (g0, nu, loops):
            reader.warn_unknown("pulse")
            return None
        if T is None:
            if reader.check(nu != 0, "pulse.nu", "must be nonzero") and reader.check(
                loops >= 1, "pulse.loops", "must be >= 1"
            ):
                T = loops * 2 * math.pi / abs(nu)
        try:
            shape = Circular(g0=g0, nu=nu, phase0=phase0)
        except ValueError as exc:
            reader.errors.append(f"pulse: {exc}")
    elif shape_name == "piecewise":
        segments = reader.get("pulse", "segments", parse_segments, required=True)
        if segments is not None:
            try:
                shape = PiecewiseConstant(segments=tuple(segments))
            except ValueError as exc:
                reader.errors.append(f"pulse.segments: {exc}")
            if shape is not None and T is None:
                T = shape.natural_duration()
    else:
        sample_dt = reader.get("pulse", "dt", parse_real, required=True)
        values_text = reader.get("pulse", "values", str, required=True)
        if sample_dt is not None and values_text is not None:
            try:
                values = [parse_complex(tok) for tok in values_text.split()]
                shape = Sampled(dt=sample_dt, values=tuple(values))
            except ValueError as exc:
                reader.errors.append(f"pulse.values: {exc}")
            if shape is not None and T is None:
                T = shape.natural_duration()

    reader.warn_unknown("pulse")
    if shape is None or T is None:
        return None
    try:
        return PulseSpec(g_shape=shape, T=T, r0=r0)
    except ValueError as exc:
        reader.errors.append(f"pulse: {exc}")
        return None


def _build_scan(reader: _Reader) -> ScanConfig | None:
    parser = reader.parser
    if not parser.has_section("scan"):
        return None
    kind = reader.get("scan", "kind", str.strip, required=True)
    if kind is not None and not reader.check(
        kind in SCAN_KINDS, "scan.kind", f"must be one of {SCAN_KINDS}"
    ):
        kind = None
    scan = ScanConfig(kind=kind or "rwa")
    scan.dt = reader.get("scan", "dt", parse_real, default=0.001)
    scan.dim = reader.get("scan", "dim", parse_int, default=16)
    r0_values = reader.get("scan", "r0_values", parse_real_list)
    dims_raw = reader.get("scan", "dims", str)
    if dims_raw is not None:
        try:
            scan.dims = [parse_int(tok) for tok in dims_raw.split()]
        except ValueError as exc:
            reader.errors.append(f"scan.dims: {exc}")
    if r0_values is not None:
        scan.r0_values = r0_values
    if kind == "rwa":
        reader.check(bool(scan.r0_values), "scan.r0_values", "required for an rwa scan")
        reader.check(
            all(b > a for a, b in zip(scan.r0_values, scan.r0_values[1:])),
            "scan.r0_values",
            "must be strictly ascending",
        )
        reader.check(all(v > 0 for v in scan.r0_values), "scan.r0_values", "must be positive")
    elif kind == "truncation":
        reader.check(bool(scan.dims), "scan.dims", "required for a truncation scan")
        reader.check(
            all(b > a for a, b in zip(scan.dims, scan.dims[1:])),
            "scan.dims",
            "must be strictly ascending",
        )
    reader.check(scan.dt is None or scan.dt > 0, "scan.dt", "must be > 0")
    reader.check(scan.dim is None or scan.dim >= 2, "scan.dim", "must be >= 2")
    reader.warn_unknown("scan")
    return scan


def _build_sweep(reader: _Reader) -> SweepConfig | None:
    parser = reader.parser
    if not parser.has_section("sweep"):
        return None
    max_points = reader.get("sweep", "max_points", parse_int, default=4096)
    fields: dict[str, list[float]] = {}
    for key in parser.options("sweep"):
        if key == "max_points":
            continue
        reader.seen.add(("sweep", key))
        if key not in _SWEEPABLE:
            reader.errors.append(f"sweep.{key}: not a sweepable pulse field {_SWEEPABLE}")
            continue
        try:
            values = parse_real_list(parser.get("sweep", key))
        except ValueError as exc:
            reader.errors.append(f"sweep.{key}: {exc}")
            continue
        if not values:
            reader.errors.append(f"sweep.{key}: needs at least one value")
            continue
        fields[key] = values
    reader.check(max_points is None or max_points >= 1, "sweep.max_points", "must be >= 1")
    return SweepConfig(fields=fields, max_points=max_points or 4096)


def load_config(path: str) -> RunConfig:
    """Parse and validate a run configuration file; raises ConfigError with all problems."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        with open(path) as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path!r}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"config: {exc}") from None

    reader = _Reader(parser)
    pulse = _build_pulse(reader)

    dim = reader.get("space", "dim", parse_int, default=32)
    reader.check(dim is None or dim >= 2, "space.dim", "must be >= 2")
    reader.warn_unknown("space")

    method = reader.get("run", "method", str.strip, default="analytic")
    reader.check(
        method in GATE_METHOD_CHOICES, "run.method", f"must be one of {GATE_METHOD_CHOICES}"
    )
    dt = reader.get("run", "dt", parse_real)
    reader.check(dt is None or dt > 0, "run.dt", "must be > 0")
    n_steps = reader.get("run", "n_steps", parse_int, default=100_000)
    reader.check(n_steps is None or n_steps >= 2, "run.n_steps", "must be >= 2")
    closure_tol = reader.get("run", "closure_tol", parse_real)
    reader.check(closure_tol is None or closure_tol > 0, "run.closure_tol", "must be > 0")
    reader.warn_unknown("run")

    out_path = reader.get("output", "path", str.strip)
    out_format = reader.get("output", "format", str.strip, default="csv")
    reader.check(
        out_format in FORMAT_CHOICES, "output.format", f"must be one of {FORMAT_CHOICES}"
    )
    reader.warn_unknown("output")

    scan = _build_scan(reader)
    sweep = _build_sweep(reader)

    for section in parser.sections():
        if section not in ("pulse", "raman", "space", "run", "output", "scan", "sweep"):
            reader.errors.append(f"{section}: unknown section")

    if reader.errors or pulse is None:
        raise ConfigError(reader.errors or ["pulse: could not build a pulse"])
    return RunConfig(
        pulse=pulse,
        dim=dim,
        method=method,
        dt=dt,
        n_steps=n_steps,
        closure_tol=closure_tol,
        out_path=out_path,
        out_format=out_format,
        scan=scan,
        sweep=sweep,
    )
