"""Run configuration: TOML file + flag overrides -> validated RunConfig.

The file layout is flat sections [bath], [interferometer], [grid],
[output], [sweep] plus a top-level seed.  Every field can be overridden
by a --section.key=value command-line flag; flags win over the file,
the file wins over built-in defaults.  The MZBATH_CONFIG environment
variable supplies a config path when --config is absent.

Defaults not fixed by physics are documented here: coupling 0.1, cutoff
ratio r = 10, system frequency 1e12 s^-1, temperature 100 K (so
W/T = 1e10 s^-1 K^-1), W d^2 = 120 and x0 sqrt(2W) = 8 for the pointer
geometry, snapshot times {0, 1.5e-8, 1e-7} s and phases {0, pi/2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .bath import BathParameters, MarkovParameters, markov_parameters
from .dynamics import STEP_DEFAULT, LindbladCoefficients
from .errors import ConfigError
from .interferometer import InterferometerConfig

_SECTIONS = ("bath", "interferometer", "grid", "output", "sweep")

#: dotted-name -> python type of every overridable field; list types take
#: comma-separated values on the command line.
FIELD_TYPES: dict[str, type | str] = {
    "bath.temperature": float,
    "bath.cutoff": float,
    "bath.coupling": float,
    "bath.system_frequency": float,
    "interferometer.phase": float,
    "interferometer.phases": "float_list",
    "interferometer.path_difference": float,
    "interferometer.pointer_separation": float,
    "interferometer.snapshots": "float_list",
    "grid.start": float,
    "grid.stop": float,
    "grid.count": int,
    "grid.spacing": str,
    "output.out": str,
    "output.svg": bool,
    "output.quiet": bool,
    "sweep.axis": str,
    "sweep.values": "float_list",
    "sweep.start": float,
    "sweep.stop": float,
    "sweep.count": int,
    "sweep.coherence_times": "float_list",
    "seed": int,
}

_DEFAULTS = {
    "bath": {
        "temperature": 100.0,
        "cutoff": 1e13,
        "coupling": 0.1,
        "system_frequency": 1e12,
    },
    "interferometer": {
        "phase": 0.0,
        "phases": [0.0, math.pi / 2.0],
        "path_difference": None,  # resolved to sqrt(120 / W)
        "pointer_separation": None,  # resolved to 8 / sqrt(2 W)
        "snapshots": [0.0, 1.5e-8, 1e-7],
    },
    "grid": {"start": 0.0, "stop": None, "count": None, "spacing": "linear"},
    "output": {"out": None, "svg": False, "quiet": False},
    "sweep": {
        "axis": "omega_over_T",
        "values": None,
        "start": 1e9,
        "stop": 1e12,
        "count": 20,
        "coherence_times": None,  # resolved to the snapshot times
    },
    "seed": 0,
}

SWEEP_AXES = ("omega_over_T", "temperature", "time")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved, validated run configuration."""

    bath: BathParameters
    phase: float
    phases: tuple[float, ...]
    snapshots: tuple[float, ...]
    path_difference: float
    pointer_separation: float
    grid_start: float
    grid_stop: Optional[float]
    grid_count: Optional[int]
    grid_spacing: str
    out: Optional[str]
    svg: bool
    quiet: bool
    sweep_axis: str
    sweep_values: Optional[tuple[float, ...]]
    sweep_start: float
    sweep_stop: float
    sweep_count: int
    coherence_times: tuple[float, ...]
    seed: int

    @property
    def markov(self) -> MarkovParameters:
        return markov_parameters(self.bath)

    def interferometer_config(self, phase: Optional[float] = None) -> InterferometerConfig:
        return InterferometerConfig(
            phase=self.phase if phase is None else phase,
            path_difference=self.path_difference,
            system_frequency=self.bath.system_frequency,
            pointer_separation=self.pointer_separation,
            markov=self.markov,
        )

    def resolved(self) -> dict:
        """Flat dotted-key view of every resolved field, for CSV headers
        (output paths excluded so artifact bytes don't depend on where
        they are written)."""
        return {
            "bath.temperature": self.bath.temperature,
            "bath.cutoff": self.bath.cutoff,
            "bath.coupling": self.bath.coupling,
            "bath.system_frequency": self.bath.system_frequency,
            "interferometer.phase": self.phase,
            "interferometer.phases": ",".join(
                format(p, ".17g") for p in self.phases
            ),
            "interferometer.path_difference": self.path_difference,
            "interferometer.pointer_separation": self.pointer_separation,
            "interferometer.snapshots": ",".join(
                format(s, ".17g") for s in self.snapshots
            ),
            "grid.start": self.grid_start,
            "grid.stop": "auto" if self.grid_stop is None else self.grid_stop,
            "grid.count": "auto" if self.grid_count is None else self.grid_count,
            "grid.spacing": self.grid_spacing,
            "sweep.axis": self.sweep_axis,
            "sweep.values": (
                "auto"
                if self.sweep_values is None
                else ",".join(format(v, ".17g") for v in self.sweep_values)
            ),
            "sweep.start": self.sweep_start,
            "sweep.stop": self.sweep_stop,
            "sweep.count": self.sweep_count,
            "sweep.coherence_times": ",".join(
                format(v, ".17g") for v in self.coherence_times
            ),
            "seed": self.seed,
        }

    # -- derived grids --------------------------------------------------------

    def evolve_grid(self) -> np.ndarray:
        """Time grid for the relaxation run; by default it spans
        [0, 40/(Gamma(2 n_bar + 1))] with the default step
        h = 0.005/(delta + gamma)."""
        markov = self.markov
        rate = markov.rate * (2.0 * markov.occupation + 1.0)
        if rate <= 0.0 and self.grid_stop is None:
            raise ConfigError(
                "grid.stop must be given explicitly when the damping rate is 0"
            )
        stop = self.grid_stop if self.grid_stop is not None else 40.0 / rate
        count = self.grid_count
        if count is None:
            coeffs = LindbladCoefficients.from_markov(markov)
            h = STEP_DEFAULT / (coeffs.delta + coeffs.gamma)
            count = max(2, math.ceil((stop - self.grid_start) / h) + 1)
        return self._grid(self.grid_start, stop, count)

    def coeffs_grid(self) -> np.ndarray:
        """Time grid for the transient-coefficient run; by default 41
        points spanning [0, 50/cutoff]."""
        stop = self.grid_stop if self.grid_stop is not None else 50.0 / self.bath.cutoff
        count = self.grid_count if self.grid_count is not None else 41
        return self._grid(self.grid_start, stop, count)

    def _grid(self, start: float, stop: float, count: int) -> np.ndarray:
        if count < 2:
            raise ConfigError(f"grid.count must be >= 2, got {count}")
        if stop <= start:
            raise ConfigError(
                f"grid.stop ({stop!r}) must exceed grid.start ({start!r})"
            )
        if self.grid_spacing == "linear":
            return np.linspace(start, stop, count)
        if self.grid_spacing == "log":
            if start <= 0.0:
                raise ConfigError("grid.start must be > 0 for log spacing")
            return np.geomspace(start, stop, count)
        raise ConfigError(
            f"grid.spacing must be 'linear' or 'log', got {self.grid_spacing!r}"
        )

    def sweep_value_list(self) -> np.ndarray:
        if self.sweep_values is not None:
            v = np.asarray(self.sweep_values, dtype=float)
            if v.size == 0:
                raise ConfigError("sweep.values must not be empty")
            return v
        if self.sweep_axis == "time":
            return np.linspace(0.0, self.sweep_stop, self.sweep_count)
        if self.sweep_start <= 0.0 or self.sweep_stop <= self.sweep_start:
            raise ConfigError(
                "sweep.start/sweep.stop must satisfy 0 < start < stop"
            )
        return np.geomspace(self.sweep_start, self.sweep_stop, self.sweep_count)


def _coerce(name: str, kind, value):
    try:
        if kind == "float_list":
            if isinstance(value, str):
                parts = [p for p in value.split(",") if p.strip() != ""]
                return [float(p) for p in parts]
            return [float(v) for v in value]
        if kind is bool:
            if isinstance(value, str):
                low = value.strip().lower()
                if low in ("1", "true", "yes", "on"):
                    return True
                if low in ("0", "false", "no", "off"):
                    return False
                raise ValueError(f"not a boolean: {value!r}")
            return bool(value)
        if kind is int:
            return int(value)
        if kind is float:
            return float(value)
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value for {name}: {value!r} ({exc})") from None


def load_config(
    path: Optional[str] = None, overrides: Optional[dict] = None
) -> RunConfig:
    """Build a RunConfig from defaults, an optional TOML file, and
    dotted-name overrides (flag values; highest precedence).

    Raises:
        ConfigError: naming the offending field, for any invalid value.
    """
    merged: dict = {
        sec: dict(vals) for sec, vals in _DEFAULTS.items() if isinstance(vals, dict)
    }
    merged["seed"] = _DEFAULTS["seed"]

    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(p, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid TOML: {exc}") from None
        for sec, vals in data.items():
            if sec == "seed":
                merged["seed"] = _coerce("seed", int, vals)
                continue
            if sec not in _SECTIONS:
                raise ConfigError(f"unknown config section [{sec}]")
            if not isinstance(vals, dict):
                raise ConfigError(f"config section [{sec}] must be a table")
            for key, val in vals.items():
                dotted = f"{sec}.{key}"
                if dotted not in FIELD_TYPES:
                    raise ConfigError(f"unknown config key {dotted}")
                merged[sec][key] = _coerce(dotted, FIELD_TYPES[dotted], val)

    for dotted, val in (overrides or {}).items():
        if val is None:
            continue
        if dotted not in FIELD_TYPES:
            raise ConfigError(f"unknown config key {dotted}")
        coerced = _coerce(dotted, FIELD_TYPES[dotted], val)
        if dotted == "seed":
            merged["seed"] = coerced
        else:
            sec, key = dotted.split(".", 1)
            merged[sec][key] = coerced

    bath = BathParameters(
        temperature=merged["bath"]["temperature"],
        cutoff=merged["bath"]["cutoff"],
        coupling=merged["bath"]["coupling"],
        system_frequency=merged["bath"]["system_frequency"],
    )
    w = bath.system_frequency
    d = merged["interferometer"]["path_difference"]
    if d is None:
        d = math.sqrt(120.0 / w)
    x0 = merged["interferometer"]["pointer_separation"]
    if x0 is None:
        x0 = 8.0 / math.sqrt(2.0 * w)

    snapshots = tuple(merged["interferometer"]["snapshots"])
    if any(s < 0.0 for s in snapshots):
        raise ConfigError("interferometer.snapshots must all be >= 0")
    coherence_times = merged["sweep"]["coherence_times"]
    if coherence_times is None:
        coherence_times = snapshots
    axis = merged["sweep"]["axis"]
    if axis not in SWEEP_AXES:
        raise ConfigError(
            f"sweep.axis must be one of {', '.join(SWEEP_AXES)}, got {axis!r}"
        )

    cfg = RunConfig(
        bath=bath,
        phase=merged["interferometer"]["phase"],
        phases=tuple(merged["interferometer"]["phases"]),
        snapshots=snapshots,
        path_difference=d,
        pointer_separation=x0,
        grid_start=merged["grid"]["start"],
        grid_stop=merged["grid"]["stop"],
        grid_count=merged["grid"]["count"],
        grid_spacing=merged["grid"]["spacing"],
        out=merged["output"]["out"],
        svg=merged["output"]["svg"],
        quiet=merged["output"]["quiet"],
        sweep_axis=axis,
        sweep_values=(
            tuple(merged["sweep"]["values"])
            if merged["sweep"]["values"] is not None
            else None
        ),
        sweep_start=merged["sweep"]["start"],
        sweep_stop=merged["sweep"]["stop"],
        sweep_count=merged["sweep"]["count"],
        coherence_times=tuple(coherence_times),
        seed=merged["seed"],
    )
    # validate the interferometer geometry now so config errors surface
    # with exit code 2 rather than mid-computation
    cfg.interferometer_config()
    return cfg
