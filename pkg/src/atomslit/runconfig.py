"""Run-configuration files for the CLI.

JSON, with lengths in units of the transition wavelength, rates and Rabi
frequencies in units of the decay rate, times in inverse decay rates.
Complex values may be written as a plain number or as a [re, im] pair.

Schema (defaults in parentheses; only ``experiment`` and its drive/geometry
fields are required):

    {
      "experiment": {
        "separation": 20.0,          // or explicit "r1"/"r2" 3-vectors
        "axis": [0, 0, 1],           // separation direction (z)
        "dipole": [1, 0, 0],         // transition dipole direction (x)
        "omega1": 0.3, "omega2": 0.3,
        "decay_rate": 1.0
      },
      "grid": {"n_theta": 128, "n_phi": 256},
      "simulation": {"duration": ..., "dt": 0.01, "seed": 0,
                     "burn_in": 20.0},   // duration required by `simulate`
      "classical": {"e1": ..., "e2": ..., "prefactor": 1.0},  // default e_i = omega_i
      "outputs": {"directory": ".", "basename": ...,          // default: command name
                  "csv": ..., "pgm": ..., "metadata": ...,    // optional explicit paths
                  "clicks_csv": ..., "png": ...}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from numbers import Real
from pathlib import Path

import numpy as np

from .classical import ClassicalConfig
from .config import ExperimentConfig, config_to_dict
from .screen import AngularGrid


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


def _as_number(v, where: str, positive: bool = False, nonneg: bool = False) -> float:
    if not isinstance(v, Real) or isinstance(v, bool):
        raise ConfigError(f"{where}: expected a number, got {v!r}")
    x = float(v)
    if positive and not x > 0.0:
        raise ConfigError(f"{where}: must be > 0, got {x!r}")
    if nonneg and x < 0.0:
        raise ConfigError(f"{where}: must be >= 0, got {x!r}")
    return x


def _as_int(v, where: str, minimum: int | None = None) -> int:
    if not isinstance(v, int) or isinstance(v, bool):
        raise ConfigError(f"{where}: expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(f"{where}: must be >= {minimum}, got {v}")
    return v


def _as_complex(v, where: str) -> complex:
    if isinstance(v, Real) and not isinstance(v, bool):
        return complex(v)
    if (isinstance(v, list) and len(v) == 2
            and all(isinstance(x, Real) and not isinstance(x, bool) for x in v)):
        return complex(v[0], v[1])
    raise ConfigError(f"{where}: expected a number or [re, im], got {v!r}")


def _as_vec3(v, where: str) -> np.ndarray:
    if (not isinstance(v, list) or len(v) != 3
            or not all(isinstance(x, Real) and not isinstance(x, bool) for x in v)):
        raise ConfigError(f"{where}: expected a 3-vector, got {v!r}")
    return np.asarray(v, dtype=float)


def _section(tree: dict, name: str, required: bool = False) -> dict:
    if name not in tree:
        if required:
            raise ConfigError(f"{name}: missing required section")
        return {}
    sec = tree[name]
    if not isinstance(sec, dict):
        raise ConfigError(f"{name}: expected an object, got {sec!r}")
    return sec


@dataclass(frozen=True)
class SimulationParams:
    duration: float | None
    dt: float
    seed: int
    burn_in: float

    def require_duration(self) -> float:
        if self.duration is None:
            raise ConfigError("simulation.duration: missing required field")
        return self.duration


@dataclass(frozen=True)
class OutputPaths:
    directory: Path
    basename: str | None
    explicit: dict = field(default_factory=dict)

    def resolve(self, slot: str, default_filename: str) -> Path:
        if slot in self.explicit:
            p = Path(self.explicit[slot])
            return p if p.is_absolute() else self.directory / p
        return self.directory / default_filename


@dataclass(frozen=True)
class RunConfig:
    experiment: ExperimentConfig
    grid: AngularGrid
    simulation: SimulationParams
    classical: ClassicalConfig
    outputs: OutputPaths

    def to_dict(self) -> dict:
        """Explicit-defaults serialization; parsing it back is a fixed point."""
        d = {"experiment": config_to_dict(self.experiment),
             "grid": {"n_theta": self.grid.n_theta, "n_phi": self.grid.n_phi},
             "simulation": {"dt": self.simulation.dt,
                            "seed": self.simulation.seed,
                            "burn_in": self.simulation.burn_in},
             "classical": {"e1": [self.classical.e1.real, self.classical.e1.imag],
                           "e2": [self.classical.e2.real, self.classical.e2.imag],
                           "prefactor": self.classical.prefactor},
             "outputs": {"directory": str(self.outputs.directory),
                         **({"basename": self.outputs.basename}
                            if self.outputs.basename else {}),
                         **self.outputs.explicit}}
        if self.simulation.duration is not None:
            d["simulation"]["duration"] = self.simulation.duration
        return d


def _parse_experiment(tree: dict) -> ExperimentConfig:
    e = _section(tree, "experiment", required=True)
    decay = _as_number(e.get("decay_rate", 1.0), "experiment.decay_rate",
                       positive=True)
    for name in ("omega1", "omega2"):
        if name not in e:
            raise ConfigError(f"experiment.{name}: missing required field")
    o1 = _as_complex(e["omega1"], "experiment.omega1")
    o2 = _as_complex(e["omega2"], "experiment.omega2")

    if "r1" in e or "r2" in e:
        for name in ("r1", "r2"):
            if name not in e:
                raise ConfigError(f"experiment.{name}: missing required field "
                                  "(r1 and r2 go together)")
        r1 = _as_vec3(e["r1"], "experiment.r1")
        r2 = _as_vec3(e["r2"], "experiment.r2")
    else:
        if "separation" not in e:
            raise ConfigError("experiment.separation: missing required field "
                              "(or give r1 and r2)")
        sep = _as_number(e["separation"], "experiment.separation", positive=True)
        axis = _as_vec3(e.get("axis", [0.0, 0.0, 1.0]), "experiment.axis")
        n = float(np.linalg.norm(axis))
        if n == 0.0:
            raise ConfigError("experiment.axis: must be a nonzero vector")
        r1 = 0.5 * sep * axis / n
        r2 = -r1

    dipole = _as_vec3(e.get("dipole", [1.0, 0.0, 0.0]), "experiment.dipole")
    nd = float(np.linalg.norm(dipole))
    if nd == 0.0:
        raise ConfigError("experiment.dipole: must be a nonzero vector")
    try:
        return ExperimentConfig(r1=r1, r2=r2, d_hat=dipole / nd,
                                decay_rate=decay, omega1=o1, omega2=o2)
    except ValueError as exc:
        raise ConfigError(f"experiment: {exc}") from exc


def parse_runconfig(tree: dict, seed_override: int | None = None,
                    out_override: str | None = None) -> RunConfig:
    if not isinstance(tree, dict):
        raise ConfigError(f"top level: expected an object, got {type(tree).__name__}")
    exp = _parse_experiment(tree)

    g = _section(tree, "grid")
    grid = AngularGrid(_as_int(g.get("n_theta", 128), "grid.n_theta", minimum=2),
                       _as_int(g.get("n_phi", 256), "grid.n_phi", minimum=2))

    s = _section(tree, "simulation")
    duration = None
    if "duration" in s:
        duration = _as_number(s["duration"], "simulation.duration", positive=True)
    sim = SimulationParams(
        duration=duration,
        dt=_as_number(s.get("dt", 0.01), "simulation.dt", positive=True),
        seed=_as_int(s.get("seed", 0), "simulation.seed"),
        burn_in=_as_number(s.get("burn_in", 20.0 / exp.decay_rate),
                           "simulation.burn_in", nonneg=True))
    if seed_override is not None:
        sim = SimulationParams(duration=sim.duration, dt=sim.dt,
                               seed=seed_override, burn_in=sim.burn_in)

    c = _section(tree, "classical")
    e1 = _as_complex(c["e1"], "classical.e1") if "e1" in c else exp.omega1
    e2 = _as_complex(c["e2"], "classical.e2") if "e2" in c else exp.omega2
    pref = _as_number(c.get("prefactor", 1.0), "classical.prefactor", positive=True)
    try:
        cls = ClassicalConfig(r1=exp.r1, r2=exp.r2, d_hat=exp.d_hat,
                              e1=e1, e2=e2, prefactor=pref)
    except ValueError as exc:
        raise ConfigError(f"classical: {exc}") from exc

    o = _section(tree, "outputs")
    directory = Path(out_override) if out_override is not None \
        else Path(str(o.get("directory", ".")))
    basename = o.get("basename")
    if basename is not None and not isinstance(basename, str):
        raise ConfigError(f"outputs.basename: expected a string, got {basename!r}")
    explicit = {}
    for slot in ("csv", "pgm", "metadata", "clicks_csv", "png"):
        if slot in o:
            if not isinstance(o[slot], str):
                raise ConfigError(f"outputs.{slot}: expected a path string")
            explicit[slot] = o[slot]
    outputs = OutputPaths(directory=directory, basename=basename, explicit=explicit)

    return RunConfig(experiment=exp, grid=grid, simulation=sim,
                     classical=cls, outputs=outputs)


def load_runconfig(path, seed_override: int | None = None,
                   out_override: str | None = None) -> RunConfig:
    """Read and validate a JSON run configuration.

    Malformed JSON and bad fields raise ConfigError (with line/column or the
    field path); a missing or unreadable file raises OSError.
    """
    text = Path(path).read_text()
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: "
                          f"{exc.msg}") from exc
    return parse_runconfig(tree, seed_override=seed_override,
                           out_override=out_override)
