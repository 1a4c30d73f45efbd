"""Scenario descriptions and their conversion into a :class:`Network`.

A scenario is a plain-text INI file::

    [scenario]
    name = dam_break
    [model]
    name = shallow_water
    g = 9.81
    [run]
    T = 0.5
    cfl = 0.8
    dx = 0.01
    output_times = 0.25, 0.5
    [canal.1]
    length = 4
    x_offset = -4
    u1 = 1.0
    u2 = 0.1
    [canal.2]
    length = 4
    u1 = where(s < 1, 0.6, 0.5)
    u2 = 0
    [junction.1]
    incoming = 1
    outgoing = 2
    mode = pressure
    strategy = relaxation

Initial data and reference profiles are constants or numpy expressions of
``x`` (display coordinate, ``x_offset + s``) and ``s`` (canal-local
coordinate in ``[0, length]``). They are sampled at cell centres.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Union

import numpy as np

from .models import ConfigurationError, make_model
from .network import (CLASSICAL, ENERGY, PRESSURE, RELAXATION, REFLECTING, TRANSMISSIVE,
                      Canal, Junction, Network, TopologyError, cell_centers)

Profile = Union[float, str, Callable]

_SAFE_NAMES = {
    name: getattr(np, name)
    for name in ("exp", "sin", "cos", "tan", "sqrt", "abs", "where", "minimum", "maximum",
                 "log", "tanh", "clip", "logical_and", "logical_or", "select", "pi", "heaviside")
}
_SAFE_NAMES["e"] = math.e


def evaluate_profile(profile: Profile, x, s) -> np.ndarray:
    """Evaluate a constant, expression string, or callable ``f(x, s)`` on cell centres."""
    if callable(profile):
        out = profile(x, s)
    elif isinstance(profile, str):
        try:
            code = compile(profile, "<profile>", "eval")
        except SyntaxError as exc:
            raise ConfigurationError(f"bad expression {profile!r}: {exc.msg}") from None
        for name in code.co_names:
            if name not in _SAFE_NAMES and name not in ("x", "s"):
                raise ConfigurationError(f"name {name!r} not allowed in expression {profile!r}")
        out = eval(code, {"__builtins__": {}}, dict(_SAFE_NAMES, x=x, s=s))
    else:
        out = float(profile)
    return np.broadcast_to(np.asarray(out, dtype=float), np.shape(x)).copy()


@dataclass
class CanalSpec:
    id: int
    length: float
    u1: Profile = 1.0
    u2: Profile = 0.0
    ref: Profile | None = None
    width: float = 1.0
    x_offset: float = 0.0
    n_cells: int | None = None
    boundary: tuple[str, str] = (REFLECTING, REFLECTING)


@dataclass
class JunctionSpec:
    id: int
    incoming: list[int]
    outgoing: list[int]
    mode: str = PRESSURE
    strategy: str = RELAXATION


@dataclass
class ScenarioConfig:
    """Everything needed to build and run one simulation.

    Attributes
    ----------
    model : str
        ``"shallow_water"`` or ``"blood_flow"``.
    model_params : dict
        Keyword arguments of the model constructor.
    dx : float
        Target cell size; each canal gets ``round(length / dx)`` cells unless
        it fixes ``n_cells``.
    output_times : list of float
        Snapshot times; ``T`` is always added.
    allow_dry : bool
        Accept ``u1 = 0`` cells in the initial data (shallow water only).
    """

    name: str
    model: str
    canals: list[CanalSpec]
    junctions: list[JunctionSpec] = field(default_factory=list)
    model_params: dict = field(default_factory=dict)
    T: float = 1.0
    cfl: float = 0.8
    dx: float = 0.01
    output_times: list[float] = field(default_factory=list)
    description: str = ""
    allow_dry: bool = False
    notes: str = ""

    def with_overrides(self, dx=None, T=None, cfl=None, strategy=None, mode=None) -> "ScenarioConfig":
        """Copy with run parameters and/or every junction's strategy/mode replaced."""
        junctions = [replace(j, strategy=strategy or j.strategy, mode=mode or j.mode) for j in self.junctions]
        canals = [replace(c, n_cells=None) if dx is not None else c for c in self.canals]
        return replace(self, dx=self.dx if dx is None else dx, T=self.T if T is None else T,
                       cfl=self.cfl if cfl is None else cfl, junctions=junctions, canals=canals)

    def validate(self):
        if not self.T > 0:
            raise ConfigurationError("final time T must be positive")
        if not 0 < self.cfl <= 1:
            raise ConfigurationError("cfl must lie in (0, 1]")
        if not self.dx > 0:
            raise ConfigurationError("dx must be positive")
        if not self.canals:
            raise ConfigurationError("scenario defines no canals")
        for c in self.canals:
            if not c.length > 0:
                raise ConfigurationError(f"canal {c.id}: length must be positive")
            for b in c.boundary:
                if b not in (REFLECTING, TRANSMISSIVE):
                    raise ConfigurationError(f"canal {c.id}: unknown boundary {b!r}")
        for j in self.junctions:
            if j.mode not in (PRESSURE, ENERGY):
                raise ConfigurationError(f"junction {j.id}: unknown mode {j.mode!r}")
            if j.strategy not in (RELAXATION, CLASSICAL):
                raise ConfigurationError(f"junction {j.id}: unknown strategy {j.strategy!r}")
        make_model(self.model, **self.model_params)


def build_network(scenario: ScenarioConfig) -> Network:
    """Instantiate the network of ``scenario`` with its initial data.

    Raises
    ------
    ConfigurationError
        Invalid parameters, dangling junction references or non-positive
        initial heights/sections.
    """
    scenario.validate()
    model = make_model(scenario.model, **scenario.model_params)
    canals = []
    for spec in scenario.canals:
        n = spec.n_cells or max(2, int(round(spec.length / scenario.dx)))
        probe = Canal(spec.id, spec.length, n, spec.width)
        s = cell_centers(probe)
        x = s + spec.x_offset
        if spec.ref is None:
            ref = np.zeros(n) if model.kind == "shallow_water" else None
            if ref is None:
                raise ConfigurationError(f"canal {spec.id}: blood flow needs a reference section")
        else:
            ref = evaluate_profile(spec.ref, x, s)
        u1 = evaluate_profile(spec.u1, x, s)
        u2 = evaluate_profile(spec.u2, x, s)
        if not (np.all(np.isfinite(u1)) and np.all(np.isfinite(u2))):
            raise ConfigurationError(f"canal {spec.id}: non-finite initial data")
        dry_ok = scenario.allow_dry and model.kind == "shallow_water"
        if np.any(u1 < 0) or (not dry_ok and np.any(u1 <= 0)):
            raise ConfigurationError(f"canal {spec.id}: initial {model.u1_name} must be positive")
        if model.kind == "blood_flow" and np.any(ref <= 0):
            raise ConfigurationError(f"canal {spec.id}: reference section must be positive")
        try:
            canals.append(Canal(spec.id, spec.length, n, spec.width, ref, u1, u2, spec.x_offset,
                                tuple(spec.boundary)))
        except TopologyError as exc:
            raise ConfigurationError(str(exc)) from None
    try:
        junctions = [Junction(j.id, j.incoming, j.outgoing, j.mode, j.strategy) for j in scenario.junctions]
        return Network(canals, junctions, model)
    except TopologyError as exc:
        raise ConfigurationError(str(exc)) from None


def _ids(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(",", " ").split()]


def _profile(text: str | None):
    if text is None:
        return None
    try:
        return float(text)
    except ValueError:
        return text.strip()


def parse_scenario(text: str, name: str = "scenario") -> ScenarioConfig:
    """Parse the INI scenario format described in the module docstring."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"cannot parse scenario: {exc}") from None
    try:
        return _from_parser(cp, name)
    except (KeyError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"invalid scenario entry: {exc}") from None


def _from_parser(cp, name):
    meta = cp["scenario"] if cp.has_section("scenario") else {}
    if not cp.has_section("model"):
        raise ConfigurationError("missing [model] section")
    model_sec = dict(cp["model"])
    model = model_sec.pop("name")
    params = {k: float(v) for k, v in model_sec.items()}
    if "literal_kappa" in params:
        params["literal_kappa"] = bool(params["literal_kappa"])
    run = cp["run"] if cp.has_section("run") else {}
    canals, junctions = [], []
    for sec in cp.sections():
        if sec.startswith("canal."):
            c = cp[sec]
            boundary = tuple(t.strip() for t in c.get("boundary", f"{REFLECTING}, {REFLECTING}").split(","))
            if len(boundary) == 1:
                boundary = boundary * 2
            canals.append(CanalSpec(
                id=int(sec.split(".", 1)[1]), length=float(c["length"]),
                u1=_profile(c.get("u1", "1")), u2=_profile(c.get("u2", "0")), ref=_profile(c.get("ref")),
                width=float(c.get("width", "1")), x_offset=float(c.get("x_offset", "0")),
                n_cells=int(c["n_cells"]) if "n_cells" in c else None, boundary=boundary))
        elif sec.startswith("junction."):
            j = cp[sec]
            junctions.append(JunctionSpec(
                id=int(sec.split(".", 1)[1]), incoming=_ids(j.get("incoming", "")),
                outgoing=_ids(j.get("outgoing", "")), mode=j.get("mode", PRESSURE).strip(),
                strategy=j.get("strategy", RELAXATION).strip()))
    cfg = ScenarioConfig(
        name=meta.get("name", name), model=model, canals=canals, junctions=junctions,
        model_params=params, T=float(run.get("T", "1")), cfl=float(run.get("cfl", "0.8")),
        dx=float(run.get("dx", "0.01")), output_times=_floats(run.get("output_times", "")),
        description=meta.get("description", ""),
        allow_dry=run.get("allow_dry", "false").strip().lower() in ("1", "true", "yes"))
    cfg.validate()
    return cfg


def load_scenario(path) -> ScenarioConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read scenario file {p}: {exc.strerror}") from None
    return parse_scenario(text, p.stem)


def dump_scenario(cfg: ScenarioConfig) -> str:
    """INI text for ``cfg``; callable profiles cannot be serialised."""
    cp = configparser.ConfigParser()
    cp.optionxform = str
    cp["scenario"] = {"name": cfg.name, "description": cfg.description}
    cp["model"] = {"name": cfg.model, **{k: repr(v) for k, v in cfg.model_params.items()}}
    cp["run"] = {"T": repr(cfg.T), "cfl": repr(cfg.cfl), "dx": repr(cfg.dx),
                 "output_times": ", ".join(repr(t) for t in cfg.output_times),
                 "allow_dry": str(cfg.allow_dry).lower()}
    for c in cfg.canals:
        sec = {"length": repr(c.length), "width": repr(c.width), "x_offset": repr(c.x_offset),
               "boundary": ", ".join(c.boundary)}
        for key in ("u1", "u2", "ref"):
            val = getattr(c, key)
            if val is None:
                continue
            if callable(val):
                raise ConfigurationError(f"canal {c.id}: {key} is a Python callable and cannot be written")
            sec[key] = val if isinstance(val, str) else repr(float(val))
        if c.n_cells:
            sec["n_cells"] = str(c.n_cells)
        cp[f"canal.{c.id}"] = sec
    for j in cfg.junctions:
        cp[f"junction.{j.id}"] = {"incoming": ", ".join(map(str, j.incoming)),
                                  "outgoing": ", ".join(map(str, j.outgoing)),
                                  "mode": j.mode, "strategy": j.strategy}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()
