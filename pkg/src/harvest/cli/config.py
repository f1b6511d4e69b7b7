"""Run configuration files.

A configuration is INI-style text. Sections:

    [model]       kind, mass, spatial_dim
    [detectors]   defaults shared by both detectors
    [detector1]   per-detector keys, override [detectors]
    [detector2]
    [sweep]       one line per axis: <parameter path> = <grid>
    [output]      csv, plot, title, verify
    [quadrature]  rel_tol, abs_tol, max_subdivisions, oscillatory_terms
    [run]         normalization

Detector keys are gap, sigma, switching.T, switching.center, position,
phase_vector, spinor, initial_state and smearing_phase. Vectors are comma
separated; single components can be set as position.z, phase_vector.x etc.

Parameter paths used by sweep axes are model.mass, detector1.<key>,
detector2.<key> and detectors.<key> (both detectors at once), for any
numeric key above. Grids are either linspace(start, stop, count) or
values(v1, v2, ...). The first axis is the outer (slow) one.

Everything is in units of the switching time T.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, replace

import numpy as np

from ..fields import ConstantSpinor, DetectorConfig, FieldKind, FieldModel, InitialState
from ..quadrature import QuadratureSettings
from ..switching import NORMALIZATIONS, GaussianSwitching

PLOT_STYLES = ("auto", "lines", "heatmap", "none")
_VECTORS = {"position": 3, "phase_vector": 3}
_COMPONENTS = {"x": 0, "y": 1, "z": 2}


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass(frozen=True)
class Axis:
    path: str
    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ConfigError(f"axis {self.path} has an empty grid")
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError(f"axis {self.path} has non-finite values")
        d = np.diff(vals)
        if vals and not (np.all(d > 0) or np.all(d < 0)):
            raise ConfigError(f"axis {self.path} must be strictly monotone")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class SweepSpec:
    model: FieldModel
    base: tuple
    axes: tuple = ()
    output: str = "harvest.csv"
    emit_plot: bool = True
    plot_style: str = "auto"
    verify: bool = False
    normalization: str = "defining"
    settings: QuadratureSettings = field(default_factory=QuadratureSettings)
    title: str = ""

    def __post_init__(self):
        if len(self.axes) > 2:
            raise ConfigError("at most two sweep axes are supported")
        if len({a.path for a in self.axes}) != len(self.axes):
            raise ConfigError("sweep axes must be distinct")
        if self.normalization not in NORMALIZATIONS:
            raise ConfigError(f"normalization must be one of {NORMALIZATIONS}")
        if self.plot_style not in PLOT_STYLES:
            raise ConfigError(f"plot must be one of {PLOT_STYLES} or a boolean")
        # every axis value must give a valid configuration
        for ax in self.axes:
            for v in (ax.values[0], ax.values[-1]):
                apply_parameter(self.model, self.base, ax.path, v)

    def points(self):
        """Grid points in row-major order as tuples of axis values."""
        if not self.axes:
            return [()]
        grids = [a.values for a in self.axes]
        if len(grids) == 1:
            return [(v,) for v in grids[0]]
        return [(u, v) for u in grids[0] for v in grids[1]]

    def configure(self, point):
        model, dets = self.model, self.base
        for ax, v in zip(self.axes, point):
            model, dets = apply_parameter(model, dets, ax.path, v)
        return model, dets


def _set_detector(d: DetectorConfig, key: str, value: float) -> DetectorConfig:
    if key == "switching.T":
        return replace(d, switching=replace(d.switching, T=value))
    if key == "switching.center":
        return replace(d, switching=replace(d.switching, center=value))
    if key in ("gap", "sigma", "smearing_phase"):
        return replace(d, **{key: value})
    head, _, comp = key.partition(".")
    if head in _VECTORS and comp in _COMPONENTS:
        vec = list(getattr(d, head))
        vec[_COMPONENTS[comp]] = value
        return replace(d, **{head: tuple(vec)})
    raise ConfigError(f"unknown detector parameter {key!r}")


def apply_parameter(model: FieldModel, dets, path: str, value: float):
    """Return (model, (d1, d2)) with the parameter at `path` set to `value`."""
    value = float(value)
    d1, d2 = dets
    scope, _, key = path.partition(".")
    try:
        if scope == "model":
            if key == "mass":
                return replace(model, mass=value), (d1, d2)
            raise ConfigError(f"only model.mass can be swept, got {path!r}")
        if scope == "detector1":
            return model, (_set_detector(d1, key, value), d2)
        if scope == "detector2":
            return model, (d1, _set_detector(d2, key, value))
        if scope == "detectors":
            return model, (_set_detector(d1, key, value), _set_detector(d2, key, value))
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path} = {value!r}: {exc}") from exc
    raise ConfigError(f"unknown parameter path {path!r}")


_GRID = re.compile(r"^\s*(linspace|values)\s*\((.*)\)\s*$", re.S)


def parse_grid(text: str) -> tuple:
    m = _GRID.match(text)
    if m is None:
        raise ConfigError(f"grid must be linspace(a, b, n) or values(...), got {text!r}")
    kind, body = m.groups()
    items = [s.strip() for s in body.split(",") if s.strip()]
    try:
        if kind == "values":
            return tuple(float(s) for s in items)
        if len(items) != 3:
            raise ConfigError("linspace takes start, stop, count")
        a, b, n = float(items[0]), float(items[1]), int(items[2])
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}: {exc}") from exc
    if n < 1:
        raise ConfigError("linspace count must be positive")
    return tuple(float(v) for v in np.linspace(a, b, n))


def _floats(text: str, n: int, what: str) -> tuple:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != n:
        raise ConfigError(f"{what} needs {n} comma separated numbers")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"{what}: {exc}") from exc


def _bool(text: str, what: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{what} must be a boolean, got {text!r}")


def _detector_from(items: dict) -> DetectorConfig:
    kw = {}
    sw = {}
    vec_parts = {}
    for key, raw in items.items():
        try:
            if key in ("gap", "sigma", "smearing_phase"):
                kw[key] = float(raw)
            elif key == "switching.T":
                sw["T"] = float(raw)
            elif key == "switching.center":
                sw["center"] = float(raw)
            elif key in _VECTORS:
                kw[key] = _floats(raw, _VECTORS[key], key)
            elif key == "spinor":
                parts = [s.strip().replace(" ", "") for s in raw.split(",")]
                kw["spinor"] = ConstantSpinor(tuple(complex(p) for p in parts))
            elif key == "initial_state":
                kw["initial_state"] = InitialState(raw.strip())
            elif key.partition(".")[0] in _VECTORS and key.partition(".")[2] in _COMPONENTS:
                vec_parts[key] = float(raw)
            else:
                raise ConfigError(f"unknown detector key {key!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{key} = {raw!r}: {exc}") from exc
    try:
        d = DetectorConfig(switching=GaussianSwitching(**sw), **kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    for key, v in vec_parts.items():
        d = _set_detector(d, key, v)
    return d


def _section(cp, name) -> dict:
    return dict(cp.items(name)) if cp.has_section(name) else {}


_KNOWN = {"model", "detectors", "detector1", "detector2", "sweep", "output", "quadrature", "run"}


def parse_config(text: str, source: str = "<config>") -> SweepSpec:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    extra = set(cp.sections()) - _KNOWN
    if extra:
        raise ConfigError(f"unknown sections: {sorted(extra)}")

    m = _section(cp, "model")
    unknown = set(m) - {"kind", "mass", "spatial_dim"}
    if unknown:
        raise ConfigError(f"unknown model keys: {sorted(unknown)}")
    try:
        kind = FieldKind(m.get("kind", "RealScalar").strip())
        model = FieldModel(kind, float(m.get("mass", 0.0)), int(m.get("spatial_dim", 3)))
    except ValueError as exc:
        raise ConfigError(f"[model]: {exc}") from exc

    shared = _section(cp, "detectors")
    first = {"initial_state": "Excited"}
    second = {"initial_state": "Ground", "position": "0, 0, 5"}
    if kind is FieldKind.DIRAC_FERMION:
        first["spinor"] = second["spinor"] = "1, 0, 0, 0"
    d1 = _detector_from({**first, **shared, **_section(cp, "detector1")})
    d2 = _detector_from({**second, **shared, **_section(cp, "detector2")})

    axes = tuple(Axis(path, parse_grid(raw)) for path, raw in _section(cp, "sweep").items())

    out = _section(cp, "output")
    unknown = set(out) - {"csv", "plot", "title", "verify"}
    if unknown:
        raise ConfigError(f"unknown output keys: {sorted(unknown)}")
    plot = out.get("plot", "auto").strip().lower()
    if plot in ("true", "yes", "on", "1"):
        plot = "auto"
    elif plot in ("false", "no", "off", "0"):
        plot = "none"

    q = _section(cp, "quadrature")
    unknown = set(q) - {"rel_tol", "abs_tol", "max_subdivisions", "oscillatory_terms"}
    if unknown:
        raise ConfigError(f"unknown quadrature keys: {sorted(unknown)}")
    try:
        settings = QuadratureSettings(
            rel_tol=float(q.get("rel_tol", 1e-8)), abs_tol=float(q.get("abs_tol", 0.0)),
            max_subdivisions=int(q.get("max_subdivisions", 4000)),
            oscillatory_terms=int(q.get("oscillatory_terms", 40)))
    except ValueError as exc:
        raise ConfigError(f"[quadrature]: {exc}") from exc

    run = _section(cp, "run")
    unknown = set(run) - {"normalization"}
    if unknown:
        raise ConfigError(f"unknown run keys: {sorted(unknown)}")

    return SweepSpec(
        model=model, base=(d1, d2), axes=axes,
        output=out.get("csv", "harvest.csv").strip(),
        emit_plot=plot != "none", plot_style=plot if plot != "none" else "auto",
        verify=_bool(out.get("verify", "false"), "verify"),
        normalization=run.get("normalization", "defining").strip(),
        settings=settings, title=out.get("title", "").strip())


def load_config(path) -> SweepSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(text, str(path))


def _num(x) -> str:
    if isinstance(x, complex):
        return repr(x) if x.imag else repr(x.real)
    return repr(float(x))


def _dump_detector(d: DetectorConfig) -> list:
    lines = [
        f"gap = {_num(d.gap)}",
        f"sigma = {_num(d.sigma)}",
        f"switching.T = {_num(d.switching.T)}",
        f"switching.center = {_num(d.switching.center)}",
        "position = " + ", ".join(_num(v) for v in d.position),
        "phase_vector = " + ", ".join(_num(v) for v in d.phase_vector),
        f"initial_state = {d.initial_state.value}",
        f"smearing_phase = {_num(d.smearing_phase)}",
    ]
    if d.spinor is not None:
        lines.append("spinor = " + ", ".join(_num(c) for c in d.spinor.components))
    return lines


def dump_config(spec: SweepSpec) -> str:
    """Serialize a SweepSpec; parse_config(dump_config(s)) == s."""
    s = spec.settings
    out = ["[model]", f"kind = {spec.model.kind.value}", f"mass = {_num(spec.model.mass)}",
           f"spatial_dim = {spec.model.spatial_dim}", ""]
    for i, d in enumerate(spec.base, start=1):
        out += [f"[detector{i}]", *_dump_detector(d), ""]
    if spec.axes:
        out.append("[sweep]")
        for ax in spec.axes:
            out.append(f"{ax.path} = values(" + ", ".join(_num(v) for v in ax.values) + ")")
        out.append("")
    plot = spec.plot_style if spec.emit_plot else "none"
    out += ["[output]", f"csv = {spec.output}", f"plot = {plot}",
            f"verify = {'true' if spec.verify else 'false'}"]
    if spec.title:
        out.append(f"title = {spec.title}")
    out += ["", "[quadrature]", f"rel_tol = {_num(s.rel_tol)}", f"abs_tol = {_num(s.abs_tol)}",
            f"max_subdivisions = {s.max_subdivisions}",
            f"oscillatory_terms = {s.oscillatory_terms}", "",
            "[run]", f"normalization = {spec.normalization}", ""]
    return "\n".join(out)
