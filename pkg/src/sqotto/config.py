"""Run configuration files.

Format: ``[section]`` headers, ``key = value`` lines, ``#`` comments.
Sections: ``engine`` (physical parameters, in units of omega_l), ``run``
(mode, output), ``sweep`` (axis = grid), ``fig`` (figure grids) and ``hpz``
(coefficient dump grid).  Grids are ``start:stop:count[:log]`` or a
comma-separated list.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .cycle import EngineConfig
from .errors import ConfigError, DomainError
from .gaussian import SqueezeParams
from .isentropic import FrequencyRamp, Profile
from .isothermal import CouplingMode

MODES = ("cycle", "sweep", "fig-r-driving", "fig-cov", "hpz-dump")
FORMATS = ("csv", "json")
PRESETS = ("r-driving", "cov")

_FLOAT_KEYS = ("omega_l", "omega_h", "beta_l", "beta_h", "temp_l", "temp_h", "eta", "theta",
               "gamma_l", "gamma_h", "cutoff_l", "cutoff_h", "mass", "tau_ab", "tau_cd")
ENGINE_KEYS = _FLOAT_KEYS + ("ramp_ab", "ramp_cd", "unsqueeze_at_ramp_end", "coupling_mode")
RUN_KEYS = ("mode", "format", "out", "tol")
FIG_KEYS = ("tau_grid", "gamma_grid", "temp_grid")
HPZ_KEYS = ("betas", "etas", "gammas", "theta", "omega", "mass", "cutoff", "t")
SWEEP_AXES = ("omega_l", "omega_h", "beta_l", "beta_h", "eta", "theta", "gamma_l", "gamma_h",
              "cutoff_l", "cutoff_h", "mass", "tau", "tau_ab", "tau_cd")
SECTIONS = {"engine": ENGINE_KEYS, "run": RUN_KEYS, "sweep": SWEEP_AXES, "fig": FIG_KEYS, "hpz": HPZ_KEYS}

DEFAULT_GRIDS = {
    "tau_grid": "0.0001:1000:40:log",
    "gamma_grid": "0.001:0.5:12:log",
    "temp_grid": "0.001:10:12:log",
}
DEFAULT_HPZ = {"betas": "1", "etas": "0,0.5", "gammas": "0.001", "theta": "0", "omega": "1", "mass": "1",
               "cutoff": "1000"}


@dataclass(frozen=True)
class Grid:
    """A parsed grid string; ``text`` is its canonical form."""

    values: tuple
    text: str

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def parse_grid(text: str) -> Grid:
    """``start:stop:count[:log]`` (inclusive ends) or ``a,b,c``."""
    s = text.strip()
    if not s:
        raise ValueError("empty grid")
    if ":" not in s:
        vals = tuple(float(v) for v in s.split(",") if v.strip())
        if not vals:
            raise ValueError(f"no values in {text!r}")
        return Grid(vals, ",".join(_fmt(v) for v in vals))
    parts = [p.strip() for p in s.split(":")]
    if len(parts) not in (3, 4):
        raise ValueError(f"grid {text!r} is not start:stop:count[:log]")
    start, stop = float(parts[0]), float(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise ValueError(f"grid count {parts[2]!r} is not an integer") from None
    if count < 1:
        raise ValueError("grid count must be >= 1")
    log = len(parts) == 4
    if log and parts[3].lower() != "log":
        raise ValueError(f"unknown grid spacing {parts[3]!r} (only 'log')")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise ValueError("grid ends must be finite")
    if log:
        if not (start > 0 and stop > 0):
            raise ValueError("log grid needs positive ends")
        vals = np.logspace(math.log10(start), math.log10(stop), count) if count > 1 else np.array([start])
        # pin the ends exactly
        vals[0] = start
        vals[-1] = stop if count > 1 else start
    else:
        vals = np.linspace(start, stop, count)
    canon = f"{_fmt(start)}:{_fmt(stop)}:{count}" + (":log" if log else "")
    return Grid(tuple(float(v) for v in vals), canon)


@dataclass(frozen=True)
class RunConfig:
    engine: EngineConfig
    mode: str = "cycle"
    fmt: str = "csv"
    out: Optional[str] = None
    tol: float = 1e-10
    sweep: dict = field(default_factory=dict)
    fig: dict = field(default_factory=dict)
    hpz: dict = field(default_factory=dict)


def _line_index(text):
    """(section, key) -> line number for error messages."""
    idx, section = {}, None
    for n, line in enumerate(text.splitlines(), 1):
        s = line.split("#", 1)[0].strip()
        m = re.match(r"^\[(.+)\]$", s)
        if m:
            section = m.group(1).strip().lower()
        elif "=" in s and section is not None:
            idx.setdefault((section, s.split("=", 1)[0].strip().lower()), n)
    return idx


def _bool(v: str) -> bool:
    low = v.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _float(v: str) -> float:
    x = float(v)
    if math.isnan(x):
        raise ValueError("nan is not allowed")
    return x


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r} (have {', '.join(PRESETS)})")
    return resources.files("sqotto").joinpath("presets").joinpath(f"{name}.ini").read_text()


def load_config(path) -> RunConfig:
    """Read and validate a config file, or a preset given by name."""
    p = Path(path)
    if not p.exists() and str(path) in PRESETS:
        return parse_config(preset_text(str(path)), source=f"preset {path}")
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {str(path)!r}: {exc.strerror or exc}") from exc
    return parse_config(text, source=str(path))


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), comment_prefixes=("#",),
                                   interpolation=None, strict=True, default_section="\x00none")
    try:
        cp.read_string(text, source=source)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError(f"{source}:{exc.lineno}: expected a [section] header", lineno=exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {text.splitlines()[lineno - 1].strip()!r}" if exc.errors
                          else f"{source}: parse error", lineno=lineno) from None
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as exc:
        raise ConfigError(f"{source}:{exc.lineno}: {exc}", lineno=exc.lineno) from None

    lines = _line_index(text)
    problems = []

    def where(sec, key):
        n = lines.get((sec, key))
        return f"{source}:{n}: " if n else f"{source}: "

    for sec in cp.sections():
        if sec not in SECTIONS:
            n = next((i for i, l in enumerate(text.splitlines(), 1) if l.strip().lower() == f"[{sec}]"), None)
            problems.append(f"{source}:{n}: unknown section [{sec}]")
            continue
        for key in cp[sec]:
            if key not in SECTIONS[sec]:
                problems.append(f"{where(sec, key)}[{sec}] {key}: unknown key")

    def get(sec, key, conv, default=None):
        if not cp.has_section(sec) or key not in cp[sec]:
            return default
        raw = cp[sec][key]
        try:
            return conv(raw)
        except (ValueError, TypeError) as exc:
            problems.append(f"{where(sec, key)}[{sec}] {key}: {exc}")
            return default

    eng = {}
    for key in _FLOAT_KEYS:
        v = get("engine", key, _float)
        if v is not None:
            eng[key] = v
    for side in ("l", "h"):
        if f"temp_{side}" in eng:
            if f"beta_{side}" in eng:
                problems.append(f"{where('engine', f'temp_{side}')}[engine] temp_{side}, beta_{side}: give one, not both")
            t = eng.pop(f"temp_{side}")
            if t < 0:
                problems.append(f"{where('engine', f'temp_{side}')}[engine] temp_{side}: must be >= 0")
            else:
                eng[f"beta_{side}"] = math.inf if t == 0 else 1.0 / t
    ramps = {}
    for stage in ("ab", "cd"):
        prof = get("engine", f"ramp_{stage}", lambda v: Profile(v.strip().lower()), Profile.ADIABATIC)
        tau = eng.pop(f"tau_{stage}", None)
        if prof is Profile.CUSTOM:
            problems.append(f"{where('engine', f'ramp_{stage}')}[engine] ramp_{stage}: custom ramps need the Python API")
            prof = Profile.ADIABATIC
        if prof is Profile.LINEAR:
            if tau is None:
                problems.append(f"{where('engine', f'ramp_{stage}')}[engine] tau_{stage}: required for a linear ramp")
                prof = Profile.ADIABATIC
            elif not (tau > 0 and math.isfinite(tau)):
                problems.append(f"{where('engine', f'tau_{stage}')}[engine] tau_{stage}: must be finite and > 0 (got {tau!r})")
                prof = Profile.ADIABATIC
        elif tau is not None:
            problems.append(f"{where('engine', f'tau_{stage}')}[engine] tau_{stage}: only meaningful for a linear ramp")
        ramps[stage] = (prof, tau)
    unsq = get("engine", "unsqueeze_at_ramp_end", _bool, False)
    mode_c = get("engine", "coupling_mode", lambda v: CouplingMode(v.strip().lower()), CouplingMode.WEAK)

    eta = eng.pop("eta", 0.0)
    theta = eng.pop("theta", 0.0)
    if eta < 0:
        problems.append(f"{where('engine', 'eta')}[engine] eta: must be >= 0 (got {eta!r})")
        eta = 0.0
    if not math.isfinite(theta):
        problems.append(f"{where('engine', 'theta')}[engine] theta: must be finite")
        theta = 0.0
    base = EngineConfig(hot_squeeze=SqueezeParams(eta, theta), unsqueeze_at_ramp_end=unsq, coupling_mode=mode_c,
                        **eng)
    wl, wh = base.omega_l, base.omega_h
    stage_ends = {"ab": (wl, wh), "cd": (wh, wl)}
    built = {}
    for stage, (prof, tau) in ramps.items():
        if prof is Profile.LINEAR and wl > 0 and wh > 0:
            built[stage] = FrequencyRamp(*stage_ends[stage], tau, Profile.LINEAR)
        else:
            # bad frequencies are reported by the engine check below
            built[stage] = Profile.ADIABATIC if prof is Profile.LINEAR else prof
    engine = dataclasses.replace(base, ramp_ab=built["ab"], ramp_cd=built["cd"])
    for prob in engine.problems():
        keys = prob.split(":", 1)[0].split(", ")
        problems.append(f"{where('engine', keys[0])}[engine] {prob}")

    mode = get("run", "mode", lambda v: _choice(v, MODES), "cycle")
    fmt = get("run", "format", lambda v: _choice(v, FORMATS), "csv")
    out = get("run", "out", lambda v: v.strip() or None)
    tol = get("run", "tol", _float, 1e-10)
    if tol is not None and not (0 < tol < 1):
        problems.append(f"{where('run', 'tol')}[run] tol: must be in (0, 1) (got {tol!r})")

    sweep = {}
    if cp.has_section("sweep"):
        for key in cp["sweep"]:
            if key in SWEEP_AXES:
                g = get("sweep", key, parse_grid)
                if g is not None:
                    sweep[key] = g
    fig = {}
    for key in FIG_KEYS:
        g = get("fig", key, parse_grid) if cp.has_section("fig") and key in cp["fig"] else parse_grid(DEFAULT_GRIDS[key])
        if g is not None:
            fig[key] = g
    hpz = {}
    for key in ("betas", "etas", "gammas"):
        raw_default = parse_grid(DEFAULT_HPZ[key])
        g = get("hpz", key, parse_grid, raw_default)
        hpz[key] = g
    for key in ("theta", "omega", "mass", "cutoff", "t"):
        default = None if key == "t" else float(DEFAULT_HPZ[key])
        hpz[key] = get("hpz", key, _float, default)
    for key in ("omega", "mass", "cutoff", "t"):
        v = hpz[key]
        if v is not None and not (v > 0 and math.isfinite(v)):
            problems.append(f"{where('hpz', key)}[hpz] {key}: must be finite and > 0 (got {v!r})")

    if problems:
        raise ConfigError(f"{source}: {len(problems)} problem(s)\n  " + "\n  ".join(problems), problems=problems)
    return RunConfig(engine, mode, fmt, out, tol, sweep, fig, hpz)


def _choice(v, allowed):
    s = v.strip().lower()
    if s not in allowed:
        raise ValueError(f"must be one of {', '.join(allowed)} (got {v!r})")
    return s


def dump_config(rc: RunConfig) -> str:
    """Canonical text; ``parse_config(dump_config(rc))`` reproduces ``rc``."""
    e = rc.engine
    out = ["[engine]"]
    for key in ("omega_l", "omega_h", "beta_l", "beta_h"):
        out.append(f"{key} = {_fmt(getattr(e, key))}")
    out.append(f"eta = {_fmt(e.hot_squeeze.eta)}")
    out.append(f"theta = {_fmt(e.hot_squeeze.theta)}")
    for key in ("gamma_l", "gamma_h", "cutoff_l", "cutoff_h", "mass"):
        out.append(f"{key} = {_fmt(getattr(e, key))}")
    for stage in ("ab", "cd"):
        r = getattr(e, f"ramp_{stage}")
        if isinstance(r, FrequencyRamp):
            out.append(f"ramp_{stage} = {r.profile.value}")
            out.append(f"tau_{stage} = {_fmt(r.tau)}")
        else:
            out.append(f"ramp_{stage} = {Profile(r).value}")
    out.append(f"unsqueeze_at_ramp_end = {'true' if e.unsqueeze_at_ramp_end else 'false'}")
    out.append(f"coupling_mode = {e.coupling_mode.value}")
    out += ["", "[run]", f"mode = {rc.mode}", f"format = {rc.fmt}"]
    if rc.out:
        out.append(f"out = {rc.out}")
    out.append(f"tol = {_fmt(rc.tol)}")
    if rc.sweep:
        out += ["", "[sweep]"] + [f"{k} = {g.text}" for k, g in rc.sweep.items()]
    out += ["", "[fig]"] + [f"{k} = {rc.fig[k].text}" for k in FIG_KEYS if k in rc.fig]
    out += ["", "[hpz]"] + [f"{k} = {rc.hpz[k].text}" for k in ("betas", "etas", "gammas")]
    for k in ("theta", "omega", "mass", "cutoff", "t"):
        if rc.hpz.get(k) is not None:
            out.append(f"{k} = {_fmt(rc.hpz[k])}")
    return "\n".join(out) + "\n"


def validation_error(exc: DomainError) -> ConfigError:
    return ConfigError(str(exc), problems=[str(exc)])
