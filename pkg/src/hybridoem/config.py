"""Run configuration: TOML parsing with unit-aware values.

A run file has three sections::

    [system]            # device constants
    omega_o = "2pi*282e12"
    kappa_o = "1.65 MHz"
    ...

    [drive]             # pumps, probe, detunings, amplitude convention
    P_o = "2 mW"
    Delta_o = "2pi*5.6e6"
    ...

    [task]              # exactly one task block
    type = "spectrum"   # steady | spectrum | power-sweep | delay | classify
    ...

Frequency-like values are bare numbers in rad/s, or strings: a ``2pi*``
prefix multiplies by 2*pi (the number is then in Hz), and an SI frequency
suffix (Hz/kHz/MHz/GHz/THz) marks a cyclic frequency, also converted with
2*pi.  Power values are bare numbers in W or strings with W/mW/uW/nW/pW
suffixes.  Internally everything is rad/s and W.
"""

import math
import re
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from dataclasses import dataclass

from .errors import ConfigError
from .model import Convention, DriveConfig, SystemParams, validate_params
from .sweeps import AxisSpec

__all__ = ["RunConfig", "parse_config", "parse_quantity", "TASKS"]

TASKS = ("steady", "spectrum", "power-sweep", "delay", "classify")

_FREQ_UNITS = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12}
_POWER_UNITS = {"W": 1.0, "mW": 1e-3, "uW": 1e-6, "nW": 1e-9, "pW": 1e-12}

_QUANTITY_RE = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<twopi>2pi\*)?\s*"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*"
    r"(?P<unit>[A-Za-z]+)?\s*$")

SYSTEM_KEYS = ("omega_o", "omega_e", "kappa_o", "kappa_e",
               "kappa_o_ext", "kappa_e_ext", "g_o", "g_e",
               "omega_m", "gamma_m")
DRIVE_FREQ_KEYS = ("Delta_o", "Delta_e")
DRIVE_POWER_KEYS = ("P_o", "P_e", "P_p")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run description (rad/s and W throughout)."""

    system: SystemParams
    drive: DriveConfig
    task: str
    axis: AxisSpec | None = None
    powers: tuple | None = None
    delay_step: float | None = None
    out: str | None = None
    format: str = "csv"

    def to_dict(self):
        """Echoable plain-data form; feeding it back to
        :meth:`from_dict` reproduces this config exactly."""
        d = {
            "system": {k: float(getattr(self.system, k)) for k in SYSTEM_KEYS},
            "drive": {
                **{k: float(getattr(self.drive, k)) for k in DRIVE_POWER_KEYS},
                **{k: float(getattr(self.drive, k)) for k in DRIVE_FREQ_KEYS},
                "convention": self.drive.convention,
            },
            "task": {"type": self.task, "format": self.format},
        }
        if self.out is not None:
            d["task"]["out"] = self.out
        if self.axis is not None:
            d["task"]["axis_min"] = float(self.axis.lo)
            d["task"]["axis_max"] = float(self.axis.hi)
            d["task"]["axis_count"] = int(self.axis.count)
        if self.powers is not None:
            d["task"]["powers"] = [float(p) for p in self.powers]
        if self.delay_step is not None:
            d["task"]["delay_step"] = float(self.delay_step)
        return d

    @classmethod
    def from_dict(cls, d):
        """Rebuild from an echoed dict (values already in rad/s and W)."""
        sysblock = d["system"]
        driveblock = d["drive"]
        taskblock = d["task"]
        system = SystemParams(**{k: float(sysblock[k]) for k in SYSTEM_KEYS})
        drive = DriveConfig(
            **{k: float(driveblock[k]) for k in DRIVE_POWER_KEYS + DRIVE_FREQ_KEYS},
            convention=driveblock.get("convention", Convention.STANDARD))
        axis = None
        if "axis_min" in taskblock:
            axis = AxisSpec(float(taskblock["axis_min"]), float(taskblock["axis_max"]),
                            int(taskblock.get("axis_count", 2001)))
        powers = tuple(float(p) for p in taskblock["powers"]) if "powers" in taskblock else None
        step = float(taskblock["delay_step"]) if "delay_step" in taskblock else None
        return cls(system=system, drive=drive, task=taskblock["type"],
                   axis=axis, powers=powers, delay_step=step,
                   out=taskblock.get("out"), format=taskblock.get("format", "csv"))


def parse_quantity(value, kind, where=None):
    """Resolve a config value to rad/s (kind='frequency'), W (kind='power'),
    or a bare float (kind='number')."""
    line, col = where or (None, None)
    if isinstance(value, bool):
        raise ConfigError(f"expected a number, got boolean {value!r}", line, col)
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"expected a number or quantity string, got {value!r}", line, col)
    m = _QUANTITY_RE.match(value)
    if not m:
        raise ConfigError(f"malformed quantity {value!r}", line, col)
    num = float(m.group("num"))
    if m.group("sign") == "-":
        num = -num
    unit = m.group("unit")
    twopi = m.group("twopi") is not None
    if kind == "frequency":
        if unit is not None:
            if unit not in _FREQ_UNITS:
                raise ConfigError(f"unknown frequency unit {unit!r} in {value!r}", line, col)
            return 2.0 * math.pi * num * _FREQ_UNITS[unit]
        return 2.0 * math.pi * num if twopi else num
    if kind == "power":
        if twopi:
            raise ConfigError(f"2pi* prefix is not meaningful for powers: {value!r}", line, col)
        if unit is not None:
            if unit not in _POWER_UNITS:
                raise ConfigError(f"unknown power unit {unit!r} in {value!r}", line, col)
            return num * _POWER_UNITS[unit]
        return num
    if kind == "number":
        if twopi or unit is not None:
            raise ConfigError(f"expected a bare number, got {value!r}", line, col)
        return num
    raise ValueError(f"unknown kind {kind!r}")


def _locate(text, key):
    """Best-effort (line, col) of a key assignment in the source text."""
    pattern = re.compile(rf"^\s*{re.escape(key)}\s*=", re.MULTILINE)
    m = pattern.search(text)
    if not m:
        return (None, None)
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return (line, col)


def _check_keys(block, allowed, section, text):
    for key in block:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in [{section}]", *_locate(text, key))


def parse_config(text):
    """Parse and validate a TOML run configuration.

    Raises :class:`ConfigError` on syntax errors, unknown or missing keys,
    malformed quantities, or invariant violations.
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+), column (\d+)", str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        raise ConfigError(f"TOML syntax error: {exc}", line, col) from exc

    if "system" not in data:
        raise ConfigError("missing system block")
    if "drive" not in data:
        raise ConfigError("missing drive block")
    if "task" not in data:
        raise ConfigError("missing task block")
    extra = [k for k in data if k not in ("system", "drive", "task")]
    if extra:
        raise ConfigError(f"unknown block {extra[0]!r}", *_locate(text, extra[0]))

    sysblock, driveblock, taskblock = data["system"], data["drive"], data["task"]
    _check_keys(sysblock, SYSTEM_KEYS, "system", text)
    missing = [k for k in SYSTEM_KEYS if k not in sysblock]
    if missing:
        raise ConfigError(f"missing required key {missing[0]!r} in [system]")
    system = SystemParams(**{
        k: parse_quantity(sysblock[k], "frequency", _locate(text, k))
        for k in SYSTEM_KEYS})

    allowed_drive = DRIVE_POWER_KEYS + DRIVE_FREQ_KEYS + ("convention",)
    _check_keys(driveblock, allowed_drive, "drive", text)
    drive_kwargs = {}
    for k in DRIVE_POWER_KEYS:
        if k in driveblock:
            drive_kwargs[k] = parse_quantity(driveblock[k], "power", _locate(text, k))
    for k in DRIVE_FREQ_KEYS:
        if k in driveblock:
            drive_kwargs[k] = parse_quantity(driveblock[k], "frequency", _locate(text, k))
    convention = driveblock.get("convention", Convention.STANDARD)
    if convention not in Convention.ALL:
        raise ConfigError(f"unknown convention {convention!r}",
                          *_locate(text, "convention"))
    drive = DriveConfig(convention=convention, **drive_kwargs)

    task_type = taskblock.get("type")
    if task_type is None:
        raise ConfigError("missing required key 'type' in [task]")
    if task_type not in TASKS:
        raise ConfigError(f"unknown task type {task_type!r}", *_locate(text, "type"))

    allowed_task = {"type", "out", "format"}
    if task_type in ("spectrum", "classify"):
        allowed_task |= {"axis_min", "axis_max", "axis_count"}
    elif task_type == "power-sweep":
        allowed_task |= {"powers", "power_min", "power_max", "power_count"}
    elif task_type == "delay":
        allowed_task |= {"delay_step"}
    _check_keys(taskblock, allowed_task, "task", text)

    fmt = taskblock.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"unknown format {fmt!r}", *_locate(text, "format"))
    out = taskblock.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError(f"'out' must be a string, got {out!r}", *_locate(text, "out"))

    axis = None
    if task_type in ("spectrum", "classify"):
        if "axis_min" in taskblock or "axis_max" in taskblock:
            if not ("axis_min" in taskblock and "axis_max" in taskblock):
                raise ConfigError("axis_min and axis_max must be given together")
            lo = parse_quantity(taskblock["axis_min"], "frequency", _locate(text, "axis_min"))
            hi = parse_quantity(taskblock["axis_max"], "frequency", _locate(text, "axis_max"))
        else:
            lo = -3.0 * system.kappa_o
            hi = 3.0 * system.kappa_o
        count = taskblock.get("axis_count", 2001)
        if not isinstance(count, int) or count < 2:
            raise ConfigError(f"axis_count must be an integer >= 2, got {count!r}",
                              *_locate(text, "axis_count"))
        try:
            axis = AxisSpec(lo, hi, count)
        except ValueError as exc:
            raise ConfigError(f"invalid axis: {exc}") from exc

    powers = None
    if task_type == "power-sweep":
        if "powers" in taskblock:
            raw = taskblock["powers"]
            if not isinstance(raw, list) or not raw:
                raise ConfigError("'powers' must be a nonempty list",
                                  *_locate(text, "powers"))
            powers = tuple(parse_quantity(v, "power", _locate(text, "powers"))
                           for v in raw)
        elif all(k in taskblock for k in ("power_min", "power_max", "power_count")):
            lo = parse_quantity(taskblock["power_min"], "power", _locate(text, "power_min"))
            hi = parse_quantity(taskblock["power_max"], "power", _locate(text, "power_max"))
            count = taskblock["power_count"]
            if not isinstance(count, int) or count < 1:
                raise ConfigError(f"power_count must be a positive integer, got {count!r}",
                                  *_locate(text, "power_count"))
            powers = tuple(lo + (hi - lo) * i / max(count - 1, 1) for i in range(count))
        else:
            raise ConfigError("power-sweep needs 'powers' or power_min/power_max/power_count")
        if any(b <= a for a, b in zip(powers, powers[1:])):
            raise ConfigError("powers must be strictly increasing",
                              *_locate(text, "powers"))

    delay_step = None
    if task_type == "delay" and "delay_step" in taskblock:
        delay_step = parse_quantity(taskblock["delay_step"], "frequency",
                                    _locate(text, "delay_step"))
        if delay_step <= 0:
            raise ConfigError("delay_step must be positive",
                              *_locate(text, "delay_step"))

    report = validate_params(system, drive)
    if not report.ok:
        raise ConfigError("validation failed: " + "; ".join(report.errors))

    return RunConfig(system=system, drive=drive, task=task_type, axis=axis,
                     powers=powers, delay_step=delay_step, out=out, format=fmt)
