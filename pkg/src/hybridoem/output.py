"""Result envelopes and CSV/JSON serialization.

Every emitted file is self-describing: it carries the software version,
the amplitude convention, the warnings raised during the run, and a full
echo of the resolved configuration.  Re-parsing that echo and re-running
reproduces the file byte for byte (numbers are written as shortest
round-trip decimals).

CSV layout: ``#``-prefixed metadata lines, a mandatory header row, then
data rows.  JSON carries the same fields under ``results.columns`` plus
any task-level scalars under ``results.scalars``.
"""

import json
from dataclasses import dataclass, field

__all__ = ["ResultEnvelope", "emit_results", "parse_json_envelope",
           "read_csv_config_echo"]

VERSION = "0.1.0"


@dataclass
class ResultEnvelope:
    """Task output plus everything needed to reproduce it."""

    task: str
    config: dict
    columns: dict
    scalars: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    convention: str = "standard"
    version: str = VERSION


def _fmt(value):
    """Shortest round-trip text for one CSV cell."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    return str(value)


def _csv_bytes(env):
    lines = [
        f"# hybridoem {env.version}",
        f"# task: {env.task}",
        f"# convention: {env.convention}",
        f"# config: {json.dumps(env.config, separators=(',', ':'))}",
        f"# warnings: {json.dumps(env.warnings, separators=(',', ':'))}",
    ]
    for key in sorted(env.scalars):
        lines.append(f"# {key}: {_fmt(env.scalars[key])}")
    names = list(env.columns)
    lines.append(",".join(names))
    if names:
        length = len(env.columns[names[0]])
        for i in range(length):
            lines.append(",".join(_fmt(env.columns[name][i]) for name in names))
    return ("\n".join(lines) + "\n").encode()


def _json_bytes(env):
    doc = {
        "version": env.version,
        "task": env.task,
        "convention": env.convention,
        "config": env.config,
        "warnings": env.warnings,
        "results": {"columns": env.columns, "scalars": env.scalars},
    }
    return (json.dumps(doc, indent=2) + "\n").encode()


def emit_results(env, fmt):
    """Serialize an envelope to bytes (fmt = 'csv' or 'json')."""
    if fmt == "csv":
        return _csv_bytes(env)
    if fmt == "json":
        return _json_bytes(env)
    raise ValueError(f"unknown format {fmt!r}")


def parse_json_envelope(data):
    """Inverse of the JSON emitter (bytes or str -> plain dict)."""
    if isinstance(data, bytes):
        data = data.decode()
    return json.loads(data)


def read_csv_config_echo(data):
    """Extract the config echo from an emitted CSV file."""
    if isinstance(data, bytes):
        data = data.decode()
    for line in data.splitlines():
        if line.startswith("# config: "):
            return json.loads(line[len("# config: "):])
    raise ValueError("no config echo found in CSV data")
