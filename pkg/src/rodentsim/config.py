"""Config file handling.

Configs live in one TOML file with three sections: [agent] for the
learner, [protocol] for the environment, [metrics] for analysis
parameters. Every field is optional in the file; missing ones take the
package defaults. Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Union

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .agent import AgentConfig
from .metrics import DISTANCES
from .model import Response, Stimulus
from .protocol import ProtocolConfig


@dataclass(frozen=True)
class MetricsConfig:
    """Analysis parameters: window length and distance name."""

    delta: int = 20
    distance: str = "match"

    def __post_init__(self):
        if self.delta < 1:
            raise ValueError(f"delta must be >= 1, got {self.delta}")
        if self.distance not in DISTANCES:
            known = ", ".join(sorted(DISTANCES))
            raise ValueError(
                f"unknown distance {self.distance!r} (known: {known})")


def agent_config_to_dict(config: AgentConfig) -> dict[str, Any]:
    return dataclasses.asdict(config)


def protocol_config_to_dict(config: ProtocolConfig) -> dict[str, Any]:
    d = dataclasses.asdict(config)
    d["phase_stimuli"] = [s.label for s in config.phase_stimuli]
    d["sweet_target"] = config.sweet_target.label
    return d


def metrics_config_to_dict(config: MetricsConfig) -> dict[str, Any]:
    return dataclasses.asdict(config)


def _check_keys(section: str, data: dict[str, Any], cls) -> None:
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(
            f"unknown key(s) in [{section}]: {', '.join(unknown)}")


def agent_config_from_dict(data: dict[str, Any]) -> AgentConfig:
    _check_keys("agent", data, AgentConfig)
    return AgentConfig(**data)


def protocol_config_from_dict(data: dict[str, Any]) -> ProtocolConfig:
    _check_keys("protocol", data, ProtocolConfig)
    kwargs = dict(data)
    if "phase_stimuli" in kwargs:
        kwargs["phase_stimuli"] = tuple(
            Stimulus.from_label(s) for s in kwargs["phase_stimuli"])
    if "sweet_target" in kwargs:
        kwargs["sweet_target"] = Response.from_label(kwargs["sweet_target"])
    return ProtocolConfig(**kwargs)


def metrics_config_from_dict(data: dict[str, Any]) -> MetricsConfig:
    _check_keys("metrics", data, MetricsConfig)
    return MetricsConfig(**data)


def load_config(
    path: Union[str, Path],
) -> tuple[AgentConfig, ProtocolConfig, MetricsConfig]:
    """Read a TOML config file; absent sections and fields default."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    unknown = sorted(set(data) - {"agent", "protocol", "metrics"})
    if unknown:
        raise ValueError(
            f"unknown section(s) in {path}: {', '.join(unknown)}")
    return (
        agent_config_from_dict(data.get("agent", {})),
        protocol_config_from_dict(data.get("protocol", {})),
        metrics_config_from_dict(data.get("metrics", {})),
    )


def _toml_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise TypeError(f"cannot write {type(value).__name__} to TOML")


def default_config_toml() -> str:
    """The full default configuration as TOML text, every field spelled
    out so a copy serves as an editable template."""
    sections = [
        ("agent", agent_config_to_dict(AgentConfig())),
        ("protocol", protocol_config_to_dict(ProtocolConfig())),
        ("metrics", metrics_config_to_dict(MetricsConfig())),
    ]
    lines = []
    for name, fields in sections:
        lines.append(f"[{name}]")
        for key, value in fields.items():
            lines.append(f"{key} = {_toml_value(value)}")
        lines.append("")
    return "\n".join(lines)


def write_default_config(path: Union[str, Path]) -> None:
    Path(path).write_text(default_config_toml(), encoding="utf-8")
