"""Versioned JSON checkpoints: config, shapes and flat parameter arrays."""
from __future__ import annotations

import json
from pathlib import Path

from .config import RLConfig
from .network import Network

VERSION = 1


def dumps(net: Network, cfg: RLConfig) -> str:
    body = {"version": VERSION, "config": cfg.to_dict(), **net.to_json()}
    return json.dumps(body, sort_keys=True)


def loads(text: str) -> tuple[Network, RLConfig]:
    obj = json.loads(text)
    if obj.get("version") != VERSION:
        raise ValueError(f"unsupported checkpoint version {obj.get('version')!r}")
    return Network.from_json(obj), RLConfig.from_dict(obj["config"])


def save(net: Network, cfg: RLConfig, path: str | Path) -> None:
    Path(path).write_text(dumps(net, cfg) + "\n")


def load(path: str | Path) -> tuple[Network, RLConfig]:
    return loads(Path(path).read_text())
