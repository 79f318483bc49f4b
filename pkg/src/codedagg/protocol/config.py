"""Flat key-value scenario files.

Example::

    # flagship
    p = 2305843009213693951
    q = 119903836479112085453
    g = 4503599627370496
    N = 15
    ...
    3:invalid_shares
    8:dropout:7

Lines ``key = value`` set parameters; lines ``user_id:kind[:arg]`` set
behaviors. ``#`` starts a comment.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Mapping

from ..errors import ConfigError
from ..rng import stream
from .behaviors import UserBehavior, parse_behavior
from .params import ProtocolParams

REQUIRED = {
    "p": int, "q": int, "g": int, "N": int, "L": int, "K": int, "T": int, "A": int,
    "D": int, "m": int, "seed": int, "scale_bits": int, "clip": float,
}
OPTIONAL = {"kappa": int, "update_mean": float, "update_std": float}

SEED_ENV = "CODEDAGG_SEED"

_BEHAVIOR_LINE = re.compile(r"^\s*\d+\s*:")


@dataclass
class Scenario:
    params: ProtocolParams
    behaviors: dict[int, UserBehavior] = dc_field(default_factory=dict)
    update_mean: float = 0.0
    update_std: float = 0.1

    def updates(self) -> list[list[float]]:
        """Deterministic plaintext updates, one Gaussian vector per user."""
        pp = self.params
        out = []
        for u in range(1, pp.N + 1):
            rng = stream(pp.seed, u, "update")
            out.append([float(x) for x in self.update_mean + self.update_std * rng.standard_normal(pp.L)])
        return out


def parse_scenario(text: str, env: Mapping[str, str] | None = None) -> Scenario:
    values: dict[str, object] = {}
    behaviors: dict[int, UserBehavior] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if _BEHAVIOR_LINE.match(line):
            try:
                user, b = parse_behavior(line)
            except ValueError as exc:
                raise ConfigError(str(exc), lineno) from exc
            if user in behaviors:
                raise ConfigError(f"second behavior for user {user}", lineno)
            behaviors[user] = b
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value' or 'user:kind', got {line!r}", lineno)
        key, _, value = (s.strip() for s in line.partition("="))
        conv = REQUIRED.get(key) or OPTIONAL.get(key)
        if conv is None:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        try:
            values[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r}", lineno) from exc
    missing = [k for k in REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    env = os.environ if env is None else env
    if env.get(SEED_ENV):
        try:
            values["seed"] = int(env[SEED_ENV])
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV}={env[SEED_ENV]!r} is not an integer") from exc
    N = values["N"]
    bad_users = [u for u in behaviors if not 1 <= u <= N]
    if bad_users:
        raise ConfigError(f"behaviors for users outside 1..{N}: {bad_users}")
    extra = {k: values.pop(k) for k in list(values) if k in ("update_mean", "update_std")}
    params = ProtocolParams(**values)
    return Scenario(params=params, behaviors=behaviors, **extra)


def load_scenario(path: str | Path, env: Mapping[str, str] | None = None) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_scenario(text, env)
