"""What each simulated user does during a round."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Optional


class Kind(enum.Enum):
    HONEST = "honest"
    DROPOUT = "dropout"
    INVALID_SHARES = "invalid_shares"
    WRONG_DISTANCES = "wrong_distances"
    WRONG_AGGREGATION = "wrong_aggregation"
    POISONED_UPDATE = "poisoned_update"
    COLLUDING = "colluding"


BYZANTINE = frozenset(
    {Kind.INVALID_SHARES, Kind.WRONG_DISTANCES, Kind.WRONG_AGGREGATION, Kind.POISONED_UPDATE}
)

_ALIASES = {k.value.replace("_", ""): k for k in Kind}


@dataclass(frozen=True)
class UserBehavior:
    """One user's role.

    ``step`` is the first protocol step a dropout stays silent at;
    ``rounds`` the sharing rounds an invalid-shares adversary corrupts;
    ``value`` the constant every coordinate of a poisoned update takes.
    """

    kind: Kind = Kind.HONEST
    step: int = 0
    rounds: tuple[int, ...] = (1, 2)
    value: Optional[float] = None

    @property
    def byzantine(self) -> bool:
        return self.kind in BYZANTINE

    def silent_at(self, step: int) -> bool:
        return self.kind is Kind.DROPOUT and step >= self.step

    def __str__(self) -> str:
        if self.kind is Kind.DROPOUT:
            return f"dropout:{self.step}"
        if self.kind is Kind.POISONED_UPDATE:
            return f"poisoned_update:{self.value}"
        if self.kind is Kind.INVALID_SHARES and self.rounds != (1, 2):
            return f"invalid_shares:{','.join(map(str, self.rounds))}"
        return self.kind.value


HONEST = UserBehavior()


def dropout(step: int) -> UserBehavior:
    return UserBehavior(Kind.DROPOUT, step=step)


def parse_behavior(text: str) -> tuple[int, UserBehavior]:
    """Parse ``user_id:kind[:arg]``, e.g. ``4:dropout:7`` or ``9:PoisonedUpdate:5.0``."""
    parts = [s.strip() for s in text.strip().split(":")]
    if len(parts) not in (2, 3):
        raise ValueError(f"behavior {text!r} is not user_id:kind[:arg]")
    user = int(parts[0])
    key = parts[1].lower().replace("_", "").replace("-", "")
    if key not in _ALIASES:
        raise ValueError(f"unknown behavior kind {parts[1]!r}")
    kind = _ALIASES[key]
    arg = parts[2] if len(parts) == 3 else None
    if kind is Kind.DROPOUT:
        if arg is None:
            raise ValueError("dropout needs the step it starts at, e.g. 3:dropout:7")
        step = int(arg)
        if not 1 <= step <= 11:
            raise ValueError(f"dropout step {step} outside 1..11")
        return user, UserBehavior(kind, step=step)
    if kind is Kind.POISONED_UPDATE:
        return user, UserBehavior(kind, value=float(arg) if arg is not None else 100.0)
    if kind is Kind.INVALID_SHARES and arg is not None:
        rounds = tuple(sorted({int(r) for r in arg.split(",")}))
        if not set(rounds) <= {1, 2}:
            raise ValueError(f"invalid_shares rounds must be 1 and/or 2, got {arg}")
        return user, UserBehavior(kind, rounds=rounds)
    if arg is not None:
        raise ValueError(f"behavior {parts[1]!r} takes no argument")
    return user, UserBehavior(kind)


def budget_overruns(behaviors: Mapping[int, UserBehavior], A: int, D: int, T: int) -> list[str]:
    counts = {
        "dropouts": sum(b.kind is Kind.DROPOUT for b in behaviors.values()),
        "byzantine": sum(b.byzantine for b in behaviors.values()),
        "colluding": sum(b.kind is Kind.COLLUDING for b in behaviors.values()),
    }
    limits = {"dropouts": D, "byzantine": A, "colluding": T}
    return [f"{name}: {counts[name]} > budget {limits[name]}"
            for name in counts if counts[name] > limits[name]]
