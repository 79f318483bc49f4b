"""Message ledger and normalized communication loads.

Loads count field elements. The per-user load is everything users send,
normalized by N*L; the server load is everything the server receives,
normalized by L. Commitments are group elements and are tallied on their
own. When K does not divide L the transmitted length is the padded L, and
both measured and closed-form loads are normalized by it; the BREA
comparison row keeps the unpadded L.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator, Union

from .params import ProtocolParams

SERVER = "server"
ALL = "all"

Endpoint = Union[int, str]

FIELD_KINDS = frozenset({"share_round1", "share_round2", "published_share", "distances", "aggregate_share"})


@dataclass(frozen=True)
class Message:
    step: int
    sender: Endpoint
    recipient: Endpoint
    kind: str
    elements: int
    unit: str = "field"  # "field", "group", "id" or "flag"


@dataclass
class Ledger:
    messages: list[Message] = dc_field(default_factory=list)

    def record(self, step: int, sender: Endpoint, recipient: Endpoint, kind: str,
               elements: int, unit: str = "field") -> None:
        self.messages.append(Message(step, sender, recipient, kind, elements, unit))

    def __iter__(self) -> Iterator[Message]:
        return iter(self.messages)

    def __len__(self) -> int:
        return len(self.messages)

    def field_sent_by_users(self) -> int:
        return sum(m.elements for m in self.messages
                   if m.unit == "field" and m.sender != SERVER)

    def field_received_by_server(self) -> int:
        return sum(m.elements for m in self.messages
                   if m.unit == "field" and m.recipient == SERVER)

    def group_elements(self) -> int:
        return sum(m.elements for m in self.messages if m.unit == "group")

    def totals_by_kind(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for m in self.messages:
            out[m.kind] = out.get(m.kind, 0) + m.elements
        return dict(sorted(out.items()))


@dataclass(frozen=True)
class Loads:
    server: Fraction
    user: Fraction
    commitments: int


def theoretical_loads(N: int, L: int, K: int, T: int, A: int) -> Loads:
    """Closed forms of the scheme: server load (equality), per-user load (upper bound)."""
    pairs = Fraction(N * (N - 1), L)
    server = 1 + Fraction(2 * A + T, K) + (T + A + K - Fraction(1, 2)) * pairs
    user = min(Fraction(2 * N, K), Fraction(N)) + pairs / 2
    return Loads(server=server, user=user, commitments=N * (K + 2 * T))


def brea_loads(N: int, L: int, T: int, A: int) -> Loads:
    """BREA row for comparison: per-element commitments, Shamir sharing."""
    pairs = Fraction(N * (N - 1), L)
    server = (2 * A + T + 1) + (T + A + Fraction(1, 2)) * pairs
    user = N + pairs / 2
    return Loads(server=server, user=user, commitments=T * N * L)


@dataclass(frozen=True)
class LoadReport:
    measured: Loads
    theoretical: Loads
    brea: Loads
    commit_size_per_user: int
    epsilon: Fraction        # measured server load minus its first (aggregation) term
    epsilon_bound: Fraction  # (K+T+A-1/2) N(N-1)/L
    normalizer: int          # the L used for normalization

    @property
    def server_within_bound(self) -> bool:
        return self.measured.server <= self.theoretical.server

    @property
    def user_within_bound(self) -> bool:
        return self.measured.user <= self.theoretical.user


def account_loads(ledger: Ledger, pp: ProtocolParams) -> LoadReport:
    N, K, T, A = pp.N, pp.K, pp.T, pp.A
    L = pp.padded_L
    measured = Loads(
        server=Fraction(ledger.field_received_by_server(), L),
        user=Fraction(ledger.field_sent_by_users(), N * L),
        commitments=ledger.group_elements(),
    )
    theory = theoretical_loads(N, L, K, T, A)
    return LoadReport(
        measured=measured,
        theoretical=theory,
        brea=brea_loads(N, pp.L, T, A),  # no partitioning, so no padding
        commit_size_per_user=K + 2 * T,
        epsilon=measured.server - (1 + Fraction(2 * A + T, K)),
        epsilon_bound=(K + T + A - Fraction(1, 2)) * Fraction(N * (N - 1), L),
        normalizer=L,
    )
