"""Pairwise squared distances computed from shares.

For K >= 2 a user holding round-1 shares F_i(a), F_j(a) and round-2 shares
F~_i(a), F~_j(a) reports ``<F_i(a) - F_j(a), F~_i(a) - F~_j(a)>``. As a
function of the evaluation point this is a polynomial of degree
2(K+T-1) whose x^(K-1) coefficient is ``||w_i - w_j||^2``: partition k sits
at exponent k-1 in F and K-k in F~, so only matching partitions meet at
K-1, and every mask term lands at an exponent >= K. With K = 1 the reports
are squared norms of round-1 share differences and the distance is the
constant coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DecodingFailed, DimensionMismatch, NegativeLift, NotEnoughObservations
from .field import PrimeField
from .reed_solomon import CodedObservation, decode

Pair = tuple[int, int]


@dataclass(frozen=True)
class DistanceContribution:
    reporter: int
    pair: Pair
    value: Optional[int]  # None: reporter silent


def share_distance(
    field: PrimeField,
    s1_i: Sequence[int],
    s1_j: Sequence[int],
    s2_i: Sequence[int] | None = None,
    s2_j: Sequence[int] | None = None,
) -> int:
    """One user's contribution for the pair (i, j).

    Pass the round-2 shares for K >= 2; leave them out for K = 1.
    """
    if len(s1_i) != len(s1_j):
        raise DimensionMismatch("round-1 shares differ in length")
    p = field.p
    if s2_i is None or s2_j is None:
        return sum((a - b) * (a - b) for a, b in zip(s1_i, s1_j)) % p
    if not len(s2_i) == len(s2_j) == len(s1_i):
        raise DimensionMismatch("round-2 shares differ in length")
    return sum((a - b) * (c - d) for a, b, c, d in zip(s1_i, s1_j, s2_i, s2_j)) % p


def distance_degree(K: int, T: int) -> int:
    return 2 * (K + T - 1)


def decode_pair_distance(
    field: PrimeField,
    observations: Sequence[tuple[int, Optional[int]]],
    K: int,
    T: int,
    A: int,
) -> tuple[int, tuple[int, ...]]:
    """Decode one pair's distance from ``(alpha, value or None)`` reports.

    Returns the lifted distance and the evaluation points found to be wrong.
    """
    obs = [CodedObservation(a, v) for a, v in observations]
    decoded = decode(field, obs, distance_degree(K, T), A)
    value = field.lift(decoded.coeffs[K - 1])
    if value < 0:
        raise NegativeLift(f"recovered distance lifts to {value}; field too small for the data")
    return value, decoded.error_alphas


def recover_pair_distance(
    field: PrimeField,
    contribs: Sequence[DistanceContribution],
    K: int,
    T: int,
    A: int,
    alphas: Mapping[int, int] | None = None,
) -> int:
    pairs = {c.pair for c in contribs}
    if len(pairs) > 1:
        raise ValueError(f"contributions mix pairs {sorted(pairs)}")
    alpha = (lambda u: alphas[u]) if alphas is not None else (lambda u: u)
    value, _ = decode_pair_distance(field, [(alpha(c.reporter), c.value) for c in contribs], K, T, A)
    return value


@dataclass
class DistanceMatrix:
    users: tuple[int, ...]
    entries: dict[Pair, int]
    #: pair -> reporters whose contribution the decoder rejected
    flagged: dict[Pair, tuple[int, ...]] = dc_field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.users)

    def get(self, i: int, j: int) -> int:
        if i == j:
            return 0
        return self.entries[(i, j) if i < j else (j, i)]

    def row(self, i: int) -> dict[int, int]:
        return {j: self.get(i, j) for j in self.users if j != i}

    def lower_triangle(self) -> list[list[int]]:
        return [[self.get(u, v) for v in self.users[:k]] for k, u in enumerate(self.users) if k]

    @classmethod
    def from_function(cls, users: Iterable[int], dist) -> "DistanceMatrix":
        users = tuple(sorted(users))
        return cls(users, {(i, j): dist(i, j) for i, j in combinations(users, 2)})


def build_distance_matrix(
    field: PrimeField,
    reports: Mapping[int, Optional[Mapping[Pair, int]]],
    users: Iterable[int],
    K: int,
    T: int,
    A: int,
    alphas: Mapping[int, int] | None = None,
) -> DistanceMatrix:
    """Recover every pairwise distance among ``users``.

    ``reports`` maps each solicited reporter to its pair->value table, or to
    None if it stayed silent. Any failing pair fails the whole matrix; the
    raised error carries the pair.
    """
    users = tuple(sorted(users))
    reporters = sorted(reports)
    alpha_of = {u: (alphas[u] if alphas is not None else u) for u in reporters}
    user_of = {a % field.p: u for u, a in alpha_of.items()}
    entries: dict[Pair, int] = {}
    flagged: dict[Pair, tuple[int, ...]] = {}
    for pair in combinations(users, 2):
        obs = []
        for rep in reporters:
            table = reports[rep]
            obs.append((alpha_of[rep], None if table is None else table.get(pair)))
        try:
            value, bad = decode_pair_distance(field, obs, K, T, A)
        except (DecodingFailed, NotEnoughObservations, NegativeLift) as exc:
            exc.pair = pair
            exc.args = (f"pair {pair}: {exc}",)
            raise
        entries[pair] = value
        if bad:
            flagged[pair] = tuple(user_of[a] for a in bad)
    return DistanceMatrix(users, entries, flagged)
