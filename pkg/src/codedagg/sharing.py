"""Partitioning and the two ramp-sharing rounds.

Round 1 embeds the K partitions of an update in the low coefficients,
followed by T masks::

    F(x)  = w_1 + w_2 x + ... + w_K x^{K-1} + z_1 x^K + ... + z_T x^{K+T-1}

Round 2 (K >= 2 only) reverses the partitions and uses fresh masks::

    F~(x) = w_K + w_{K-1} x + ... + w_1 x^{K-1} + r_1 x^K + ... + r_T x^{K+T-1}

Summing round-1 shares of the selected users gives shares of a polynomial
whose first K coefficients are the partitions of the aggregate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidEvaluationPoint,
    MissingShare,
    NotEnoughShares,
    RoundTwoNotApplicable,
)
from .field import FieldPolynomial, FieldVector, PrimeField, poly_eval
from .reed_solomon import Decoded, decode_vectors
from .rng import uniform


@dataclass(frozen=True)
class LocalUpdate:
    owner: int
    w: FieldVector
    partitions: tuple[FieldVector, ...]
    pad: int = 0

    @property
    def K(self) -> int:
        return len(self.partitions)


def padded_length(L: int, K: int) -> int:
    return -(-L // K) * K


def partition_update(owner: int, w: Sequence[int], K: int) -> LocalUpdate:
    """Split ``w`` into K equal parts, zero-padding it to a multiple of K."""
    if K < 1:
        raise ValueError("K must be at least 1")
    padded = tuple(w) + (0,) * (padded_length(len(w), K) - len(w))
    size = len(padded) // K
    parts = tuple(padded[k * size : (k + 1) * size] for k in range(K))
    return LocalUpdate(owner=owner, w=padded, partitions=parts, pad=len(padded) - len(w))


@dataclass(frozen=True)
class MaskSet:
    z: tuple[FieldVector, ...]
    r: tuple[FieldVector, ...]

    @property
    def T(self) -> int:
        return len(self.z)


def sample_masks(field: PrimeField, T: int, dim: int, rng_z: np.random.Generator,
                 rng_r: np.random.Generator) -> MaskSet:
    z = tuple(tuple(uniform(rng_z, field.p, dim)) for _ in range(T))
    r = tuple(tuple(uniform(rng_r, field.p, dim)) for _ in range(T))
    return MaskSet(z=z, r=r)


def _check_dims(u: LocalUpdate, masks: Sequence[FieldVector]) -> None:
    dim = len(u.partitions[0])
    if any(len(v) != dim for v in (*u.partitions, *masks)):
        raise DimensionMismatch("partitions and masks must share one length")


def build_round1_poly(u: LocalUpdate, m: MaskSet) -> FieldPolynomial:
    _check_dims(u, m.z)
    return FieldPolynomial(tuple(u.partitions) + tuple(m.z))


def build_round2_poly(u: LocalUpdate, m: MaskSet) -> FieldPolynomial:
    if u.K < 2:
        raise RoundTwoNotApplicable("second sharing round requires K >= 2")
    _check_dims(u, m.r)
    return FieldPolynomial(tuple(reversed(u.partitions)) + tuple(m.r))


def make_shares(field: PrimeField, f: FieldPolynomial, alphas: Sequence[int]) -> list[FieldVector]:
    reduced = [a % field.p for a in alphas]
    if 0 in reduced:
        raise InvalidEvaluationPoint("evaluation points must be nonzero")
    if len(set(reduced)) != len(reduced):
        raise InvalidEvaluationPoint(f"duplicate evaluation points in {list(alphas)}")
    return [poly_eval(field, f, a) for a in reduced]


@dataclass
class ShareBundle:
    """Everything one recipient holds from its peers.

    A sender that stayed silent has no entry (the ⊥ case).
    """

    recipient: int
    round1: dict[int, FieldVector] = dc_field(default_factory=dict)
    round2: dict[int, FieldVector] = dc_field(default_factory=dict)
    verified1: dict[int, bool] = dc_field(default_factory=dict)
    verified2: dict[int, bool] = dc_field(default_factory=dict)


def aggregate_shares(field: PrimeField, bundle: ShareBundle, selected: Iterable[int]) -> FieldVector:
    """Sum of the verified round-1 shares of the selected senders."""
    chosen = sorted(selected)
    for s in chosen:
        if s not in bundle.round1 or not bundle.verified1.get(s, False):
            raise MissingShare(s)
    length = len(bundle.round1[chosen[0]]) if chosen else 0
    return field.vsum((bundle.round1[s] for s in chosen), length)


def decode_aggregate(
    field: PrimeField,
    points: Sequence[tuple[int, Optional[Sequence[int]]]],
    K: int,
    T: int,
    A: int,
) -> Decoded:
    """Errors-and-erasures decode of the aggregated round-1 polynomial."""
    live = sum(1 for _, v in points if v is not None)
    need = K + T + 2 * A
    if live < need:
        raise NotEnoughShares(f"{live} aggregate shares received, need {need}")
    alphas = [a for a, _ in points]
    values = [v for _, v in points]
    return decode_vectors(field, alphas, values, K + T - 1, A)


def aggregate_from_poly(poly: FieldPolynomial, K: int, pad: int = 0) -> FieldVector:
    flat = tuple(x for part in poly.coeffs[:K] for x in part)
    return flat[: len(flat) - pad] if pad else flat


def recover_aggregate(
    field: PrimeField,
    points: Sequence[tuple[int, Optional[Sequence[int]]]],
    K: int,
    T: int,
    A: int,
    pad: int = 0,
) -> FieldVector:
    """Sum of the selected updates from aggregated shares ``(alpha, S or None)``.

    Tolerates up to ``A`` wrong shares among the non-erased ones.
    """
    decoded = decode_aggregate(field, points, K, T, A)
    return aggregate_from_poly(decoded.poly, K, pad)


def pooled_transcript_distribution(
    field: PrimeField,
    partitions: Sequence[Sequence[int]],
    T: int,
    colluder_alphas: Sequence[int],
    include_round2: bool = False,
) -> dict[tuple, int]:
    """Exact distribution of what colluders hold about one user, over all masks.

    Enumerates every mask assignment (z, and r when ``include_round2``) for
    scalar partitions (L/K = 1) and counts each pooled share tuple. Tiny
    fields only: the enumeration has p^(T or 2T) terms.
    """
    p = field.p
    parts = [(w % p,) for w in partitions]
    u = LocalUpdate(owner=0, w=tuple(x for (x,) in parts), partitions=tuple(parts))
    counts: dict[tuple, int] = {}
    n_masks = 2 * T if include_round2 else T
    for draw in itertools.product(range(p), repeat=n_masks):
        z = tuple((x,) for x in draw[:T])
        r = tuple((x,) for x in draw[T:]) if include_round2 else tuple((0,) for _ in range(T))
        masks = MaskSet(z=z, r=r)
        view = tuple(make_shares(field, build_round1_poly(u, masks), colluder_alphas))
        if include_round2:
            view += tuple(make_shares(field, build_round2_poly(u, masks), colluder_alphas))
        counts[view] = counts.get(view, 0) + 1
    return counts


def total_variation(a: Mapping[tuple, int], b: Mapping[tuple, int]) -> Fraction:
    """Exact total-variation distance between two count tables."""
    na, nb = sum(a.values()), sum(b.values())
    keys = set(a) | set(b)
    return sum((abs(Fraction(a.get(k, 0), na) - Fraction(b.get(k, 0), nb)) for k in keys),
               Fraction(0)) / 2
