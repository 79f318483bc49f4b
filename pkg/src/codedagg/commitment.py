"""Constant-size homomorphic vector commitments and share verification.

The group is the order-p subgroup of Z_q^* with q = c*p + 1. A vector v of
length dim commits to ``prod_j (g^{beta^j})^{v_j} = g^{<v, (1, beta, ...)>}``,
which is linear in v: products of commitments raised to public powers
commit to the same linear combination of the vectors. Share verification
for both sharing rounds rests on that property.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import gmpy2
import sympy

from .errors import DimensionMismatch, InvalidGroup, RoundTwoNotApplicable
from .field import MERSENNE_61, FieldVector, PrimeField
from .rng import stream, uniform_nonzero

MAGIC = b"CAGG"


@dataclass(frozen=True)
class PrimeOrderGroup:
    """Subgroup of order ``p`` in the multiplicative group mod ``q``."""

    p: int
    q: int
    g: int

    def __post_init__(self) -> None:
        if not sympy.isprime(self.p) or not sympy.isprime(self.q):
            raise InvalidGroup(f"p={self.p} and q={self.q} must both be prime")
        if (self.q - 1) % self.p or (self.q - 1) // self.p < 2:
            raise InvalidGroup(f"q={self.q} is not c*p + 1 with c >= 2")
        if not 1 < self.g < self.q or pow(self.g, self.p, self.q) != 1:
            raise InvalidGroup(f"g={self.g} does not have order {self.p} mod {self.q}")

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def byte_width(self) -> int:
        return (self.q.bit_length() + 7) // 8

    def exp(self, base: int, e: int) -> int:
        return int(gmpy2.powmod(base, e % self.p, self.q))

    def mul(self, a: int, b: int) -> int:
        return a * b % self.q

    def element_to_bytes(self, h: int) -> bytes:
        return h.to_bytes(self.byte_width, "big")

    def security_warning(self, kappa: int) -> str | None:
        if self.p.bit_length() - 1 < 2 * kappa:
            return (
                f"group order p ({self.p.bit_length()} bits) is below 2^(2*kappa) "
                f"for kappa={kappa}; commitments are not computationally hiding "
                f"at this size"
            )
        return None


def find_group(p: int) -> PrimeOrderGroup:
    """Smallest q = c*p + 1 (c even, c >= 2) that is prime, with a generator."""
    if not sympy.isprime(p):
        raise InvalidGroup(f"{p} is not prime")
    c = 2
    while not sympy.isprime(c * p + 1):
        c += 2
    q = c * p + 1
    h = 2
    while pow(h, c, q) == 1:
        h += 1
    return PrimeOrderGroup(p=p, q=q, g=pow(h, c, q))


@lru_cache(maxsize=None)
def default_group() -> PrimeOrderGroup:
    return find_group(MERSENNE_61)


#: Small group used throughout the tests: 4 has order 11 modulo 23.
TINY_GROUP = (11, 23, 4)


@dataclass(frozen=True)
class PublicParams:
    """Committing key ``(g^{beta^0}, ..., g^{beta^{dim-1}})``."""

    group: PrimeOrderGroup
    powers: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.powers)

    def to_bytes(self) -> bytes:
        grp = self.group
        width = grp.byte_width
        out = [MAGIC]
        for value in (grp.q, grp.g, grp.p):
            raw = value.to_bytes((value.bit_length() + 7) // 8 or 1, "big")
            out.append(struct.pack(">I", len(raw)) + raw)
        out.append(struct.pack(">I", self.dim))
        out.extend(h.to_bytes(width, "big") for h in self.powers)
        return b"".join(out)

    @classmethod
    def from_bytes(cls, blob: bytes) -> "PublicParams":
        if blob[:4] != MAGIC:
            raise ValueError("bad magic header")
        pos = 4
        values = []
        for _ in range(3):
            (n,) = struct.unpack_from(">I", blob, pos)
            pos += 4
            values.append(int.from_bytes(blob[pos : pos + n], "big"))
            pos += n
        q, g, p = values
        group = PrimeOrderGroup(p=p, q=q, g=g)
        (dim,) = struct.unpack_from(">I", blob, pos)
        pos += 4
        width = group.byte_width
        if len(blob) != pos + dim * width:
            raise ValueError("truncated or oversized public-parameter blob")
        powers = tuple(
            int.from_bytes(blob[pos + k * width : pos + (k + 1) * width], "big")
            for k in range(dim)
        )
        return cls(group=group, powers=powers)


def trusted_setup(
    group: PrimeOrderGroup, dim: int, rng_seed: int, beta: int | None = None
) -> tuple[PublicParams, int]:
    """Sample beta from F_p \\ {0} and publish the powers g^{beta^j}.

    ``beta`` is returned for test oracles only; protocol code must drop it.
    Passing ``beta`` forces the trapdoor (tests only).
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    p = group.p
    if beta is None:
        beta = uniform_nonzero(stream(rng_seed, 0, "setup"), p)
    beta %= p
    if beta == 0:
        raise ValueError("beta must be nonzero")
    powers = []
    e = 1
    for _ in range(dim):
        powers.append(pow(group.g, e, group.q))
        e = e * beta % p
    return PublicParams(group=group, powers=tuple(powers)), beta


def commit(pp: PublicParams, v: Sequence[int]) -> int:
    if len(v) != pp.dim:
        raise DimensionMismatch(f"vector length {len(v)} != committing key length {pp.dim}")
    q, p = gmpy2.mpz(pp.group.q), pp.group.p
    powmod = gmpy2.powmod
    acc = gmpy2.mpz(1)
    for base, e in zip(pp.powers, v):
        e %= p
        if e:
            acc = acc * powmod(base, e, q) % q
    return int(acc)


@dataclass(frozen=True)
class CommitmentSet:
    """The K + 2T group elements one user broadcasts.

    ``h[0:K]`` commit the update partitions, ``h[K:K+T]`` the round-1 masks
    and ``h[K+T:K+2T]`` the round-2 masks (0-based here).
    """

    owner: int
    K: int
    T: int
    h: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.h) != self.K + 2 * self.T:
            raise DimensionMismatch(f"expected {self.K + 2 * self.T} commitments, got {len(self.h)}")

    def to_bytes(self, group: PrimeOrderGroup) -> bytes:
        return b"".join(group.element_to_bytes(x) for x in self.h)


def commit_user(
    pp: PublicParams,
    owner: int,
    partitions: Sequence[FieldVector],
    z: Sequence[FieldVector],
    r: Sequence[FieldVector],
) -> CommitmentSet:
    if len(z) != len(r):
        raise DimensionMismatch("round-1 and round-2 mask counts differ")
    h = tuple(commit(pp, v) for v in (*partitions, *z, *r))
    return CommitmentSet(owner=owner, K=len(partitions), T=len(z), h=h)


@dataclass(frozen=True)
class Verification:
    """Outcome of a share check; truthy iff the share is valid."""

    ok: bool
    reason: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def _multi_exp(group: PrimeOrderGroup, bases: Sequence[int], exps: Sequence[int]) -> int:
    q = gmpy2.mpz(group.q)
    acc = gmpy2.mpz(1)
    for b, e in zip(bases, exps):
        acc = acc * gmpy2.powmod(b, e % group.p, q) % q
    return int(acc)


def _check_shape(pp: PublicParams, commits: CommitmentSet, share: Sequence[int]) -> Verification | None:
    if len(share) != pp.dim:
        return Verification(False, "share_length")
    if any(not 0 <= s < pp.group.p for s in share):
        return Verification(False, "share_out_of_range")
    if any(not 0 < x < pp.group.q for x in commits.h):
        return Verification(False, "commitment_out_of_range")
    return None


def verify_round1(
    pp: PublicParams, commits: CommitmentSet, share: Sequence[int], alpha: int
) -> Verification:
    """Check ``commit(share) == prod_{j<K+T} h_j^{alpha^j}``."""
    bad = _check_shape(pp, commits, share)
    if bad is not None:
        return bad
    p = pp.group.p
    n = commits.K + commits.T
    exps = [pow(alpha, j, p) for j in range(n)]
    rhs = _multi_exp(pp.group, commits.h[:n], exps)
    if commit(pp, share) != rhs:
        return Verification(False, "mismatch")
    return Verification(True)


def verify_round2(
    pp: PublicParams, commits: CommitmentSet, share: Sequence[int], alpha: int
) -> Verification:
    """Check a second-round share against the same commitments.

    Partition k (0-based) enters with exponent alpha^(K-1-k), the reverse of
    its round-1 position, and round-2 mask t with alpha^(K+t).
    """
    K, T = commits.K, commits.T
    if K < 2:
        raise RoundTwoNotApplicable("second sharing round requires K >= 2")
    bad = _check_shape(pp, commits, share)
    if bad is not None:
        return bad
    p = pp.group.p
    bases = list(commits.h[:K]) + list(commits.h[K + T :])
    exps = [pow(alpha, K - 1 - k, p) for k in range(K)]
    exps += [pow(alpha, K + t, p) for t in range(T)]
    if commit(pp, share) != _multi_exp(pp.group, bases, exps):
        return Verification(False, "mismatch")
    return Verification(True)
