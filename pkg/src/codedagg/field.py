"""Arithmetic over GF(p): scalars, vectors and vector-valued polynomials.

Field elements are plain Python ints in ``[0, p)``; vectors are tuples of
them. Every operation takes the field explicitly, so one process can use
tiny test fields and the 61-bit production field side by side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import sympy

from .errors import DimensionMismatch, DivisionByZero, DuplicateEvaluationPoint

FieldVector = tuple[int, ...]

#: Default modulus for desk-scale runs, 2^61 - 1.
MERSENNE_61 = (1 << 61) - 1


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self) -> None:
        if self.p < 2 or not sympy.isprime(self.p):
            raise ValueError(f"field modulus {self.p} is not prime")

    @property
    def byte_width(self) -> int:
        return (self.p.bit_length() + 7) // 8

    def __call__(self, value: int) -> int:
        return value % self.p

    # -- scalars -----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        """Inverse by Fermat's little theorem, ``a^(p-2) mod p``."""
        if a % self.p == 0:
            raise DivisionByZero(f"0 has no inverse mod {self.p}")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.p

    def pow(self, a: int, e: int) -> int:
        return pow(a, e, self.p)

    def lift(self, a: int) -> int:
        """Centered representative of ``a`` in ``(-p/2, p/2]``."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a

    # -- vectors -----------------------------------------------------------

    def vector(self, values: Iterable[int]) -> FieldVector:
        return tuple(v % self.p for v in values)

    def zeros(self, n: int) -> FieldVector:
        return (0,) * n

    def vadd(self, u: Sequence[int], v: Sequence[int]) -> FieldVector:
        _same_length(u, v)
        p = self.p
        return tuple((a + b) % p for a, b in zip(u, v))

    def vsub(self, u: Sequence[int], v: Sequence[int]) -> FieldVector:
        _same_length(u, v)
        p = self.p
        return tuple((a - b) % p for a, b in zip(u, v))

    def vscale(self, c: int, v: Sequence[int]) -> FieldVector:
        p = self.p
        return tuple(c * a % p for a in v)

    def vsum(self, vectors: Iterable[Sequence[int]], length: int) -> FieldVector:
        acc = [0] * length
        for v in vectors:
            if len(v) != length:
                raise DimensionMismatch(f"expected length {length}, got {len(v)}")
            for k, a in enumerate(v):
                acc[k] += a
        p = self.p
        return tuple(a % p for a in acc)

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        _same_length(u, v)
        return sum(a * b for a, b in zip(u, v)) % self.p

    def sqnorm(self, v: Sequence[int]) -> int:
        return sum(a * a for a in v) % self.p

    def vector_to_bytes(self, v: Sequence[int]) -> bytes:
        width = self.byte_width
        return b"".join(a.to_bytes(width, "big") for a in v)

    def vector_from_bytes(self, data: bytes) -> FieldVector:
        width = self.byte_width
        if len(data) % width:
            raise ValueError(f"byte length {len(data)} not a multiple of {width}")
        out = tuple(
            int.from_bytes(data[i : i + width], "big") for i in range(0, len(data), width)
        )
        if any(a >= self.p for a in out):
            raise ValueError("encoded element out of range")
        return out


def _same_length(u: Sequence[int], v: Sequence[int]) -> None:
    if len(u) != len(v):
        raise DimensionMismatch(f"vector lengths differ: {len(u)} != {len(v)}")


@dataclass(frozen=True)
class FieldPolynomial:
    """Polynomial with vector coefficients, ascending degree.

    Scalar polynomials are the width-1 case; see :meth:`scalar`.
    """

    coeffs: tuple[FieldVector, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("polynomial needs at least one coefficient")
        width = len(self.coeffs[0])
        if any(len(c) != width for c in self.coeffs):
            raise DimensionMismatch("coefficient vectors differ in length")

    @classmethod
    def scalar(cls, coeffs: Iterable[int]) -> "FieldPolynomial":
        return cls(tuple((c,) for c in coeffs))

    @property
    def width(self) -> int:
        return len(self.coeffs[0])

    def trimmed(self) -> "FieldPolynomial":
        n = len(self.coeffs)
        while n > 1 and not any(self.coeffs[n - 1]):
            n -= 1
        return FieldPolynomial(self.coeffs[:n])

    @property
    def degree(self) -> int:
        """Degree after dropping trailing zero coefficients (0 for the zero polynomial)."""
        return len(self.trimmed().coeffs) - 1

    def scalar_coeffs(self) -> tuple[int, ...]:
        if self.width != 1:
            raise DimensionMismatch("not a scalar polynomial")
        return tuple(c[0] for c in self.coeffs)


def poly_eval(field: PrimeField, f: FieldPolynomial, x: int) -> FieldVector:
    """Horner evaluation of a vector polynomial at ``x``."""
    p = field.p
    acc = list(f.coeffs[-1])
    for c in reversed(f.coeffs[:-1]):
        acc = [(a * x + b) % p for a, b in zip(acc, c)]
    return tuple(a % p for a in acc)


def scalar_eval(field: PrimeField, coeffs: Sequence[int], x: int) -> int:
    p = field.p
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def lagrange_basis(field: PrimeField, xs: Sequence[int]) -> list[list[int]]:
    """Coefficient lists of the Lagrange basis polynomials on ``xs``.

    ``basis[i]`` is 1 at ``xs[i]`` and 0 at every other node.
    """
    p = field.p
    xs = [x % p for x in xs]
    if len(set(xs)) != len(xs):
        raise DuplicateEvaluationPoint(f"duplicate x-coordinates in {xs}")
    n = len(xs)
    # master polynomial prod (x - x_i), ascending coefficients
    master = [1]
    for xi in xs:
        nxt = [0] * (len(master) + 1)
        for k, c in enumerate(master):
            nxt[k] = (nxt[k] - xi * c) % p
            nxt[k + 1] = (nxt[k + 1] + c) % p
        master = nxt
    basis = []
    for i, xi in enumerate(xs):
        # synthetic division of master by (x - xi)
        quot = [0] * n
        carry = 0
        for k in range(n, 0, -1):
            carry = (master[k] + carry * xi) % p
            quot[k - 1] = carry
        denom = 1
        for j, xj in enumerate(xs):
            if j != i:
                denom = denom * (xi - xj) % p
        scale = pow(denom, p - 2, p)
        basis.append([c * scale % p for c in quot])
    return basis


def lagrange_interpolate(
    field: PrimeField, points: Sequence[tuple[int, Sequence[int]]]
) -> FieldPolynomial:
    """The unique polynomial of degree < len(points) through ``points``.

    The result carries exactly ``len(points)`` coefficients; call
    :meth:`FieldPolynomial.trimmed` for the normalized form.
    """
    if not points:
        raise ValueError("need at least one point")
    xs = [x for x, _ in points]
    ys = [tuple(y) for _, y in points]
    width = len(ys[0])
    if any(len(y) != width for y in ys):
        raise DimensionMismatch("point values differ in length")
    basis = lagrange_basis(field, xs)
    p = field.p
    n = len(points)
    coeffs = []
    for k in range(n):
        acc = [0] * width
        for b, y in zip(basis, ys):
            bk = b[k]
            if bk:
                for t in range(width):
                    acc[t] += bk * y[t]
        coeffs.append(tuple(a % p for a in acc))
    return FieldPolynomial(tuple(coeffs))
