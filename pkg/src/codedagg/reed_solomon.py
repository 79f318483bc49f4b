"""Errors-and-erasures decoding of generalized Reed-Solomon codes.

Codewords are evaluations of a degree-<=d polynomial at arbitrary distinct
points. Erasures (value ``None``) are simply dropped; up to ``a`` wrong
values among the rest are corrected with Berlekamp-Welch, which needs
``n - e >= d + 1 + 2a`` surviving observations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DecodingFailed, DimensionMismatch, DuplicateEvaluationPoint, NotEnoughObservations
from .field import FieldPolynomial, PrimeField, lagrange_interpolate, poly_eval, scalar_eval


@dataclass(frozen=True)
class CodedObservation:
    alpha: int
    value: Optional[int]  # None marks an erasure


@dataclass(frozen=True)
class Decoded:
    """A decoded polynomial together with the points found to be wrong."""

    poly: FieldPolynomial
    error_alphas: tuple[int, ...]

    @property
    def coeffs(self) -> tuple:
        if self.poly.width == 1:
            return self.poly.scalar_coeffs()
        return self.poly.coeffs


def _solve(field: PrimeField, rows: list[list[int]], rhs: list[int]) -> list[int] | None:
    """One solution of a linear system mod p, free variables set to 0."""
    p = field.p
    n_vars = len(rows[0])
    m = [row[:] + [b] for row, b in zip(rows, rhs)]
    pivots: list[int] = []
    r = 0
    for col in range(n_vars):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][col], p - 2, p)
        pivot_row = [x * inv % p for x in m[r]]
        m[r] = pivot_row
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], pivot_row)]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    if any(row[-1] for row in m[r:]):
        return None
    sol = [0] * n_vars
    for i, col in enumerate(pivots):
        sol[col] = m[i][-1]
    return sol


def _divmod(field: PrimeField, num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    p = field.p
    num = num[:]
    while len(den) > 1 and den[-1] == 0:
        den = den[:-1]
    inv_lead = pow(den[-1], p - 2, p)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k] * inv_lead % p
        quot[k - dd] = c
        if c:
            for t in range(dd + 1):
                num[k - dd + t] = (num[k - dd + t] - c * den[t]) % p
    return quot, num[:dd] or [0]


def _check_points(field: PrimeField, alphas: Sequence[int]) -> None:
    reduced = [a % field.p for a in alphas]
    if len(set(reduced)) != len(reduced):
        raise DuplicateEvaluationPoint(f"duplicate evaluation points in {list(alphas)}")


def _berlekamp_welch(
    field: PrimeField, xs: list[int], ys: list[int], degree: int, max_errors: int
) -> tuple[list[int], tuple[int, ...]]:
    p = field.p
    d, a = degree, max_errors
    # unknowns: Q_0..Q_{d+a}, E_0..E_{a-1}; E is monic of degree a
    rows, rhs = [], []
    for x, y in zip(xs, ys):
        xp = [1]
        for _ in range(d + a):
            xp.append(xp[-1] * x % p)
        rows.append(xp[: d + a + 1] + [(-y * xp[k]) % p for k in range(a)])
        rhs.append(y * xp[a] % p)
    sol = _solve(field, rows, rhs)
    if sol is None:
        raise DecodingFailed(f"no degree-{d} polynomial within {a} errors")
    q_poly = sol[: d + a + 1]
    e_poly = sol[d + a + 1 :] + [1]
    f, rem = _divmod(field, q_poly, e_poly)
    if any(rem):
        raise DecodingFailed(f"no degree-{d} polynomial within {a} errors")
    f = (f + [0] * (d + 1))[: d + 1]
    errors = tuple(x for x, y in zip(xs, ys) if scalar_eval(field, f, x) != y % p)
    if len(errors) > a:
        raise DecodingFailed(f"decoded polynomial disagrees with {len(errors)} > {a} points")
    return f, errors


def decode(
    field: PrimeField, obs: Sequence[CodedObservation], degree: int, max_errors: int
) -> Decoded:
    """Recover the degree-<=``degree`` polynomial behind scalar observations."""
    _check_points(field, [o.alpha for o in obs])
    live = [o for o in obs if o.value is not None]
    need = degree + 1 + 2 * max_errors
    if len(live) < need:
        raise NotEnoughObservations(f"{len(live)} observations, need {need}")
    xs = [o.alpha % field.p for o in live]
    ys = [o.value % field.p for o in live]
    coeffs, errors = _berlekamp_welch(field, xs, ys, degree, max_errors)
    return Decoded(FieldPolynomial.scalar(coeffs), errors)


def decode_vectors(
    field: PrimeField,
    alphas: Sequence[int],
    values: Sequence[Optional[Sequence[int]]],
    degree: int,
    max_errors: int,
) -> Decoded:
    """Decode vector-valued observations, one codeword per coordinate.

    A corrupted message usually corrupts every coordinate, so the error
    locator found on coordinate 0 is tried for all of them first; if any
    remaining point then disagrees, every coordinate is decoded on its own.
    """
    if len(alphas) != len(values):
        raise DimensionMismatch("alphas and values differ in length")
    _check_points(field, alphas)
    p = field.p
    live = [(a % p, tuple(v)) for a, v in zip(alphas, values) if v is not None]
    need = degree + 1 + 2 * max_errors
    if len(live) < need:
        raise NotEnoughObservations(f"{len(live)} observations, need {need}")
    width = len(live[0][1])
    if any(len(v) != width for _, v in live):
        raise DimensionMismatch("observation vectors differ in length")
    xs = [a for a, _ in live]

    _, errors = _berlekamp_welch(field, xs, [v[0] for _, v in live], degree, max_errors)
    clean = [(a, v) for a, v in live if a not in errors]
    poly = lagrange_interpolate(field, clean[: degree + 1])
    if all(poly_eval(field, poly, a) == v for a, v in clean[degree + 1 :]):
        return Decoded(poly, errors)

    columns = []
    bad: set[int] = set()
    for t in range(width):
        f, errs = _berlekamp_welch(field, xs, [v[t] for _, v in live], degree, max_errors)
        columns.append(f)
        bad.update(errs)
    coeffs = tuple(tuple(col[k] for col in columns) for k in range(degree + 1))
    return Decoded(FieldPolynomial(coeffs), tuple(a for a in xs if a in bad))
