"""Exhaustive checks over tiny fields.

Each check enumerates its whole input space, so a pass covers that field
size completely rather than by sampling. ``run_all`` is what ``codedagg selftest``
executes; the test suite calls the same functions.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

from .commitment import PrimeOrderGroup, TINY_GROUP, commit, trusted_setup
from .field import PrimeField, lagrange_interpolate, scalar_eval
from .reed_solomon import CodedObservation, decode
from .sharing import pooled_transcript_distribution, total_variation


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    cases: int
    detail: str = ""
    seconds: float = 0.0


def check_inverses(primes=(11, 17, 31)) -> CheckResult:
    cases = 0
    for p in primes:
        F = PrimeField(p)
        for a in range(1, p):
            cases += 1
            if F.mul(a, F.inv(a)) != 1:
                return CheckResult("field inverses", False, cases, f"p={p}, a={a}")
    return CheckResult("field inverses", True, cases)


def check_interpolation(primes=(11, 17, 31)) -> CheckResult:
    """Every polynomial of degree <= 1 (and <= 2 at p=11) survives eval + interpolate."""
    cases = 0
    for p in primes:
        F = PrimeField(p)
        degrees = (1, 2) if p == 11 else (1,)
        for d in degrees:
            xs = list(range(1, d + 2))
            for coeffs in itertools.product(range(p), repeat=d + 1):
                cases += 1
                pts = [(x, (scalar_eval(F, coeffs, x),)) for x in xs]
                got = lagrange_interpolate(F, pts).scalar_coeffs()
                if got != coeffs:
                    return CheckResult("interpolation round-trip", False, cases, f"p={p}, f={coeffs}")
    return CheckResult("interpolation round-trip", True, cases)


def check_distance_identity(p: int = 11) -> CheckResult:
    """K=2, T=1, L/K=1: the x^1 coefficient of the share product is |w_i - w_j|^2.

    The share product depends on the two users' polynomials only through
    their difference, so enumerating every difference (dw1, dw2, dz, dr)
    covers every pair of users.
    """
    F = PrimeField(p)
    xs = list(range(1, 6))  # degree 2(K+T-1) = 4 needs five points
    cases = 0
    for dw1, dw2, dz, dr in itertools.product(range(p), repeat=4):
        cases += 1
        f1 = (dw1, dw2, dz)
        f2 = (dw2, dw1, dr)
        pts = [(x, (scalar_eval(F, f1, x) * scalar_eval(F, f2, x) % p,)) for x in xs]
        coeffs = lagrange_interpolate(F, pts).scalar_coeffs()
        if coeffs[1] != (dw1 * dw1 + dw2 * dw2) % p:
            return CheckResult("distance identity", False, cases, f"difference {(dw1, dw2, dz, dr)}")
    return CheckResult("distance identity", True, cases)


def check_privacy(p: int = 11) -> CheckResult:
    """One colluder's round-1 share (T=1, L/K=1) has a w-independent law."""
    F = PrimeField(p)
    cases = 0
    worst = 0
    for K in (1, 2):
        for alpha in range(1, p):
            ref = pooled_transcript_distribution(F, [0] * K, 1, [alpha])
            for w in itertools.product(range(p), repeat=K):
                cases += 1
                tv = total_variation(ref, pooled_transcript_distribution(F, list(w), 1, [alpha]))
                if tv != 0:
                    return CheckResult("ramp privacy", False, cases, f"K={K}, alpha={alpha}, w={w}, TV={tv}")
                worst = max(worst, tv)
    return CheckResult("ramp privacy", True, cases, f"max total variation {worst}")


def check_single_corruptions(p: int = 17) -> CheckResult:
    """3 + 5x seen at alphas 1..5; every single wrong value at every position decodes."""
    F = PrimeField(p)
    true = (3, 5)
    alphas = list(range(1, 6))
    clean = [scalar_eval(F, true, a) for a in alphas]
    cases = 0
    for pos, a_bad in enumerate(alphas):
        for wrong in range(p):
            if wrong == clean[pos]:
                continue
            cases += 1
            ys = list(clean)
            ys[pos] = wrong
            out = decode(F, [CodedObservation(a, y) for a, y in zip(alphas, ys)], 1, 1)
            if out.coeffs[:2] != true or out.error_alphas != (a_bad,):
                return CheckResult("RS single corruptions", False, cases, f"alpha={a_bad}, value={wrong}")
    return CheckResult("RS single corruptions", True, cases)


def check_commitment_binding() -> CheckResult:
    """p=11, dim=1: distinct scalars commit to distinct group elements."""
    group = PrimeOrderGroup(*TINY_GROUP)
    pp, _ = trusted_setup(group, 1, 0)
    seen: dict[int, int] = {}
    for v in range(group.p):
        h = commit(pp, (v,))
        if h in seen:
            return CheckResult("commitment binding", False, v + 1, f"{seen[h]} and {v} collide")
        seen[h] = v
    return CheckResult("commitment binding", True, group.p)


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_inverses,
    check_interpolation,
    check_distance_identity,
    check_privacy,
    check_single_corruptions,
    check_commitment_binding,
)


def run_all() -> list[CheckResult]:
    out = []
    for fn in CHECKS:
        t0 = time.perf_counter()
        res = fn()
        out.append(CheckResult(res.name, res.ok, res.cases, res.detail, time.perf_counter() - t0))
    return out
