"""Multi-Krum selection over a recovered distance matrix.

Scores and selection use exact integers, so runs are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .distance import DistanceMatrix
from .errors import ResilienceBoundViolated


@dataclass(frozen=True)
class KrumScores:
    scores: dict[int, int]
    neighbor_count: int
    byzantine: int

    @property
    def n(self) -> int:
        return len(self.scores)


@dataclass(frozen=True)
class SelectionResult:
    selected: tuple[int, ...]  # ordered by (score, id)
    scores: KrumScores


def krum_scores(dm: DistanceMatrix, A: int) -> KrumScores:
    """Score each user by the sum of its N-A-2 smallest squared distances."""
    N = dm.n
    if N <= 2 * A + 2:
        raise ResilienceBoundViolated(f"Krum needs N > 2A+2, got N={N}, A={A}")
    k = N - A - 2
    scores = {}
    for i in dm.users:
        # (distance, id) order; only the sum matters, ties cannot change it
        nearest = sorted((d, j) for j, d in dm.row(i).items())[:k]
        scores[i] = sum(d for d, _ in nearest)
    return KrumScores(scores=scores, neighbor_count=k, byzantine=A)


def multi_krum_select(scores: KrumScores, m: int, *, check_bound: bool = True) -> SelectionResult:
    """The ``m`` lowest-scoring users, ties going to the lower id.

    ``check_bound=False`` skips the N > 2A+2+m requirement (tests of the
    ranking itself only).
    """
    N, A = scores.n, scores.byzantine
    if m < 1 or m > N:
        raise ValueError(f"m={m} out of range for N={N}")
    if check_bound and N <= 2 * A + 2 + m:
        raise ResilienceBoundViolated(f"multi-Krum needs N > 2A+2+m, got N={N}, A={A}, m={m}")
    ranked = sorted(scores.scores, key=lambda u: (scores.scores[u], u))
    return SelectionResult(selected=tuple(ranked[:m]), scores=scores)


def eta(N: int, A: int) -> Fraction:
    """Resilience factor 2(N - A + (A(N-A-2) + A^2(N-A-1)) / (N-2A-2))."""
    if N <= 2 * A + 2:
        raise ResilienceBoundViolated(f"eta needs N > 2A+2, got N={N}, A={A}")
    return 2 * (N - A + Fraction(A * (N - A - 2) + A * A * (N - A - 1), N - 2 * A - 2))


@dataclass(frozen=True)
class ResilienceReport:
    N: int
    A: int
    eta: Fraction
    variance: Optional[float] = None
    grad_sqnorm: Optional[float] = None
    holds: Optional[bool] = None
    sin_gamma: Optional[float] = None

    @property
    def applicable(self) -> bool:
        return self.holds is not None

    def summary(self) -> str:
        if not self.applicable:
            return f"eta({self.N},{self.A}) = {self.eta}; moments absent, condition inapplicable"
        verdict = "holds" if self.holds else "fails"
        sg = "n/a" if self.sin_gamma is None else f"{self.sin_gamma:.4f}"
        return (f"eta({self.N},{self.A}) = {self.eta}; eta*E|g-G|^2 = "
                f"{float(self.eta) * self.variance:.6g} vs |G|^2 = {self.grad_sqnorm:.6g} "
                f"({verdict}); sin(gamma) = {sg}")


def resilience_diagnostics(
    N: int, A: int, variance: float | None = None, grad_sqnorm: float | None = None
) -> ResilienceReport:
    """Check eta(N,A) * E|g-G|^2 < |G|^2 for given moment estimates.

    ``variance`` estimates E|g - G|^2 and ``grad_sqnorm`` is |G|^2. Without
    both, the report only carries eta.
    """
    e = eta(N, A)
    if variance is None or grad_sqnorm is None:
        return ResilienceReport(N, A, e)
    lhs = float(e) * variance
    holds = lhs < grad_sqnorm
    sin_gamma = math.sqrt(lhs / grad_sqnorm) if holds else None
    return ResilienceReport(N, A, e, variance, grad_sqnorm, holds, sin_gamma)


@dataclass(frozen=True)
class MonteCarloResult:
    report: ResilienceReport
    mean_inner: float      # <sample mean of g_GAR, G>
    stderr: float          # standard error of that estimate
    threshold: float       # (1 - sin gamma) |G|^2
    samples: int
    adversary_selected: float  # fraction of samples with any adversary selected

    @property
    def passed(self) -> bool:
        return bool(self.report.holds) and self.mean_inner - 3 * self.stderr >= self.threshold


def simulate_condition1(
    N: int,
    A: int,
    m: int,
    dim: int = 10,
    sigma: float = 0.1,
    samples: int = 10_000,
    attack: str = "far",
    seed: int = 0,
    scale_bits: int = 16,
) -> MonteCarloResult:
    """Monte-Carlo estimate of <E[g_GAR], G> for multi-Krum under attack.

    Honest gradients are G + N(0, sigma^2 I) with G the all-ones vector.
    Attacks: ``far`` (adversaries at G + 100 sigma noise offsets), ``flip``
    (negated honest draws), ``cluster`` (all adversaries at the honest mean
    shifted by 1.5 sigma against G). Vectors are quantized to integers with
    ``scale_bits`` fractional bits and ranked with exact integer distances,
    as the secure protocol would.
    """
    rng = np.random.default_rng(seed)
    G = np.ones(dim)
    scale = float(1 << scale_bits)
    honest_n = N - A
    inner = np.empty(samples)
    hit = 0
    spread = 0.0
    users = tuple(range(1, N + 1))
    for s in range(samples):
        honest = G + sigma * rng.standard_normal((honest_n, dim))
        spread += float(((honest - G) ** 2).sum())
        if attack == "far":
            adv = G + 100 * sigma * rng.standard_normal((A, dim))
        elif attack == "flip":
            adv = -honest[:A]
        elif attack == "cluster":
            target = honest.mean(axis=0) - 1.5 * sigma * G / np.linalg.norm(G)
            adv = np.tile(target, (A, 1))
        else:
            raise ValueError(f"unknown attack {attack!r}")
        vecs = np.rint(np.vstack([honest, adv]) * scale).astype(np.int64)
        diff = vecs[:, None, :] - vecs[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        dm = DistanceMatrix(users, {(i, j): int(d2[i - 1, j - 1])
                                    for i in users for j in users if i < j})
        chosen = multi_krum_select(krum_scores(dm, A), m).selected
        idx = [u - 1 for u in chosen]
        if any(i >= honest_n for i in idx):
            hit += 1
        g_gar = vecs[idx].mean(axis=0) / scale
        inner[s] = g_gar @ G
    grad_sqnorm = float(G @ G)
    variance = spread / (samples * honest_n)
    report = resilience_diagnostics(N, A, variance=variance, grad_sqnorm=grad_sqnorm)
    threshold = (1 - report.sin_gamma) * grad_sqnorm if report.holds else math.inf
    return MonteCarloResult(
        report=report,
        mean_inner=float(inner.mean()),
        stderr=float(inner.std(ddof=1) / math.sqrt(samples)),
        threshold=threshold,
        samples=samples,
        adversary_selected=hit / samples,
    )
