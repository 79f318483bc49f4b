"""Round parameters and the feasibility bounds that govern them."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from ..commitment import PrimeOrderGroup
from ..errors import InvalidGroup
from ..field import PrimeField
from ..quantize import QuantizationConfig
from ..sharing import padded_length


@dataclass(frozen=True)
class ProtocolParams:
    N: int
    L: int
    K: int
    T: int
    A: int
    D: int
    m: int
    p: int
    q: int
    g: int
    seed: int = 0
    scale_bits: int = 16
    clip: float = 1.0
    kappa: int = 128
    alphas: tuple[int, ...] = dc_field(default=())

    def __post_init__(self) -> None:
        if not self.alphas:
            object.__setattr__(self, "alphas", tuple(range(1, self.N + 1)))

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def group(self) -> PrimeOrderGroup:
        return PrimeOrderGroup(p=self.p, q=self.q, g=self.g)

    @property
    def quant(self) -> QuantizationConfig:
        return QuantizationConfig(scale_bits=self.scale_bits, clip=self.clip, p=self.p)

    @property
    def padded_L(self) -> int:
        return padded_length(self.L, self.K)

    @property
    def dim(self) -> int:
        return self.padded_L // self.K

    def alpha(self, user: int) -> int:
        return self.alphas[user - 1]

    def replace(self, **changes) -> "ProtocolParams":
        from dataclasses import replace

        if "N" in changes and "alphas" not in changes:
            changes["alphas"] = ()
        return replace(self, **changes)


def n_star(A: int, D: int, K: int, T: int, m: int) -> int:
    return 2 * A + D + max(2 * K + 2 * T - 1, m + 3)


def k_max(N: int, D: int, A: int, T: int) -> Fraction:
    return Fraction(N - D + 1, 2) - A - T


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: object
    relation: str
    rhs: object
    ok: bool

    def __str__(self) -> str:
        mark = "ok  " if self.ok else "FAIL"
        return f"[{mark}] {self.name}: {self.lhs} {self.relation} {self.rhs}"


def _check(name: str, lhs, relation: str, rhs) -> BoundCheck:
    ok = {
        ">=": lhs >= rhs,
        ">": lhs > rhs,
        "<=": lhs <= rhs,
        "<": lhs < rhs,
    }[relation]
    return BoundCheck(name, lhs, relation, rhs, bool(ok))


def check_bounds(pp: ProtocolParams) -> list[BoundCheck]:
    """Every feasibility inequality with its evaluated sides."""
    N, K, T, A, D, m = pp.N, pp.K, pp.T, pp.A, pp.D, pp.m
    live = N - D
    checks = [
        _check("N >= N* = 2A+D+max(2K+2T-1, m+3)", N, ">=", n_star(A, D, K, T, m)),
        _check("K >= 1", K, ">=", 1),
        _check("K <= (N-D+1)/2 - A - T", K, "<=", k_max(N, D, A, T)),
        _check("N-D >= 2A+1 (share verification)", live, ">=", 2 * A + 1),
        _check("N-D >= 2(K+T+A)-1 (distance decoding)", live, ">=", 2 * (K + T + A) - 1),
        _check("N-D >= K+T+2A (aggregate decoding)", live, ">=", K + T + 2 * A),
        _check("N-D > 2A+2+m (multi-Krum)", live, ">", 2 * A + 2 + m),
        _check("m >= 1", m, ">=", 1),
        _check("p > N (distinct nonzero evaluation points)", pp.p, ">", N),
        _check("L >= 1", pp.L, ">=", 1),
        _check("T >= 0", T, ">=", 0),
        _check("A >= 0", A, ">=", 0),
        _check("D >= 0", D, ">=", 0),
    ]
    alphas = [a % pp.p for a in pp.alphas]
    checks.append(BoundCheck("alphas distinct, nonzero, one per user",
                             len(set(alphas) - {0}), "==", N,
                             len(alphas) == N and len(set(alphas) - {0}) == N))
    try:
        pp.group
        checks.append(BoundCheck("group: q = c*p+1 prime, g of order p", pp.g, "in", f"Z_{pp.q}^*", True))
    except (InvalidGroup, ValueError) as exc:
        checks.append(BoundCheck("group: q = c*p+1 prime, g of order p", pp.g, "in", str(exc), False))
    try:
        quant_bad = pp.quant.violations(length=pp.L, summands=pp.m)
    except ValueError as exc:
        quant_bad = [str(exc)]
    checks.append(BoundCheck("quantization safety (m*Qmax, L*(2Qmax)^2 < p/2)",
                             len(quant_bad), "==", 0, not quant_bad))
    return checks


def validate_params(pp: ProtocolParams) -> list[BoundCheck]:
    """Violated bounds only; an empty list means the parameters are feasible."""
    return [c for c in check_bounds(pp) if not c.ok]


def warnings_for(pp: ProtocolParams) -> list[str]:
    out = []
    try:
        w = pp.group.security_warning(pp.kappa)
    except (InvalidGroup, ValueError):
        w = None
    if w:
        out.append(w)
    if pp.L % pp.K:
        out.append(f"L={pp.L} not divisible by K={pp.K}; updates zero-padded to {pp.padded_L}")
    return out
