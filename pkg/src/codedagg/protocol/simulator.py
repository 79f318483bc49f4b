"""Phase-stepped simulation of one aggregation round.

The orchestrator delivers every message of step k before step k+1 starts.
Users act only on what they have received; the server sees only the
distance reports and aggregated shares it asks for. Commitments travel over
a reliable broadcast, so all users see the same ones.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Mapping, Optional, Sequence, Union

from ..commitment import CommitmentSet, PublicParams, commit_user, trusted_setup, verify_round1, verify_round2
from ..distance import DistanceMatrix, build_distance_matrix, share_distance
from ..errors import (
    DecodingFailed,
    InvalidParameters,
    NegativeLift,
    NotEnoughObservations,
    OverflowDetected,
    ResilienceBoundViolated,
    RoundAborted,
)
from ..field import FieldVector
from ..krum import KrumScores, krum_scores, multi_krum_select
from ..quantize import decode as dequantize, encode
from ..rng import stream, uniform
from ..sharing import (
    LocalUpdate,
    MaskSet,
    ShareBundle,
    aggregate_from_poly,
    aggregate_shares,
    build_round1_poly,
    build_round2_poly,
    decode_aggregate,
    make_shares,
    partition_update,
    sample_masks,
)
from .accounting import ALL, SERVER, Ledger, LoadReport, account_loads
from .behaviors import HONEST, Kind, UserBehavior, budget_overruns
from .params import ProtocolParams, validate_params, warnings_for

log = logging.getLogger(__name__)

Behaviors = Union[Mapping[int, UserBehavior], Sequence[UserBehavior]]


@dataclass
class RoundReport:
    params: ProtocolParams
    participants: tuple[int, ...]
    dropped: tuple[int, ...]
    disqualified: tuple[int, ...]
    colluders: tuple[int, ...]
    selected: tuple[int, ...]
    scores: KrumScores
    aggregate_field: FieldVector
    aggregate_real: list[float]
    distance_matrix: DistanceMatrix
    verification_failures: list[dict]
    decoder_errors: list[dict]
    ledger: Ledger
    loads: LoadReport
    commitments_broadcast: int
    server_view: dict
    warnings: list[str]
    simulation_check: dict = dc_field(default_factory=dict)

    @property
    def commitment_size_per_user(self) -> int:
        return self.params.K + 2 * self.params.T

    @property
    def flagged_users(self) -> set[int]:
        out = {f["accused"] for f in self.verification_failures}
        for entry in self.decoder_errors:
            out.update(entry["users"])
        return out


class _Round:
    """Mutable state of one round; use :func:`run_round`."""

    def __init__(self, pp: ProtocolParams, behaviors: dict[int, UserBehavior],
                 updates: Sequence[Sequence[float]]):
        self.pp = pp
        self.F = pp.field
        self.beh = behaviors
        self.users = tuple(range(1, pp.N + 1))
        self.ledger = Ledger()
        self.failures: list[dict] = []
        self.decoder_errors: list[dict] = []
        self.disqualified: set[int] = set()
        self.updates = updates

    # -- helpers -------------------------------------------------------

    def silent(self, u: int, step: int) -> bool:
        return self.beh[u].silent_at(step)

    def kind(self, u: int) -> Kind:
        return self.beh[u].kind

    def abort(self, step: int, cause) -> RoundAborted:
        exc = RoundAborted(step, cause)
        exc.partial = {
            "verification_failures": list(self.failures),
            "decoder_errors": list(self.decoder_errors),
            "disqualified": sorted(self.disqualified),
        }
        return exc

    def _corrupt(self, u: int, share: FieldVector, tag: str) -> FieldVector:
        # one coordinate shifted by a nonzero offset: never passes verification
        rng = stream(self.pp.seed, u, f"adversary/{tag}")
        k = int(rng.integers(0, len(share)))
        delta = 1 + uniform(rng, self.F.p - 1, 1)[0]
        out = list(share)
        out[k] = (out[k] + delta) % self.F.p
        return tuple(out)

    # -- steps ---------------------------------------------------------

    def prepare(self) -> None:
        pp, F = self.pp, self.F
        self.local: dict[int, LocalUpdate] = {}
        self.plain: dict[int, FieldVector] = {}
        for u in self.users:
            b = self.beh[u]
            vec = self.updates[u - 1]
            if len(vec) != pp.L:
                raise ValueError(f"update of user {u} has length {len(vec)}, expected {pp.L}")
            if b.kind is Kind.POISONED_UPDATE:
                vec = [b.value] * pp.L
            enc = encode(vec, pp.quant)
            self.plain[u] = enc
            self.local[u] = partition_update(u, enc, pp.K)
        self.pad = pp.padded_L - pp.L
        pub, beta = trusted_setup(pp.group, pp.dim, pp.seed)
        del beta  # trapdoor must not survive setup
        self.pub: PublicParams = pub
        self.masks: dict[int, MaskSet] = {
            u: sample_masks(F, pp.T, pp.dim, stream(pp.seed, u, "mask_z"), stream(pp.seed, u, "mask_r"))
            for u in self.users
        }

    def broadcast_commitments(self) -> None:
        pp = self.pp
        self.commits: dict[int, CommitmentSet] = {}
        for u in self.users:
            if self.silent(u, 2):
                continue
            m = self.masks[u]
            self.commits[u] = commit_user(self.pub, u, self.local[u].partitions, m.z, m.r)
            self.ledger.record(2, u, ALL, "commitments", pp.K + 2 * pp.T, unit="group")

    def share(self, rnd: int) -> set[int]:
        """Steps 3/5: every active committed user sends one share to each peer."""
        step = 3 if rnd == 1 else 5
        build = build_round1_poly if rnd == 1 else build_round2_poly
        senders = set()
        for s in self.users:
            if s not in self.commits or self.silent(s, step):
                continue
            shares = make_shares(self.F, build(self.local[s], self.masks[s]), self.pp.alphas)
            b = self.beh[s]
            for n in self.users:
                sh = shares[n - 1]
                if n != s and b.kind is Kind.INVALID_SHARES and rnd in b.rounds:
                    sh = self._corrupt(s, sh, f"r{rnd}/{n}")
                box = self.bundles[n].round1 if rnd == 1 else self.bundles[n].round2
                box[s] = sh
                if n != s:
                    self.ledger.record(step, s, n, f"share_round{rnd}", self.pp.dim)
            senders.add(s)
        return senders

    def verify(self, rnd: int) -> None:
        """Steps 4/6: check shares, broadcast complaints, resolve them publicly.

        An accused sender must publish the disputed share; if the published
        share fails the same public check, the sender is disqualified,
        otherwise the accuser adopts it.
        """
        step = 4 if rnd == 1 else 6
        check = verify_round1 if rnd == 1 else verify_round2
        complaints = []
        for n in self.users:
            if self.silent(n, step):
                continue
            bundle = self.bundles[n]
            box = bundle.round1 if rnd == 1 else bundle.round2
            verdicts = bundle.verified1 if rnd == 1 else bundle.verified2
            for s, sh in sorted(box.items()):
                if s == n:
                    verdicts[s] = True
                    continue
                v = check(self.pub, self.commits[s], sh, self.pp.alpha(n))
                verdicts[s] = v.ok
                if not v.ok:
                    complaints.append((n, s, v.reason))
                    self.ledger.record(step, n, ALL, "complaint", 1, unit="flag")
        for n, s, reason in complaints:
            entry = {"round": rnd, "accuser": n, "accused": s, "reason": reason}
            if self.silent(s, step):
                entry["resolution"] = "accused silent; disqualified"
                self.disqualified.add(s)
            else:
                box = self.bundles[n].round1 if rnd == 1 else self.bundles[n].round2
                # the sender stands by what it sent; honest senders sent the correct share
                published = box[s]
                self.ledger.record(step, s, ALL, "published_share", self.pp.dim)
                if check(self.pub, self.commits[s], published, self.pp.alpha(n)).ok:
                    entry["resolution"] = "published share valid; accuser adopts it"
                    (self.bundles[n].verified1 if rnd == 1 else self.bundles[n].verified2)[s] = True
                else:
                    entry["resolution"] = "published share invalid; disqualified"
                    self.disqualified.add(s)
            self.failures.append(entry)

    def report_distances(self, participants: tuple[int, ...], need: int) -> dict[int, Optional[dict]]:
        pairs = list(combinations(participants, 2))
        reports: dict[int, Optional[dict]] = {}
        got = 0
        two_rounds = self.pp.K >= 2
        for n in participants:
            if got == need:
                break
            if self.silent(n, 7):
                reports[n] = None
                continue
            if self.kind(n) is Kind.WRONG_DISTANCES:
                rng = stream(self.pp.seed, n, "adversary/distances")
                table = dict(zip(pairs, uniform(rng, self.F.p, len(pairs))))
            else:
                b = self.bundles[n]
                table = {}
                for i, j in pairs:
                    if two_rounds:
                        table[(i, j)] = share_distance(self.F, b.round1[i], b.round1[j],
                                                       b.round2[i], b.round2[j])
                    else:
                        table[(i, j)] = share_distance(self.F, b.round1[i], b.round1[j])
            self.ledger.record(7, n, SERVER, "distances", len(pairs))
            reports[n] = table
            got += 1
        if got < need:
            raise self.abort(7, NotEnoughObservations(f"{got} distance reports, need {need}"))
        return reports

    def aggregate(self, participants: tuple[int, ...], selected: tuple[int, ...],
                  need: int) -> list[tuple[int, Optional[FieldVector]]]:
        points: list[tuple[int, Optional[FieldVector]]] = []
        got = 0
        for n in participants:
            if got == need:
                break
            if self.silent(n, 10):
                points.append((self.pp.alpha(n), None))
                continue
            if self.kind(n) is Kind.WRONG_AGGREGATION:
                rng = stream(self.pp.seed, n, "adversary/aggregate")
                s_n = tuple(uniform(rng, self.F.p, self.pp.dim))
            else:
                s_n = aggregate_shares(self.F, self.bundles[n], selected)
            self.ledger.record(10, n, SERVER, "aggregate_share", self.pp.dim)
            points.append((self.pp.alpha(n), s_n))
            got += 1
        if got < need:
            raise self.abort(10, NotEnoughObservations(f"{got} aggregate shares, need {need}"))
        return points

    def run(self) -> RoundReport:
        pp, F = self.pp, self.F
        K, T = pp.K, pp.T
        self.prepare()
        self.broadcast_commitments()

        self.bundles = {n: ShareBundle(n) for n in self.users}
        sent = self.share(1)
        self.verify(1)
        if K >= 2:
            sent &= self.share(2)
            self.verify(2)

        participants = tuple(sorted(sent - self.disqualified))
        # disqualified users are known adversaries; the rest of the budget stays unknown
        a_eff = max(pp.A - len(self.disqualified), 0)
        user_of = {pp.alpha(u) % F.p: u for u in self.users}

        dist_need = 2 * (K + T + a_eff) - 1
        reports = self.report_distances(participants, dist_need)
        try:
            dm = build_distance_matrix(F, reports, participants, K, T, a_eff,
                                       alphas={u: pp.alpha(u) for u in reports})
        except (DecodingFailed, NotEnoughObservations, NegativeLift) as exc:
            raise self.abort(8, exc) from exc
        per_user: dict[int, int] = {}
        for users in dm.flagged.values():
            for u in users:
                per_user[u] = per_user.get(u, 0) + 1
        for u, count in sorted(per_user.items()):
            self.decoder_errors.append({"step": 8, "users": [u], "pairs": count})

        try:
            scores = krum_scores(dm, a_eff)
            selection = multi_krum_select(scores, pp.m)
        except ResilienceBoundViolated as exc:
            raise self.abort(9, exc) from exc
        selected = selection.selected
        self.ledger.record(9, SERVER, ALL, "selection", len(selected), unit="id")

        points = self.aggregate(participants, selected, K + T + 2 * a_eff)
        try:
            decoded = decode_aggregate(F, points, K, T, a_eff)
        except (DecodingFailed, NotEnoughObservations) as exc:
            raise self.abort(11, exc) from exc
        if decoded.error_alphas:
            self.decoder_errors.append(
                {"step": 11, "users": sorted(user_of[a] for a in decoded.error_alphas), "pairs": 0}
            )
        aggregate = aggregate_from_poly(decoded.poly, K, self.pad)
        try:
            real = dequantize(aggregate, pp.quant, summands=len(selected))
        except OverflowDetected as exc:
            raise self.abort(11, exc) from exc

        expected = F.vsum((self.plain[u] for u in selected), pp.L)
        sim_check = {
            "aggregate_matches_plaintext": aggregate == expected,
            "distances_match_plaintext": all(
                dm.get(i, j) == sum((a - b) ** 2 for a, b in zip(_lift(self.plain[i], F.p),
                                                                 _lift(self.plain[j], F.p)))
                for i, j in combinations(participants, 2)
            ),
        }
        dropped = tuple(u for u in self.users if self.kind(u) is Kind.DROPOUT)
        colluders = tuple(u for u in self.users if self.kind(u) is Kind.COLLUDING)
        server_view = {
            "distance_values_received": sum(m.elements for m in self.ledger
                                            if m.kind == "distances"),
            "aggregate_shares_received": sum(1 for _, v in points if v is not None),
            "recovers": ["pairwise squared distances among participants",
                         "sum of the selected updates"],
            "colluder_pool_per_user": len(colluders) * (2 if K >= 2 else 1),
        }
        return RoundReport(
            params=pp,
            participants=participants,
            dropped=dropped,
            disqualified=tuple(sorted(self.disqualified)),
            colluders=colluders,
            selected=selected,
            scores=scores,
            aggregate_field=aggregate,
            aggregate_real=real,
            distance_matrix=dm,
            verification_failures=self.failures,
            decoder_errors=self.decoder_errors,
            ledger=self.ledger,
            loads=account_loads(self.ledger, pp),
            commitments_broadcast=self.ledger.group_elements(),
            server_view=server_view,
            warnings=warnings_for(pp) + budget_overruns(self.beh, pp.A, pp.D, pp.T),
            simulation_check=sim_check,
        )


def _lift(v: Sequence[int], p: int) -> list[int]:
    return [a - p if a > p // 2 else a for a in v]


def normalize_behaviors(behaviors: Behaviors | None, N: int) -> dict[int, UserBehavior]:
    if behaviors is None:
        return {u: HONEST for u in range(1, N + 1)}
    if isinstance(behaviors, Mapping):
        extra = set(behaviors) - set(range(1, N + 1))
        if extra:
            raise ValueError(f"behaviors given for unknown users {sorted(extra)}")
        return {u: behaviors.get(u, HONEST) for u in range(1, N + 1)}
    behaviors = list(behaviors)
    if len(behaviors) != N:
        raise ValueError(f"need {N} behaviors, got {len(behaviors)}")
    return dict(zip(range(1, N + 1), behaviors))


def run_round(pp: ProtocolParams, behaviors: Behaviors | None,
              updates: Sequence[Sequence[float]]) -> RoundReport:
    """Run steps 1-11 for ``N`` simulated users with real-valued updates.

    ``behaviors`` is a length-N sequence or a user->behavior mapping
    (missing users are honest). Raises :class:`InvalidParameters` for
    infeasible parameters and :class:`RoundAborted` when the round cannot
    finish, e.g. because adversaries exceed the decoders' budget.
    """
    bad = validate_params(pp)
    if bad:
        raise InvalidParameters(bad)
    if len(updates) != pp.N:
        raise ValueError(f"need {pp.N} updates, got {len(updates)}")
    rnd = _Round(pp, normalize_behaviors(behaviors, pp.N), updates)
    report = rnd.run()
    log.debug("round done: selected=%s disqualified=%s", report.selected, report.disqualified)
    return report
