"""JSON rendering of round reports (stable key order, byte-reproducible)."""

from __future__ import annotations

import json
from fractions import Fraction

from ..field import MERSENNE_61
from .accounting import Loads, LoadReport
from .simulator import RoundReport


def _frac(x: Fraction) -> dict:
    return {"exact": str(x), "value": float(x)}


def _loads(x: Loads) -> dict:
    return {"server": _frac(x.server), "user": _frac(x.user), "commitments": x.commitments}


def loads_to_dict(lr: LoadReport) -> dict:
    return {
        "normalizer_L": lr.normalizer,
        "measured": _loads(lr.measured),
        "theoretical": _loads(lr.theoretical),
        "brea": _loads(lr.brea),
        "server_within_bound": lr.server_within_bound,
        "user_within_bound": lr.user_within_bound,
        "epsilon": _frac(lr.epsilon),
        "epsilon_bound": _frac(lr.epsilon_bound),
    }


def params_to_dict(pp) -> dict:
    return {
        "N": pp.N, "L": pp.L, "K": pp.K, "T": pp.T, "A": pp.A, "D": pp.D, "m": pp.m,
        "p": pp.p, "q": pp.q, "g": pp.g, "seed": pp.seed,
        "scale_bits": pp.scale_bits, "clip": pp.clip, "kappa": pp.kappa,
        "padded_L": pp.padded_L,
        "alphas": list(pp.alphas),
        "field_choice": "default 2^61-1" if pp.p == MERSENNE_61 else "configured",
    }


def report_to_dict(r: RoundReport) -> dict:
    pp = r.params
    fw = pp.field.byte_width
    gw = pp.group.byte_width
    unit_bytes = {"field": fw, "group": gw, "id": 4, "flag": 1}
    m = len(r.selected)
    return {
        "status": "ok",
        "params": params_to_dict(pp),
        "participants": list(r.participants),
        "dropped": list(r.dropped),
        "disqualified": list(r.disqualified),
        "colluders": list(r.colluders),
        "selected": list(r.selected),
        "scores": {str(u): s for u, s in sorted(r.scores.scores.items())},
        "aggregate": {
            "field": list(r.aggregate_field),
            "real_sum": r.aggregate_real,
            "real_mean": [x / m for x in r.aggregate_real],
        },
        "distance_matrix": {
            "users": list(r.distance_matrix.users),
            "lower_triangle": r.distance_matrix.lower_triangle(),
        },
        "verification_failures": r.verification_failures,
        "decoder_errors": r.decoder_errors,
        "commitments": {
            "per_user": r.commitment_size_per_user,
            "total_broadcast": r.commitments_broadcast,
        },
        "loads": loads_to_dict(r.loads),
        "ledger": {
            "totals_by_kind": r.ledger.totals_by_kind(),
            "columns": ["step", "sender", "recipient", "kind", "elements", "unit", "bytes"],
            "messages": [
                [x.step, x.sender, x.recipient, x.kind, x.elements, x.unit,
                 x.elements * unit_bytes[x.unit]]
                for x in r.ledger
            ],
        },
        "server_view": r.server_view,
        "warnings": r.warnings,
        "simulation_check": r.simulation_check,
    }


def report_to_json(r: RoundReport) -> str:
    return json.dumps(report_to_dict(r), indent=1) + "\n"


def aborted_to_json(pp, exc) -> str:
    doc = {
        "status": "aborted",
        "params": params_to_dict(pp),
        "step": exc.step,
        "cause": f"{type(exc.cause).__name__}: {exc.cause}",
        **getattr(exc, "partial", {}),
    }
    return json.dumps(doc, indent=1) + "\n"
