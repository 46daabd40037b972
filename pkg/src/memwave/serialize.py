"""Persistence formats: plan and report JSON, CSV emission, fingerprints.

All floats are serialized through Python's shortest round-trip repr, so a file
written and read back reproduces every number bit-identically.  Complex values
are stored as [re, im] pairs.  JSON objects are written with sorted keys and a
fixed layout so identical runs produce identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from typing import IO

from .kernel import ExponentialKernel
from .moments import ModalControl
from .spectrum import ModeBasis

PLAN_FORMAT = "memwave-plan-v1"
REPORT_FORMAT = "memwave-report-v1"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def kernel_fingerprint(k: ExponentialKernel) -> str:
    return _sha256(canonical_json({"c": list(k.c), "gamma": list(k.gamma)}))


def basis_fingerprint(basis: ModeBasis) -> str:
    return _sha256(
        canonical_json(
            {
                "alphas": list(basis.alphas),
                "psi_sup": list(basis.psi_sup),
                "dimension": basis.dimension,
                "kind": basis.kind,
            }
        )
    )


def _pairs(values) -> list[list[float]]:
    return [[v.real, v.imag] for v in values]


def _unpairs(pairs) -> tuple[complex, ...]:
    return tuple(complex(re, im) for re, im in pairs)


def plan_to_dict(plan) -> dict:
    return {
        "format": PLAN_FORMAT,
        "scheme": plan.scheme,
        "T": plan.T,
        "n_max": plan.n_max,
        "global_bound": plan.global_bound,
        "kernel_fingerprint": plan.kernel_fp,
        "basis_fingerprint": plan.basis_fp,
        "tail_beta": plan.tail_beta,
        "tail_weight": plan.tail_weight,
        "modal": [
            {
                "n": mc.n,
                "T": mc.T,
                "scheme": plan.scheme,
                "exponents": _pairs(mc.exponents),
                "scaled_coeffs": _pairs(mc.scaled_coeffs),
                "sup_bound": mc.sup_bound,
                "integral": mc.integral,
                "realness_defect": mc.realness_defect,
            }
            for mc in plan.modal
        ],
    }


def plan_from_dict(data: dict):
    from .synthesis import ControlPlan  # local import to avoid a cycle

    if data.get("format") != PLAN_FORMAT:
        raise ValueError(f"not a {PLAN_FORMAT} file")
    modal = tuple(
        ModalControl(
            n=rec["n"],
            T=rec["T"],
            exponents=_unpairs(rec["exponents"]),
            scaled_coeffs=_unpairs(rec["scaled_coeffs"]),
            sup_bound=rec["sup_bound"],
            integral=rec["integral"],
            realness_defect=rec["realness_defect"],
        )
        for rec in data["modal"]
    )
    return ControlPlan(
        scheme=data["scheme"],
        T=data["T"],
        modal=modal,
        global_bound=data["global_bound"],
        kernel_fp=data["kernel_fingerprint"],
        basis_fp=data["basis_fingerprint"],
        tail_beta=data["tail_beta"],
        tail_weight=data["tail_weight"],
    )


def write_json(path, data: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, sort_keys=True, indent=2, allow_nan=False)
        fh.write("\n")


def read_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def write_plan(path, plan) -> None:
    write_json(path, plan_to_dict(plan))


def read_plan(path):
    return plan_from_dict(read_json(path))


def write_csv(stream: IO[str], header: list[str], rows) -> None:
    """Fixed-header CSV with full-precision floats (repr round-trip)."""
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(_cell(v) for v in row) + "\n")


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)
