"""Run configuration: a strict JSON schema with precise key-path errors.

The accepted document is a JSON object with the sections

    kernel   {"c": [..], "gamma": [..]}                      required
    domain   {"type": "interval"} |
             {"type": "modal", "alpha": [..], "psi_sup": [..],
              "dimension": int}                              required
    modes    positive integer                                required
    initial  {"phi0": [..], "phi1": [..]} |
             {"random": {"beta": r, "amplitude": r, "seed": int}}  required
    control  {"scheme": "strict" | "paper"}                  optional
    sim      {"dt": r | null, "post_horizon_factor": r}      optional

Unknown keys are rejected anywhere in the tree and every numeric entry must be
finite.  Validation failures raise ConfigError whose message starts with the
offending key path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ConfigError
from .kernel import ExponentialKernel
from .spectrum import InitialData, ModeBasis, generate_initial_data, interval_basis


@dataclass(frozen=True)
class RunConfig:
    kernel: ExponentialKernel
    basis: ModeBasis
    modes: int
    initial: InitialData
    scheme: str
    dt: float | None  # None -> T/20000 at run time
    post_horizon_factor: float
    random_beta: float | None  # set when initial data was generated
    raw: dict


def _require_keys(obj: dict, path: str, required: set[str], optional: set[str] = frozenset()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    for key in obj:
        if key not in required and key not in optional:
            raise ConfigError(f"{path}.{key}: unknown key")
    for key in required:
        if key not in obj:
            raise ConfigError(f"{path}.{key}: missing")


def _finite_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number")
    if not math.isfinite(value):
        raise ConfigError(f"{path}: must be finite")
    return float(value)


def _number_list(value, path: str) -> list[float]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{path}: expected a nonempty array of numbers")
    return [_finite_number(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer")
    return value


def parse_config(path) -> RunConfig:
    """Parse and validate a config file; raises ConfigError with the key path."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return validate_config(doc)


def validate_config(doc: dict) -> RunConfig:
    _require_keys(doc, "config", {"kernel", "domain", "modes", "initial"}, {"control", "sim"})

    kobj = doc["kernel"]
    _require_keys(kobj, "kernel", {"c", "gamma"})
    c = _number_list(kobj["c"], "kernel.c")
    gamma = _number_list(kobj["gamma"], "kernel.gamma")
    if len(c) != len(gamma):
        raise ConfigError("kernel.gamma: length differs from kernel.c")
    if any(v <= 0 for v in c):
        raise ConfigError("kernel.c: entries must be strictly positive")
    if any(v <= 0 for v in gamma):
        raise ConfigError("kernel.gamma: entries must be strictly positive")
    if len(set(gamma)) != len(gamma):
        raise ConfigError("kernel.gamma: duplicate")
    kernel = ExponentialKernel(c=c, gamma=gamma)

    modes = _integer(doc["modes"], "modes")
    if modes < 1:
        raise ConfigError("modes: must be >= 1")

    dobj = doc["domain"]
    if not isinstance(dobj, dict) or "type" not in dobj:
        raise ConfigError("domain.type: missing")
    dtype = dobj["type"]
    if dtype == "interval":
        _require_keys(dobj, "domain", {"type"})
        basis = interval_basis(modes)
    elif dtype == "modal":
        _require_keys(dobj, "domain", {"type", "alpha", "psi_sup", "dimension"})
        alpha = _number_list(dobj["alpha"], "domain.alpha")
        psi_sup = _number_list(dobj["psi_sup"], "domain.psi_sup")
        dim = _integer(dobj["dimension"], "domain.dimension")
        if len(alpha) != modes:
            raise ConfigError("domain.alpha: length must equal modes")
        if len(psi_sup) != modes:
            raise ConfigError("domain.psi_sup: length must equal modes")
        try:
            basis = ModeBasis(
                alphas=tuple(alpha), psi_sup=tuple(psi_sup), dimension=dim, kind="user"
            )
        except ValueError as exc:
            raise ConfigError(f"domain: {exc}") from exc
    else:
        raise ConfigError(f"domain.type: unknown type {dtype!r}")

    iobj = doc["initial"]
    if not isinstance(iobj, dict):
        raise ConfigError("initial: expected an object")
    random_beta = None
    if "random" in iobj:
        _require_keys(iobj, "initial", {"random"})
        robj = iobj["random"]
        _require_keys(robj, "initial.random", {"beta", "amplitude", "seed"})
        beta = _finite_number(robj["beta"], "initial.random.beta")
        amplitude = _finite_number(robj["amplitude"], "initial.random.amplitude")
        seed = _integer(robj["seed"], "initial.random.seed")
        if amplitude <= 0:
            raise ConfigError("initial.random.amplitude: must be strictly positive")
        if beta <= basis.dimension / 2.0:
            raise ConfigError(
                f"initial.random.beta: {beta} violates beta > dimension/2 "
                f"= {basis.dimension / 2.0}"
            )
        initial = generate_initial_data(basis, beta, amplitude, seed)
        random_beta = beta
    else:
        _require_keys(iobj, "initial", {"phi0", "phi1"})
        phi0 = _number_list(iobj["phi0"], "initial.phi0")
        phi1 = _number_list(iobj["phi1"], "initial.phi1")
        if len(phi0) != modes:
            raise ConfigError("initial.phi0: length must equal modes")
        if len(phi1) != modes:
            raise ConfigError("initial.phi1: length must equal modes")
        initial = InitialData(phi0=tuple(phi0), phi1=tuple(phi1))

    scheme = "strict"
    if "control" in doc:
        cobj = doc["control"]
        _require_keys(cobj, "control", {"scheme"})
        scheme = cobj["scheme"]
        if scheme not in ("strict", "paper"):
            raise ConfigError(f"control.scheme: must be 'strict' or 'paper', got {scheme!r}")

    dt = None
    phf = 5.0
    if "sim" in doc:
        sobj = doc["sim"]
        _require_keys(sobj, "sim", set(), {"dt", "post_horizon_factor"})
        if "dt" in sobj and sobj["dt"] is not None:
            dt = _finite_number(sobj["dt"], "sim.dt")
            if dt <= 0:
                raise ConfigError("sim.dt: must be strictly positive")
        if "post_horizon_factor" in sobj:
            phf = _finite_number(sobj["post_horizon_factor"], "sim.post_horizon_factor")
            if phf <= 0:
                raise ConfigError("sim.post_horizon_factor: must be strictly positive")

    return RunConfig(
        kernel=kernel,
        basis=basis,
        modes=modes,
        initial=initial,
        scheme=scheme,
        dt=dt,
        post_horizon_factor=phf,
        random_beta=random_beta,
        raw=doc,
    )
