"""Assembly of the distributed control from modal pieces and horizon selection.

The global sup bound is the mode-wise majorant
sum_n sup|u_n| * sup|psi_n|, fully computable at the truncation level; the
contribution of the neglected tail is reported through the closed-form
weighted-tail majorant when the data smoothness is known.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charroots import find_roots
from .errors import HorizonOverflow, UnsupportedBasis
from .kernel import ExponentialKernel
from .moments import ModalControl, _eval_many, build_moment_system, solve_modal_moments
from .parallel import parallel_map
from .spectrum import InitialData, ModeBasis, tail_majorant
from .serialize import basis_fingerprint, kernel_fingerprint

HORIZON_CAP = 2.0**20
BISECTION_REL_WIDTH = 1e-2


@dataclass(frozen=True)
class ControlPlan:
    """Synthesized control for modes 1..n_max with its certified sup majorant."""

    scheme: str
    T: float
    modal: tuple[ModalControl, ...]
    global_bound: float
    kernel_fp: str
    basis_fp: str
    tail_beta: float | None = None
    tail_weight: float | None = None

    @property
    def n_max(self) -> int:
        return len(self.modal)


def synthesize(
    k: ExponentialKernel,
    basis: ModeBasis,
    init: InitialData,
    T: float,
    scheme: str = "strict",
    tail_beta: float | None = None,
) -> ControlPlan:
    """Roots -> moment system -> modal control for every basis mode.

    The global bound is sum_n sup_bound_n * psi_sup_n.  tail_beta, when given
    (data generated with known smoothness), attaches the closed-form weighted
    tail majorant for the modes beyond the truncation.
    """
    if len(init.phi0) != basis.n_modes:
        raise ValueError("initial data length does not match basis mode count")

    def solve_one(i: int) -> ModalControl:
        roots = find_roots(k, basis.alphas[i], n=i + 1)
        sys = build_moment_system(roots, init.phi0[i], init.phi1[i], T, scheme)
        return solve_modal_moments(sys)

    modal = parallel_map(solve_one, range(basis.n_modes))
    bound = float(sum(mc.sup_bound * ps for mc, ps in zip(modal, basis.psi_sup)))
    tail = None
    if tail_beta is not None and basis.kind == "interval":
        tail = tail_majorant(basis.n_modes, tail_beta)
    return ControlPlan(
        scheme=scheme,
        T=float(T),
        modal=tuple(modal),
        global_bound=bound,
        kernel_fp=kernel_fingerprint(k),
        basis_fp=basis_fingerprint(basis),
        tail_beta=tail_beta,
        tail_weight=tail,
    )


def eval_control_field(plan: ControlPlan, basis: ModeBasis, t: float, x: float) -> float:
    """Pointwise control field sum_n u_n(t) sqrt(2/pi) sin(n x) on the interval."""
    if basis.kind != "interval":
        raise UnsupportedBasis("pointwise field evaluation requires the interval basis")
    total = 0.0
    norm = math.sqrt(2.0 / math.pi)
    for i, mc in enumerate(plan.modal):
        val = float(
            np.real(
                np.sum(
                    np.asarray(mc.scaled_coeffs)
                    * np.exp(np.asarray(mc.exponents) * (t - mc.T))
                )
            )
        )
        total += val * norm * math.sin((i + 1) * x)
    return total


def sample_control_field(plan: ControlPlan, basis: ModeBasis, ts, xs) -> np.ndarray:
    """Field values on the grid ts x xs, shape (len(ts), len(xs))."""
    if basis.kind != "interval":
        raise UnsupportedBasis("pointwise field evaluation requires the interval basis")
    ts = np.asarray(ts, dtype=float)
    xs = np.asarray(xs, dtype=float)
    uvals = np.zeros((ts.size, len(plan.modal)))
    for i, mc in enumerate(plan.modal):
        uvals[:, i] = _eval_many(
            np.asarray(mc.exponents), np.asarray(mc.scaled_coeffs), mc.T, ts
        ).real
    norm = math.sqrt(2.0 / math.pi)
    modes = np.arange(1, len(plan.modal) + 1)
    psi = norm * np.sin(np.multiply.outer(xs, modes))  # (X, M)
    return uvals @ psi.T


def find_time_for_bound(
    k: ExponentialKernel,
    basis: ModeBasis,
    init: InitialData,
    M: float,
    scheme: str = "strict",
    tail_beta: float | None = None,
):
    """Smallest horizon (to 1% relative) whose certified bound meets M.

    Doubling from T = 1 until global_bound(T) <= M, then bisection on the
    bracket down to relative width 1e-2.  Returns (T, plan, transcript) where
    the transcript lists every probed (T, bound) pair.
    """
    if M <= 0:
        raise ValueError("bound M must be strictly positive")
    transcript: list[tuple[float, float]] = []

    def probe(T: float) -> ControlPlan:
        plan = synthesize(k, basis, init, T, scheme, tail_beta)
        transcript.append((T, plan.global_bound))
        return plan

    T = 1.0
    plan = probe(T)
    if plan.global_bound <= M:
        return T, plan, transcript
    while plan.global_bound > M:
        T *= 2.0
        if T > HORIZON_CAP:
            raise HorizonOverflow(
                f"bound M={M} not met by T={HORIZON_CAP:g}; last bound "
                f"{plan.global_bound:g}",
                transcript=transcript,
            )
        plan = probe(T)
    lo, hi = T / 2.0, T  # bound(lo) > M >= bound(hi)
    hi_plan = plan
    while (hi - lo) / hi > BISECTION_REL_WIDTH:
        mid = 0.5 * (lo + hi)
        mid_plan = probe(mid)
        if mid_plan.global_bound <= M:
            hi, hi_plan = mid, mid_plan
        else:
            lo = mid
    return hi, hi_plan, transcript
