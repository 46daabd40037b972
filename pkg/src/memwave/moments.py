"""Per-mode moment problems over the exponential family of characteristic roots.

For each mode the control u_n must hit the moments
int_0^T u_n(s) e^(eta_i s) ds = target_i over the exponents eta_i = -lambda_i.
The solution is sought as an exponential sum over the same family, which turns
the problem into a Gram system of pairwise integrals.  The raw Gram entries
contain e^((eta_i+eta_j)T) and overflow at moderate horizons, so the solve runs
on the exponentially scaled form: with C_j = C'_j e^(-eta_j T) the matrix
becomes G'_ij = (1 - e^(-(eta_i+eta_j)T)) / (eta_i+eta_j), whose entries stay
bounded and converge to a Cauchy-like matrix as T grows.  The control is then
u_n(s) = sum_j C'_j e^(eta_j (s-T)) with every exponent non-positive on [0, T].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.linalg

from .charroots import CharacteristicRoots
from .errors import OutOfHorizon, SingularSystem

GRAM_DEGENERACY_TOL = 1e-13
SERIES_SWITCH = 1e-4  # |z T| below this evaluates (e^(zT)-1)/z by Taylor series
PIVOT_TOL = 1e-14
SUP_SAMPLES = 4096


def exp_integral(z: complex, t: float) -> complex:
    """int_0^t e^(z s) ds = (e^(z t) - 1)/z, stable through z -> 0.

    The direct quotient loses |zt|/eps digits to cancellation for small |zt|,
    so below the switch the value comes from the Taylor expansion
    t (1 + w/2 + w^2/6 + w^3/24 + w^4/120), w = z t, whose truncation error is
    far below double precision there.  At z = 0 this returns exactly t.
    """
    w = z * t
    if abs(w) < SERIES_SWITCH:
        return t * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0 + w / 120.0))))
    return (np.exp(w) - 1.0) / z


@dataclass(frozen=True)
class MomentSystem:
    """Exponents, targets and horizon of one modal moment problem."""

    n: int
    exponents: tuple[complex, ...]
    targets: tuple[complex, ...]
    T: float
    scheme: str  # "paper" | "strict"


@dataclass(frozen=True)
class ModalControl:
    """Solved modal control u_n(s) = sum_j scaled_coeffs[j] e^(exponents[j] (s-T)).

    sup_bound dominates every sampled |u_n| on [0, T]; integral is the exact
    value of int_0^T u_n ds; realness_defect records the largest sampled
    imaginary part relative to the control scale.
    """

    n: int
    T: float
    exponents: tuple[complex, ...]
    scaled_coeffs: tuple[complex, ...]
    sup_bound: float
    integral: float
    realness_defect: float


def build_moment_system(
    roots: CharacteristicRoots, phi0n: float, phi1n: float, T: float, scheme: str = "strict"
) -> MomentSystem:
    """Moment problem for one mode: targets are -(phi1 + lambda_i phi0) per root.

    The paper scheme covers the nonzero roots only; the strict scheme appends
    the zero root's moment (eta = 0, target = -phi1), which is what clears the
    accumulated-control residue and with it the full modal memory state.
    """
    if T <= 0:
        raise ValueError("horizon T must be strictly positive")
    if scheme not in ("paper", "strict"):
        raise ValueError(f"unknown scheme {scheme!r}")
    sel = list(roots.roots[1:])
    if scheme == "strict":
        sel.append(0j)
    exponents = tuple(-lam for lam in sel)
    targets = tuple(-(phi1n + lam * phi0n) for lam in sel)
    return MomentSystem(n=roots.n, exponents=exponents, targets=targets, T=float(T), scheme=scheme)


def gram_entry(eta_i: complex, eta_j: complex, T: float) -> complex:
    """int_0^T e^((eta_i+eta_j)s) ds, with the limit value T at eta_i+eta_j = 0."""
    return complex(exp_integral(eta_i + eta_j, T))


def _scaled_gram(exponents: np.ndarray, T: float) -> np.ndarray:
    # e^(-zT) (e^(zT)-1)/z = (1 - e^(-zT))/z with the same Taylor treatment
    # near z = 0; entries stay bounded for Re z >= 0 at any horizon
    z = exponents[:, None] + exponents[None, :]
    w = -z * T
    small = np.abs(w) < SERIES_SWITCH
    zsafe = np.where(small, 1.0, z)
    out = (1.0 - np.exp(w)) / zsafe
    series = T * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0 + w / 120.0))))
    return np.where(small, series, out)


def _eval_many(exponents: np.ndarray, coeffs: np.ndarray, T: float, ts: np.ndarray) -> np.ndarray:
    """Complex control values at times ts (vectorized over samples)."""
    return np.exp(np.multiply.outer(ts - T, exponents)) @ coeffs


def _golden_refine(f, lo: float, hi: float, iters: int = 60) -> float:
    # golden-section maximization of f on [lo, hi]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
    return max(f1, f2)


def solve_modal_moments(sys: MomentSystem) -> ModalControl:
    """Solve the scaled Gram system by pivoted LU and package the modal control.

    Raises SingularSystem when an LU pivot falls below the relative threshold
    (horizon too small or degenerate exponents); the message carries a
    condition estimate.
    """
    eta = np.asarray(sys.exponents, dtype=complex)
    tgt = np.asarray(sys.targets, dtype=complex)
    T = sys.T
    G = _scaled_gram(eta, T)
    rhs = np.exp(-eta * T) * tgt

    lu, piv = scipy.linalg.lu_factor(G)
    pivots = np.abs(np.diag(lu))
    norm = np.max(np.abs(G))
    if np.min(pivots) < PIVOT_TOL * norm:
        cond = float(np.linalg.cond(G))
        raise SingularSystem(
            f"moment system for mode {sys.n} numerically singular at T={T} "
            f"(min pivot {np.min(pivots):.3e}, cond ~ {cond:.3e})",
            condition=cond,
        )
    coeffs = scipy.linalg.lu_solve((lu, piv), rhs)

    if np.all(tgt == 0):
        coeffs = np.zeros_like(coeffs)

    # sup bound: rigorous majorant sum |C'| vs sampled max refined by golden section
    majorant = float(np.sum(np.abs(coeffs)))
    ts = np.linspace(0.0, T, SUP_SAMPLES)
    vals = _eval_many(eta, coeffs, T, ts)
    abs_vals = np.abs(vals.real)
    imax = int(np.argmax(abs_vals))
    max_abs = float(abs_vals[imax])
    if majorant > 0.0:
        lo = ts[max(0, imax - 1)]
        hi = ts[min(SUP_SAMPLES - 1, imax + 1)]

        def abs_u(t: float) -> float:
            return abs(float(np.real(np.sum(coeffs * np.exp(eta * (t - T))))))

        refined = max(max_abs, _golden_refine(abs_u, lo, hi))
    else:
        refined = 0.0
    sup_bound = min(majorant, refined) if majorant > 0.0 else 0.0

    realness = float(np.max(np.abs(vals.imag))) / max(1.0, max_abs)

    return ModalControl(
        n=sys.n,
        T=T,
        exponents=tuple(map(complex, eta)),
        scaled_coeffs=tuple(map(complex, coeffs)),
        sup_bound=sup_bound,
        integral=_integral_closed_form(coeffs, eta, T, T),
        realness_defect=realness,
    )


def eval_modal_control(mc: ModalControl, t: float) -> float:
    """Control value at a time inside the horizon [0, T]."""
    if t < 0.0 or t > mc.T:
        raise OutOfHorizon(f"t={t} outside [0, {mc.T}]")
    value = sum(cj * np.exp(ej * (t - mc.T)) for cj, ej in zip(mc.scaled_coeffs, mc.exponents))
    return float(value.real)


def _integral_closed_form(coeffs, exponents, T: float, t: float) -> float:
    total = 0j
    for cj, ej in zip(coeffs, exponents):
        if abs(ej) < GRAM_DEGENERACY_TOL:
            total += cj * t
        else:
            total += cj * (np.exp(ej * (t - T)) - np.exp(-ej * T)) / ej
    return float(total.real)


def modal_integral(mc: ModalControl, upto: float | None = None) -> float:
    """Exact integral int_0^t u_n ds (t = T by default) from the closed form."""
    t = mc.T if upto is None else upto
    return _integral_closed_form(mc.scaled_coeffs, mc.exponents, mc.T, t)


def moment_residuals(mc: ModalControl, sys: MomentSystem) -> list[float]:
    """Quadrature check of every imposed moment, independent of the Gram solve.

    Each residual is |quad(u_n e^(eta_i s)) - target_i| / max(1, |target_i|)
    with the integral evaluated by adaptive quadrature on real and imaginary
    parts separately.
    """
    coeffs = np.asarray(mc.scaled_coeffs)
    eta_c = np.asarray(mc.exponents)

    def u(t: float) -> float:
        return float(np.real(np.sum(coeffs * np.exp(eta_c * (t - mc.T)))))

    out = []
    for eta_i, target in zip(sys.exponents, sys.targets):
        re, _ = scipy.integrate.quad(
            lambda s: u(s) * math.exp(eta_i.real * s) * math.cos(eta_i.imag * s),
            0.0, sys.T, limit=400,
        )
        im, _ = scipy.integrate.quad(
            lambda s: u(s) * math.exp(eta_i.real * s) * math.sin(eta_i.imag * s),
            0.0, sys.T, limit=400,
        )
        resid = abs(complex(re, im) - target) / max(1.0, abs(target))
        out.append(float(resid))
    return out


def moment_quadrature_floor(mc: ModalControl, sys: MomentSystem) -> list[float]:
    """Double-precision measurement floor of each quadrature residual.

    The integrand u(s) e^(eta_i s) peaks at sum|C'| e^(Re eta_i T) while the
    moment value stays O(target); the quotient bounds the relative accuracy
    any quadrature can reach, so residuals below this floor carry no signal.
    Floors are expressed on the same scale as moment_residuals.
    """
    majorant = float(np.sum(np.abs(np.asarray(mc.scaled_coeffs))))
    eps = np.finfo(float).eps
    out = []
    for eta_i, target in zip(sys.exponents, sys.targets):
        try:
            peak = majorant * math.exp(max(0.0, eta_i.real) * sys.T)
        except OverflowError:
            peak = float("inf")
        out.append(32.0 * eps * sys.T * peak / max(1.0, abs(target)))
    return out


def cauchy_determinant(q) -> float:
    """Closed-form determinant of the matrix [1/(q_i + q_j)].

    prod_{i>j} (q_i - q_j)^2 / prod_{i,j} (q_i + q_j); the empty matrix has
    determinant 1 by convention.
    """
    q = [float(v) for v in q]
    num = 1.0
    for i in range(len(q)):
        for j in range(i):
            num *= (q[i] - q[j]) ** 2
    den = 1.0
    for qi in q:
        for qj in q:
            den *= qi + qj
    return num / den if q else 1.0


@dataclass(frozen=True)
class DeterminantDiagnostics:
    """Scaled Gram determinant against its large-horizon Cauchy limit."""

    det_scaled: complex
    condition: float
    det_limit: complex | None
    rel_gap: float | None
    cauchy_leading: float | None  # P / (2 mu)^2 for generic modes


def determinant_diagnostics(sys: MomentSystem) -> DeterminantDiagnostics:
    """det and conditioning of the scaled matrix, plus the T -> inf limit gap.

    The limit matrix [1/(eta_i + eta_j)] exists only when no exponent sum
    degenerates (no eta = 0 in the system); otherwise the limit fields are None.
    """
    eta = np.asarray(sys.exponents, dtype=complex)
    G = _scaled_gram(eta, sys.T)
    det_scaled = complex(np.linalg.det(G))
    condition = float(np.linalg.cond(G))
    z = eta[:, None] + eta[None, :]
    if np.min(np.abs(z)) < GRAM_DEGENERACY_TOL:
        return DeterminantDiagnostics(det_scaled, condition, None, None, None)
    det_limit = complex(np.linalg.det(1.0 / z))
    rel_gap = abs(det_scaled - det_limit) / abs(det_limit)
    reals = sorted(e.real for e in eta if abs(e.imag) > 0)
    qs = [e.real for e in eta if abs(e.imag) <= 1e-300]
    leading = None
    if reals:
        mu = reals[0]
        leading = cauchy_determinant(qs) / (2.0 * mu) ** 2
    return DeterminantDiagnostics(det_scaled, condition, det_limit, rel_gap, leading)
