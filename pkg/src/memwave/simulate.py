"""Time-domain integration of the modal dynamics and residue-series evaluators.

The memory convolution is exact for a Prony kernel once the auxiliary states
w_k(t) = int_0^t e^(-gamma_k (t-s)) theta(s) ds are adjoined, giving the linear
system

    theta'  = dtheta
    dtheta' = -alpha^2 K(0) theta + alpha^2 sum_k c_k w_k + u(t)
    w_k'    = theta - gamma_k w_k

integrated by the classical fixed-step fourth-order Runge-Kutta scheme.  For a
linear time-invariant system one RK4 step is an affine map y -> Phi y + sum_i
Psi_i u(stage_i); the step matrices are precomputed once per (mode, dt), which
makes batched runs over many modes cheap without changing the method.

The residue-series evaluators invert the modal Laplace transform
l(lambda) theta_hat = lambda phi0 + phi1 + u_hat over the complete root set of
l, including the always-present zero root whose contribution is the constant
(phi1 + accumulated control) / l'(0).  They serve as closed-form cross-oracles
for the integrator and vice versa.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charroots import CharacteristicRoots
from .errors import ParameterMismatch, StepSizeInvalid
from .kernel import ExponentialKernel
from .moments import ModalControl, _eval_many, exp_integral


@dataclass(frozen=True)
class ModalState:
    """State of one mode: displacement, velocity and the memory states."""

    theta: float
    dtheta: float
    w: tuple[float, ...]


@dataclass(frozen=True)
class SimulationTrace:
    """Sampled trajectory of one mode under a given control."""

    mode: int
    alpha: float
    kernel_c: tuple[float, ...]
    kernel_gamma: tuple[float, ...]
    control_T: float | None  # None when the run was unforced
    times: np.ndarray  # (S,)
    theta: np.ndarray  # (S,)
    dtheta: np.ndarray  # (S,)
    w: np.ndarray  # (S, N)
    u: np.ndarray  # (S,)

    def state(self, i: int) -> ModalState:
        return ModalState(
            theta=float(self.theta[i]),
            dtheta=float(self.dtheta[i]),
            w=tuple(map(float, self.w[i])),
        )


def _system_matrix(k: ExponentialKernel, alpha: float) -> np.ndarray:
    n = k.n_terms
    a = np.zeros((n + 2, n + 2))
    a[0, 1] = 1.0
    a[1, 0] = -alpha * alpha * k.k0
    a[1, 2:] = alpha * alpha * np.asarray(k.c)
    a[2:, 0] = 1.0
    a[2:, 2:] = -np.diag(np.asarray(k.gamma))
    return a


def _rk4_step_maps(a: np.ndarray, h: float):
    """Exact RK4 step maps for y' = A y + B u with B the unit velocity vector.

    One classical RK4 step is y+ = Phi y + P1 u(t) + P2 u(t+h/2) + P3 u(t+h)
    with Phi the degree-4 truncated exponential of hA and the P_i the stage
    weights collected on B.
    """
    d = a.shape[0]
    eye = np.eye(d)
    ha = h * a
    phi = eye + ha @ (eye + ha @ (eye / 2.0 + ha @ (eye / 6.0 + ha / 24.0)))
    b = np.zeros(d)
    b[1] = 1.0
    ab = a @ b
    a2b = a @ ab
    a3b = a @ a2b
    p1 = h / 6.0 * b + h * h / 6.0 * ab + h**3 / 12.0 * a2b + h**4 / 24.0 * a3b
    p2 = 2.0 * h / 3.0 * b + h * h / 3.0 * ab + h**3 / 12.0 * a2b
    p3 = h / 6.0 * b
    return phi, p1, p2, p3


class _Batch:
    """Vectorized fixed-step RK4 over a batch of modes sharing the time grid."""

    def __init__(self, k: ExponentialKernel, alphas, phi0, phi1):
        self.kernel = k
        self.alphas = np.asarray(alphas, dtype=float)
        m = self.alphas.size
        d = k.n_terms + 2
        self.y = np.zeros((m, d))
        self.y[:, 0] = phi0
        self.y[:, 1] = phi1
        self.mats = np.stack([_system_matrix(k, a) for a in self.alphas])

    def control_samples(self, controls, ts: np.ndarray) -> np.ndarray:
        """Real control values, shape (len(ts), n_modes); zero where control is None."""
        out = np.zeros((ts.size, self.alphas.size))
        for i, mc in enumerate(controls):
            if mc is None:
                continue
            coeffs = np.asarray(mc.scaled_coeffs)
            eta = np.asarray(mc.exponents)
            out[:, i] = _eval_many(eta, coeffs, mc.T, ts).real
        return out

    def run_leg(self, t0: float, t1: float, n_steps: int, controls=None, watch=None,
                record: bool = True):
        """Advance all modes from t0 to t1 in n_steps RK4 steps.

        Returns (times, states) with states recorded at every step, shape
        (n_steps+1, m, d), or states=None when record is False.  When `watch`
        is given (per-mode step limits), the running max of |theta| over steps
        1..limit is accumulated into it.
        """
        h = (t1 - t0) / n_steps
        m, d = self.y.shape
        steps = [_rk4_step_maps(self.mats[i], h) for i in range(m)]
        phi = np.stack([s[0] for s in steps])
        if controls is not None and any(c is not None for c in controls):
            stage_ts = t0 + 0.5 * h * np.arange(2 * n_steps + 1)
            u = self.control_samples(controls, stage_ts)  # (2n+1, m)
            p1 = np.stack([s[1] for s in steps])
            p2 = np.stack([s[2] for s in steps])
            p3 = np.stack([s[3] for s in steps])
            forcing = (
                u[0:-2:2, :, None] * p1[None]
                + u[1::2, :, None] * p2[None]
                + u[2::2, :, None] * p3[None]
            )  # (n_steps, m, d)
        else:
            forcing = None

        out = np.empty((n_steps + 1, m, d)) if record else None
        if record:
            out[0] = self.y
        y = self.y
        for s in range(n_steps):
            y = np.einsum("mij,mj->mi", phi, y)
            if forcing is not None:
                y = y + forcing[s]
            if record:
                out[s + 1] = y
            if watch is not None:
                active = watch["limit"] >= s + 1
                np.maximum(
                    watch["max_theta"],
                    np.where(active, np.abs(y[:, 0]), -np.inf),
                    out=watch["max_theta"],
                )
        self.y = y
        times = t0 + h * np.arange(n_steps + 1)
        return times, out


def simulate_mode(
    k: ExponentialKernel,
    alpha: float,
    phi0n: float,
    phi1n: float,
    u: ModalControl | None,
    t_end: float,
    dt: float,
    mode: int = 0,
    sample_every: int = 1,
) -> SimulationTrace:
    """Integrate one mode from rest-augmented initial data up to t_end.

    The control (if any) acts on [0, T] and is zero afterwards; the run is
    split at T so the forcing discontinuity never sits inside a step.  The
    step count per leg is rounded so the grid lands exactly on the breakpoints
    (the effective step never exceeds the requested dt by more than rounding).
    """
    if dt <= 0 or not np.isfinite(dt):
        raise StepSizeInvalid(f"dt={dt} must be a positive finite number")
    if t_end <= 0 or not np.isfinite(t_end):
        raise StepSizeInvalid(f"t_end={t_end} must be a positive finite number")
    if sample_every < 1:
        raise StepSizeInvalid("sample_every must be >= 1")

    batch = _Batch(k, [alpha], [phi0n], [phi1n])
    legs = []
    if u is not None and u.T < t_end:
        legs.append((0.0, u.T, [u]))
        legs.append((u.T, t_end, [None]))
    else:
        legs.append((0.0, t_end, [u]))

    all_times: list[np.ndarray] = []
    all_states: list[np.ndarray] = []
    for t0, t1, ctrl in legs:
        n_steps = max(1, round((t1 - t0) / dt))
        times, states = batch.run_leg(t0, t1, n_steps, ctrl)
        keep = np.arange(0, n_steps + 1, sample_every)
        if keep[-1] != n_steps:
            keep = np.append(keep, n_steps)
        if all_times:  # drop the duplicated breakpoint sample
            keep = keep[1:]
        all_times.append(times[keep])
        all_states.append(states[keep, 0, :])

    times = np.concatenate(all_times)
    states = np.concatenate(all_states)
    if u is not None:
        inside = times <= u.T
        uvals = np.zeros_like(times)
        uvals[inside] = batch.control_samples([u], times[inside])[:, 0]
    else:
        uvals = np.zeros_like(times)
    return SimulationTrace(
        mode=mode,
        alpha=float(alpha),
        kernel_c=k.c,
        kernel_gamma=k.gamma,
        control_T=None if u is None else u.T,
        times=times,
        theta=states[:, 0],
        dtheta=states[:, 1],
        w=states[:, 2:],
        u=uvals,
    )


def free_response_series(
    roots: CharacteristicRoots, phi0n: float, phi1n: float, t: float
) -> float:
    """Unforced response as the residue sum over the complete root set.

    theta(t) = sum over all roots of (lambda phi0 + phi1) e^(lambda t) / l'(lambda);
    the zero root contributes the constant phi1 / l'(0) that the nonzero roots
    alone cannot represent (their sum decays), and with it the series
    reproduces the initial data exactly at t = 0.
    """
    total = 0j
    for lam, lp in zip(roots.roots, roots.lprime):
        total += (lam * phi0n + phi1n) * np.exp(lam * t) / lp
    return float(total.real)


def forced_response_series(roots: CharacteristicRoots, mc: ModalControl, t: float) -> float:
    """Zero-data forced response as the residue sum over the complete root set.

    Each root contributes int_0^min(t,T) u(s) e^(lambda (t-s)) ds / l'(lambda),
    evaluated in closed form from the exponential-sum control.  The inner
    exponent eta_j - lambda vanishes only when both are zero (control exponents
    have nonnegative real part, roots nonpositive), which the Taylor branch of
    exp_integral covers continuously.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    tau = min(t, mc.T)
    coeffs = np.asarray(mc.scaled_coeffs)
    eta = np.asarray(mc.exponents)
    total = 0j
    for lam, lp in zip(roots.roots, roots.lprime):
        inner = 0j
        for cj, ej in zip(coeffs, eta):
            inner += cj * np.exp(-ej * mc.T) * exp_integral(ej - lam, tau)
        total += np.exp(lam * t) * inner / lp
    return float(total.real)


def invariant_drift(
    trace: SimulationTrace,
    k: ExponentialKernel,
    alpha: float,
    u: ModalControl | None,
) -> float:
    """Max deviation of the conserved quantity along the trace.

    I(t) = dtheta + alpha^2 sum_k (c_k/gamma_k) w_k obeys I' = u, so
    I(t) - I(0) - int_0^t u ds vanishes identically; its sampled maximum is a
    global consistency check on the integrator, the closed-form control
    integral and the recorded memory states at once.
    """
    if (k.c, k.gamma) != (trace.kernel_c, trace.kernel_gamma):
        raise ParameterMismatch("kernel does not match the trace")
    if abs(alpha - trace.alpha) > 0:
        raise ParameterMismatch(f"alpha={alpha} does not match trace alpha={trace.alpha}")
    if (u.T if u is not None else None) != trace.control_T:
        raise ParameterMismatch("control horizon does not match the trace")
    weights = alpha * alpha * np.asarray(k.c) / np.asarray(k.gamma)
    inv = trace.dtheta + trace.w @ weights
    if u is None:
        accumulated = np.zeros_like(trace.times)
    else:
        tcl = np.minimum(trace.times, u.T)
        coeffs = np.asarray(u.scaled_coeffs)
        eta = np.asarray(u.exponents)
        small = np.abs(eta) < 1e-13
        safe = np.where(small, 1.0, eta)
        terms = np.where(
            small[None, :],
            coeffs[None, :] * tcl[:, None],
            coeffs[None, :]
            * (np.exp(np.multiply.outer(tcl - u.T, eta)) - np.exp(-eta * u.T)[None, :])
            / safe[None, :],
        )
        accumulated = terms.sum(axis=1).real
    i0 = inv[0]
    return float(np.max(np.abs(inv - i0 - accumulated)))
