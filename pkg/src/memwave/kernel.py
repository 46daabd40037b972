"""Exponential memory kernels and their Laplace-domain derivates.

The relaxation kernel is a finite Prony sum K(t) = sum_j (c_j/gamma_j) e^(-gamma_j t)
with positive amplitudes and pairwise distinct positive decay rates.  Everything
downstream (characteristic roots, moment systems, simulation) consumes the kernel
only through the functions in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketFailure, PoleProximity

POLE_TOL = 1e-12


@dataclass(frozen=True)
class ExponentialKernel:
    """Prony kernel parameters, canonically sorted by decay rate.

    c[j] is the amplitude of the j-th term and gamma[j] its decay rate; the
    kernel value is sum_j (c[j]/gamma[j]) * exp(-gamma[j]*t).
    """

    c: tuple[float, ...]
    gamma: tuple[float, ...]

    def __init__(self, c, gamma):
        c = tuple(float(v) for v in c)
        gamma = tuple(float(v) for v in gamma)
        if len(c) == 0 or len(c) != len(gamma):
            raise ValueError("c and gamma must be nonempty lists of equal length")
        if any(not math.isfinite(v) or v <= 0 for v in c):
            raise ValueError("kernel amplitudes must be finite and strictly positive")
        if any(not math.isfinite(v) or v <= 0 for v in gamma):
            raise ValueError("kernel decay rates must be finite and strictly positive")
        if len(set(gamma)) != len(gamma):
            raise ValueError("duplicate gamma values are not allowed")
        order = sorted(range(len(gamma)), key=lambda i: gamma[i])
        object.__setattr__(self, "c", tuple(c[i] for i in order))
        object.__setattr__(self, "gamma", tuple(gamma[i] for i in order))

    @property
    def n_terms(self) -> int:
        return len(self.c)

    @property
    def k0(self) -> float:
        """K(0) = sum c_j / gamma_j."""
        return float(sum(cj / gj for cj, gj in zip(self.c, self.gamma)))

    @property
    def kprime0(self) -> float:
        """K'(0) = -sum c_j."""
        return -float(sum(self.c))


def kernel_value(k: ExponentialKernel, t: float) -> float:
    """K(t) for t >= 0; strictly positive and non-increasing."""
    return float(sum((cj / gj) * math.exp(-gj * t) for cj, gj in zip(k.c, k.gamma)))


def kernel_derivative(k: ExponentialKernel, t: float) -> float:
    """K'(t) = -sum c_j e^(-gamma_j t); strictly negative."""
    return -float(sum(cj * math.exp(-gj * t) for cj, gj in zip(k.c, k.gamma)))


def _check_poles(k: ExponentialKernel, lam: complex) -> None:
    tol = POLE_TOL * max(1.0, abs(lam))
    for g in k.gamma:
        if abs(lam + g) <= tol:
            raise PoleProximity(f"lambda={lam} within {tol:g} of pole {-g}")


def laplace_khat(k: ExponentialKernel, lam: complex) -> complex:
    """Laplace transform of K: sum_j c_j / (gamma_j (lambda + gamma_j))."""
    _check_poles(k, lam)
    return sum(cj / (gj * (lam + gj)) for cj, gj in zip(k.c, k.gamma))


def khat_derivative(k: ExponentialKernel, lam: complex) -> complex:
    """Termwise derivative of laplace_khat: -sum_j c_j / (gamma_j (lambda + gamma_j)^2)."""
    _check_poles(k, lam)
    return -sum(cj / (gj * (lam + gj) ** 2) for cj, gj in zip(k.c, k.gamma))


def _khat_numerator(k: ExponentialKernel) -> np.ndarray:
    # Pole-cleared numerator of khat: g(l) = sum_k (c_k/gamma_k) prod_{j != k} (l + gamma_j).
    # Evaluating this instead of khat avoids overflow near the poles.
    num = np.zeros(1)
    for i, (ci, gi) in enumerate(zip(k.c, k.gamma)):
        term = np.array([ci / gi])
        for j, gj in enumerate(k.gamma):
            if j != i:
                term = np.polymul(term, [1.0, gj])
        num = np.polyadd(num, term)
    return num


def _bisect(poly: np.ndarray, lo: float, hi: float, max_iter: int = 200) -> float:
    flo = np.polyval(poly, lo)
    fhi = np.polyval(poly, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise BracketFailure(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:  # interval at floating-point resolution
            return mid
        fmid = np.polyval(poly, mid)
        if fmid == 0.0:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    raise BracketFailure(f"bisection did not converge on [{lo}, {hi}] in {max_iter} iterations")


def khat_zeros(k: ExponentialKernel) -> list[float]:
    """Real zeros of khat, returned as positive decay rates q_k, ascending.

    There is exactly one zero in each gap (-gamma_{k+1}, -gamma_k); the returned
    values are q_k = -zero with gamma_k < q_k < gamma_{k+1}.  Bisection on the
    pole-cleared numerator polynomial isolates the zero; a Newton polish on the
    transform itself removes the coefficient-rounding bias of the expansion.
    """
    num = _khat_numerator(k)
    qs = []
    for i in range(k.n_terms - 1):
        g_lo, g_hi = k.gamma[i], k.gamma[i + 1]
        eps = 1e-12 * (g_hi - g_lo)
        root = _bisect(num, -(g_hi - eps), -(g_lo + eps))
        for _ in range(3):
            step = (laplace_khat(k, root) / khat_derivative(k, root)).real
            polished = root - step
            if not (-g_hi < polished < -g_lo):
                break
            root = polished
            if abs(step) <= 4e-16 * abs(root):
                break
        qs.append(-root)
    return qs
