"""Spatial eigenstructure and smoothness bookkeeping.

A ModeBasis carries the square-rooted Laplacian eigenvalues alpha_n together
with the sup norms of the orthonormal eigenfunctions; the built-in realization
is the Dirichlet interval (0, pi) where alpha_n = n and psi_n = sqrt(2/pi) sin(n x).
Smoothness classes are tracked through the weighted sums sum |c_n|^2 alpha_n^(2 beta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SmoothnessViolation


@dataclass(frozen=True)
class ModeBasis:
    alphas: tuple[float, ...]
    psi_sup: tuple[float, ...]
    dimension: int
    kind: str  # "interval" | "user"

    def __post_init__(self):
        if len(self.alphas) == 0 or len(self.alphas) != len(self.psi_sup):
            raise ValueError("alphas and psi_sup must be nonempty and of equal length")
        if any(a <= 0 or not math.isfinite(a) for a in self.alphas):
            raise ValueError("alphas must be finite and strictly positive")
        if any(b <= a for a, b in zip(self.alphas, self.alphas[1:])):
            raise ValueError("alphas must be strictly increasing")
        if any(p <= 0 or not math.isfinite(p) for p in self.psi_sup):
            raise ValueError("psi_sup must be finite and strictly positive")
        if self.dimension < 1:
            raise ValueError("dimension must be a positive integer")

    @property
    def n_modes(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class InitialData:
    """Eigen-coefficients of the initial displacement (phi0) and velocity (phi1)."""

    phi0: tuple[float, ...]
    phi1: tuple[float, ...]

    def __post_init__(self):
        if len(self.phi0) != len(self.phi1):
            raise ValueError("phi0 and phi1 must have equal length")
        if any(not math.isfinite(v) for v in self.phi0 + self.phi1):
            raise ValueError("initial coefficients must be finite")


def interval_basis(n_max: int) -> ModeBasis:
    """First n_max Dirichlet modes of the interval (0, pi): alpha_n = n."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    sup = math.sqrt(2.0 / math.pi)
    return ModeBasis(
        alphas=tuple(float(n) for n in range(1, n_max + 1)),
        psi_sup=(sup,) * n_max,
        dimension=1,
        kind="interval",
    )


def sobolev_norm_sq(basis: ModeBasis, coeffs, beta: float) -> float:
    """Weighted squared norm sum_n coeffs_n^2 alpha_n^(2 beta) over the supplied modes."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size > basis.n_modes:
        raise ValueError("more coefficients than basis modes")
    alphas = np.asarray(basis.alphas[: coeffs.size])
    return float(np.sum(coeffs**2 * alphas ** (2.0 * beta)))


def tail_majorant(n_max: int, beta: float) -> float:
    """Closed-form bound for sum_{n > n_max} n^(-2 beta) on the interval basis.

    Integral comparison gives n_max^(1 - 2 beta) / (2 beta - 1); requires beta > 1/2.
    """
    if beta <= 0.5:
        raise ValueError("tail majorant requires beta > 1/2")
    return float(n_max ** (1.0 - 2.0 * beta) / (2.0 * beta - 1.0))


def generate_initial_data(
    basis: ModeBasis, beta: float, amplitude: float, seed: int
) -> InitialData:
    """Deterministic pseudo-random initial data with prescribed smoothness.

    phi0_n = amplitude * sigma_n * alpha_n^(-(beta+1)-1) and
    phi1_n = amplitude * tau_n * alpha_n^(-beta-1), with sigma, tau drawn
    uniformly from [-1, 1] by a counter-based Philox generator keyed on the
    seed (one uniform block of shape (2, n_modes): row 0 = sigma, row 1 = tau).
    The decay guarantees finite weighted norms at orders beta+1 and beta.
    """
    if beta <= basis.dimension / 2.0:
        raise SmoothnessViolation(
            f"beta={beta} must exceed dimension/2={basis.dimension / 2.0}"
        )
    if amplitude <= 0:
        raise ValueError("amplitude must be strictly positive")
    rng = np.random.Generator(np.random.Philox(key=seed))
    draws = rng.uniform(-1.0, 1.0, size=(2, basis.n_modes))
    alphas = np.asarray(basis.alphas)
    phi0 = amplitude * draws[0] * alphas ** (-(beta + 1.0) - 1.0)
    phi1 = amplitude * draws[1] * alphas ** (-beta - 1.0)
    return InitialData(phi0=tuple(map(float, phi0)), phi1=tuple(map(float, phi1)))
