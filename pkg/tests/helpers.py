"""Independent small-scale oracles and strategies used across the test suite."""

from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from memwave import ExponentialKernel
from memwave.moments import MomentSystem, gram_entry


def kernels(min_terms=1, max_terms=4):
    """Random valid kernels with well-separated decay rates."""

    @st.composite
    def build(draw):
        n = draw(st.integers(min_terms, max_terms))
        c = draw(st.lists(st.floats(0.05, 20.0), min_size=n, max_size=n))
        gaps = draw(st.lists(st.floats(0.2, 5.0), min_size=n, max_size=n))
        gamma = (np.cumsum(np.asarray(gaps)) + 0.1).tolist()
        return ExponentialKernel(c=c, gamma=gamma)

    return build()


def det_laplace(m) -> complex:
    """Determinant by recursive cofactor expansion (sizes <= 6)."""
    m = [list(row) for row in m]
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0.0 + 0j
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * det_laplace(minor)
    return total


def cramer_solve(sys: MomentSystem) -> np.ndarray:
    """Unscaled coefficients C_j by Cramer's rule on the raw Gram system."""
    eta = sys.exponents
    n = len(eta)
    g = [[gram_entry(eta[i], eta[j], sys.T) for j in range(n)] for i in range(n)]
    det = det_laplace(g)
    out = np.empty(n, dtype=complex)
    for col in range(n):
        mod = [row[:col] + [sys.targets[i]] + row[col + 1 :] for i, row in enumerate(g)]
        out[col] = det_laplace(mod) / det
    return out


def rel_close(a: float, b: float, tol: float, scale: float = 0.0) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b), scale, 1e-300)


def cauchy_det_exact(q) -> float:
    """det [1/(q_i+q_j)] in exact rational arithmetic (q snapped to 1/64 grid).

    Cofactor expansion over Fractions has no rounding at all, which keeps the
    comparison meaningful even where the matrix is badly conditioned.
    """
    fr = [Fraction(round(float(v) * 64), 64) for v in q]

    def det(m):
        if len(m) == 1:
            return m[0][0]
        total = Fraction(0)
        for j in range(len(m)):
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            total += (-1) ** j * m[0][j] * det(minor)
        return total

    matrix = [[Fraction(1) / (qi + qj) for qj in fr] for qi in fr]
    return float(det(matrix))


def snap_to_grid(q) -> np.ndarray:
    """Snap values to the 1/64 grid used by the exact determinant oracle."""
    return np.round(np.asarray(q, dtype=float) * 64) / 64.0
