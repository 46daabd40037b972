"""Characteristic roots of the modal symbol l(lambda) = lambda^2 + alpha^2 lambda khat(lambda).

Per mode the symbol has the always-present zero root, generically one complex
conjugate pair -mu +/- i nu, and one simple negative real root -q_k strictly
between each pair of consecutive kernel poles.  Roots are isolated on the
pole-cleared polynomial (bracketed bisection per pole gap, synthetic-division
deflation, closed-form residual quadratic) and then Newton-polished on the
symbol itself so their accuracy does not depend on deflation error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRoots
from .kernel import ExponentialKernel, _bisect, khat_derivative, khat_zeros, laplace_khat
from .spectrum import ModeBasis

RESIDUAL_TOL = 1e-10
SEPARATION_TOL = 1e-8


@dataclass(frozen=True)
class CharacteristicRoots:
    """Complete root set of one mode, with symbol derivative values at each root.

    roots[0] is always 0; the remaining entries are the nonzero roots in
    canonical order (complex pair first when present, then the bracketed real
    roots by ascending q).  lprime[i] is l'(roots[i]).  mu/nu are set only for
    generic modes (exactly one complex pair).
    """

    n: int
    alpha: float
    roots: tuple[complex, ...]
    lprime: tuple[complex, ...]
    mu: float | None
    nu: float | None
    q: tuple[float, ...]
    is_generic: bool


def characteristic_polynomial(k: ExponentialKernel, alpha: float) -> np.ndarray:
    """Pole-cleared polynomial (descending coefficients) whose roots are the nonzero roots.

    p(l) = l * prod_k (l + gamma_k) + alpha^2 * sum_k (c_k/gamma_k) prod_{j != k} (l + gamma_j);
    multiplying l(lambda) by prod (lambda + gamma_k) gives lambda * p(lambda).
    """
    if alpha <= 0:
        raise ValueError("alpha must be strictly positive")
    p = np.array([1.0, 0.0])
    for g in k.gamma:
        p = np.polymul(p, [1.0, g])
    for i, (ci, gi) in enumerate(zip(k.c, k.gamma)):
        term = np.array([alpha * alpha * ci / gi])
        for j, gj in enumerate(k.gamma):
            if j != i:
                term = np.polymul(term, [1.0, gj])
        p = np.polyadd(p, term)
    return p


def characteristic_value(k: ExponentialKernel, alpha: float, lam: complex) -> complex:
    """l(lambda) = lambda^2 + alpha^2 lambda khat(lambda)."""
    return lam * lam + alpha * alpha * lam * laplace_khat(k, lam)


def lprime(k: ExponentialKernel, alpha: float, lam: complex) -> complex:
    """l'(lambda) = 2 lambda + alpha^2 (khat(lambda) + lambda khat'(lambda))."""
    return 2.0 * lam + alpha * alpha * (laplace_khat(k, lam) + lam * khat_derivative(k, lam))


def _newton_polish(k: ExponentialKernel, alpha: float, lam: complex) -> complex:
    for _ in range(12):
        f = characteristic_value(k, alpha, lam)
        df = lprime(k, alpha, lam)
        if df == 0:  # multiple root; leave it to the separation check
            return lam
        step = f / df
        new = lam - step
        if not np.isfinite(new.real) or not np.isfinite(new.imag):
            return lam
        if abs(step) <= 1e-16 * max(1.0, abs(lam)):
            return new
        lam = new
    return lam


def _evaluation_noise(k: ExponentialKernel, alpha: float, lam: complex, dl: complex) -> float:
    # measurement floor of |lam + alpha^2 khat(lam)| in double precision:
    # summation cancellation (transform terms can dwarf their sum) plus the
    # representation limit of the root itself (one ulp of displacement moves
    # the symbol by |l'| ulp(|lam|), large for roots squeezed against a pole)
    eps = np.finfo(float).eps
    terms = sum(abs(cj / (gj * (lam + gj))) for cj, gj in zip(k.c, k.gamma))
    cancellation = 256.0 * eps * (alpha * alpha * terms + abs(lam) ** 2)
    representation = 4.0 * eps * max(1.0, abs(lam)) * abs(dl)
    return cancellation + representation


def _deflate(poly: np.ndarray, root: float) -> np.ndarray:
    # synthetic division by (l - root); remainder discarded
    out = np.empty(len(poly) - 1)
    acc = 0.0
    for i in range(len(poly) - 1):
        acc = poly[i] + acc * root
        out[i] = acc
    return out


def find_roots(k: ExponentialKernel, alpha: float, n: int = 0) -> CharacteristicRoots:
    """Complete root set for one mode; raises DegenerateRoots on near-collision."""
    poly = characteristic_polynomial(k, alpha)
    n_terms = k.n_terms

    bracketed = []
    for i in range(n_terms - 1):
        g_lo, g_hi = k.gamma[i], k.gamma[i + 1]
        eps = 1e-12 * (g_hi - g_lo)
        bracketed.append(_bisect(poly, -(g_hi - eps), -(g_lo + eps)))

    deflated = poly.copy()
    for r in bracketed:
        deflated = _deflate(deflated, r)
    # residual quadratic a l^2 + b l + c holds the remaining pair
    a, b, cc = deflated
    disc = b * b - 4.0 * a * cc
    if disc < 0.0:
        pair = (-b + 1j * np.sqrt(-disc)) / (2.0 * a)
        extra_real = None
    else:
        sq = np.sqrt(disc)
        pair = None
        extra_real = sorted(((-b + sq) / (2.0 * a), (-b - sq) / (2.0 * a)), reverse=True)

    # polish on the symbol itself, then enforce exact conjugate closure
    bracketed = [complex(_newton_polish(k, alpha, complex(r))).real for r in bracketed]
    nonzero: list[complex]
    if pair is not None:
        top = _newton_polish(k, alpha, complex(pair))
        if top.imag < 0:
            top = top.conjugate()
        nonzero = [top, top.conjugate()]
        mu, nu = -top.real, top.imag
        is_generic = True
    else:
        nonzero = [complex(_newton_polish(k, alpha, complex(r))).real + 0j for r in extra_real]
        mu = nu = None
        is_generic = False
    nonzero += [r + 0j for r in sorted(bracketed, reverse=True)]

    roots = [0j] + nonzero
    scale = max(1.0, max(abs(r) for r in roots))
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= SEPARATION_TOL * scale:
                raise DegenerateRoots(
                    f"roots {roots[i]} and {roots[j]} closer than tolerance "
                    f"(alpha={alpha})",
                    mode=n,
                )
    lp = tuple(lprime(k, alpha, r) for r in roots)
    for r, dl in zip(roots[1:], lp[1:]):
        resid = abs(r + alpha * alpha * laplace_khat(k, r))
        tol = RESIDUAL_TOL * max(1.0, abs(r) ** 2) + _evaluation_noise(k, alpha, r, dl)
        if resid > tol:
            raise DegenerateRoots(
                f"root {r} failed to polish (residual {resid:g}, alpha={alpha})", mode=n
            )
    return CharacteristicRoots(
        n=n,
        alpha=float(alpha),
        roots=tuple(roots),
        lprime=lp,
        mu=mu,
        nu=nu,
        q=tuple(sorted(-r for r in bracketed)),
        is_generic=is_generic,
    )


def residue_identity(roots: CharacteristicRoots) -> tuple[complex, complex]:
    """Sums of 1/l' over the nonzero roots and over all roots.

    The all-roots sum must vanish (the symbol reciprocal decays like lambda^-2,
    so its residues cancel); the nonzero-root sum therefore equals -1/l'(0).
    """
    paper_sum = sum(1.0 / lp for lp in roots.lprime[1:])
    corrected = paper_sum + 1.0 / roots.lprime[0]
    return paper_sum, corrected


@dataclass(frozen=True)
class AsymptoticsReport:
    """Per-mode root trajectories against their large-mode limits."""

    n: tuple[int, ...]
    mu: tuple[float, ...]
    nu_over_alpha: tuple[float, ...]
    q: tuple[tuple[float, ...], ...]  # per mode, ascending
    mu_ref: float
    speed_ref: float
    q_ref: tuple[float, ...]
    scaled_mu_dev: tuple[float, ...]  # n^2 |mu_n - mu_ref|
    scaled_q_dev: tuple[tuple[float, ...], ...]  # n^2 |q_{k,n} - q_ref_k|


def root_asymptotics(k: ExponentialKernel, basis: ModeBasis) -> AsymptoticsReport:
    """Root trajectories over the basis modes with their predicted limits.

    The reference values mu_ref = -K'(0)/(2K(0)) and speed_ref = sqrt(K(0))
    come from the large-lambda expansion of khat; q_ref are the zeros of khat.
    Only generic modes (a complex pair present) enter the report.
    """
    rows = []
    for i, alpha in enumerate(basis.alphas):
        r = find_roots(k, alpha, n=i + 1)
        if r.is_generic:
            rows.append((i + 1, r))
    if len(rows) < 16:
        raise ValueError(f"need at least 16 generic modes, found {len(rows)}")
    mu_ref = -k.kprime0 / (2.0 * k.k0)
    speed_ref = float(np.sqrt(k.k0))
    q_ref = tuple(khat_zeros(k))
    ns = tuple(n for n, _ in rows)
    mus = tuple(r.mu for _, r in rows)
    nuas = tuple(r.nu / r.alpha for _, r in rows)
    qs = tuple(r.q for _, r in rows)
    mu_dev = tuple(n * n * abs(m - mu_ref) for n, m in zip(ns, mus))
    q_dev = tuple(
        tuple(n * n * abs(qv - qr) for qv, qr in zip(qrow, q_ref))
        for n, qrow in zip(ns, qs)
    )
    return AsymptoticsReport(
        n=ns,
        mu=mus,
        nu_over_alpha=nuas,
        q=qs,
        mu_ref=mu_ref,
        speed_ref=speed_ref,
        q_ref=q_ref,
        scaled_mu_dev=mu_dev,
        scaled_q_dev=q_dev,
    )
