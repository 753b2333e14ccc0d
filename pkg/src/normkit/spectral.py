"""Eigendata of normal matrices and of commuting pairs of normal matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import (
    DEFAULT_TOL,
    InfeasibleError,
    NumericalError,
    PreconditionError,
    Tolerance,
    adjoint,
    as_cmatrix,
    as_cvector,
    fro,
    hermitian_eig,
    lex_order,
    normality_defect,
    require_normal,
)
from .toeplitz import theta_split, unimodular

CLUSTER_RTOL = 1e-8
_THETA_RETRIES = 5


@dataclass(frozen=True)
class NormalEigenDecomposition:
    """``A U = U diag(lam)`` with unitary ``U``; eigenvalues sorted by (re, im)."""

    u: np.ndarray
    lam: np.ndarray

    def __len__(self):
        return self.lam.size

    def residual(self, a) -> float:
        return fro(a @ self.u - self.u * self.lam)


@dataclass(frozen=True)
class EigenLine:
    """Line ``y + rho * theta`` and the eigenvalues of ``A`` lying on it.

    ``members`` index into ``dec``; member ``j`` equals
    ``y + rho[j] * theta``.
    """

    y: complex
    theta: complex
    members: tuple[int, ...]
    rho: np.ndarray
    dec: NormalEigenDecomposition = field(repr=False)

    @property
    def p(self) -> int:
        return len(self.members)

    @property
    def vectors(self) -> np.ndarray:
        """Orthonormal eigenvectors of the members, one per column."""
        return self.dec.u[:, list(self.members)]

    @property
    def others(self) -> tuple[int, ...]:
        return tuple(j for j in range(len(self.dec)) if j not in self.members)


@dataclass(frozen=True)
class SimDiag:
    w: np.ndarray
    lambda_a: np.ndarray
    lambda_e: np.ndarray


def clusters(values, rtol: float = CLUSTER_RTOL) -> list[list[int]]:
    """Group indices of (numerically) equal values.

    Values are assumed to come from a sorted real list or to be arbitrary
    complex numbers; in either case a value joins the first group whose
    first member lies within ``rtol * (1 + max|value|)``.
    """
    values = np.asarray(values)
    if values.size == 0:
        return []
    gap = rtol * (1.0 + float(np.max(np.abs(values))))
    groups: list[list[int]] = []
    for j, x in enumerate(values):
        for g in groups:
            if abs(values[g[0]] - x) <= gap:
                g.append(j)
                break
        else:
            groups.append([j])
    return groups


def canonical_phase(u: np.ndarray, thresh: float = 1e-10) -> np.ndarray:
    """Rotate each column so its first non-negligible entry is real positive."""
    u = u.copy()
    for j in range(u.shape[1]):
        col = u[:, j]
        big = np.flatnonzero(np.abs(col) > thresh)
        if big.size:
            z = col[big[0]]
            u[:, j] = col * (abs(z) / z)
    return u


def _eig_for_theta(a: np.ndarray, theta: complex, tol: Tolerance):
    dec = theta_split(a, theta)
    q, d = hermitian_eig(dec.rotated_herm, tol)
    k = dec.rotated_skew
    for group in clusters(d):
        if len(group) == 1:
            continue
        qc = q[:, group]
        kc = adjoint(qc) @ k @ qc
        qk, _ = hermitian_eig(0.5 * (kc + adjoint(kc)), tol)
        q[:, group] = qc @ qk
    lam = np.einsum("ij,ij->j", q.conj(), a @ q)
    return q, lam


def normal_eig(a, tol: Tolerance = DEFAULT_TOL, seed: int = 0) -> NormalEigenDecomposition:
    """Unitary eigendecomposition of a normal matrix.

    The rotated Hermitian part ``H(conj(theta) A)`` is diagonalized first;
    inside every cluster of equal eigenvalues the rotated skew part, which
    commutes with it, separates the eigenvectors. ``theta = 1`` is tried
    first and random directions are drawn if the residual check fails.
    The residual is measured against ``max(1, ||A||_F)``, like the
    normality defect.
    """
    a = as_cmatrix(a, square=True)
    defect = normality_defect(a)
    if defect > tol.rel_normality:
        raise PreconditionError(f"A is not normal (defect {defect:.3e})")
    n = a.shape[0]
    scale = fro(a)
    rng = np.random.default_rng(seed)
    thetas = [1.0 + 0j] + [np.exp(1j * rng.uniform(0, np.pi)) for _ in range(_THETA_RETRIES)]
    best = None
    for theta in thetas:
        q, lam = _eig_for_theta(a, theta, tol)
        res = fro(a @ q - q * lam)
        if best is None or res < best[0]:
            best = (res, q, lam)
        if res <= tol.eig_residual * max(scale, 1.0):
            break
    res, q, lam = best
    if res > tol.eig_residual * max(scale, 1.0) and n > 0:
        raise NumericalError(f"normal_eig residual {res:.3e} exceeds tolerance")
    order = lex_order(lam)
    return NormalEigenDecomposition(canonical_phase(q[:, order]), lam[order])


def simultaneous_diag(a, e, tol: Tolerance = DEFAULT_TOL) -> SimDiag:
    """One unitary ``W`` diagonalizing two commuting normal matrices."""
    a = require_normal(a, tol, "A")
    e = require_normal(e, tol, "E")
    if a.shape != e.shape:
        raise PreconditionError(f"shape mismatch {a.shape} vs {e.shape}")
    c = fro(a @ e - e @ a)
    if c > tol.rel_normality * max(1.0, fro(a) * fro(e)):
        raise PreconditionError(f"A and E do not commute (||[A,E]||_F = {c:.3e})")
    dec_e = normal_eig(e, tol)
    u = dec_e.u
    s = adjoint(u) @ a @ u
    w = np.empty_like(u)
    groups = clusters(dec_e.lam)
    col = 0
    for g in groups:
        others = np.setdiff1d(np.arange(a.shape[0]), g)
        leak = fro(s[np.ix_(g, others)])
        if leak > 1e-8 * max(1.0, fro(a)):
            raise NumericalError(f"U*AU is not block diagonal (leak {leak:.3e})")
        block = s[np.ix_(g, g)]
        sub = normal_eig(block, Tolerance(max(tol.rel_normality, 1e-9), tol.collinearity, tol.eig_residual))
        w[:, col:col + len(g)] = u[:, g] @ sub.u
        col += len(g)
    lambda_a = np.einsum("ij,ij->j", w.conj(), a @ w)
    lambda_e = np.einsum("ij,ij->j", w.conj(), e @ w)
    return SimDiag(w, lambda_a, lambda_e)


def on_line_gap(z, y, theta) -> np.ndarray:
    """Signed orthogonal offset ``Im(conj(theta) (z - y))``."""
    return (unimodular(theta).conjugate() * (np.asarray(z) - complex(y))).imag


def group_on_line(dec: NormalEigenDecomposition, y, theta, tol: Tolerance = DEFAULT_TOL) -> EigenLine:
    """Collect the eigenvalues lying on the line through ``y`` with slope ``theta``."""
    theta = unimodular(theta)
    y = complex(y)
    lam = dec.lam
    off = np.abs(on_line_gap(lam, y, theta))
    hit = off <= tol.collinearity * (1.0 + np.abs(lam) + abs(y))
    members = tuple(int(j) for j in np.flatnonzero(hit))
    rho = (theta.conjugate() * (lam[list(members)] - y)).real
    return EigenLine(y, theta, members, rho, dec)


def theta_separation(lam, theta) -> float:
    """Smallest ``|Re(conj(theta)(l_p - l_q))| / |l_p - l_q|`` over distinct pairs."""
    lam = as_cvector(lam)
    theta = unimodular(theta)
    if lam.size < 2:
        return 1.0
    diff = lam[:, None] - lam[None, :]
    dist = np.abs(diff)
    distinct = dist > CLUSTER_RTOL * (1.0 + np.max(np.abs(lam)))
    if not distinct.any():
        return 1.0
    ratio = np.abs((theta.conjugate() * diff).real)[distinct] / dist[distinct]
    return float(ratio.min())


def is_feasible_theta(lam, theta, tol: float = 1e-3) -> bool:
    return theta_separation(lam, theta) >= tol


def feasible_theta(lam, rng=None, tol: float = 1e-3, attempts: int = 1000) -> complex:
    """Random direction separating the projections of all distinct eigenvalues."""
    rng = np.random.default_rng(rng)
    for _ in range(attempts):
        theta = np.exp(1j * rng.uniform(0.0, np.pi))
        if is_feasible_theta(lam, theta, tol):
            return complex(theta)
    raise InfeasibleError(f"no feasible theta found in {attempts} draws (tol={tol})")


def match_spectra(a, b) -> float:
    """Largest distance between two equally sized multisets of complex numbers
    under the optimal one-to-one matching."""
    a = as_cvector(a)
    b = as_cvector(b)
    if a.size != b.size:
        raise ValueError(f"spectra of different sizes: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
