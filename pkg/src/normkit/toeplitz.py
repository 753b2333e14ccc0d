"""Rotated Hermitian/skew-Hermitian splits of scalars and matrices.

For a unimodular ``theta`` every matrix splits as ``A = herm + skew`` where
``conj(theta) * herm`` is Hermitian and ``conj(theta) * skew`` is
skew-Hermitian. With ``theta = 1`` this is the usual Cartesian split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    PreconditionError,
    Tolerance,
    adjoint,
    as_cmatrix,
    fro,
    normality_defect,
)


def unimodular(z) -> complex:
    z = complex(z)
    r = abs(z)
    if r == 0.0 or not np.isfinite(r):
        raise ValueError(f"cannot normalize {z!r} to a unimodular number")
    return z / r


def canonical_direction(theta) -> complex:
    """Representative of ``{theta, -theta}`` with argument in ``[0, pi)``."""
    theta = unimodular(theta)
    if theta.imag < 0.0 or (theta.imag == 0.0 and theta.real < 0.0):
        theta = -theta
    return theta


def theta_split_scalar(z, theta) -> tuple[complex, complex]:
    z = complex(z)
    theta = unimodular(theta)
    w = theta.conjugate() * z
    return w.real * theta, 1j * w.imag * theta


@dataclass(frozen=True)
class ThetaDecomposition:
    theta: complex
    herm: np.ndarray
    skew: np.ndarray

    @property
    def rotated_herm(self) -> np.ndarray:
        """``conj(theta) * herm``, a Hermitian matrix."""
        return self.theta.conjugate() * self.herm

    @property
    def rotated_skew(self) -> np.ndarray:
        """``-i conj(theta) * skew``, also Hermitian."""
        return -1j * self.theta.conjugate() * self.skew


def theta_split(a, theta) -> ThetaDecomposition:
    a = as_cmatrix(a, square=True)
    theta = unimodular(theta)
    n = theta.conjugate() * a
    h = 0.5 * (n + adjoint(n))
    s = 0.5 * (n - adjoint(n))
    return ThetaDecomposition(theta, theta * h, theta * s)


def is_theta_hermitian(a, theta, tol: float = 1e-12) -> bool:
    a = as_cmatrix(a, square=True)
    n = unimodular(theta).conjugate() * a
    return fro(n - adjoint(n)) <= tol * max(fro(a), np.finfo(float).tiny)


@dataclass(frozen=True)
class EssentiallyHermitianCert:
    """``A = theta * hmatrix + alpha * I`` with ``hmatrix`` Hermitian."""

    theta: complex
    alpha: complex
    hmatrix: np.ndarray

    def reconstruct(self) -> np.ndarray:
        n = self.hmatrix.shape[0]
        return self.theta * self.hmatrix + self.alpha * np.eye(n)


def fit_line(points) -> tuple[complex, complex, float]:
    """Total least squares line through complex points.

    Returns ``(theta, foot, residual)``: the canonical direction, the point
    of the line closest to the origin, and the largest orthogonal distance
    of a point from the line.
    """
    z = np.asarray(points, dtype=np.complex128).reshape(-1)
    c = z.mean()
    d = z - c
    if np.max(np.abs(d), initial=0.0) == 0.0:
        return 1.0 + 0j, c, 0.0
    xy = np.column_stack([d.real, d.imag])
    _, _, vt = np.linalg.svd(xy, full_matrices=False)
    theta = canonical_direction(complex(vt[0, 0], vt[0, 1]))
    resid = float(np.max(np.abs((theta.conjugate() * d).imag)))
    foot = 1j * theta * (theta.conjugate() * c).imag
    return theta, foot, resid


def essentially_hermitian(a, tol: Tolerance = DEFAULT_TOL) -> EssentiallyHermitianCert | None:
    """Certificate that a normal ``A`` has collinear spectrum, or ``None``."""
    from .spectral import normal_eig

    a = as_cmatrix(a, square=True)
    defect = normality_defect(a)
    if defect > tol.rel_normality:
        raise PreconditionError(f"A is not normal (defect {defect:.3e})")
    lam = normal_eig(a, tol).lam
    n = a.shape[0]
    diameter = float(np.max(np.abs(lam[:, None] - lam[None, :]))) if n else 0.0
    if diameter <= tol.collinearity * (1.0 + np.max(np.abs(lam))):
        alpha = complex(lam.mean())
        return EssentiallyHermitianCert(1.0 + 0j, alpha, np.zeros((n, n), dtype=np.complex128))
    theta, foot, resid = fit_line(lam)
    if resid > tol.collinearity * (1.0 + diameter):
        return None
    n_shift = theta.conjugate() * (a - foot * np.eye(n))
    h = 0.5 * (n_shift + adjoint(n_shift))
    return EssentiallyHermitianCert(theta, foot, h)
