"""Dense complex matrix helpers shared by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Nothing here
mutates its arguments.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


class NormkitError(Exception):
    """Base class for all errors raised by normkit."""


class ShapeError(NormkitError, ValueError):
    """Operands have incompatible or non-square shapes."""


class PreconditionError(NormkitError, ValueError):
    """An input violates a documented precondition (e.g. it is not normal)."""


class InfeasibleError(NormkitError):
    """The requested construction does not exist for the given data."""


class NumericalError(NormkitError, ArithmeticError):
    """An iterative procedure failed to reach the requested accuracy."""


@dataclass(frozen=True)
class Tolerance:
    rel_normality: float = 1e-10
    collinearity: float = 1e-8
    eig_residual: float = 1e-10

    def __post_init__(self):
        for name in ("rel_normality", "collinearity", "eig_residual"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"tolerance {name} must be positive, got {value!r}")

    @classmethod
    def from_env(cls, var: str = "NORMKIT_TOL") -> Tolerance:
        """Read a tolerance bundle from the environment.

        The variable holds either a single number, applied to all three
        fields, or three comma separated numbers in field order.
        """
        raw = os.environ.get(var, "").strip()
        if not raw:
            return cls()
        parts = [float(p) for p in raw.split(",")]
        if len(parts) == 1:
            parts *= 3
        if len(parts) != 3:
            raise ValueError(f"{var} must hold 1 or 3 numbers, got {raw!r}")
        return cls(*parts)


DEFAULT_TOL = Tolerance()


def as_cmatrix(a, *, square: bool = False) -> np.ndarray:
    """Convert ``a`` to a finite 2-D complex128 array."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def as_cvector(v) -> np.ndarray:
    x = np.array(v, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(x)):
        raise ValueError("vector entries must be finite")
    return x


def adjoint(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def fro(a) -> float:
    return float(np.linalg.norm(a))


def commutator(a, b) -> np.ndarray:
    a = as_cmatrix(a, square=True)
    b = as_cmatrix(b, square=True)
    if a.shape != b.shape:
        raise ShapeError(f"commutator of {a.shape} and {b.shape} matrices")
    return a @ b - b @ a


def normality_defect(a) -> float:
    """Scale-free normality measure ``||[A, A*]||_F / max(1, ||A||_F^2)``."""
    a = as_cmatrix(a, square=True)
    c = a @ adjoint(a) - adjoint(a) @ a
    return fro(c) / max(1.0, fro(a) ** 2)


def is_normal(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    return normality_defect(a) <= tol.rel_normality


def hermitian_defect(h) -> float:
    h = as_cmatrix(h, square=True)
    return fro(h - adjoint(h)) / max(1.0, fro(h))


def require_normal(a, tol: Tolerance = DEFAULT_TOL, name: str = "A") -> np.ndarray:
    a = as_cmatrix(a, square=True)
    d = normality_defect(a)
    if d > tol.rel_normality:
        raise PreconditionError(f"{name} is not normal (defect {d:.3e} > {tol.rel_normality:.1e})")
    return a


def _jacobi_sweep(h: np.ndarray, q: np.ndarray, thresh: float) -> None:
    n = h.shape[0]
    for p in range(n - 1):
        for r in range(p + 1, n):
            apr = h[p, r]
            mag = abs(apr)
            if mag <= thresh:
                continue
            e = apr / mag
            tau = (h[r, r].real - h[p, p].real) / (2.0 * mag)
            if tau == 0.0:
                t = 1.0
            else:
                t = np.copysign(1.0, tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # V = [[c, s e], [-s conj(e), c]] on (p, r); H <- V* H V, Q <- Q V
            hp = h[:, p].copy()
            hr = h[:, r]
            h[:, p] = c * hp - s * np.conj(e) * hr
            h[:, r] = s * e * hp + c * hr
            rp = h[p, :].copy()
            rr = h[r, :]
            h[p, :] = c * rp - s * e * rr
            h[r, :] = s * np.conj(e) * rp + c * rr
            h[p, r] = h[r, p] = 0.0
            h[p, p] = h[p, p].real
            h[r, r] = h[r, r].real
            qp = q[:, p].copy()
            qr = q[:, r]
            q[:, p] = c * qp - s * np.conj(e) * qr
            q[:, r] = s * e * qp + c * qr


def hermitian_eig(h, tol: Tolerance = DEFAULT_TOL, max_sweeps: int = 60):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Returns ``(Q, d)`` with ``H = Q diag(d) Q*``, ``Q`` unitary and ``d``
    ascending.
    """
    h = as_cmatrix(h, square=True)
    scale = fro(h)
    if fro(h - adjoint(h)) > 1e-12 * max(1.0, scale):
        raise PreconditionError("hermitian_eig requires a Hermitian matrix")
    n = h.shape[0]
    work = 0.5 * (h + adjoint(h))
    q = np.eye(n, dtype=np.complex128)
    if scale == 0.0:
        return q, np.zeros(n)
    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        off = fro(work - np.diag(np.diag(work)))
        if off <= eps * scale:
            break
        _jacobi_sweep(work, q, thresh=0.1 * eps * scale / n)
    else:
        raise NumericalError("Jacobi iteration did not converge")
    d = np.diag(work).real.copy()
    order = np.argsort(d, kind="stable")
    return q[:, order], d[order]


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    qm, rm = np.linalg.qr(z)
    ph = np.diag(rm) / np.abs(np.diag(rm))
    return qm * ph


def random_normal(n: int, seed=None, *, eigenvalues=None) -> np.ndarray:
    """Random normal matrix ``U diag(lam) U*`` with a Haar-like unitary ``U``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    u = random_unitary(n, rng)
    if eigenvalues is None:
        lam = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    else:
        lam = as_cvector(eigenvalues)
        if lam.size != n:
            raise ShapeError("eigenvalue count does not match n")
    return (u * lam) @ adjoint(u)


def lex_order(values) -> np.ndarray:
    """Indices sorting complex values by real part, then imaginary part."""
    values = np.asarray(values, dtype=np.complex128)
    return np.lexsort((values.imag, values.real))
