"""Polynomial spectral curves of normal matrices.

For a normal ``A`` and a direction ``theta`` separating its eigenvalues, the
rotated skew part is a real polynomial in the rotated Hermitian part:
``-i conj(theta) skew(A) = pi(conj(theta) herm(A))``. Consequently every
eigenvalue sits on the curve ``rho -> theta*rho + i*theta*pi(rho)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from .core import (
    InfeasibleError,
    NumericalError,
    PreconditionError,
    as_cmatrix,
    as_cvector,
    fro,
)
from .spectral import NormalEigenDecomposition
from .toeplitz import theta_split, unimodular

TRIM_RTOL = 1e-10
DEDUP_RTOL = 1e-10


@dataclass(frozen=True)
class RealPolynomial:
    """Real polynomial with coefficients in ascending degree order."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1] * 0.0
        object.__setattr__(self, "coeffs", tuple(float(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def __call__(self, x):
        x = np.asarray(x)
        acc = np.zeros_like(x, dtype=np.result_type(x, float))
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __sub__(self, other: RealPolynomial) -> RealPolynomial:
        a = np.zeros(max(len(self.coeffs), len(other.coeffs)))
        a[: len(self.coeffs)] += self.coeffs
        a[: len(other.coeffs)] -= other.coeffs
        return RealPolynomial(a)

    def at_matrix(self, x) -> np.ndarray:
        """Evaluate at a Hermitian matrix.

        Horner runs in the variable ``(x - c) / h`` with ``[c - h, c + h]``
        a Gershgorin interval of ``x``, which keeps the powers bounded.
        """
        x = np.asarray(x)
        n = x.shape[0]
        centre, half = hermitian_window(x)
        coef = Polynomial(self.coeffs).convert(domain=[centre - half, centre + half]).coef
        t = (x - centre * np.eye(n)) / half
        acc = np.zeros((n, n), dtype=np.result_type(x, float))
        eye = np.eye(n)
        for c in reversed(coef):
            acc = acc @ t + c * eye
        return acc

    def trimmed(self, rtol: float = TRIM_RTOL) -> RealPolynomial:
        c = np.array(self.coeffs)
        big = np.max(np.abs(c))
        if big == 0.0:
            return self
        c[np.abs(c) < rtol * big] = 0.0
        return RealPolynomial(c)


@dataclass(frozen=True)
class PolyCurve:
    theta: complex
    pi: RealPolynomial

    def __post_init__(self):
        object.__setattr__(self, "theta", unimodular(self.theta))

    def __call__(self, rho):
        return curve_eval(self, rho)

    def gap(self, z):
        """Signed height of ``z`` above the curve in rotated coordinates."""
        w = self.theta.conjugate() * np.asarray(z, dtype=np.complex128)
        return w.imag - self.pi(w.real)


class CurveRegion(enum.Enum):
    ON_CURVE = "on_curve"
    CONVEX_SIDE = "convex_side"
    OTHER_SIDE = "other_side"


def curve_eval(c: PolyCurve, rho):
    rho = np.asarray(rho, dtype=float)
    out = c.theta * rho + 1j * c.theta * c.pi(rho)
    return complex(out) if out.ndim == 0 else out


def classify_point(c: PolyCurve, z, tol: float = 1e-9) -> CurveRegion:
    if c.pi.degree != 2 or c.pi.leading <= 0:
        raise PreconditionError("classify_point needs a quadratic curve with positive leading coefficient")
    z = complex(z)
    g = float(c.gap(z))
    if abs(g) <= tol * (1.0 + abs(z)):
        return CurveRegion.ON_CURVE
    return CurveRegion.CONVEX_SIDE if g > 0 else CurveRegion.OTHER_SIDE


def rotated_coordinates(lam, theta) -> tuple[np.ndarray, np.ndarray]:
    w = unimodular(theta).conjugate() * as_cvector(lam)
    return w.real, w.imag


def interpolation_nodes(lam, theta) -> tuple[np.ndarray, np.ndarray]:
    """Deduplicated (abscissa, ordinate) pairs; raises if theta fails to separate."""
    x, y = rotated_coordinates(lam, theta)
    scale = 1.0 + float(np.max(np.abs(lam), initial=0.0))
    order = np.argsort(x, kind="stable")
    xs: list[float] = []
    ys: list[float] = []
    for j in order:
        if xs and abs(x[j] - xs[-1]) <= DEDUP_RTOL * scale:
            if abs(y[j] - ys[-1]) > 1e3 * DEDUP_RTOL * scale:
                raise InfeasibleError(
                    f"theta={theta} maps distinct eigenvalues to the same abscissa {x[j]:.6g}"
                )
            continue
        xs.append(float(x[j]))
        ys.append(float(y[j]))
    return np.array(xs), np.array(ys)


def lagrange_pi(dec: NormalEigenDecomposition, theta, tol: float = 1e-10) -> RealPolynomial:
    """Least-degree polynomial through the rotated eigenvalues.

    In exact arithmetic this is the Lagrange interpolant of the nodes. The
    degree is raised one step at a time and the first least-squares fit
    matching every node to ``tol`` is returned, so spectra lying on a
    low-degree curve give that low degree rather than a noisy interpolant.
    """
    x, y = interpolation_nodes(dec.lam, theta)
    if x.size == 1:
        return RealPolynomial([y[0]])
    centre = 0.5 * (x[0] + x[-1])
    half = 0.5 * (x[-1] - x[0])
    vander = np.vander((x - centre) / half, increasing=True)
    scale = 1.0 + float(np.max(np.abs(dec.lam)))
    for deg in range(x.size):
        if deg == x.size - 1:
            coef = np.linalg.solve(vander, y)
            break
        coef = np.linalg.lstsq(vander[:, : deg + 1], y, rcond=None)[0]
        if np.max(np.abs(vander[:, : deg + 1] @ coef - y)) <= tol * scale:
            break
    poly = Polynomial(coef, domain=[centre - half, centre + half])
    return RealPolynomial(poly.convert().coef).trimmed()


def hermitian_window(x: np.ndarray) -> tuple[float, float]:
    """Centre and half width of a Gershgorin interval of a Hermitian matrix."""
    x = np.atleast_2d(x)
    d = np.diag(x).real
    r = np.sum(np.abs(x), axis=1) - np.abs(d)
    lo, hi = float(np.min(d - r)), float(np.max(d + r))
    half = 0.5 * (hi - lo)
    return 0.5 * (hi + lo), half if half > 0 else 1.0


def _random_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def krylov_pi(a, theta, v=None, rng=None, tol: float = 1e-10) -> RealPolynomial:
    """Spectral polynomial from a Lanczos recursion, without eigenvalues.

    Lanczos on the rotated Hermitian part ``X`` (shifted and scaled into
    ``[-1, 1]``) builds orthonormal vectors ``q_j = P_j(X) v`` together with
    the polynomials ``P_j``. The rotated skew part applied to ``v`` is
    projected on the growing basis until the residual drops below ``tol``;
    the projection coefficients combine the ``P_j`` into ``pi``. The result
    is checked on a second random vector and the degree grows if that
    check fails.
    """
    a = as_cmatrix(a, square=True)
    n = a.shape[0]
    rng = np.random.default_rng(rng)
    dec = theta_split(a, theta)
    x = dec.rotated_herm
    k = dec.rotated_skew
    scale = max(1.0, fro(a))
    centre, half = hermitian_window(x)
    xs = (x - centre * np.eye(n)) / half
    v = _random_vector(n, rng) if v is None else as_cvector(v) / np.linalg.norm(v)
    check = _random_vector(n, rng)
    target = k @ v
    k_check = k @ check

    basis = [v]
    polys = [np.array([1.0])]
    beta_prev = 0.0
    min_size = 1
    invariant = False
    while True:
        q = np.column_stack(basis)
        c = q.conj().T @ target
        resid = np.linalg.norm(target - q @ c)
        if invariant or (resid <= tol * scale and len(basis) >= min_size):
            if np.max(np.abs(c.imag)) > 1e-6 * max(1.0, np.max(np.abs(c))):
                raise NumericalError("Krylov coefficients are not real; is A normal?")
            coef = np.zeros(len(basis))
            for cj, pj in zip(c.real, polys):
                coef[: pj.size] += cj * pj
            acc = coef[-1] * check
            for cj in coef[-2::-1]:
                acc = xs @ acc + cj * check
            check_resid = np.linalg.norm(acc - k_check)
            if check_resid <= 1e2 * tol * scale or len(basis) >= n:
                poly = Polynomial(coef, domain=[centre - half, centre + half])
                return RealPolynomial(poly.convert().coef).trimmed()
            if invariant:
                raise NumericalError("starting vector spans a deficient Krylov space; retry with another vector")
            min_size = len(basis) + 1
        if len(basis) >= n:
            raise NumericalError(
                f"no spectral polynomial of degree < {n} (residual {resid:.3e}); A not normal or theta infeasible"
            )
        w = xs @ basis[-1]
        alpha = np.vdot(basis[-1], w).real
        w = w - alpha * basis[-1]
        if len(basis) > 1:
            w = w - beta_prev * basis[-2]
        for _ in range(2):
            w = w - q @ (q.conj().T @ w)
        beta = np.linalg.norm(w)
        if beta <= 1e-12:
            invariant = True
            continue
        p_new = np.zeros(polys[-1].size + 1)
        p_new[1:] += polys[-1]
        p_new[: polys[-1].size] -= alpha * polys[-1]
        if len(polys) > 1:
            p_new[: polys[-2].size] -= beta_prev * polys[-2]
        polys.append(p_new / beta)
        basis.append(w / beta)
        beta_prev = beta


def spectral_curve(dec: NormalEigenDecomposition, theta) -> PolyCurve:
    return PolyCurve(theta, lagrange_pi(dec, theta))


def curve_identity_residual(a, theta, pi: RealPolynomial) -> float:
    """``||skew(A) - i theta pi(conj(theta) herm(A))||_F``."""
    dec = theta_split(a, theta)
    return fro(dec.skew - 1j * dec.theta * pi.at_matrix(dec.rotated_herm))


def nodes_residual(lam, theta, pi: RealPolynomial) -> float:
    x, y = rotated_coordinates(lam, theta)
    return float(np.max(np.abs(y - pi(x)), initial=0.0))

