"""Normality preserving augmentations: bordering a normal ``A`` by extra rows
and columns so that the bordered matrix is again normal."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    InfeasibleError,
    NumericalError,
    PreconditionError,
    ShapeError,
    Tolerance,
    adjoint,
    as_cmatrix,
    as_cvector,
    fro,
    hermitian_defect,
    hermitian_eig,
    normality_defect,
    require_normal,
)
from .curve import PolyCurve, RealPolynomial, krylov_pi
from .perturb import SpectrumPrediction, interlaces
from .spectral import EigenLine, normal_eig
from .toeplitz import canonical_direction, theta_split, theta_split_scalar, unimodular

SQRT_CLAMP = 1e-12


@dataclass(frozen=True)
class Augmentation1:
    """Border ``[[A, v], [w^*, y]]`` with ``v = theta u`` and ``w = conj(theta) u``."""

    y: complex
    theta: complex
    u: np.ndarray

    @property
    def v(self) -> np.ndarray:
        return self.theta * self.u

    @property
    def w(self) -> np.ndarray:
        return self.theta.conjugate() * self.u

    def matrix(self, a) -> np.ndarray:
        a = as_cmatrix(a, square=True)
        n = a.shape[0]
        out = np.zeros((n + 1, n + 1), dtype=np.complex128)
        out[:n, :n] = a
        out[:n, n] = self.v
        out[n, :n] = self.w.conj()
        out[n, n] = self.y
        return out


@dataclass(frozen=True)
class QuadAugmentation:
    curve: PolyCurve
    z: np.ndarray
    zhat: np.ndarray
    m_block: np.ndarray
    q_block: np.ndarray
    a_plus: np.ndarray

    @property
    def m(self) -> int:
        return self.m_block.shape[0]


def _canonical_line(line: EigenLine, coeffs: np.ndarray) -> tuple[complex, np.ndarray, np.ndarray]:
    """Direction in ``[0, pi)`` with coefficients and line coordinates adjusted.

    Replacing ``theta`` by ``-theta`` and ``u`` by ``-u`` leaves the border
    unchanged and flips the sign of every line coordinate.
    """
    theta = canonical_direction(line.theta)
    if theta == line.theta:
        return theta, coeffs, np.asarray(line.rho, dtype=float)
    return theta, -coeffs, -np.asarray(line.rho, dtype=float)


def augment1(a, line: EigenLine, coeffs, tol: Tolerance = DEFAULT_TOL) -> tuple[Augmentation1, np.ndarray]:
    """Normal 1-augmentation of ``A`` with corner ``line.y``.

    ``u`` is the combination of the line's eigenvectors with the given
    coefficients; for fixed ``y`` and direction every normal border arises
    this way.
    """
    a = require_normal(a, tol)
    coeffs = as_cvector(coeffs)
    if coeffs.size != line.p:
        raise ShapeError(f"expected {line.p} coefficients for this line, got {coeffs.size}")
    theta, coeffs, _ = _canonical_line(line, coeffs)
    if line.p:
        u = line.vectors @ coeffs
    else:
        u = np.zeros(a.shape[0], dtype=np.complex128)
    aug = Augmentation1(complex(line.y), theta, u)
    a_plus = aug.matrix(a)
    d = normality_defect(a_plus)
    if d > tol.rel_normality:
        raise NumericalError(f"augmentation lost normality (defect {d:.3e})")
    return aug, a_plus


def predict_augment1_spectrum(a, line: EigenLine, coeffs) -> SpectrumPrediction:
    """Spectrum of the 1-augmentation from the ``(p+1) x (p+1)`` bordered block.

    The new eigenvalues are ``theta * eig([[R, r], [r^*, 0]]) + y`` and the
    line coordinates of the old ones interlace them.
    """
    coeffs = as_cvector(coeffs)
    if coeffs.size != line.p:
        raise ShapeError(f"expected {line.p} coefficients for this line, got {coeffs.size}")
    theta, r, rho = _canonical_line(line, coeffs)
    lam = line.dec.lam
    inherited = tuple((j, complex(lam[j])) for j in line.others)
    old = lam[list(line.members)]
    p = line.p
    block = np.zeros((p + 1, p + 1), dtype=np.complex128)
    block[:p, :p] = np.diag(rho)
    block[:p, p] = r
    block[p, :p] = r.conj()
    _, mu = hermitian_eig(block)
    new = theta * mu + line.y
    ok = interlaces(rho, mu, float(np.max(np.abs(mu), initial=1.0)))
    return SpectrumPrediction(inherited, old, new, line, ok)


def extract_augmentation1(a_plus, tol: Tolerance = DEFAULT_TOL) -> Augmentation1:
    """Read ``(y, theta, u)`` back from a normal bordered matrix with normal
    leading block.

    Raises ``InfeasibleError`` if the border is not of the form
    ``v = theta u``, ``w = conj(theta) u`` with ``u`` in an eigenspace of the
    ``theta``-skew part of ``A`` matching ``y``.
    """
    a_plus = require_normal(a_plus, tol, "A_+")
    n = a_plus.shape[0] - 1
    if n < 1:
        raise ShapeError("need at least a 2 x 2 bordered matrix")
    a = require_normal(a_plus[:n, :n], tol, "leading block")
    v = a_plus[:n, n]
    w = a_plus[n, :n].conj()
    y = complex(a_plus[n, n])
    scale = max(1.0, fro(a_plus))
    nv, nw = np.linalg.norm(v), np.linalg.norm(w)
    if nv <= tol.collinearity * scale and nw <= tol.collinearity * scale:
        return Augmentation1(y, 1.0 + 0j, np.zeros(n, dtype=np.complex128))
    inner = np.vdot(w, v)
    if abs(inner) == 0.0:
        raise InfeasibleError("v and w are orthogonal; no theta with v = theta^2 w")
    phi = inner / abs(inner)
    if np.linalg.norm(v - phi * w) > tol.collinearity * scale:
        raise InfeasibleError("v is not a unimodular multiple of w")
    theta = canonical_direction(np.sqrt(phi))
    u = theta.conjugate() * v
    skew = theta_split(a, theta).skew
    skew_y = theta_split_scalar(y, theta)[1]
    res = np.linalg.norm(skew @ u - skew_y * u)
    if res > tol.collinearity * scale * max(1.0, np.linalg.norm(u)):
        raise InfeasibleError(f"u is not in the matching eigenspace of the skew part (residual {res:.3e})")
    return Augmentation1(y, theta, u)


def _require_quadratic(curve: PolyCurve) -> float:
    if curve.pi.degree != 2:
        raise PreconditionError(f"curve polynomial must be quadratic, got degree {curve.pi.degree}")
    r2 = curve.pi.leading
    if r2 <= 0:
        raise PreconditionError("leading coefficient must be positive; pass -theta to flip the curve")
    return r2


def _assemble(a, curve: PolyCurve, z, m_block, q_block, tol: Tolerance) -> QuadAugmentation:
    """``A_+ = theta H + i theta pi(H)`` with ``H = [[X, Z Q / sqrt(r2)], [., M]]``."""
    r2 = curve.pi.leading
    n, m = z.shape
    if m_block is None:
        m_block = np.eye(m, dtype=np.complex128)
    if q_block is None:
        q_block = np.eye(m, dtype=np.complex128)
    m_block = as_cmatrix(m_block, square=True) if m else np.zeros((0, 0), dtype=np.complex128)
    q_block = as_cmatrix(q_block, square=True) if m else np.zeros((0, 0), dtype=np.complex128)
    if m_block.shape != (m, m) or q_block.shape != (m, m):
        raise ShapeError(f"M and Q must be {m} x {m}, got {m_block.shape} and {q_block.shape}")
    if m and hermitian_defect(m_block) > 1e-12:
        raise PreconditionError("M must be Hermitian")
    if m and fro(adjoint(q_block) @ q_block - np.eye(m)) > 1e-10:
        raise PreconditionError("Q must be unitary")
    theta = curve.theta
    x = theta_split(a, theta).rotated_herm
    zhat = z @ q_block / np.sqrt(r2)
    h = np.zeros((n + m, n + m), dtype=np.complex128)
    h[:n, :n] = 0.5 * (x + adjoint(x))
    h[:n, n:] = zhat
    h[n:, :n] = adjoint(zhat)
    h[n:, n:] = 0.5 * (m_block + adjoint(m_block))
    a_plus = theta * h + 1j * theta * curve.pi.at_matrix(h)
    out = QuadAugmentation(curve, z, zhat, m_block, q_block, a_plus)
    _check_quad(a, out, tol)
    return out


def _check_quad(a, aug: QuadAugmentation, tol: Tolerance) -> None:
    n = a.shape[0]
    scale = max(1.0, fro(a))
    d = normality_defect(aug.a_plus)
    if d > tol.rel_normality:
        raise NumericalError(f"A_+ is not normal (defect {d:.3e})")
    lead = fro(aug.a_plus[:n, :n] - a)
    if lead > 1e-9 * scale:
        raise NumericalError(f"leading block of A_+ differs from A by {lead:.3e}")
    lam = normal_eig(aug.a_plus, tol).lam
    gaps = np.abs(aug.curve.gap(lam))
    if np.any(gaps > 1e-8 * (1.0 + np.abs(lam))):
        raise NumericalError(f"eigenvalue of A_+ off the curve by {gaps.max():.3e}")


def curve_gaps(a, curve: PolyCurve, tol: Tolerance = DEFAULT_TOL):
    """Eigendecomposition of ``A`` and the height of each eigenvalue above the curve."""
    dec = normal_eig(a, tol)
    return dec, np.asarray(curve.gap(dec.lam), dtype=float)


def quad_augment(
    a,
    curve: PolyCurve,
    m_block=None,
    q_block=None,
    tol: Tolerance = DEFAULT_TOL,
    z=None,
) -> QuadAugmentation:
    """Augmentation of ``A`` with every eigenvalue on a quadratic curve.

    Eigenvalues strictly on the convex side are pushed down onto the curve
    by ``i theta ZZ^*`` with ``Z = U_p diag(sqrt(xi))``, and the border is
    built from ``Z``. ``M`` (Hermitian) and ``Q`` (unitary) are free and
    default to identities. An explicit ``z`` is accepted if ``ZZ^*`` equals
    the required push.
    """
    a = require_normal(a, tol)
    _require_quadratic(curve)
    dec, g = curve_gaps(a, curve, tol)
    lam = dec.lam
    thresh = tol.collinearity * (1.0 + np.abs(lam))
    below = np.flatnonzero(g < -thresh)
    if below.size:
        bad = ", ".join(f"{z.real:.6g}{z.imag:+.6g}i" for z in lam[below])
        raise InfeasibleError(f"eigenvalues on the non-convex side of the curve: {bad}")
    above = np.flatnonzero(g > thresh)
    z_req = dec.u[:, above] * np.sqrt(g[above])
    if z is None:
        z = z_req
    else:
        z = as_cmatrix(z)
        if z.shape[0] != a.shape[0]:
            raise ShapeError(f"Z must have {a.shape[0]} rows, got {z.shape[0]}")
        diff = fro(z @ adjoint(z) - z_req @ adjoint(z_req))
        if diff > 1e-10 * max(1.0, fro(a)):
            raise InfeasibleError(f"ZZ^* does not push the spectrum onto the curve (off by {diff:.3e})")
    return _assemble(a, curve, z, m_block, q_block, tol)


def block_identity_residuals(a_plus, n: int, curve: PolyCurve) -> tuple[float, float]:
    """Residuals of the leading and trailing block identities, relative to
    the block norms.

    With ``X``, ``Z``, ``M`` the blocks of ``conj(theta) Theta(A_+)`` they
    read ``A = Theta(A) + i theta pi(X) + i theta r2 ZZ^*`` and
    ``Y = Theta(Y) + i theta pi(M) + i theta r2 Z^*Z``.
    """
    a_plus = as_cmatrix(a_plus, square=True)
    theta = curve.theta
    r2 = curve.pi.coeffs[2] if curve.pi.degree >= 2 else 0.0
    big = theta_split(a_plus, theta).rotated_herm
    z = big[:n, n:]
    out = []
    for sl, zz in ((slice(0, n), z @ adjoint(z)), (slice(n, None), adjoint(z) @ z)):
        blk = a_plus[sl, sl]
        if blk.size == 0:
            out.append(0.0)
            continue
        dec = theta_split(blk, theta)
        model = dec.herm + 1j * theta * curve.pi.at_matrix(dec.rotated_herm) + 1j * theta * r2 * zz
        out.append(fro(blk - model) / max(1.0, fro(blk)))
    return out[0], out[1]


def eigfree_augment(
    a,
    theta,
    minorant: RealPolynomial,
    tol: Tolerance = DEFAULT_TOL,
    rng=None,
    m_block=None,
    q_block=None,
) -> QuadAugmentation:
    """Quadratic augmentation built from the spectral polynomial alone.

    ``pi`` comes from the Krylov recursion. With ``p`` a quadratic minorant
    of ``pi`` on the spectrum of ``X``, ``(pi - p)(X) = ZZ^*`` and the
    augmentation along the curve of ``p`` uses this ``Z``.
    """
    a = require_normal(a, tol)
    theta = unimodular(theta)
    curve = PolyCurve(theta, minorant)
    _require_quadratic(curve)
    pi = krylov_pi(a, theta, rng=rng)
    if pi.degree % 2:
        raise PreconditionError(f"spectral polynomial has odd degree {pi.degree}")
    x = theta_split(a, theta).rotated_herm
    x = 0.5 * (x + adjoint(x))
    q, xs = hermitian_eig(x, tol)
    diff = pi - minorant
    vals = diff(xs)
    scale = max(1.0, float(np.max(np.abs(pi(xs)))), float(np.max(np.abs(minorant(xs)))))
    if np.any(vals < -SQRT_CLAMP * scale):
        j = int(np.argmin(vals))
        raise InfeasibleError(f"minorant exceeds pi at {xs[j]:.6g} by {-vals[j]:.3e}")
    vals = np.clip(vals, 0.0, None)
    keep = np.flatnonzero(vals > SQRT_CLAMP * scale)
    z = q[:, keep] * np.sqrt(vals[keep])
    return _assemble(a, curve, z, m_block, q_block, tol)
