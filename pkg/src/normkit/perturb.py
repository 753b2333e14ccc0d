"""Normality preserving perturbations ``A -> A + E`` of a normal matrix."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

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
from .spectral import EigenLine, clusters, normal_eig, simultaneous_diag
from .toeplitz import theta_split, unimodular

INTERLACE_RTOL = 1e-9


@dataclass(frozen=True)
class Rank1Perturbation:
    theta: complex
    u: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return self.theta * np.outer(self.u, self.u.conj())


@dataclass(frozen=True)
class RankKPerturbation:
    """``E = theta * sum_j delta_j u_j u_j^*`` with orthonormal ``u_j``."""

    theta: complex
    terms: tuple[tuple[float, np.ndarray], ...]

    @property
    def rank(self) -> int:
        return len(self.terms)

    def term_matrices(self) -> list[np.ndarray]:
        return [self.theta * d * np.outer(u, u.conj()) for d, u in self.terms]

    @property
    def matrix(self) -> np.ndarray:
        return sum(self.term_matrices())


@dataclass(frozen=True)
class SpectrumPrediction:
    inherited: tuple[tuple[int, complex], ...]
    perturbed_old: np.ndarray
    perturbed_new: np.ndarray
    line: EigenLine
    interlacing_ok: bool

    def eigenvalues(self) -> np.ndarray:
        old = np.array([z for _, z in self.inherited], dtype=np.complex128)
        return np.concatenate([old, self.perturbed_new])


class LineScan(enum.Enum):
    ALL_NORMAL = "all_normal"
    ONLY_ENDPOINTS = "only_endpoints"


def _scale(*mats) -> float:
    return max(1.0, float(np.prod([fro(m) for m in mats])))


def commutator_of_sum(a, e, gamma, mu) -> np.ndarray:
    """Expansion of ``[gA + mE, (gA + mE)^*]`` into its three commutator terms.

    The cross term is ``2 g conj(m) Theta([A, E^*])`` with the split taken
    along ``conj(g) m / |g m|``.
    """
    a = as_cmatrix(a, square=True)
    e = as_cmatrix(e, square=True)
    gamma, mu = complex(gamma), complex(mu)
    if gamma * mu == 0:
        raise PreconditionError("gamma and mu must both be nonzero")
    theta = gamma.conjugate() * mu / abs(gamma * mu)
    cross = theta_split(a @ adjoint(e) - adjoint(e) @ a, theta).herm
    return (
        abs(gamma) ** 2 * (a @ adjoint(a) - adjoint(a) @ a)
        + 2 * gamma * mu.conjugate() * cross
        + abs(mu) ** 2 * (e @ adjoint(e) - adjoint(e) @ e)
    )


def check_sum_normal(a, e, gamma, mu, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``gamma*A + mu*E`` is normal, for normal ``A``.

    For normal ``E`` only the cross term ``Theta([A, E^*])`` can spoil
    normality; otherwise the full three-term expansion is evaluated.
    """
    a = require_normal(a, tol, "A")
    e = as_cmatrix(e, square=True)
    if e.shape != a.shape:
        raise ShapeError(f"A has shape {a.shape}, E has {e.shape}")
    gamma, mu = complex(gamma), complex(mu)
    if gamma * mu == 0:
        raise PreconditionError("degenerate parameters: gamma*mu == 0")
    if normality_defect(e) <= tol.rel_normality:
        theta = gamma.conjugate() * mu / abs(gamma * mu)
        x = a @ adjoint(e) - adjoint(e) @ a
        return fro(theta_split(x, theta).herm) <= tol.rel_normality * _scale(a, e)
    c = commutator_of_sum(a, e, gamma, mu)
    size = abs(gamma) * fro(a) + abs(mu) * fro(e)
    return fro(c) <= tol.rel_normality * max(1.0, size**2)


def build_rank1(a, line: EigenLine, coeffs, tol: Tolerance = DEFAULT_TOL):
    """``A + theta u u^*`` with ``u`` a combination of the line's eigenvectors."""
    a = require_normal(a, tol)
    coeffs = as_cvector(coeffs)
    if coeffs.size != line.p:
        raise ShapeError(f"expected {line.p} coefficients for this line, got {coeffs.size}")
    n = a.shape[0]
    u = line.vectors @ coeffs if line.p else np.zeros(n, dtype=np.complex128)
    pert = Rank1Perturbation(line.theta, u)
    a_plus = a + pert.matrix
    d = normality_defect(a_plus)
    if d > tol.rel_normality:
        raise NumericalError(f"rank-1 update lost normality (defect {d:.3e})")
    return pert, a_plus


def validate_rank1(a, pert: Rank1Perturbation, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``u u^*`` commutes with the ``theta``-skew part of ``A``."""
    a = require_normal(a, tol)
    skew = theta_split(a, pert.theta).skew
    uu = np.outer(pert.u, pert.u.conj())
    c = fro(skew @ uu - uu @ skew)
    return c <= tol.rel_normality * max(1.0, fro(a) * fro(uu))


def interlaces(inner, outer, scale: float = 1.0) -> bool:
    """``outer[0] <= inner[0] <= outer[1] <= ...`` up to a small slack.

    ``outer`` has either the same length as ``inner`` (upper end open) or
    one more element.
    """
    slack = INTERLACE_RTOL * max(1.0, scale)
    inner = np.sort(inner)
    outer = np.sort(outer)
    for j, r in enumerate(inner):
        if outer[j] > r + slack:
            return False
        if j + 1 < outer.size and r > outer[j + 1] + slack:
            return False
    return True


def predict_rank1_spectrum(a, line: EigenLine, coeffs) -> SpectrumPrediction:
    """Spectrum of ``A + theta u u^*`` read off the member block.

    Off-line eigenvalues are inherited. On the line, the member block is
    ``theta (R + r r^*) + y I`` with ``R`` the line coordinates and ``r``
    the coefficients of ``u``; its eigenvalues ``rho_j`` satisfy
    ``r_1 <= rho_1 <= r_2 <= ... <= r_p <= rho_p``.
    """
    coeffs = as_cvector(coeffs)
    if coeffs.size != line.p:
        raise ShapeError(f"expected {line.p} coefficients for this line, got {coeffs.size}")
    lam = line.dec.lam
    inherited = tuple((j, complex(lam[j])) for j in line.others)
    old = lam[list(line.members)]
    if line.p == 0:
        return SpectrumPrediction(inherited, old, np.zeros(0, dtype=np.complex128), line, True)
    block = np.diag(line.rho).astype(np.complex128) + np.outer(coeffs, coeffs.conj())
    _, rho_new = hermitian_eig(block)
    new = line.theta * rho_new + line.y
    ok = interlaces(rho_new, line.rho, float(np.max(np.abs(rho_new))))
    return SpectrumPrediction(inherited, old, new, line, ok)


def decompose_rank_k(a, theta, h, tol: Tolerance = DEFAULT_TOL) -> RankKPerturbation:
    """Split ``E = theta H`` into rank-1 normality preserving terms.

    Raises ``InfeasibleError`` when ``H`` does not commute with the
    ``theta``-skew part of ``A``, i.e. when ``A + theta H`` is not normal.
    """
    a = require_normal(a, tol)
    h = as_cmatrix(h, square=True)
    if h.shape != a.shape:
        raise ShapeError(f"H has shape {h.shape}, A has {a.shape}")
    if hermitian_defect(h) > 1e-12:
        raise PreconditionError("H must be Hermitian")
    theta = unimodular(theta)
    skew = theta_split(a, theta).skew
    c = fro(skew @ h - h @ skew)
    if c > tol.rel_normality * _scale(a, h):
        raise InfeasibleError(f"theta*H is not normality preserving: ||[skew(A), H]||_F = {c:.3e}")
    sd = simultaneous_diag(skew, 0.5 * (h + adjoint(h)), tol)
    cutoff = 1e-12 * max(1.0, fro(h))
    terms = tuple(
        (float(d.real), sd.w[:, j].copy())
        for j, d in enumerate(sd.lambda_e)
        if abs(d) > cutoff
    )
    return RankKPerturbation(theta, terms)


def combined_perturbation(a, parts, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """``A + sum_j theta_j H_j`` for pairwise commuting Hermitian ``H_j``.

    Every ``theta_j H_j`` must on its own be a normality preserving
    perturbation of ``A``.
    """
    a = require_normal(a, tol)
    parts = [(unimodular(t), as_cmatrix(h, square=True)) for t, h in parts]
    for j, (theta, h) in enumerate(parts):
        if h.shape != a.shape:
            raise ShapeError(f"part {j}: H has shape {h.shape}, A has {a.shape}")
        if hermitian_defect(h) > 1e-12:
            raise PreconditionError(f"part {j}: H is not Hermitian")
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            hi, hj = parts[i][1], parts[j][1]
            c = fro(hi @ hj - hj @ hi)
            if c > tol.rel_normality * _scale(hi, hj):
                raise PreconditionError(f"parts {i} and {j}: H_{i} and H_{j} do not commute ({c:.3e})")
    for j, (theta, h) in enumerate(parts):
        skew = theta_split(a, theta).skew
        c = fro(skew @ h - h @ skew)
        if c > tol.rel_normality * _scale(a, h):
            raise InfeasibleError(f"part {j}: theta_{j} H_{j} is not normality preserving ({c:.3e})")
    e = sum((theta * h for theta, h in parts), np.zeros_like(a))
    if normality_defect(e) > tol.rel_normality:
        raise NumericalError("combined perturbation is not normal")
    a_plus = a + e
    if normality_defect(a_plus) > tol.rel_normality:
        raise NumericalError("combined perturbation did not preserve normality")
    return a_plus


def line_defects(a, b, nsamples: int) -> tuple[np.ndarray, np.ndarray]:
    """Interior sample points ``t = k/(nsamples+1)`` and the normality
    defects of ``A + t (B - A)`` there."""
    t = np.arange(1, nsamples + 1) / (nsamples + 1)
    e = b - a
    return t, np.array([normality_defect(a + tk * e) for tk in t])


def normal_line_scan(a, b, nsamples: int = 9, tol: Tolerance = DEFAULT_TOL) -> LineScan:
    """Classify the real line through two normal matrices.

    Either every matrix on it is normal (``B - A`` normal) or ``A`` and ``B``
    are its only normal points.
    """
    a = require_normal(a, tol, "A")
    b = require_normal(b, tol, "B")
    if a.shape != b.shape:
        raise ShapeError(f"A has shape {a.shape}, B has {b.shape}")
    _, defects = line_defects(a, b, nsamples)
    if normality_defect(b - a) <= tol.rel_normality:
        if np.any(defects > tol.rel_normality):
            raise NumericalError(f"B - A is normal but a sample has defect {defects.max():.3e}")
        return LineScan.ALL_NORMAL
    if np.any(defects <= tol.rel_normality):
        raise NumericalError(
            f"B - A is not normal but a sample has defect {defects.min():.3e}; tolerance too loose?"
        )
    return LineScan.ONLY_ENDPOINTS


def eigenvalues(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Eigenvalues of a small dense matrix; the normal solver when it applies."""
    m = as_cmatrix(m, square=True)
    if normality_defect(m) <= tol.rel_normality:
        return normal_eig(m, tol).lam
    return np.linalg.eigvals(m)


def trajectory(a, e, tgrid, tol: Tolerance = DEFAULT_TOL) -> list[tuple[float, np.ndarray]]:
    """Eigenvalues of ``A + t E`` along ``tgrid``, matched into continuous paths.

    Entry ``k`` of every returned vector belongs to path ``k``. Paths start
    in (re, im) order at the first ``t`` and are continued by an optimal
    nearest-neighbour assignment.
    """
    a = as_cmatrix(a, square=True)
    e = as_cmatrix(e, square=True)
    if a.shape != e.shape:
        raise ShapeError(f"A has shape {a.shape}, E has {e.shape}")
    tgrid = np.asarray(tgrid, dtype=float)
    if not np.all(np.isfinite(tgrid)):
        raise ValueError("t grid must be finite")
    raw = [eigenvalues(a + t * e, tol) for t in tgrid]
    out: list[tuple[float, np.ndarray]] = []
    prev = None
    for t, lam in zip(tgrid, raw):
        if prev is None:
            cur = lam[np.lexsort((lam.imag, lam.real))]
        else:
            cost = np.abs(prev[:, None] - lam[None, :])
            _, cols = linear_sum_assignment(cost)
            cur = lam[cols]
        out.append((float(t), cur))
        prev = cur
    return out


def path_deviation(traj, theta) -> np.ndarray:
    """Per path, the largest distance from the line through its first point
    with direction ``theta``."""
    theta = unimodular(theta)
    paths = np.array([lam for _, lam in traj])
    if paths.size == 0:
        return np.zeros(0)
    off = (theta.conjugate() * (paths - paths[0])).imag
    return np.max(np.abs(off), axis=0)


def line_coordinate_shifts(a, theta, h, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """Sorted line-coordinate moves of the eigenvalues under ``A -> A + theta H``.

    ``H`` must be normality preserving for ``A``. Each eigenspace of the
    rotated skew part carries one line; on it the coordinates before and
    after are the eigenvalues of the compressed rotated Hermitian parts.
    One array of differences (new minus old, both ascending) per line.
    """
    a = require_normal(a, tol)
    h = as_cmatrix(h, square=True)
    dec = theta_split(a, theta)
    q, kvals = hermitian_eig(dec.rotated_skew, tol)
    out = []
    x = dec.rotated_herm
    for group in clusters(kvals):
        qc = q[:, group]
        old = hermitian_eig(_herm(adjoint(qc) @ x @ qc), tol)[1]
        new = hermitian_eig(_herm(adjoint(qc) @ (x + h) @ qc), tol)[1]
        out.append(new - old)
    return out


def _herm(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + adjoint(m))
