"""Acceptance criteria 1-9.

Each test records its individual checks through ``conftest.record`` so that
one PASS/FAIL line per criterion is printed at the end of the run, then
asserts on the same checks. Run on its own with
``pytest tests/test_acceptance.py``.
"""

import itertools

import numpy as np
import pytest
import sympy as sp
from conftest import (
    curve_spectrum,
    line_spectrum,
    lined_problem,
    normal_from_eigs,
    random_hermitian,
    random_quad_problem,
    record,
    unit_direction,
)

from normkit import illustrations
from normkit.augment import (
    augment1,
    block_identity_residuals,
    extract_augmentation1,
    predict_augment1_spectrum,
    quad_augment,
)
from normkit.core import fro, normality_defect, random_normal, random_unitary
from normkit.curve import curve_identity_residual, krylov_pi, lagrange_pi
from normkit.perturb import (
    Rank1Perturbation,
    build_rank1,
    commutator_of_sum,
    decompose_rank_k,
    line_coordinate_shifts,
    predict_rank1_spectrum,
    validate_rank1,
)
from normkit.spectral import feasible_theta, group_on_line, normal_eig, simultaneous_diag
from normkit.toeplitz import theta_split, theta_split_scalar


def record_checks(criterion, checks):
    for c in checks:
        record(criterion, c.name, c.passed, c.detail)
    failed = [c.line() for c in checks if not c.passed]
    assert not failed, "\n".join(failed)


def test_criterion_1_bordering():
    record_checks(1, illustrations.bordering())


def test_criterion_2_line_of_normals():
    record_checks(2, illustrations.line_of_normals())


def test_criterion_3_rank_two():
    record_checks(3, illustrations.rank_two())


@pytest.mark.xfail(strict=True, reason="the printed weight 1/2 for the second term is inconsistent with E; the weight is 1/4")
def test_criterion_3_printed_second_weight():
    checks = illustrations.rank_two(literal_second_weight=0.5)
    literal = [c for c in checks if c.name.startswith("term 2 weight equals")]
    assert len(literal) == 1
    c = literal[0]
    record(3, "second term weight 1/2 as printed", c.passed, c.detail)
    assert c.passed, c.line()


def test_criterion_4_parabola():
    record_checks(4, illustrations.parabola())


def test_criterion_5_augmentation_properties():
    rng = np.random.default_rng(5)
    worst_defect, bad_interlace, worst_pred = 0.0, 0, 0.0
    for _ in range(200):
        n = int(rng.integers(1, 17))
        p = int(rng.integers(0, min(n, 6) + 1))
        lam, y, theta = line_spectrum(rng, n, p)
        a = normal_from_eigs(lam, rng)
        line = group_on_line(normal_eig(a), y, theta)
        coeffs = rng.normal(size=line.p) + 1j * rng.normal(size=line.p)
        _, ap = augment1(a, line, coeffs)
        worst_defect = max(worst_defect, normality_defect(ap))
        pred = predict_augment1_spectrum(a, line, coeffs)
        bad_interlace += not pred.interlacing_ok
        got = normal_eig(ap).lam
        worst_pred = max(worst_pred, max(np.min(np.abs(got - z)) for z in pred.eigenvalues()) / max(1, fro(ap)))
    ok = [
        record(5, "defect(A_+) <= 1e-10 over 200 trials", worst_defect <= 1e-10, f"max {worst_defect:.2e}"),
        record(5, "interlacing certificate in every trial", bad_interlace == 0, f"{bad_interlace} failures"),
        record(5, "predicted spectrum matches eigensolver", worst_pred <= 1e-9, f"max {worst_pred:.2e}"),
    ]

    worst = 0.0
    for k in range(50):
        n = int(rng.integers(1, 9))
        if k % 2:
            theta = unit_direction(rng)
            ap = theta * random_hermitian(rng, n + 1) + complex(*rng.normal(size=2)) * np.eye(n + 1)
        else:
            p = int(rng.integers(0, n + 1))
            lam, y, theta = line_spectrum(rng, n, p)
            a = np.diag(lam)
            line = group_on_line(normal_eig(a), y, theta)
            _, ap = augment1(a, line, rng.normal(size=p) + 1j * rng.normal(size=p))
            v = np.eye(n + 1, dtype=complex)
            v[:n, :n] = random_unitary(n, rng)
            ap = v @ ap @ v.conj().T
        aug = extract_augmentation1(ap)
        worst = max(worst, fro(aug.matrix(ap[:n, :n]) - ap) / max(1, fro(ap)))
    ok.append(record(5, "exhaustiveness: 50 normal 1-augmentations reconstructed", worst <= 1e-10, f"max {worst:.2e}"))
    assert all(ok)


def test_criterion_6_perturbation_properties():
    rng = np.random.default_rng(6)
    worst1, bad_interlace, bad_mono = 0.0, 0, 0
    for _ in range(100):
        n = int(rng.integers(1, 13))
        p = int(rng.integers(1, n + 1))
        lam, y, theta = line_spectrum(rng, n, p)
        a = normal_from_eigs(lam, rng)
        line = group_on_line(normal_eig(a), y, theta)
        coeffs = rng.normal(size=p) + 1j * rng.normal(size=p)
        pert, ap = build_rank1(a, line, coeffs)
        worst1 = max(worst1, normality_defect(ap))
        bad_interlace += not predict_rank1_spectrum(a, line, coeffs).interlacing_ok
        uu = np.outer(pert.u, pert.u.conj())
        bad_mono += not all(np.all(s >= -1e-10) for s in line_coordinate_shifts(a, line.theta, uu))

    worstk, worst_order, orders = 0.0, 0.0, 0
    for trial in range(100):
        n = int(rng.integers(2, 9))
        theta = unit_direction(rng)
        a, h = lined_problem(rng, n, int(rng.integers(1, 4)), theta, psd=True)
        sign = 1 if trial % 2 == 0 else -1
        h = sign * h
        dec = decompose_rank_k(a, theta, h)
        worstk = max(worstk, normality_defect(a + dec.matrix))
        mats = dec.term_matrices()
        perms = list(itertools.permutations(range(len(mats))))
        if len(mats) > 4:
            perms = [tuple(rng.permutation(len(mats))) for _ in range(24)]
        for order in perms:
            acc = a.copy()
            for j in order:
                acc = acc + mats[j]
                worst_order = max(worst_order, normality_defect(acc))
            orders += 1
        shifts = np.concatenate(line_coordinate_shifts(a, theta, h))
        bad_mono += not np.all(sign * shifts >= -1e-10)
    ok = [
        record(6, "rank-1: defect <= 1e-10 over 100 trials", worst1 <= 1e-10, f"max {worst1:.2e}"),
        record(6, "rank-1: Weyl interlacing certificate", bad_interlace == 0, f"{bad_interlace} failures"),
        record(6, "rank-k: defect <= 1e-10 over 100 trials", worstk <= 1e-10, f"max {worstk:.2e}"),
        record(6, "rank-k: every partial sum in every order normal", worst_order <= 1e-10, f"{orders} orders, max {worst_order:.2e}"),
        record(6, "semidefinite H moves all eigenvalues the same way", bad_mono == 0, f"{bad_mono} failures"),
    ]
    assert all(ok)


def test_criterion_7_curve_oracles():
    rng = np.random.default_rng(7)
    worst_coef, worst_ident, deg_mismatch = 0.0, 0.0, 0
    for k in range(100):
        if k < 50:
            # generic spectra; interpolation is well conditioned only at small n
            n = int(rng.integers(2, 9))
            a = random_normal(n, rng)
            dec = normal_eig(a)
            theta = feasible_theta(dec.lam, rng, tol=0.05)
        else:
            n = int(rng.integers(9, 33))
            theta = unit_direction(rng)
            lam, _ = curve_spectrum(rng, n, int(rng.integers(1, 5)), theta)
            a = normal_from_eigs(lam, rng)
            dec = normal_eig(a)
        lp = lagrange_pi(dec, theta)
        kp = krylov_pi(a, theta, rng=rng)
        if lp.degree != kp.degree:
            deg_mismatch += 1
            continue
        c = np.array(lp.coeffs)
        worst_coef = max(worst_coef, np.max(np.abs(c - np.array(kp.coeffs))) / max(1, np.max(np.abs(c))))
        worst_ident = max(worst_ident, curve_identity_residual(a, theta, lp) / fro(a))
    ok = [
        record(7, "Krylov and Lagrange fits agree in degree", deg_mismatch == 0, f"{deg_mismatch} mismatches"),
        record(7, "Krylov and Lagrange coefficients within 1e-8", worst_coef <= 1e-8, f"max {worst_coef:.2e}"),
        record(7, "curve identity residual <= 1e-8 ||A||_F", worst_ident <= 1e-8, f"max {worst_ident:.2e}"),
    ]
    assert all(ok)


def test_criterion_8_block_identities():
    rng = np.random.default_rng(8)
    worst, cor9_bad, nontrivial = 0.0, 0, 0
    for _ in range(100):
        n = int(rng.integers(1, 9))
        above = int(rng.integers(0, n + 1))
        a, curve = random_quad_problem(rng, n, above)
        m = q = None
        if above and rng.random() < 0.7:
            m, q = random_hermitian(rng, above), random_unitary(above, rng)
        aug = quad_augment(a, curve, m, q)
        lead, trail = block_identity_residuals(aug.a_plus, n, curve)
        worst = max(worst, lead, trail)
        off = np.max(np.abs(aug.a_plus[:n, n:]), initial=0.0)
        inside = np.max(curve.gap(normal_eig(a).lam)) > 1e-8
        nontrivial += off > 1e-12
        # Z != 0 exactly when some eigenvalue of A is strictly inside the convex side
        cor9_bad += (off > 1e-12) != inside
    ok = [
        record(8, "leading and trailing block residuals <= 1e-9", worst <= 1e-9, f"max {worst:.2e}"),
        record(8, "nonzero border iff an eigenvalue is inside the convex side", cor9_bad == 0, f"{cor9_bad} violations in 100 ({nontrivial} nontrivial)"),
    ]
    assert all(ok)


def _theta_parts(x, theta):
    h = theta * (sp.conjugate(theta) * x + theta * x.H) / 2
    s = theta * (sp.conjugate(theta) * x - theta * x.H) / 2
    return h, s


def _comm(x, y):
    return x * y - y * x


def test_criterion_9_identities():
    rng = np.random.default_rng(9)
    ok = []

    worst = 0.0
    for _ in range(30):
        n = int(rng.integers(1, 17))
        a = random_normal(n, rng)
        theta = unit_direction(rng)
        d = theta_split(a, theta)
        dec = normal_eig(a)
        for lam, v in zip(dec.lam, dec.u.T):
            h, s = theta_split_scalar(lam, theta)
            r = max(np.linalg.norm(d.herm @ v - h * v), np.linalg.norm(d.skew @ v - s * v))
            worst = max(worst, r / max(1, fro(a)))
    ok.append(record(9, "eigenpairs split into theta-Hermitian and theta-skew eigenpairs", worst <= 1e-12, f"max {worst:.2e}"))

    worst = 0.0
    for _ in range(30):
        n = int(rng.integers(1, 13))
        u = random_unitary(n, rng)
        da = rng.integers(-2, 3, n) + 1j * rng.integers(-1, 2, n)
        de = rng.normal(size=n) + 1j * rng.normal(size=n)
        a, e = (u * da) @ u.conj().T, (u * de) @ u.conj().T
        sd = simultaneous_diag(a, e)
        w = sd.w
        r = max(
            fro(w.conj().T @ w - np.eye(n)),
            fro((w * sd.lambda_a) @ w.conj().T - a) / max(1, fro(a)),
            fro((w * sd.lambda_e) @ w.conj().T - e) / max(1, fro(e)),
        )
        worst = max(worst, r)
    ok.append(record(9, "commuting normal pairs diagonalize together", worst <= 1e-12, f"max {worst:.2e}"))

    worst = 0.0
    for _ in range(30):
        n = int(rng.integers(1, 9))
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        e = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        g, m = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        s = g * a + m * e
        direct = s @ s.conj().T - s.conj().T @ s
        scale = (abs(g) * fro(a) + abs(m) * fro(e)) ** 2
        worst = max(worst, fro(commutator_of_sum(a, e, g, m) - direct) / scale)
    ok.append(record(9, "commutator expansion of gA + mE (floating point)", worst <= 1e-12, f"max {worst:.2e}"))

    exact, split_exact = True, True
    for _ in range(4):
        def gaussian_int_matrix():
            return sp.Matrix(3, 3, lambda i, j: int(rng.integers(-3, 4)) + sp.I * int(rng.integers(-3, 4)))

        a, e = gaussian_int_matrix(), gaussian_int_matrix()
        g = int(rng.integers(1, 4)) + sp.I * int(rng.integers(-3, 4))
        m = int(rng.integers(-3, 4)) + sp.I * int(rng.integers(1, 4))
        theta = sp.conjugate(g) * m / sp.Abs(g * m)
        s = g * a + m * e
        lhs = _comm(s, s.H)
        rhs = sp.Abs(g) ** 2 * _comm(a, a.H) + 2 * g * sp.conjugate(m) * _theta_parts(_comm(a, e.H), theta)[0] + sp.Abs(m) ** 2 * _comm(e, e.H)
        exact &= all(sp.simplify(sp.expand(z)) == 0 for z in (lhs - rhs))
        # the cross-term split into mixed commutators holds for a real direction only
        for direction in (1, -1):
            ha, sa = _theta_parts(a, direction)
            he, se = _theta_parts(e.H, direction)
            split = _theta_parts(_comm(a, e.H), direction)[0] - _comm(ha, se) - _comm(sa, he)
            split_exact &= all(sp.expand(z) == 0 for z in split)
    ok.append(record(9, "commutator expansion of gA + mE holds exactly (Gaussian integers)", exact))
    ok.append(record(9, "cross-term split into mixed commutators holds exactly for theta = +-1", split_exact))

    # rank-one consequence: theta uu^* preserves normality iff u is an eigenvector of the skew part
    a = random_normal(5, rng)
    theta = unit_direction(rng)
    dec = normal_eig(a)
    v = dec.u[:, 0]
    w = dec.u[:, 0] + dec.u[:, 1]
    good = validate_rank1(a, Rank1Perturbation(theta, v)) and normality_defect(a + theta * np.outer(v, v.conj())) <= 1e-12
    # two eigenvectors generically lie on different lines parallel to theta
    bad = not validate_rank1(a, Rank1Perturbation(theta, w)) and normality_defect(a + theta * np.outer(w, w.conj())) > 1e-6
    ok.append(record(9, "rank-one test agrees with direct normality check", good and bad))
    assert all(ok)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
