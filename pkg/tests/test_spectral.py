import numpy as np
import pytest
from conftest import line_spectrum, normal_from_eigs, unit_direction
from hypothesis import given, settings
from hypothesis import strategies as st

from normkit.core import InfeasibleError, PreconditionError, random_normal, random_unitary
from normkit.spectral import (
    clusters,
    feasible_theta,
    group_on_line,
    is_feasible_theta,
    match_spectra,
    normal_eig,
    simultaneous_diag,
    theta_separation,
)

seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("n", [1, 3, 8, 32, 64])
def test_normal_eig_random(n):
    a = random_normal(n, n)
    dec = normal_eig(a)
    assert dec.residual(a) <= 1e-10 * np.linalg.norm(a)
    assert np.linalg.norm(dec.u.conj().T @ dec.u - np.eye(n)) <= 1e-12 * n
    assert match_spectra(dec.lam, np.linalg.eigvals(a)) <= 1e-10 * np.linalg.norm(a)


def test_normal_eig_sorted_and_phased():
    r = np.random.default_rng(0)
    a = normal_from_eigs([2, 1j, -1, 1 + 1j], r)
    dec = normal_eig(a)
    keys = [(z.real, z.imag) for z in dec.lam]
    assert keys == sorted(keys)
    for col in dec.u.T:
        k = np.flatnonzero(np.abs(col) > 1e-10)[0]
        assert abs(col[k].imag) < 1e-14 and col[k].real > 0


def test_normal_eig_multiplicities():
    # equal Hermitian parts force the skew part to separate eigenvectors
    r = np.random.default_rng(4)
    lam = np.array([1 + 1j, 1 - 1j, 1 + 2j, 1 + 1j, -3])
    a = normal_from_eigs(lam, r)
    dec = normal_eig(a)
    assert dec.residual(a) <= 1e-12
    assert match_spectra(dec.lam, lam) <= 1e-12


def test_normal_eig_requires_normal():
    with pytest.raises(PreconditionError):
        normal_eig([[1, 1], [0, 1]])


def test_clusters():
    assert clusters([0.0, 1e-12, 1.0, 1.0 + 1e-11, 3.0]) == [[0, 1], [2, 3], [4]]
    assert clusters([]) == []


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(2, 8), st.integers(1, 3))
def test_simultaneous_diag_round_trip(seed, n, kinds):
    r = np.random.default_rng(seed)
    u = random_unitary(n, r)
    # few distinct values so both matrices have repeated eigenvalues
    da = r.integers(0, kinds, n) + 1j * r.integers(0, 2, n)
    de = r.integers(0, kinds, n) - 0.5j * r.integers(0, 2, n)
    a = (u * da) @ u.conj().T
    e = (u * de) @ u.conj().T
    sd = simultaneous_diag(a, e)
    w = sd.w
    assert np.linalg.norm(w.conj().T @ w - np.eye(n)) <= 1e-10
    for m, lam in ((a, sd.lambda_a), (e, sd.lambda_e)):
        d = w.conj().T @ m @ w
        assert np.linalg.norm(d - np.diag(np.diag(d))) <= 1e-9 * max(1, np.linalg.norm(m))
        assert np.linalg.norm(w @ np.diag(lam) @ w.conj().T - m) <= 1e-9 * max(1, np.linalg.norm(m))


def test_simultaneous_diag_rejects_noncommuting():
    with pytest.raises(PreconditionError):
        simultaneous_diag([[1, 0], [0, 2]], [[0, 1], [1, 0]])


def test_group_on_line():
    r = np.random.default_rng(9)
    lam, y, theta = line_spectrum(r, 7, 3)
    a = normal_from_eigs(lam, r)
    line = group_on_line(normal_eig(a), y, theta)
    assert line.p == 3
    got = normal_eig(a).lam[list(line.members)]
    assert match_spectra(got, lam[:3]) <= 1e-10
    assert np.allclose(y + theta * line.rho, got, atol=1e-10)
    v = line.vectors
    assert np.allclose(a @ v, v * got, atol=1e-10)
    assert sorted(line.others + line.members) == list(range(7))


def test_theta_feasibility():
    lam = np.array([0, 1j, 1])
    # theta = 1 maps 0 and 1j to the same abscissa
    assert theta_separation(lam, 1) == pytest.approx(0)
    assert not is_feasible_theta(lam, 1)
    theta = feasible_theta(lam, 3)
    assert is_feasible_theta(lam, theta)
    assert 0 <= np.angle(theta) < np.pi


def test_feasible_theta_separates_random_spectrum():
    r = np.random.default_rng(1)
    lam = random_normal(10, 1).diagonal()
    theta = feasible_theta(lam, r)
    x = (np.conj(theta) * lam).real
    assert len(np.unique(np.round(x, 12))) == len(lam)


def test_feasible_theta_gives_up():
    with pytest.raises(InfeasibleError):
        feasible_theta([0, 1, 1j], 0, tol=0.9, attempts=20)


def test_match_spectra():
    assert match_spectra([1, 2j], [2j + 1e-3, 1]) == pytest.approx(1e-3)
    with pytest.raises(ValueError):
        match_spectra([1], [1, 2])


def test_unit_direction_helper_is_unimodular():
    assert abs(unit_direction(np.random.default_rng(0))) == pytest.approx(1)


def test_simultaneous_diag_with_vanishing_block():
    # A is zero up to rounding on the eigenspaces of E; the sub-blocks are ~1e-17
    r = np.random.default_rng(0)
    u = random_unitary(5, r)
    a = (u * np.array([0, 0, 0, 1j, 1j])) @ u.conj().T
    e = (u * np.array([0, 0, 1, 1, 2.0])) @ u.conj().T
    sd = simultaneous_diag(a, e)
    assert np.linalg.norm(sd.w @ np.diag(sd.lambda_a) @ sd.w.conj().T - a) <= 1e-12
    assert normal_eig(1e-17 * np.eye(3)).lam.shape == (3,)
