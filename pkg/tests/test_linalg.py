import numpy as np
import pytest
from numpy.testing import assert_allclose

from bisepbell.errors import DimensionMismatch, NoConvergence, NotHermitian
from bisepbell.linalg import I2, SX, SZ, hermitian_eig, is_hermitian, kron, trace_product
from bisepbell.oracles import CHSH_OPTIMAL
from bisepbell.bellops import chsh_matrix, d_matrix
from bisepbell.observables import random_scenario


def random_hermitian(d, rng):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def test_kron_identity_and_actions():
    assert_allclose(kron(I2, I2), np.eye(4))
    ket00 = np.array([1, 0, 0, 0])
    assert_allclose(kron(SZ, SZ) @ ket00, ket00)
    assert_allclose(kron(SX, SX) @ ket00, [0, 0, 0, 1])


def test_kron_mixed_product():
    rng = np.random.default_rng(1)
    a, b, c, d = (rng.standard_normal((2, 2)) for _ in range(4))
    assert_allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-14)


def test_pauli_spectra():
    e = hermitian_eig(SZ)
    assert_allclose(e.eigenvalues, [-1, 1])
    e = hermitian_eig(SX)
    assert_allclose(e.eigenvalues, [-1, 1], atol=1e-15)
    minus = np.array([1, -1]) / np.sqrt(2)
    plus = np.array([1, 1]) / np.sqrt(2)
    assert abs(abs(np.vdot(minus, e.eigenvectors[:, 0])) - 1) < 1e-12
    assert abs(abs(np.vdot(plus, e.eigenvectors[:, 1])) - 1) < 1e-12


def test_chsh_tsirelson():
    assert abs(hermitian_eig(chsh_matrix(*CHSH_OPTIMAL)).max_eigenvalue - np.sqrt(2)) < 1e-12


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_sweep_budget():
    m = random_hermitian(8, np.random.default_rng(0))
    with pytest.raises(NoConvergence):
        hermitian_eig(m, max_sweeps=1)


def test_deterministic():
    m = random_hermitian(8, np.random.default_rng(5))
    a, b = hermitian_eig(m), hermitian_eig(m)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_degenerate_projector():
    m = np.diag([1.0, 1.0, -1.0, 0.5]).astype(complex)
    e = hermitian_eig(m)
    top = e.top_eigenspace()
    assert top.shape[1] == 2
    p = top @ top.conj().T
    assert_allclose(p, np.diag([1, 1, 0, 0]), atol=1e-12)


def test_trace_product_examples():
    rng = np.random.default_rng(2)
    v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    v /= np.linalg.norm(v)
    rho = np.outer(v, v.conj())
    assert abs(trace_product(np.eye(8), rho) - 1) < 1e-12
    assert trace_product(SZ, np.diag([1, 0])) == 1
    d = d_matrix(random_scenario(3, rng), 2)
    assert abs(trace_product(d, np.eye(8) / 8)) < 1e-14
    assert abs(trace_product(d, rho).imag) < 1e-12
    with pytest.raises(DimensionMismatch):
        trace_product(np.eye(2), np.eye(4))


def test_is_hermitian():
    assert is_hermitian(SX)
    assert not is_hermitian(np.array([[0, 1j], [1j, 0]]))


@pytest.mark.property
def test_eig_reconstruction_1000():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        m = random_hermitian(8, rng)
        e = hermitian_eig(m)
        v = e.eigenvectors
        assert np.max(np.abs(v @ np.diag(e.eigenvalues) @ v.conj().T - m)) <= 1e-10
        assert np.max(np.abs(v.conj().T @ v - np.eye(8))) <= 1e-10
        assert np.all(np.diff(e.eigenvalues) >= 0)


@pytest.mark.property
@pytest.mark.parametrize("d", [2, 4, 16])
def test_eig_agrees_with_lapack(d):
    rng = np.random.default_rng(d)
    for _ in range(50):
        m = random_hermitian(d, rng)
        assert_allclose(hermitian_eig(m).eigenvalues, np.linalg.eigvalsh(m), atol=1e-11)


@pytest.mark.property
def test_kron_associative_1000():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        a, b, c = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3))
        assert np.max(np.abs(np.kron(kron(a, b), c) - kron(a, kron(b, c)))) <= 1e-14


@pytest.mark.property
def test_trace_product_symmetric_1000():
    rng = np.random.default_rng(4)
    for _ in range(1000):
        a, b = random_hermitian(8, rng), random_hermitian(8, rng)
        assert abs(trace_product(a, b) - trace_product(b, a)) <= 1e-13
