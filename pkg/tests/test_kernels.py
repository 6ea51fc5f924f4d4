import numpy as np
import pytest

from spinbundles import kernels


def _random_antihermitian_chain(rng, n, steps):
    a = rng.standard_normal((2 * steps + 1, n, n)) + 1j * rng.standard_normal(
        (2 * steps + 1, n, n)
    )
    return a - a.conj().swapaxes(-1, -2)


def test_zero_generator_is_exact_identity():
    gen = np.zeros((2 * 32 + 1, 3, 3), dtype=complex)
    v0 = np.array([1.0, 2.0 - 1.0j, 3.0])
    out = kernels.rk4_transport(gen, 1.0 / 32, v0)
    assert np.array_equal(out, v0)


def test_path_shape_and_start():
    gen = np.zeros((2 * 16 + 1, 2, 2), dtype=complex)
    v0 = np.array([1.0, 0.0], dtype=complex)
    path = kernels.rk4_transport_path(gen, 1.0 / 16, v0)
    assert path.shape == (17, 2)
    assert np.array_equal(path[0], v0)


def test_rejects_malformed_grid():
    with pytest.raises(ValueError):
        kernels.rk4_transport(np.zeros((4, 3, 3), dtype=complex), 0.1, np.zeros(3))


def test_numpy_and_numba_paths_agree(rng, monkeypatch):
    gen = _random_antihermitian_chain(rng, 4, 50)
    v0 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    fast = kernels.rk4_transport(gen, 1.0 / 50, v0)
    monkeypatch.setenv(kernels.DISABLE_ENV, "1")
    assert kernels.backend_name() == "numpy"
    slow = kernels.rk4_transport(gen, 1.0 / 50, v0)
    assert np.abs(fast - slow).max() < 1e-13


def test_env_flag_selects_backend(monkeypatch):
    if not kernels.numba_available():
        pytest.skip("numba not installed")
    monkeypatch.delenv(kernels.DISABLE_ENV, raising=False)
    assert kernels.numba_enabled()
    monkeypatch.setenv(kernels.DISABLE_ENV, "true")
    assert not kernels.numba_enabled()


def test_norm_preserved_for_smooth_antihermitian_generator(rng):
    # exact flow is unitary; RK4 drifts only at its truncation order
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = b - b.conj().T
    c = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    c = c - c.conj().T
    steps = 400
    ts = np.linspace(0.0, 1.0, 2 * steps + 1)
    gen = np.sin(2 * np.pi * ts)[:, None, None] * b + np.cos(2 * np.pi * ts)[:, None, None] * c
    v0 = np.array([1.0, 1.0j, -0.5])
    out = kernels.rk4_transport(gen, 1.0 / steps, v0)
    assert abs(np.linalg.norm(out) - np.linalg.norm(v0)) < 1e-8
