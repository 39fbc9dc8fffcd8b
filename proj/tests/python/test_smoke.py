import math

import numpy as np
import pytest

import flist

GRID = flist.RealGrid(-16.0, 16.0, 512)
ZGRID = flist.SpectralGridParams(z_cut=8.0, n_z_outer=256)


def gaussian(amp):
    x = GRID.x
    return amp * np.exp(-x * x) + 0j


@pytest.fixture(scope="module")
def scattered():
    return flist.forward_scatter(gaussian(0.25), GRID, ZGRID)


def test_spectral_grid_integrates_a_gaussian():
    z, w = flist.spectral_grid(ZGRID)
    assert np.all(np.diff(z) > 0)
    assert abs(np.sum(w * np.exp(-z * z)) - math.sqrt(math.pi)) < 1e-10


def test_norming_constant():
    amp = 0.25
    assert flist.norming_constant(gaussian(amp), GRID) == pytest.approx(0.5 * amp**2 * math.sqrt(math.pi / 2), rel=1e-10)


def test_zero_data():
    data, adm = flist.forward_scatter(np.zeros(GRID.n, complex), GRID, ZGRID)
    assert adm.admissible and adm.small_norm_value == 0.0
    assert np.max(np.abs(data.a - 1)) < 1e-10
    u, info = flist.reconstruct(data, 1.0, flist.PhysParams(), GRID)
    assert np.max(np.abs(u)) == 0.0


def test_identities(scattered):
    data, adm = scattered
    assert adm.admissible
    rho = 1 + np.conj(data.r1) * data.r2
    assert np.max(np.abs(rho * np.abs(data.a) ** 2 - 1)) < 1e-6
    assert np.max(np.abs(data.r2 - 4 * data.z * data.r1)) < 1e-12
    report = flist.identity_suite(data)
    assert report["checks"]["unitarity"]["pass"]


def test_evolution_keeps_moduli(scattered):
    data, _ = scattered
    ev = flist.evolve(data, 1.0, flist.PhysParams())
    assert ev.t == 1.0
    assert np.max(np.abs(np.abs(ev.r1) - np.abs(data.r1))) < 1e-14
    assert flist.evolution_suite(data)["pass"]


def test_round_trip(scattered):
    data, _ = scattered
    u0 = gaussian(0.25)
    u, info = flist.reconstruct(data, 0.0, flist.PhysParams(), GRID)
    assert np.max(np.abs(u - u0)) / np.max(np.abs(u0)) < 1e-3
    assert info["max_residual"] < 1e-6
    assert flist.roundtrip(u0, GRID, flist.PhysParams(), ZGRID)["checks"]["rel_sup_error"]["pass"]


def test_plane_wave_residual():
    p = flist.PhysParams(1.0, 1.0, -1)
    amp, xi = 0.5, 2.0
    omega = -p.alpha * (xi + p.beta) ** 2 / xi + p.sigma * p.alpha * p.beta**2 * amp**2
    ts = [0.299, 0.3, 0.301]
    fields = [amp * np.exp(1j * (xi * GRID.x - omega * t)) for t in ts]
    assert flist.pde_residual(ts, fields, GRID, p) < 1e-4
    assert flist.pde_residual(ts, fields, GRID, flist.PhysParams(1.0, 1.0, 1)) > 1e-2


def test_file_round_trip(scattered, tmp_path):
    data, _ = scattered
    path = str(tmp_path / "s.csv")
    flist.write_scattering(path, data, flist.PhysParams(beta=2.0), ZGRID)
    back, params, zp = flist.read_scattering(path)
    assert params.beta == 2.0 and zp.n_z_outer == 256
    assert np.array_equal(back.r2, data.r2)


def test_errors():
    with pytest.raises(flist.ContractError):
        flist.norming_constant(np.zeros(3, complex), GRID)
    with pytest.raises(flist.IoError):
        flist.read_scattering("/nonexistent/file.csv")
    with pytest.raises(flist.Error):
        flist.PhysParams(sigma=3)
