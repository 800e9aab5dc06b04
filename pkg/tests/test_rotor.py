import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klsrotor.errors import ShapeError, UsageError
from klsrotor.rotor import (RotorModel, assemble_hamiltonian, build_lattice, count_nonzero_bonds,
                            dispersion, linear_term, plane_wave, quadratic_constant, read_coo,
                            reflect_field, total_charge)

from oracles import dense_hamiltonian


def test_lattice_geometry_1d():
    lat = build_lattice(1, 2)
    assert lat.sites[:, 0].tolist() == [-1, 0, 1, 2]
    # neighbor of x = 2 wraps to -1
    assert [tuple(b[:2]) for b in lat.bonds] == [(0, 1), (1, 2), (2, 3), (3, 0)]
    assert np.allclose(np.sort(lat.momenta[:, 0]), np.pi * np.array([-1, 0, 1, 2]) / 2)
    # mirror x -> 1 - x
    assert lat.sites[lat.mirror, 0].tolist() == [2, 1, 0, -1]
    assert lat.left_mask.tolist() == [True, True, False, False]


def test_lattice_2d_counts():
    lat = build_lattice(2, 2)
    assert lat.n_sites == 16 and len(lat.bonds) == 32
    assert lat.momentum_index([np.pi, -np.pi / 2]) >= 0
    with pytest.raises(UsageError):
        lat.momentum_index([0.3, 0.0])
    with pytest.raises(UsageError):
        lat.momentum_index([0.0])
    with pytest.raises(UsageError):
        build_lattice(0, 2)


def test_dispersion():
    assert dispersion([0.0, 0.0]) == 0.0
    assert dispersion([np.pi]) == 2.0


def test_model_validation():
    with pytest.raises(UsageError):
        RotorModel(0.0, 1.0, 2)
    with pytest.raises(UsageError):
        RotorModel(1.0, -1.0, 2)
    with pytest.raises(UsageError):
        RotorModel(1.0, 1.0, 0)


@pytest.mark.parametrize("d,N,M", [(1, 2, 1), (1, 2, 2), (2, 1, 1), (1, 1, 2)])
def test_assembly_matches_kron_oracle(d, N, M):
    lat = build_lattice(d, N)
    model = RotorModel(0.7, 1.3, M)
    rng = np.random.default_rng(d * 10 + N + M)
    b = rng.standard_normal(lat.n_sites) + 1j * rng.standard_normal(lat.n_sites)
    H = assemble_hamiltonian(model, lat, b)
    ref = dense_hamiltonian(M, 0.7, 1.3, lat.n_sites, lat.bonds[:, :2], b)
    assert np.abs(ref.imag).max() < 1e-14
    assert np.allclose(H.matrix.toarray(), ref.real, atol=1e-12)
    assert (H.matrix != H.matrix.T).nnz == 0


def test_quadratic_expansion_exact():
    lat = build_lattice(1, 2)
    model = RotorModel(1.0, 1.0, 2)
    b = np.array([0.3 + 0.1j, -0.2j, 1.0, 0.5 - 0.5j])
    H0 = assemble_hamiltonian(model, lat).matrix
    Hp = linear_term(model, lat, b)
    C = quadratic_constant(lat, b, 1.0)
    for lam in (0.5, 2.0, -1.0):
        Hl = assemble_hamiltonian(model, lat, lam * b).matrix
        diff = Hl - H0 - lam * Hp
        assert abs(diff - lam**2 * C * np.eye(Hl.shape[0])).max() < 1e-12


def test_charge_conservation_at_zero_field():
    lat = build_lattice(1, 2)
    model = RotorModel(1.0, 1.0, 2)
    H = assemble_hamiltonian(model, lat).matrix.tocoo()
    q = total_charge(model, lat)
    assert np.all(q[H.row] == q[H.col])


def test_plane_wave_constant():
    lat = build_lattice(1, 2)
    b = plane_wave(lat, [np.pi])
    assert np.isclose(quadratic_constant(lat, b, 1.0), 2.0)
    lat2 = build_lattice(2, 2)
    k = np.array([np.pi / 2, np.pi])
    assert np.isclose(quadratic_constant(lat2, plane_wave(lat2, k), 0.8), 0.8 * dispersion(k))


def test_reflection_counts():
    lat = build_lattice(1, 2)
    b = np.array([1.0, 2.0, 3.0, 5.0])
    bL, bR, (l, lL, lR) = reflect_field(b, lat)
    assert bL.real.tolist() == [1, 2, 2, 1]
    assert bR.real.tolist() == [5, 3, 3, 5]
    assert l == count_nonzero_bonds(b, lat) == 4
    # bonds crossing the plane (0-1 and 2-(-1)) are mirror pairs and cancel
    assert lL + lR == 2 * l - 2 * 2


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_constant_shift_is_exact(seed):
    lat = build_lattice(1, 2)
    model = RotorModel(1.0, 1.0, 1)
    rng = np.random.default_rng(seed)
    b = (rng.integers(-64, 65, 4) + 1j * rng.integers(-64, 65, 4)) / 64
    H1 = assemble_hamiltonian(model, lat, b).matrix
    H2 = assemble_hamiltonian(model, lat, b + (0.25 - 0.5j)).matrix
    assert (H1 != H2).nnz == 0


def test_field_validation_and_coo_roundtrip(tmp_path):
    lat = build_lattice(1, 2)
    model = RotorModel(1.0, 1.0, 1)
    with pytest.raises(ShapeError):
        assemble_hamiltonian(model, lat, np.zeros(3))
    with pytest.raises(UsageError):
        assemble_hamiltonian(model, lat, np.array([np.nan, 0, 0, 0]))
    H = assemble_hamiltonian(model, lat)
    p = H.export_coo(tmp_path / "h.coo")
    assert p.read_text().startswith(f"# dim {H.dim} nnz {H.matrix.nnz}")
    assert abs(read_coo(p) - H.matrix).max() == 0
