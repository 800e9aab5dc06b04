import numpy as np
import pytest
import scipy.sparse as sp

from klsrotor.errors import DegeneracyError, UsageError
from klsrotor.rotor import RotorModel, assemble_hamiltonian, build_lattice
from klsrotor.spectra import (boundary_weight, double_commutator, full_spectrum, ground_state,
                              momentum_observables, parseval_gap, restricted_solve,
                              sin2_reduction, spin_fourier_apply, sum_rule, symmetry_report)

from oracles import decoupled_excitations, dense_spin

LAT = build_lattice(1, 2)


def solve(M, J=1.0, I=1.0, lat=LAT):
    H = assemble_hamiltonian(RotorModel(I, J, M), lat)
    return H, ground_state(H)


def test_ground_state_reference_value():
    H, gs = solve(2)
    assert abs(gs.energy - 2.221652191727) < 1e-10
    assert gs.method == "dense" and gs.residual < 1e-12
    assert abs(gs.gap - 0.134738921539) < 1e-9


def test_lanczos_agrees_with_dense():
    H, gs = solve(2)
    lz = ground_state(H, dense_limit=10)
    assert lz.method == "lanczos"
    assert abs(lz.energy - gs.energy) < 1e-11
    assert abs(abs(np.vdot(lz.vector, gs.vector)) - 1) < 1e-9


def test_spin_fourier_against_dense():
    M = 1
    H, gs = solve(M)
    k = np.pi / 2
    S = dense_spin(M, 4, LAT.sites[:, 0] * k)
    assert np.allclose(spin_fourier_apply(gs.vector, [k], LAT, M), S @ gs.vector)
    assert np.allclose(spin_fourier_apply(gs.vector, [k], LAT, M, conj=True),
                       S.conj().T @ gs.vector)
    with pytest.raises(UsageError):
        spin_fourier_apply(gs.vector, [k], LAT, M, component="z")


@pytest.mark.parametrize("k", [np.pi / 2, np.pi])
def test_double_commutator_against_dense_oracle(k):
    M = 2
    H, gs = solve(M)
    S = dense_spin(M, 4, LAT.sites[:, 0] * k)
    Hd = H.matrix.toarray()
    comm = S @ Hd - Hd @ S
    dd = comm @ S.conj().T - S.conj().T @ comm
    ref = 0.5 * np.vdot(gs.vector, dd @ gs.vector).real
    assert abs(double_commutator(H, gs.vector, [k]) - ref) < 1e-12


def test_j0_against_single_excitation_oracle():
    I = 0.8
    H, gs = solve(2, J=0.0, I=I)
    assert abs(gs.energy) < 1e-12 and abs(gs.gap - 1 / (2 * I)) < 1e-12
    for k in LAT.nonzero_momenta():
        g, chi, dc = decoupled_excitations(2, I, 4, np.exp(1j * LAT.sites @ k))
        r = momentum_observables(gs, H, k)
        assert abs(r.g - g) < 1e-12 and abs(r.chi - chi) < 1e-10 and abs(r.dcomm - dc) < 1e-12
        assert (g, chi, dc) == pytest.approx((0.5, I, 1 / (4 * I)), abs=1e-14)
        assert np.isinf(r.chiBound) and np.isinf(r.gBound)


def test_chi_solve_matches_spectral_sum():
    H, gs = solve(2)
    spec = full_spectrum(H)
    for k in LAT.momenta:
        r = momentum_observables(gs, H, k, spec)
        assert abs(r.chi - r.chi_spectral) <= 1e-8 * r.chi_spectral
        assert r.schwarz_slack >= -1e-10
        assert abs(r.g - r.g_adjoint) < 1e-12


def test_sum_rule_and_parseval():
    for M in (1, 2):
        H, gs = solve(M)
        sumG, rhs, half = sum_rule(gs, LAT, M)
        assert abs(sumG - rhs) < 1e-12
        assert rhs < half
    # Parseval holds for any state, symmetric or not
    rng = np.random.default_rng(0)
    psi = rng.standard_normal(625) + 1j * rng.standard_normal(625)
    psi /= np.linalg.norm(psi)
    assert abs(parseval_gap(psi, LAT, 2)) < 1e-12


def test_symmetry_identities():
    H, gs = solve(2)
    rep = symmetry_report(gs, LAT, 2)
    assert rep.ok(1e-10) and not rep.degenerate


def test_truncated_double_commutator_converges_to_continuum():
    # D_k exceeds 1/(4I) at finite M; the excess and the gap to the sin^2
    # reduction both shrink with M, in step with the cutoff-mode weight
    ex, gaps, wts = [], [], []
    for M in (1, 2, 3):
        H, gs = solve(M)
        dc = double_commutator(H, gs.vector, [np.pi / 2])
        ex.append(dc - 0.25)
        gaps.append(abs(dc - sin2_reduction(gs.vector, LAT, M, 1.0)))
        wts.append(boundary_weight(gs.vector, LAT, M))
    assert ex[1] > ex[2] > 0
    assert gaps[0] > gaps[1] > gaps[2]
    assert wts[0] > wts[1] > wts[2]
    assert ex[2] < 5e-4


def test_restricted_solve_degenerate():
    A = sp.diags([0.0, 0.0, 1.0]).tocsr()
    gs = ground_state(A)

    class Fake:
        matrix = A

        def scale(self):
            return 1.0
    with pytest.raises(DegeneracyError):
        restricted_solve(Fake(), gs, np.ones(3))
