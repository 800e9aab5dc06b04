import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings
from hypothesis import strategies as st

from klsrotor.errors import EmptyInputError, ShapeError, UsageError
from klsrotor.schatten import (RANDOM_KINDS, adj, complete_to_unitary, hankel_family, hs_norm,
                               identity_rule, is_unitary, kls_gap, kls_sides, polar_decompose,
                               pq_factors, random_matrix, rank_one_family, schatten_norm,
                               shift_rule, truncation_ladder)


def ginibre(rng, n, m):
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


@pytest.mark.parametrize("shape", [(1, 1), (3, 3), (5, 2), (2, 5), (7, 7)])
def test_polar_against_sqrtm(shape):
    rng = np.random.default_rng(1)
    c = ginibre(rng, *shape)
    p = polar_decompose(c)
    # oracle: principal square roots from scipy
    assert np.allclose(p.modL, sla.sqrtm(adj(c) @ c), atol=1e-10)
    assert np.allclose(p.modR, sla.sqrtm(c @ adj(c)), atol=1e-10)
    assert np.allclose(p.u @ p.modL, c, atol=1e-12)
    assert np.allclose(p.modR @ p.u, c, atol=1e-12)
    rl, rr = p.sqrt_moduli()
    assert np.allclose(rr @ p.u @ rl, c, atol=1e-12)


def test_polar_rank_deficient_partial_isometry():
    rng = np.random.default_rng(2)
    c = ginibre(rng, 5, 2) @ ginibre(rng, 2, 5)
    p = polar_decompose(c)
    assert p.rank == 2
    proj = adj(p.u) @ p.u
    assert np.allclose(proj @ proj, proj, atol=1e-12)
    assert np.isclose(np.trace(proj).real, 2.0)
    assert np.allclose(p.u @ p.modL, c, atol=1e-12)


def test_norms():
    rng = np.random.default_rng(3)
    c = ginibre(rng, 4, 6)
    s = np.linalg.svd(c, compute_uv=False)
    assert np.isclose(schatten_norm(c, 1), s.sum())
    assert np.isclose(schatten_norm(c, 2), hs_norm(c))
    assert np.isclose(schatten_norm(c, np.inf), s[0])
    with pytest.raises(UsageError):
        schatten_norm(c, 0.5)


def test_input_validation():
    with pytest.raises(EmptyInputError):
        kls_gap(np.zeros((0, 0)), np.zeros((0, 0)), np.zeros((0, 0)))
    with pytest.raises(ShapeError):
        kls_gap(np.ones((2, 3)), np.eye(2), np.eye(2))
    with pytest.raises(ShapeError):
        kls_gap(np.ones((2, 2, 2)), np.eye(2), np.eye(2))
    with pytest.raises(UsageError):
        random_matrix("nonsense", 2)
    with pytest.raises(UsageError):
        random_matrix("psd", 2, 3)


def test_scalar_case_closed_form():
    c, a, b = 2 - 1j, 0.5 + 1j, -1 + 0.25j
    rep = kls_gap([[c]], [[a]], [[b]])
    assert np.isclose(rep.lhs, abs(c) ** 2 * abs(a * b))
    assert np.isclose(rep.rhs, 0.5 * abs(c) ** 2 * (abs(a) ** 2 + abs(b) ** 2))


def test_equality_unitary():
    rng = np.random.default_rng(4)
    u = complete_to_unitary(ginibre(rng, 6, 6))
    assert is_unitary(u)
    B = ginibre(rng, 6, 6)
    rep = kls_gap(u, adj(u) @ B @ u, B)
    assert abs(rep.slack) <= 1e-10 * (1 + rep.rhs)


def test_pq_factors_reproduce_traces():
    rng = np.random.default_rng(5)
    c, A, B = ginibre(rng, 4, 3), ginibre(rng, 3, 3), ginibre(rng, 4, 4)
    P, Q = pq_factors(c, A, B)
    t, ta, tb = kls_sides(c, A, B)
    assert np.isclose(np.trace(adj(P) @ Q), np.conj(t)) or np.isclose(np.trace(adj(P) @ Q), t)
    assert np.isclose(np.trace(adj(Q) @ Q), ta)
    assert np.isclose(np.trace(adj(P) @ P), tb)


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 8), m=st.integers(1, 8), seed=st.integers(0, 2**32 - 1),
       kind=st.sampled_from(("ginibre", "partial_isometry")))
def test_kls_random(n, m, seed, kind):
    rng = np.random.default_rng(seed)
    c = random_matrix(kind, n, m, rng)
    A = random_matrix("ginibre", m, m, rng)
    B = random_matrix("hermitian", n, n, rng)
    rep = kls_gap(c, A, B)
    assert rep.ok()
    assert rep.imag_residue <= 1e-10 * (1 + abs(rep.rhs))


@pytest.mark.parametrize("kind", RANDOM_KINDS)
def test_random_kinds_deterministic(kind):
    a = random_matrix(kind, 4, 4, seed=9)
    b = random_matrix(kind, 4, 4, seed=9)
    assert np.array_equal(a, b)
    if kind in ("hermitian", "psd"):
        assert np.array_equal(a, adj(a))
    if kind == "psd":
        assert np.linalg.eigvalsh(a).min() >= -1e-12


def test_tail_bounds_cover_truncation_error():
    for fam in (rank_one_family(), hankel_family()):
        big = fam.matrix(400)
        for s in (8, 16, 32):
            trunc = np.zeros_like(big)
            trunc[:s, :s] = big[:s, :s]
            # finite oracle; the true tail only exceeds this by the >400 mass
            assert np.linalg.norm(big - trunc) <= fam.tail_bound(s)
        assert np.linalg.norm(big) <= fam.hs_norm_bound + 1e-12


def test_ladder_rungs():
    rungs = truncation_ladder(hankel_family(), shift_rule, identity_rule, [8, 16, 32, 64])
    assert [r.size for r in rungs] == [8, 16, 32, 64]
    assert all(r.report.slack >= -1e-10 for r in rungs)
    assert all(r.increments_ok for r in rungs)
    with pytest.raises(UsageError):
        truncation_ladder(hankel_family(), shift_rule, identity_rule, [16, 8])
