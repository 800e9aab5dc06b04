"""Ground state and momentum-space observables of the rotor lattice.

For ``s_k = |Lambda|^{-1/2} sum_x cos(phi_x) e^{i k.x}`` and the ground
state ``psi0``::

    g_k    = <s_k s_k*>
    chi_k  = 1/2 sum_{n>0} (|<n|s_k psi0>|^2 + |<n|s_k* psi0>|^2) / (E_n - E_0)
    D_k    = 1/2 <[[s_k, H], s_k*]>

and ``g_k^2 <= chi_k D_k`` by the Schwarz inequality.  ``chi_k`` is
computed from two positive-definite solves of ``(H - E_0)`` restricted to
the complement of ``psi0``; the spectral sum over a dense eigenbasis is
kept as an independent cross-check.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, DegeneracyError, UsageError
from .rotor import LatticeSpec, SparseHamiltonian, dispersion, site_operators

log = logging.getLogger(__name__)

DENSE_LIMIT = 2000
SPECTRAL_LIMIT = 3000
TAU_OBS = 1e-8
TAU_CHI = 1e-6
GAP_THRESHOLD = 1e-8


@dataclass(frozen=True)
class GroundState:
    energy: float
    vector: np.ndarray
    gap: float
    residual: float
    method: str

    def degenerate(self, scale: float = 1.0) -> bool:
        return self.gap < GAP_THRESHOLD * max(scale, 1.0)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # deterministic global phase: largest component real and positive
    i = int(np.argmax(np.abs(v)))
    ph = v[i] / abs(v[i])
    return v / ph


def ground_state(H: SparseHamiltonian | sp.spmatrix | np.ndarray, seed: int = 0,
                 dense_limit: int = DENSE_LIMIT, tol: float = 0.0,
                 maxiter: int | None = None) -> GroundState:
    """Lowest eigenpair and gap; dense below ``dense_limit``, Lanczos above.

    Raises :class:`ConvergenceError` if the iterative solver fails.
    """
    A = H.matrix if isinstance(H, SparseHamiltonian) else H
    dim = A.shape[0]
    if dim < 1:
        raise UsageError("empty Hamiltonian")
    if dim == 1:
        e = float(np.real(A[0, 0] if not sp.issparse(A) else A.toarray()[0, 0]))
        return GroundState(e, np.ones(1), np.inf, 0.0, "dense")
    if dim <= dense_limit:
        Ad = A.toarray() if sp.issparse(A) else np.asarray(A)
        w, v = sla.eigh(Ad, subset_by_index=[0, 1])
        method = "dense"
        e0, e1, psi = float(w[0]), float(w[1]), v[:, 0]
    else:
        v0 = np.random.default_rng(seed).standard_normal(dim)
        if np.iscomplexobj(A.data if sp.issparse(A) else A):
            v0 = v0.astype(complex)
        try:
            w, v = spla.eigsh(A, k=2, which="SA", v0=v0, tol=tol, maxiter=maxiter)
        except spla.ArpackNoConvergence as exc:
            ev = exc.eigenvectors
            res = np.inf if ev is None or ev.size == 0 else float(
                np.linalg.norm(A @ ev[:, 0] - exc.eigenvalues[0] * ev[:, 0]))
            raise ConvergenceError("Lanczos did not converge", achieved=res) from exc
        order = np.argsort(w)
        w, v = w[order], v[:, order]
        method = "lanczos"
        e0, e1, psi = float(w[0]), float(w[1]), v[:, 0]
    psi = _fix_phase(psi / np.linalg.norm(psi))
    if not np.iscomplexobj(A.data if sp.issparse(A) else A):
        psi = psi.real
    residual = float(np.linalg.norm(A @ psi - e0 * psi))
    return GroundState(energy=e0, vector=psi, gap=e1 - e0, residual=residual, method=method)


def _site_apply(psi: np.ndarray, op: np.ndarray, x: int, L: int, D: int) -> np.ndarray:
    t = psi.reshape((D,) * L)
    t = np.tensordot(op, t, axes=([1], [x]))
    return np.moveaxis(t, 0, x).reshape(-1)


def spin_fourier_apply(psi, k, lat: LatticeSpec, M: int, conj: bool = False,
                       component: str = "x") -> np.ndarray:
    """Apply ``s_k^x`` (``cos``) or ``s_k^y`` (``sin``), or the adjoint if ``conj``."""
    lat.momentum_index(k)  # validates the grid point
    k = np.atleast_1d(np.asarray(k, dtype=float))
    _, cos_op, sin_op = site_operators(M, 1.0)
    if component == "x":
        op = cos_op
    elif component == "y":
        op = sin_op
    else:
        raise UsageError(f"component must be 'x' or 'y', got {component!r}")
    L, D = lat.n_sites, 2 * M + 1
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (D**L,):
        raise UsageError("state does not live on the assembled product space")
    phases = np.exp(1j * lat.sites @ k)
    if conj:
        phases = phases.conj()
    out = np.zeros_like(psi)
    for x in range(L):
        out += phases[x] * _site_apply(psi, op, x, L, D)
    return out / np.sqrt(L)


def site_expectation(psi, op: np.ndarray, lat: LatticeSpec, M: int) -> np.ndarray:
    """``<psi|op_x|psi>`` for every site."""
    L, D = lat.n_sites, 2 * M + 1
    psi = np.asarray(psi)
    return np.array([np.vdot(psi, _site_apply(psi, op, x, L, D)) for x in range(L)])


def restricted_solve(H: SparseHamiltonian, gs: GroundState, rhs: np.ndarray,
                     rtol: float = 1e-13, maxiter: int = 20000) -> np.ndarray:
    """Solve ``(H - E0) x = Q rhs`` on the complement of ``psi0`` by conjugate gradients."""
    if gs.degenerate(H.scale()):
        raise DegeneracyError(f"gap {gs.gap:.3e} below threshold", gap=gs.gap)
    psi = gs.vector
    A = H.matrix
    dim = A.shape[0]
    e0 = gs.energy

    def proj(v):
        return v - psi * np.vdot(psi, v)

    def mv(v):
        return proj(A @ proj(v) - e0 * proj(v))

    op = spla.LinearOperator((dim, dim), matvec=mv, dtype=complex)
    b = proj(np.asarray(rhs, dtype=complex))
    if np.linalg.norm(b) == 0.0:
        return np.zeros(dim, dtype=complex)
    # Jacobi-type preconditioner from the shifted diagonal
    dg = A.diagonal() - e0
    dg = np.where(dg > gs.gap, dg, gs.gap)
    pre = spla.LinearOperator((dim, dim), matvec=lambda v: proj(v / dg), dtype=complex)
    x, info = spla.cg(op, b, rtol=rtol, atol=0.0, maxiter=maxiter, M=pre)
    if info != 0:
        res = float(np.linalg.norm(mv(x) - b))
        raise ConvergenceError(f"restricted CG failed (info={info})", achieved=res)
    return proj(x)


def resolvent_form(H: SparseHamiltonian, gs: GroundState, v: np.ndarray) -> float:
    """``<v| Q (H - E0)^{-1} Q |v>`` via :func:`restricted_solve`."""
    x = restricted_solve(H, gs, v)
    return float(np.vdot(v, x).real)


@dataclass(frozen=True)
class SpectralData:
    energies: np.ndarray
    vectors: np.ndarray


def full_spectrum(H: SparseHamiltonian, limit: int = SPECTRAL_LIMIT) -> SpectralData:
    if H.dim > limit:
        raise UsageError(f"dense spectrum of dim {H.dim} exceeds limit {limit}")
    w, v = sla.eigh(H.matrix.toarray())
    return SpectralData(w, v)


def spectral_susceptibility(spec: SpectralData, a: np.ndarray, b: np.ndarray) -> float:
    """Spectral-sum oracle ``1/2 sum_{n>0} (|<n|a>|^2 + |<n|b>|^2) / (E_n - E_0)``."""
    ov_a = np.abs(spec.vectors.conj().T @ a) ** 2
    ov_b = np.abs(spec.vectors.conj().T @ b) ** 2
    de = spec.energies[1:] - spec.energies[0]
    return float(0.5 * np.sum((ov_a[1:] + ov_b[1:]) / de))


def double_commutator(H: SparseHamiltonian, psi, k, conj_pair=True) -> float:
    """``1/2 <psi|[[s_k, H], s_k*]|psi>`` by literal operator applications."""
    lat, M = H.lattice, H.model.cutoff
    A = H.matrix
    psi = np.asarray(psi, dtype=complex)

    def s(v):
        return spin_fourier_apply(v, k, lat, M)

    def sd(v):
        return spin_fourier_apply(v, k, lat, M, conj=True)

    sdpsi = sd(psi)
    spsi = s(psi)
    hpsi = A @ psi
    # <s H s*> - <H s s*> - <s* s H> + <s* H s>
    t1 = np.vdot(sdpsi, A @ sdpsi)
    t2 = np.vdot(hpsi, s(sdpsi))
    t3 = np.vdot(spsi, s(hpsi))
    t4 = np.vdot(spsi, A @ spsi)
    return float(0.5 * (t1 - t2 - t3 + t4).real)


def sin2_reduction(psi, lat: LatticeSpec, M: int, inertia: float) -> float:
    """``(1 / 2I|Lambda|) sum_y <sin^2 phi_y>``: the double commutator of the
    continuum model, where only the kinetic term contributes."""
    _, _, sin_op = site_operators(M, inertia)
    s2 = (sin_op @ sin_op).real
    vals = site_expectation(psi, s2, lat, M)
    return float(np.sum(vals).real / (2.0 * inertia * lat.n_sites))


def boundary_weight(psi, lat: LatticeSpec, M: int) -> float:
    """Mean probability per site of sitting on a cutoff mode ``|n| = M``."""
    P = np.zeros((2 * M + 1, 2 * M + 1))
    P[0, 0] = P[-1, -1] = 1.0
    return float(np.mean(site_expectation(psi, P, lat, M).real))


@dataclass(frozen=True)
class MomentumReport:
    k: tuple
    g: float
    chi: float
    dcomm: float
    gBound: float
    chiBound: float
    dcommBound: float
    schwarz_slack: float
    chi_slack: float
    g_slack: float
    dcomm_slack: float
    chi_spectral: float | None
    dcomm_reduction: float
    zero_mode: float
    g_adjoint: float

    def as_row(self) -> dict:
        row = asdict(self)
        k = row.pop("k")
        out = {f"k{i + 1}": float(v) for i, v in enumerate(k)}
        out.update(row)
        return out


def momentum_observables(gs: GroundState, H: SparseHamiltonian, k,
                         spectrum: SpectralData | None = None) -> MomentumReport:
    """g_k, chi_k, D_k and the slacks of every bound at one momentum."""
    lat, model = H.lattice, H.model
    M, I, J = model.cutoff, model.inertia, model.coupling
    k = np.atleast_1d(np.asarray(k, dtype=float))
    psi = gs.vector
    a = spin_fourier_apply(psi, k, lat, M)
    b = spin_fourier_apply(psi, k, lat, M, conj=True)
    g = float(np.vdot(b, b).real)
    g_adj = float(np.vdot(a, a).real)
    zero = float(abs(np.vdot(psi, a)) ** 2)

    chi = 0.5 * (resolvent_form(H, gs, a) + resolvent_form(H, gs, b))
    chi_spec = spectral_susceptibility(spectrum, a, b) if spectrum is not None else None
    dc = double_commutator(H, psi, k)
    red = sin2_reduction(psi, lat, M, I)

    eps = dispersion(k)
    if eps == 0.0 or J == 0.0:
        g_bound = chi_bound = np.inf
    else:
        g_bound = 1.0 / (2.0 * np.sqrt(I * J * eps))
        chi_bound = 1.0 / (J * eps)
    d_bound = 1.0 / (4.0 * I)
    return MomentumReport(
        k=tuple(float(v) for v in k), g=g, chi=chi, dcomm=dc,
        gBound=g_bound, chiBound=chi_bound, dcommBound=d_bound,
        schwarz_slack=chi * dc - g * g,
        chi_slack=chi_bound - chi, g_slack=g_bound - g, dcomm_slack=d_bound - dc,
        chi_spectral=chi_spec, dcomm_reduction=red, zero_mode=zero, g_adjoint=g_adj,
    )


def correlation(psi, k, lat: LatticeSpec, M: int, component: str = "x") -> float:
    """``<s_k s_k*>`` for either spin component."""
    v = spin_fourier_apply(psi, k, lat, M, conj=True, component=component)
    return float(np.vdot(v, v).real)


def sum_rule(gs: GroundState, lat: LatticeSpec, M: int):
    """``(sum_k g_k, 1/2 sum_x <cos^2 + sin^2>, |Lambda|/2)``.

    The middle value is the truncated identity: on the cutoff modes
    ``cos^2 + sin^2`` equals 1/2 rather than 1.
    """
    psi = gs.vector
    total = sum(correlation(psi, k, lat, M) for k in lat.momenta)
    _, c, s = site_operators(M, 1.0)
    w = (c @ c + s @ s).real
    rhs = 0.5 * float(np.sum(site_expectation(psi, w, lat, M)).real)
    return total, rhs, 0.5 * lat.n_sites


def parseval_gap(psi, lat: LatticeSpec, M: int) -> float:
    """``sum_k <s_k s_k*> - sum_x <cos_x^2>``; zero for every state."""
    total = sum(correlation(psi, k, lat, M) for k in lat.momenta)
    _, c, _ = site_operators(M, 1.0)
    direct = float(np.sum(site_expectation(psi, c @ c, lat, M)).real)
    return total - direct


@dataclass(frozen=True)
class SymmetryResiduals:
    mean_spin: float
    xy_mismatch: float
    degenerate: bool

    def ok(self, tol: float = TAU_OBS) -> bool:
        return self.mean_spin <= tol and self.xy_mismatch <= tol


def symmetry_report(gs: GroundState, lat: LatticeSpec, M: int,
                    scale: float = 1.0) -> SymmetryResiduals:
    """``max_k |<s_k^a>|`` and ``max_k |g_k^x - g_k^y|``.

    A degenerate ground state is flagged; the identities need uniqueness.
    """
    psi = gs.vector
    mean = 0.0
    mism = 0.0
    for k in lat.momenta:
        for comp in ("x", "y"):
            v = spin_fourier_apply(psi, k, lat, M, component=comp)
            mean = max(mean, abs(np.vdot(psi, v)))
        mism = max(mism, abs(correlation(psi, k, lat, M, "x") - correlation(psi, k, lat, M, "y")))
    return SymmetryResiduals(float(mean), float(mism), gs.degenerate(scale))
