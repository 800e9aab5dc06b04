"""Reflection-positivity energy inequalities for the perturbed rotor Hamiltonian.

``H(lambda b) = H(0) + lambda H'(b) + lambda^2 C(b)`` exactly, so the
curvature of ``E0(lambda b)`` at ``lambda = 0`` is::

    2 * [ sum_{n>0} |<n|H'(b)|0>|^2 / (E0 - En) + C(b) ]

which the RP bound ``E0(b) >= E0(0)`` forces to be nonnegative.  With a
plane-wave ``b`` this turns into ``chi_k <= 1/(J E(k))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .errors import StepSizeError, UsageError
from .rotor import (LatticeSpec, RotorModel, assemble_hamiltonian, dispersion,
                    linear_term, plane_wave, quadratic_constant, reflect_field)
from .spectra import (GroundState, ground_state, momentum_observables,
                      resolvent_form, spin_fourier_apply)

TAU_CURV = 1e-6
TAU_MATCH = 1e-6
TAU_EN = 1e-9


def ground_energy(model: RotorModel, lat: LatticeSpec, b=None) -> float:
    H = assemble_hamiltonian(model, lat, b)
    if H.dim <= 2000:
        return float(sla.eigvalsh(H.matrix.toarray(), subset_by_index=[0, 0])[0])
    return ground_state(H).energy


@dataclass(frozen=True)
class CurvatureReport:
    fdSecond: float
    ptSecond: float
    cOfB: float
    fd_half_step: float
    step: float
    first_order: float

    @property
    def mismatch(self) -> float:
        return abs(self.fdSecond - self.ptSecond)

    def ok(self) -> bool:
        return (self.mismatch <= TAU_MATCH * (1.0 + abs(self.ptSecond))
                and self.fdSecond >= -TAU_CURV and self.ptSecond >= -TAU_CURV)


def _stencil(f, h):
    # centered 5-point second derivative, O(h^4)
    return (-f(2 * h) + 16 * f(h) - 30 * f(0.0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h)


def curvature_check(model: RotorModel, lat: LatticeSpec, b, step: float | None = None) -> CurvatureReport:
    """Finite-difference versus second-order perturbation curvature of ``E0(lambda b)``."""
    b = np.asarray(b, dtype=complex)
    H0 = assemble_hamiltonian(model, lat)
    gs = ground_state(H0)
    Hp = linear_term(model, lat, b)
    c_b = quadratic_constant(lat, b, model.coupling)
    first = float(np.vdot(gs.vector, Hp @ gs.vector).real)

    if c_b == 0.0 and Hp.nnz == 0:
        return CurvatureReport(0.0, 0.0, 0.0, 0.0, 0.0, first)

    hpsi = Hp @ gs.vector
    second_order = -resolvent_form(H0, gs, hpsi)
    pt = 2.0 * (second_order + c_b)

    amp = float(np.max(np.abs(b)))
    h = 1e-3 / amp if step is None else step
    cache = {}

    def f(lam):
        if lam not in cache:
            cache[lam] = ground_energy(model, lat, lam * b)
        return cache[lam]

    fd = _stencil(f, h)
    fd_half = _stencil(f, h / 2)
    # Richardson consistency: both stencils share the O(h^4) error scale
    if abs(fd - fd_half) > 10 * TAU_MATCH * (1.0 + abs(fd)):
        raise StepSizeError(f"stencil unstable: h={h:.2e} gives {fd:.9g}, h/2 gives {fd_half:.9g}")
    return CurvatureReport(fdSecond=fd, ptSecond=pt, cOfB=c_b, fd_half_step=fd_half,
                           step=h, first_order=first)


@dataclass(frozen=True)
class RPReport:
    monotoneSlack: float
    bondSlack: float
    e_b: float
    e_0: float
    e_left: float
    e_right: float
    bonds: tuple

    def ok(self, tol: float = TAU_EN) -> bool:
        t = tol * (1.0 + abs(self.e_0))
        return self.monotoneSlack >= -t and self.bondSlack >= -t


def rp_inequalities(model: RotorModel, lat: LatticeSpec, b, e0: float | None = None) -> RPReport:
    """``E0(b) - E0(0)`` and ``2 E0(b) - E0(b_L) - E0(b_R)``."""
    b = np.asarray(b, dtype=complex)
    b_L, b_R, counts = reflect_field(b, lat)
    e_b = ground_energy(model, lat, b)
    e_0 = ground_energy(model, lat) if e0 is None else e0
    e_l = ground_energy(model, lat, b_L)
    e_r = ground_energy(model, lat, b_R)
    return RPReport(monotoneSlack=e_b - e_0, bondSlack=2 * e_b - e_l - e_r,
                    e_b=e_b, e_0=e_0, e_left=e_l, e_right=e_r, bonds=counts)


@dataclass(frozen=True)
class PlaneWaveReport:
    k: tuple
    cOfB: float
    cAnalytic: float
    cFromH: float
    chi: float
    g: float
    chiSlack: float
    gSlack: float
    re_part: float
    im_part: float
    linear_term_residual: float
    quadratic_residual: float


def plane_wave_probe(model: RotorModel, lat: LatticeSpec, k,
                     gs: GroundState | None = None) -> PlaneWaveReport:
    """Plane-wave perturbation at ``k != 0``: ``C(b)``, ``chi_k`` and ``g_k`` bounds."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    lat.momentum_index(k)
    eps = dispersion(k)
    if eps == 0.0:
        raise UsageError("plane-wave probe needs k != 0")
    J, I, M = model.coupling, model.inertia, model.cutoff
    b = plane_wave(lat, k)
    H0 = assemble_hamiltonian(model, lat)
    if gs is None:
        gs = ground_state(H0)
    c_direct = quadratic_constant(lat, b, J)
    # C(b) read off the assembled matrices: H(2b) - 2H(b) + H(0) = 2 C(b) I
    d2 = (assemble_hamiltonian(model, lat, 2 * b).matrix
          - 2 * assemble_hamiltonian(model, lat, b).matrix + H0.matrix)
    diag = d2.diagonal()
    c_from_h = float(np.mean(diag) / 2.0)
    quad_res = float(abs(d2 - sp.diags(diag)).max() + np.max(np.abs(diag - diag[0])))

    psi = gs.vector
    a = spin_fourier_apply(psi, k, lat, M)
    ad = spin_fourier_apply(psi, k, lat, M, conj=True)
    re_vec = 0.5 * (a + ad)
    im_vec = (a - ad) / 2j
    # H'(b) psi = -2 J E(k) Re(s_k) psi
    hp = linear_term(model, lat, b) @ psi
    lin_res = float(np.linalg.norm(hp + 2 * J * eps * re_vec))

    if J == 0.0:
        return PlaneWaveReport(tuple(k), c_direct, 0.0, c_from_h, np.nan, np.nan,
                               np.inf, np.inf, np.nan, np.nan, lin_res, quad_res)

    rep = momentum_observables(gs, H0, k)
    re_part = resolvent_form(H0, gs, re_vec)
    im_part = resolvent_form(H0, gs, im_vec)
    return PlaneWaveReport(
        k=tuple(k), cOfB=c_direct, cAnalytic=J * eps, cFromH=c_from_h,
        chi=rep.chi, g=rep.g, chiSlack=1.0 / (J * eps) - rep.chi,
        gSlack=1.0 / (2.0 * np.sqrt(I * J * eps)) - rep.g,
        re_part=re_part, im_part=im_part, linear_term_residual=lin_res,
        quadratic_residual=quad_res,
    )
