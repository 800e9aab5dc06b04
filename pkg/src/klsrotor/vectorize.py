"""Expectation-value form of the trace inequality on ``L (x) R``.

A Hilbert-Schmidt map ``c: L -> R`` is stored as a ``dimR x dimL`` array.
Its vectorization ``Gamma(c) = sum_g psi_g (x) c psi_g`` uses the standard
basis of ``L`` and the left-factor-major ordering ``index = g*dimR + r``,
the same ordering ``numpy.kron`` and the rotor product space use.

``J`` denotes complex conjugation of coordinates in a fixed basis.  In the
standard basis ``J A J`` is the entrywise conjugate of ``A``; for the basis
``{U psi_g}`` of ``R`` it is ``U conj(U* B U) U*``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ShapeError
from .schatten import adj, as_dense, is_unitary, polar_decompose

TAU_ID = 1e-12


@dataclass(frozen=True)
class VecState:
    data: np.ndarray
    dimL: int
    dimR: int

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.data))


@dataclass(frozen=True)
class PairingU:
    """Unitary ``U: L -> R`` fixing the basis ``{U psi_g}`` of ``R``."""

    matrix: np.ndarray

    def __post_init__(self):
        if not is_unitary(self.matrix, 1e-10):
            raise ContractError("pairing matrix is not unitary")

    def conj_R(self, B: np.ndarray) -> np.ndarray:
        """``J_Omega B J_Omega`` for the basis ``{U psi_g}``."""
        U = self.matrix
        return U @ (adj(U) @ B @ U).conj() @ adj(U)

    def apply_J_R(self, v: np.ndarray) -> np.ndarray:
        U = self.matrix
        return U @ (adj(U) @ v).conj()


def vec_gamma(c) -> VecState:
    c = as_dense(c, "c")
    dimR, dimL = c.shape
    return VecState(data=c.T.reshape(-1).copy(), dimL=dimL, dimR=dimR)


def unvec(v: VecState) -> np.ndarray:
    return v.data.reshape(v.dimL, v.dimR).T.copy()


def vec_omega(d, U: PairingU | None = None) -> VecState:
    """``Omega(d) = sum_w d phi_w (x) phi_w`` for ``d: R -> L`` (``dimL x dimR``).

    ``phi_w`` is the standard basis of ``R`` unless a pairing ``U`` is given,
    in which case ``phi_w = U psi_w``.
    """
    d = as_dense(d, "d")
    dimL, dimR = d.shape
    phi = np.eye(dimR) if U is None else U.matrix
    if phi.shape != (dimR, dimR):
        raise ShapeError("pairing does not match d")
    # sum_w (d phi_w) (x) phi_w ; column w of phi is phi_w
    data = np.einsum("gw,rw->gr", d @ phi, phi).reshape(-1)
    return VecState(data=data, dimL=dimL, dimR=dimR)


def inner(a: VecState, b: VecState) -> complex:
    return complex(np.vdot(a.data, b.data))


def apply_tensor(A, B, v: VecState) -> VecState:
    """``(A (x) B) v``; ``None`` stands for the identity factor."""
    A = np.eye(v.dimL) if A is None else np.asarray(A)
    B = np.eye(v.dimR) if B is None else np.asarray(B)
    t = v.data.reshape(v.dimL, v.dimR)
    return VecState(data=(A @ t @ B.T).reshape(-1), dimL=v.dimL, dimR=v.dimR)


def expectation(A, B, v: VecState) -> complex:
    return inner(v, apply_tensor(A, B, v))


def _shapes(c, A, B):
    c = as_dense(c, "c")
    A = as_dense(A, "A")
    B = as_dense(B, "B")
    dimR, dimL = c.shape
    if A.shape != (dimL, dimL) or B.shape != (dimR, dimR):
        raise ShapeError(f"A must act on L (dim {dimL}) and B on R (dim {dimR})")
    return c, A, B


def expectation_identity(c, A, B) -> tuple[tuple[float, float], complex]:
    """Both sides of ``(Gc|(A(x)B)Gc) = Tr_L(c* B c J A* J)``.

    Returns ``((re, im) of the expectation, trace form)``.  Raises
    :class:`ContractError` if they differ by more than ``TAU_ID`` relative
    to the scale of the inputs.
    """
    c, A, B = _shapes(c, A, B)
    lhs = expectation(A, B, vec_gamma(c))
    jaj = adj(A).conj()  # J A* J in the standard basis
    trace_form = complex(np.trace(adj(c) @ B @ c @ jaj))
    scale = 1.0 + np.linalg.norm(c) ** 2 * np.linalg.norm(A, 2) * np.linalg.norm(B, 2)
    if abs(lhs - trace_form) > TAU_ID * scale:
        raise ContractError(f"expectation and trace forms differ by {abs(lhs - trace_form):.3e}")
    return (lhs.real, lhs.imag), trace_form


@dataclass(frozen=True)
class ExpectationBound:
    lhs: float
    rhs: float
    slack: float
    rhs_left: complex
    rhs_right: complex


def rp_expectation_bound(c, A, B, U: PairingU) -> ExpectationBound:
    """``2|(Gc|(A(x)B)Gc)|`` against the two reflected expectation values."""
    c, A, B = _shapes(c, A, B)
    Um = U.matrix
    if Um.shape != (c.shape[0], c.shape[1]):
        raise ShapeError("U must map L onto R")
    pol = polar_decompose(c)
    lhs = 2.0 * abs(expectation(A, B, vec_gamma(c)))
    left = vec_gamma(Um @ pol.modL)
    right = vec_gamma(pol.modR @ Um)
    t1 = expectation(A, Um @ A.conj() @ adj(Um), left)
    t2 = expectation(adj(Um) @ U.conj_R(B) @ Um, B, right)
    rhs = t1.real + t2.real
    return ExpectationBound(lhs=lhs, rhs=rhs, slack=rhs - lhs, rhs_left=t1, rhs_right=t2)


def identity_residuals(c, A, B, U: PairingU, T_diag=None, S_diag=None) -> dict[str, float]:
    """Absolute residuals of every finite-dimensional vectorization identity.

    ``T_diag`` (real, length dimL) and ``S_diag`` (real, length dimR) are the
    point spectra of the diagonal operators ``T`` on ``L`` (eigenbasis
    standard) and ``S`` on ``R`` (eigenbasis ``{U psi_g}``).
    """
    c, A, B = _shapes(c, A, B)
    Um = U.matrix
    dimR, dimL = c.shape
    pol = polar_decompose(c)
    modL, modR = pol.modL, pol.modR
    Ic = vec_gamma(c)
    out: dict[str, float] = {}

    # Gamma is an isometry: (Ga|Gb) = Tr(a* b)
    rng = np.random.default_rng(0)
    a = rng.standard_normal(c.shape) + 1j * rng.standard_normal(c.shape)
    a /= np.linalg.norm(a)
    out["gamma_isometry"] = abs(inner(vec_gamma(a), Ic) - np.trace(adj(a) @ c))
    out["gamma_roundtrip"] = float(np.max(np.abs(unvec(Ic) - c)))
    # Gamma(Bc) = (I (x) B) Gamma(c), and the trace chain of the left lemma
    out["gamma_left_mult"] = float(np.max(np.abs(vec_gamma(B @ c).data - apply_tensor(None, B, Ic).data)))
    chain = [
        inner(vec_gamma(a), apply_tensor(None, B, Ic)),
        np.trace(adj(a) @ B @ c),
        np.trace(B @ c @ adj(a)),
        np.trace(c @ adj(a) @ B),
    ]
    out["gamma_trace_chain"] = float(max(abs(x - chain[0]) for x in chain))
    # Tr(J A J) = Tr(A*)
    out["conjugated_trace"] = abs(np.trace(A.conj()) - np.trace(adj(A)))

    # Omega lemma: Omega(A d) = (A (x) I) Omega(d), trace chain
    d = adj(c)  # any R -> L map
    e = adj(a)
    Od = vec_omega(d, U)
    out["omega_isometry"] = abs(inner(vec_omega(e, U), Od) - np.trace(adj(e) @ d))
    out["omega_left_mult"] = float(np.max(np.abs(vec_omega(A @ d, U).data - apply_tensor(A, None, Od).data)))
    chain = [
        inner(vec_omega(e, U), apply_tensor(A, None, Od)),
        np.trace(adj(e) @ A @ d),
        np.trace(A @ d @ adj(e)),
        np.trace(d @ adj(e) @ A),
    ]
    out["omega_trace_chain"] = float(max(abs(x - chain[0]) for x in chain))
    out["conjugated_trace_R"] = abs(np.trace(U.conj_R(B)) - np.trace(adj(B)))

    # cross-basis: Gamma(c) = Omega(J_G c* J_O); Gamma(J_O d* J_G) = Omega(d)
    def jl_x_jr(m):  # J_G m J_O for m: R -> L
        return (m @ Um).conj() @ adj(Um)

    def jr_x_jl(m):  # J_O m J_G for m: L -> R
        return Um @ (adj(Um) @ m).conj()

    out["cross_basis_gamma"] = float(np.max(np.abs(Ic.data - vec_omega(jl_x_jr(adj(c)), U).data)))
    out["cross_basis_omega"] = float(np.max(np.abs(vec_gamma(jr_x_jl(adj(d))).data - Od.data)))
    ov = inner(Od, Ic)
    out["cross_basis_inner"] = float(max(
        abs(ov - np.trace(adj(d) @ jl_x_jr(adj(c)))),
        abs(ov - inner(vec_gamma(jr_x_jl(adj(d))), Ic)),
        abs(ov - np.trace(jl_x_jr(d) @ c)),
    ))

    # J_O = U J_G U* is an antiunitary involution fixing every phi_w
    v = rng.standard_normal(dimR) + 1j * rng.standard_normal(dimR)
    out["pairing_conjugation"] = float(max(
        np.max(np.abs(U.apply_J_R(U.apply_J_R(v)) - v)),
        np.max(np.abs(U.apply_J_R(Um) - Um)),
        abs(np.vdot(U.apply_J_R(v), U.apply_J_R(a[:, 0])) - np.vdot(a[:, 0], v)),
    ))

    Uc = vec_gamma(Um @ modL)
    cU = vec_gamma(modR @ Um)
    # right factor seen through |c*| U
    out["right_factor_modulus"] = abs(expectation(None, B, Ic) - expectation(None, B, cU))
    # left factor seen through U |c|
    out["left_factor_modulus"] = abs(expectation(A, None, Ic) - expectation(A, None, Uc))
    # left factor moved to the right
    out["left_to_right"] = abs(expectation(A, None, Ic)
                               - expectation(None, Um @ adj(A).conj() @ adj(Um), Uc))
    # right factor moved to the left
    out["right_to_left"] = abs(expectation(None, B, Ic)
                               - expectation((adj(Um) @ adj(B) @ Um).conj(), None, cU))
    # product expectation as a trace
    out["product_as_trace"] = abs(expectation(A, B, Ic) - np.trace(adj(c) @ B @ c @ adj(A).conj()))
    # the two reflected expectations equal the KLS rhs traces (with A -> J A J)
    Ar = A.conj()
    t1 = expectation(A, Um @ A.conj() @ adj(Um), Uc)
    out["reflected_left_trace"] = abs(t1 - np.trace(modL @ Ar @ modL @ adj(Ar)))
    t2 = expectation(adj(Um) @ U.conj_R(B) @ Um, B, cU)
    out["reflected_right_trace"] = abs(t2 - np.trace(modR @ B @ modR @ adj(B)))

    # diagonal operators with point spectrum
    if T_diag is not None:
        T = np.diag(np.asarray(T_diag, dtype=float))
        e0 = expectation(T, None, Ic)
        out["diagonal_left_modulus"] = abs(e0 - expectation(T, None, Uc))
        out["diagonal_left_to_right"] = abs(e0 - expectation(None, Um @ T @ adj(Um), Uc))
    if S_diag is not None:
        S = Um @ np.diag(np.asarray(S_diag, dtype=float)) @ adj(Um)
        pd = polar_decompose(d)
        Ud = vec_omega(adj(Um) @ pd.modL, U)
        e0 = expectation(None, S, Od)
        out["diagonal_right_modulus"] = abs(e0 - expectation(None, S, Ud))
        out["diagonal_right_to_left"] = abs(e0 - expectation(adj(Um) @ S @ Um, None, Ud))
    return {k: float(v) for k, v in out.items()}
