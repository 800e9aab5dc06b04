"""Moduli, polar decomposition and the KLS/Schupp trace inequality.

For a (possibly rectangular) complex matrix ``c`` and square ``A``, ``B``
of matching sizes::

    |Tr(c* B c A*)| <= 1/2 [ Tr(|c| A |c| A*) + Tr(|c*| B |c*| B*) ]

with ``|c| = sqrt(c* c)`` and ``|c*| = sqrt(c c*)``. The operator version
(Hilbert-Schmidt ``c`` between separable spaces) is exercised through
finite truncations with explicit tail bounds, see :func:`truncation_ladder`.

Matrices are plain 2-D ``numpy`` arrays of ``complex128``; :func:`as_dense`
validates and converts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyInputError, ShapeError, UsageError

TAU_REC = 1e-12
TAU_EIG = 1e-12
TAU_INEQ = 1e-10

RANDOM_KINDS = ("ginibre", "hermitian", "psd", "partial_isometry")


def as_dense(x, name: str = "matrix") -> np.ndarray:
    """Return ``x`` as a finite 2-D complex array."""
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {a.shape}")
    if a.size == 0:
        raise EmptyInputError(f"{name} has zero size {a.shape}")
    if not np.all(np.isfinite(a)):
        raise UsageError(f"{name} has non-finite entries")
    return a


def adj(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hs_norm(a: np.ndarray) -> float:
    """Hilbert-Schmidt (Frobenius, Schatten-2) norm."""
    return float(np.linalg.norm(a, "fro"))


def schatten_norm(a: np.ndarray, p: float) -> float:
    """Schatten p-norm ``(Tr |a|^p)^(1/p)``; ``p=inf`` gives the operator norm."""
    s = np.linalg.svd(as_dense(a), compute_uv=False)
    if np.isinf(p):
        return float(s.max())
    if p < 1:
        raise UsageError("Schatten norms need p >= 1")
    return float(np.sum(s**p) ** (1.0 / p))


@dataclass(frozen=True)
class PolarParts:
    """``c = u |c| = |c*| u`` with ``u`` a partial isometry."""

    u: np.ndarray
    modL: np.ndarray
    modR: np.ndarray
    rank: int

    def sqrt_moduli(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(sqrt|c|, sqrt|c*|)``."""
        return psd_sqrt(self.modL), psd_sqrt(self.modR)


def psd_sqrt(p: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian PSD matrix; negative rounding is clipped."""
    w, v = np.linalg.eigh(0.5 * (p + adj(p)))
    w = np.sqrt(np.clip(w, 0.0, None))
    return hermitize((v * w) @ adj(v))


def hermitize(a: np.ndarray) -> np.ndarray:
    # (a + a*)/2 is Hermitian bit-for-bit because float addition commutes
    return 0.5 * (a + adj(a))


def polar_decompose(c, rank_tol: float | None = None) -> PolarParts:
    """Polar decomposition of an ``n x m`` matrix through its SVD.

    Singular directions below ``rank_tol * s_max`` (default ``max(n,m)*eps``)
    are treated as null: ``u`` annihilates them, so ``u* u`` is the
    projection onto ``range(|c|)`` rather than the identity.
    """
    c = as_dense(c, "c")
    w, s, vh = np.linalg.svd(c, full_matrices=False)
    s = np.clip(s, 0.0, None)
    if rank_tol is None:
        rank_tol = max(c.shape) * np.finfo(float).eps
    cutoff = rank_tol * (s[0] if s.size else 0.0)
    keep = s > cutoff
    rank = int(np.count_nonzero(keep))
    u = w[:, keep] @ vh[keep, :]
    v = adj(vh)
    modL = hermitize((v * s) @ vh)
    modR = hermitize((w * s) @ adj(w))
    return PolarParts(u=u, modL=modL, modR=modR, rank=rank)


@dataclass(frozen=True)
class IneqReport:
    lhs: float
    rhs: float
    slack: float
    # imaginary residue of the two rhs traces; zero up to rounding
    imag_residue: float = 0.0

    def ok(self, tol: float = TAU_INEQ) -> bool:
        return self.slack >= -tol * (1.0 + abs(self.rhs))


def _check_triple(c, A, B):
    c = as_dense(c, "c")
    A = as_dense(A, "A")
    B = as_dense(B, "B")
    n, m = c.shape
    if A.shape != (m, m):
        raise ShapeError(f"A must be {m}x{m} for c of shape {c.shape}, got {A.shape}")
    if B.shape != (n, n):
        raise ShapeError(f"B must be {n}x{n} for c of shape {c.shape}, got {B.shape}")
    return c, A, B


def kls_sides(c, A, B, polar: PolarParts | None = None):
    """Raw traces ``(Tr c*BcA*, Tr |c|A|c|A*, Tr |c*|B|c*|B*)`` as complex numbers."""
    c, A, B = _check_triple(c, A, B)
    if polar is None:
        polar = polar_decompose(c)
    t_lhs = np.trace(adj(c) @ B @ c @ adj(A))
    t_a = np.trace(polar.modL @ A @ polar.modL @ adj(A))
    t_b = np.trace(polar.modR @ B @ polar.modR @ adj(B))
    return t_lhs, t_a, t_b


def kls_gap(c, A, B) -> IneqReport:
    """Evaluate both sides of the KLS (square) or Schupp (rectangular) inequality."""
    t_lhs, t_a, t_b = kls_sides(c, A, B)
    lhs = float(abs(t_lhs))
    rhs = 0.5 * float(t_a.real + t_b.real)
    return IneqReport(lhs=lhs, rhs=rhs, slack=rhs - lhs,
                      imag_residue=float(max(abs(t_a.imag), abs(t_b.imag))))


def pq_factors(c, A, B) -> tuple[np.ndarray, np.ndarray]:
    """The matrices ``P = u* sqrt|c*| B* sqrt|c*| u`` and ``Q = sqrt|c| A* sqrt|c|``.

    ``Tr P*Q`` is the lhs trace, ``Tr P*P`` and ``Tr Q*Q`` the two rhs traces.
    """
    c, A, B = _check_triple(c, A, B)
    pol = polar_decompose(c)
    rl, rr = pol.sqrt_moduli()
    P = adj(pol.u) @ rr @ adj(B) @ rr @ pol.u
    Q = rl @ adj(A) @ rl
    return P, Q


def random_matrix(kind: str, rows: int, cols: int | None = None, seed=0) -> np.ndarray:
    """Deterministic random matrix of the requested kind.

    ``seed`` may be an int, a ``SeedSequence`` or a ``Generator``.
    ``partial_isometry`` has a random rank between 1 and ``min(rows, cols)``.
    """
    if kind not in RANDOM_KINDS:
        raise UsageError(f"unknown kind {kind!r}; expected one of {RANDOM_KINDS}")
    cols = rows if cols is None else cols
    if rows < 1 or cols < 1:
        raise UsageError("rows and cols must be >= 1")
    if kind in ("hermitian", "psd") and rows != cols:
        raise UsageError(f"{kind} matrices must be square")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    g = (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)
    if kind == "ginibre":
        return g
    if kind == "hermitian":
        return hermitize(g)
    if kind == "psd":
        return hermitize(g @ adj(g))
    r = int(rng.integers(1, min(rows, cols) + 1))
    w, _, vh = np.linalg.svd(g, full_matrices=False)
    return w[:, :r] @ vh[:r, :]


def complete_to_unitary(u) -> np.ndarray:
    """Square unitary agreeing with the partial isometry ``u`` on its initial space."""
    u = as_dense(u, "u")
    if u.shape[0] != u.shape[1]:
        raise ShapeError("only square partial isometries can be completed to unitaries")
    w, _, vh = np.linalg.svd(u)
    return w @ vh


def is_unitary(u, tol: float = 1e-12) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    eye = np.eye(u.shape[0])
    return bool(np.max(np.abs(adj(u) @ u - eye)) <= tol and np.max(np.abs(u @ adj(u) - eye)) <= tol)


# ---------------------------------------------------------------------------
# operator version: finite truncations of a Hilbert-Schmidt operator


@dataclass(frozen=True)
class TruncatedOperator:
    """Hilbert-Schmidt operator ``c`` given by its matrix elements.

    ``coeff(alpha, beta)`` returns ``<beta|c|alpha>`` (vectorized over index
    arrays); ``tail_bound(s)`` bounds the l2 mass of all coefficients with
    ``alpha >= s`` or ``beta >= s``, i.e. ``||c - c_s||_2``.
    """

    coeff: Callable[[np.ndarray, np.ndarray], np.ndarray]
    tail_bound: Callable[[int], float]
    hs_norm_bound: float
    name: str = "operator"

    def matrix(self, size: int) -> np.ndarray:
        beta, alpha = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
        return np.asarray(self.coeff(alpha, beta), dtype=np.complex128)


def rank_one_family() -> TruncatedOperator:
    """``<beta|c|alpha> = 1/((alpha+1)(beta+1))``, a rank-one HS operator."""
    zeta2 = np.pi**2 / 6

    def tail(s: int) -> float:
        head = float(np.sum(1.0 / np.arange(1, s + 1) ** 2))
        # total mass zeta2^2 minus the kept s x s block head^2
        return float(np.sqrt(max(zeta2**2 - head**2, 0.0)))

    return TruncatedOperator(
        coeff=lambda a, b: 1.0 / ((a + 1.0) * (b + 1.0)),
        tail_bound=tail,
        hs_norm_bound=zeta2,
        name="rank_one",
    )


def hankel_family() -> TruncatedOperator:
    """``<beta|c|alpha> = i^(alpha-beta) / (alpha+beta+1)^2``, full rank, complex."""
    from scipy.special import zeta

    def tail(s: int) -> float:
        # omitted entries have alpha+beta >= s; sum_{j>s} j^-3 <= 1/(2 s^2)
        return float(np.sqrt(1.0 / (2.0 * s**2)))

    return TruncatedOperator(
        coeff=lambda a, b: (1j ** ((a - b) % 4)) / (a + b + 1.0) ** 2,
        tail_bound=tail,
        hs_norm_bound=float(np.sqrt(zeta(3))),
        name="hankel",
    )


def identity_rule(size: int) -> np.ndarray:
    return np.eye(size, dtype=np.complex128)


def shift_rule(size: int) -> np.ndarray:
    """Truncated unilateral shift ``|j> -> |j+1>``; operator norm 1."""
    return np.eye(size, k=-1, dtype=np.complex128)


@dataclass(frozen=True)
class LadderRung:
    size: int
    report: IneqReport
    tail: float
    lhs_increment: float | None = None
    rhs_increment: float | None = None
    increment_bound_lhs: float | None = None
    increment_bound_rhs: float | None = None

    @property
    def increments_ok(self) -> bool:
        if self.lhs_increment is None:
            return True
        return (self.lhs_increment <= self.increment_bound_lhs
                and self.rhs_increment <= self.increment_bound_rhs)


def _increment_bounds(c_norm: float, tail: float, a_norm: float, b_norm: float):
    """Bounds on how far lhs and rhs can move when the truncation grows.

    Growing the truncation adds ``delta`` with ``||delta||_2 <= tail``. The
    lhs is sesquilinear in ``c``; the rhs is sesquilinear in ``|c|`` and
    ``|c*|``, which move by at most ``sqrt(2) ||delta||_2`` (HS-norm
    Lipschitz bound for the modulus).
    """
    lhs = a_norm * b_norm * (2.0 * c_norm * tail + tail**2)
    t2 = np.sqrt(2.0) * tail
    rhs = 0.5 * (a_norm**2 + b_norm**2) * (2.0 * c_norm * t2 + t2**2)
    return float(lhs), float(rhs)


def truncation_ladder(op: TruncatedOperator,
                      A_rule: Callable[[int], np.ndarray],
                      B_rule: Callable[[int], np.ndarray],
                      sizes: Sequence[int]) -> list[LadderRung]:
    """Evaluate the inequality on growing square truncations of ``op``.

    ``A_rule(s)`` and ``B_rule(s)`` must return nested truncations (the
    leading ``s x s`` block of ``A_rule(t)`` equals ``A_rule(s)`` for
    ``s < t``) of bounded operators.
    """
    sizes = [int(s) for s in sizes]
    if not sizes or any(s < 1 for s in sizes):
        raise UsageError("sizes must be positive")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise UsageError(f"sizes must be strictly ascending, got {sizes}")

    rungs: list[LadderRung] = []
    prev = None
    for s in sizes:
        c = op.matrix(s)
        A = as_dense(A_rule(s), "A_rule")
        B = as_dense(B_rule(s), "B_rule")
        rep = kls_gap(c, A, B)
        tail = op.tail_bound(s)
        if prev is None:
            rungs.append(LadderRung(size=s, report=rep, tail=tail))
        else:
            p_rep, p_tail = prev
            a_norm = float(np.linalg.norm(A, 2))
            b_norm = float(np.linalg.norm(B, 2))
            bl, br = _increment_bounds(op.hs_norm_bound, p_tail, a_norm, b_norm)
            rungs.append(LadderRung(
                size=s, report=rep, tail=tail,
                lhs_increment=abs(rep.lhs - p_rep.lhs),
                rhs_increment=abs(rep.rhs - p_rep.rhs),
                increment_bound_lhs=bl, increment_bound_rhs=br,
            ))
        prev = (rep, tail)
    return rungs
