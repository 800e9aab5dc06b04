"""Periodic hypercubic lattice and the truncated quantum rotor Hamiltonian.

Each site carries a planar rotor, truncated to the angular-momentum modes
``e^{i n phi}`` with ``|n| <= M``.  In that basis the kinetic energy is
``diag(n^2 / 2I)``, ``cos`` and ``sin`` are one-banded, and every matrix
element of ``H(b)`` is real.

Product states are ordered left-factor-major: site 0 is the most
significant digit, digit value ``n + M``.  This is the ``numpy.kron`` order.

The potential is the sum-of-squares form::

    V(b) = J/2 sum_<xy> |cos_x - b_x - cos_y + b_y|^2 + (sin_x - sin_y)^2

with ``cos^2 + sin^2`` replaced by the identity on every site, so
``V(0) = -J sum_<xy> cos(phi_x - phi_y) + J * n_bonds`` exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import ShapeError, UsageError

MAX_DIM = 5_000_000


@dataclass(frozen=True)
class LatticeSpec:
    """Hypercube ``{-N+1..N}^d`` with periodic wrap across the edge ``2N``.

    ``bonds`` rows are ``(site, neighbor, axis)``, one per site per axis, with
    the neighbor at ``+1`` along the axis.  For ``N = 1`` every unordered pair
    appears twice (``doubled_bonds``).
    """

    d: int
    N: int
    sites: np.ndarray
    bonds: np.ndarray
    momenta: np.ndarray
    mirror: np.ndarray
    left_mask: np.ndarray
    index: dict = field(repr=False, compare=False)

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def edge(self) -> int:
        return 2 * self.N

    @property
    def doubled_bonds(self) -> bool:
        return self.N == 1

    def momentum_index(self, k) -> int:
        """Position of ``k`` in :attr:`momenta`; raises if off the grid."""
        k = np.atleast_1d(np.asarray(k, dtype=float))
        if k.shape != (self.d,):
            raise UsageError(f"momentum must have {self.d} components")
        m = k * self.N / np.pi
        mi = np.rint(m)
        if np.max(np.abs(m - mi)) > 1e-9:
            raise UsageError(f"momentum {k} is not on the Brillouin grid pi*m/{self.N}")
        mi = ((mi.astype(int) + self.N - 1) % (2 * self.N)) - self.N + 1
        hits = np.flatnonzero(np.all(np.rint(self.momenta * self.N / np.pi).astype(int) == mi, axis=1))
        return int(hits[0])

    def nonzero_momenta(self) -> np.ndarray:
        return self.momenta[np.any(self.momenta != 0.0, axis=1)]


def build_lattice(d: int, N: int) -> LatticeSpec:
    if d < 1 or N < 1:
        raise UsageError("need d >= 1 and N >= 1")
    coords = np.arange(-N + 1, N + 1)
    sites = np.array(list(itertools.product(coords, repeat=d)), dtype=int)
    index = {tuple(s): i for i, s in enumerate(sites)}
    edge = 2 * N
    bonds = []
    for i, s in enumerate(sites):
        for axis in range(d):
            t = s.copy()
            # wrap: x = N is followed by x = -N+1
            t[axis] = (t[axis] + 1 + N - 1) % edge - N + 1
            bonds.append((i, index[tuple(t)], axis))
    bonds = np.array(bonds, dtype=int)
    momenta = np.array(list(itertools.product(np.pi * coords / N, repeat=d)), dtype=float)
    # reflection in the hyperplane x_1 = 1/2
    mirror = np.empty(len(sites), dtype=int)
    for i, s in enumerate(sites):
        t = s.copy()
        t[0] = 1 - t[0]
        mirror[i] = index[tuple(t)]
    left_mask = sites[:, 0] <= 0
    return LatticeSpec(d=d, N=N, sites=sites, bonds=bonds, momenta=momenta,
                       mirror=mirror, left_mask=left_mask, index=index)


def dispersion(k) -> float:
    """``d - sum_i cos k_i``."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    return float(len(k) - np.sum(np.cos(k)))


@dataclass(frozen=True)
class RotorModel:
    inertia: float
    coupling: float
    cutoff: int

    def __post_init__(self):
        if self.inertia <= 0:
            raise UsageError("inertia must be positive")
        if self.coupling < 0:
            raise UsageError("only ferromagnetic coupling J >= 0 is supported")
        if self.cutoff < 1:
            raise UsageError("cutoff M must be >= 1")

    @property
    def local_dim(self) -> int:
        return 2 * self.cutoff + 1


def site_operators(M: int, inertia: float):
    """Single-rotor ``(kinetic, cos, sin)`` on the modes ``n = -M..M``."""
    n = np.arange(-M, M + 1)
    kinetic = np.diag(n**2 / (2.0 * inertia))
    raise_ = np.eye(2 * M + 1, k=-1)  # |n> -> |n+1>
    cos_op = 0.5 * (raise_ + raise_.T)
    sin_op = (raise_ - raise_.T) / 2j
    return kinetic, cos_op, sin_op


def check_field(b, lat: LatticeSpec) -> np.ndarray:
    if b is None:
        return np.zeros(lat.n_sites, dtype=complex)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if b.shape != (lat.n_sites,):
        raise ShapeError(f"field has {b.size} values for {lat.n_sites} sites")
    if not np.all(np.isfinite(b)):
        raise UsageError("field has non-finite values")
    return b


@dataclass(frozen=True)
class SparseHamiltonian:
    matrix: sp.csr_matrix
    constant_offset: float
    model: RotorModel
    lattice: LatticeSpec
    field: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def scale(self) -> float:
        """Cheap upper estimate of ``||H||`` (max absolute row sum)."""
        return float(abs(self.matrix).sum(axis=1).max())

    def coo_lines(self):
        m = self.matrix.tocoo()
        order = np.lexsort((m.col, m.row))
        for r, c, v in zip(m.row[order], m.col[order], m.data[order]):
            yield f"{r} {c} {float(np.real(v))!r} {float(np.imag(v))!r}"

    def export_coo(self, path) -> Path:
        """Write ``row col re im`` lines, sorted by row then column."""
        path = Path(path)
        with path.open("w") as fh:
            fh.write(f"# dim {self.dim} nnz {self.matrix.nnz} offset {self.constant_offset!r}\n")
            for line in self.coo_lines():
                fh.write(line + "\n")
        return path


def read_coo(path) -> sp.csr_matrix:
    rows, cols, vals, dim = [], [], [], None
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            dim = int(line.split()[2])
            continue
        r, c, re, im = line.split()
        rows.append(int(r))
        cols.append(int(c))
        vals.append(float(re) + 1j * float(im))
    return sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim))


def product_basis(model: RotorModel, lat: LatticeSpec) -> np.ndarray:
    """Mode numbers ``n_x`` of every product state, shape ``(dim, |Lambda|)``."""
    D = model.local_dim
    L = lat.n_sites
    dim = D**L
    if dim > MAX_DIM:
        raise UsageError(f"Hilbert space dimension {dim} exceeds {MAX_DIM}")
    digits = np.indices((D,) * L).reshape(L, -1).T
    return digits - model.cutoff


def _strides(model: RotorModel, lat: LatticeSpec) -> np.ndarray:
    L = lat.n_sites
    return model.local_dim ** np.arange(L - 1, -1, -1)


def _raise_pairs(n: np.ndarray, strides, x: int, M: int):
    """States where ``n_x`` can be raised, and the raised state's index."""
    src = np.flatnonzero(n[:, x] < M)
    return src, src + strides[x]


def field_coefficients(lat: LatticeSpec, b, J: float) -> np.ndarray:
    """Coefficient of ``cos_x`` in ``H(b) - H(0) - C(b)``."""
    b = check_field(b, lat)
    coef = np.zeros(lat.n_sites)
    for x, y, _ in lat.bonds:
        r = (b[x] - b[y]).real
        coef[x] -= J * r
        coef[y] += J * r
    return coef


def quadratic_constant(lat: LatticeSpec, b, J: float) -> float:
    """``C(b) = J/2 sum_<xy> |b_x - b_y|^2``."""
    b = check_field(b, lat)
    x, y = lat.bonds[:, 0], lat.bonds[:, 1]
    return float(0.5 * J * np.sum(np.abs(b[x] - b[y]) ** 2))


def _cos_field_upper(n, strides, coef, M):
    rows, cols, vals = [], [], []
    for x, cx in enumerate(coef):
        if cx == 0.0:
            continue
        src, dst = _raise_pairs(n, strides, x, M)
        rows.append(src)
        cols.append(dst)
        vals.append(np.full(src.size, 0.5 * cx))
    return rows, cols, vals


def linear_term(model: RotorModel, lat: LatticeSpec, b) -> sp.csr_matrix:
    """``H'(b) = -J sum_<xy> Re(b_x - b_y) (cos_x - cos_y)`` as a sparse matrix."""
    n = product_basis(model, lat)
    strides = _strides(model, lat)
    coef = field_coefficients(lat, b, model.coupling)
    rows, cols, vals = _cos_field_upper(n, strides, coef, model.cutoff)
    dim = n.shape[0]
    if rows:
        up = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                           shape=(dim, dim))
    else:
        up = sp.csr_matrix((dim, dim))
    return (up + up.T).tocsr()


def assemble_hamiltonian(model: RotorModel, lat: LatticeSpec, b=None) -> SparseHamiltonian:
    """Sparse ``H(b) = T + V(b)`` on the truncated product space."""
    b = check_field(b, lat)
    M, I, J = model.cutoff, model.inertia, model.coupling
    n = product_basis(model, lat)
    dim = n.shape[0]
    strides = _strides(model, lat)
    n_bonds = len(lat.bonds)

    diag = np.sum(n.astype(float) ** 2, axis=1) / (2.0 * I)
    diag += J * n_bonds + quadratic_constant(lat, b, J)

    # strictly upper part; H = diag + up + up.T keeps the data exactly symmetric
    rows, cols, vals = [], [], []
    if J != 0.0:
        for x, y, _ in lat.bonds:
            # -(J/2) S+_x S-_y ; its adjoint is the mirrored entry
            src = np.flatnonzero((n[:, x] < M) & (n[:, y] > -M))
            dst = src + strides[x] - strides[y]
            lo, hi = np.minimum(src, dst), np.maximum(src, dst)
            rows.append(lo)
            cols.append(hi)
            vals.append(np.full(src.size, -0.5 * J))
        r2, c2, v2 = _cos_field_upper(n, strides, field_coefficients(lat, b, J), M)
        rows += r2
        cols += c2
        vals += v2
    if rows:
        up = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                           shape=(dim, dim))
    else:
        up = sp.csr_matrix((dim, dim))
    H = (sp.diags(diag) + up + up.T).tocsr()
    H.sort_indices()
    return SparseHamiltonian(matrix=H, constant_offset=J * n_bonds, model=model,
                             lattice=lat, field=b)


def count_nonzero_bonds(b, lat: LatticeSpec) -> int:
    b = check_field(b, lat)
    return int(np.count_nonzero(b[lat.bonds[:, 0]] != b[lat.bonds[:, 1]]))


def reflect_field(b, lat: LatticeSpec):
    """Mirror-extend ``b`` from each half of the lattice.

    Returns ``(b_L, b_R, (l, l_L, l_R))`` with the non-zero-bond counts of
    ``b``, ``b_L`` and ``b_R``.
    """
    b = check_field(b, lat)
    left = lat.left_mask
    b_L = np.where(left, b, b[lat.mirror])
    b_R = np.where(left, b[lat.mirror], b)
    counts = (count_nonzero_bonds(b, lat), count_nonzero_bonds(b_L, lat),
              count_nonzero_bonds(b_R, lat))
    return b_L, b_R, counts


def plane_wave(lat: LatticeSpec, k) -> np.ndarray:
    """``b_x = |Lambda|^{-1/2} e^{i k.x}``."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    return np.exp(1j * lat.sites @ k) / np.sqrt(lat.n_sites)


def total_charge(model: RotorModel, lat: LatticeSpec) -> np.ndarray:
    """``sum_x n_x`` for every product state."""
    return product_basis(model, lat).sum(axis=1)
