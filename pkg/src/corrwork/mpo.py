"""Translationally invariant MPO tensors for the state families and their dense contraction.

A tensor stores the ``d x d`` grid of ``M x M`` auxiliary matrices ``A[i, j]``.
The N-site operator is the cyclic trace

    rho[(i_1..i_N), (j_1..j_N)] = Tr[A[i_1, j_1] A[i_2, j_2] ... A[i_N, j_N]].

Every family tensor is diagonal in the auxiliary index, so it is stored as an
array of shape ``(d, d, M)`` and the trace collapses to a sum over the
diagonal. General tensors (for instance from :func:`symmetrize_mpo`) use shape
``(d, d, M, M)``.

Dense operators are indexed with site 1 as the most significant digit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, InvalidArgument, ResourceError
from .spectra import Partition, SingleSiteSystem

DENSE_CAP = 4096
UNITARY_TOL = 1e-12
RANK_TOL = 1e-10
# general (non-diagonal) contraction keeps d^2N * M^2 complex numbers alive
GENERAL_CAP = 2 * 10**7


@dataclass(frozen=True, eq=False)
class TIMPOTensor:
    data: np.ndarray
    diagonal: bool = True

    def __post_init__(self):
        a = np.asarray(self.data, dtype=complex)
        want = 3 if self.diagonal else 4
        if a.ndim != want or a.shape[0] != a.shape[1] or (not self.diagonal and a.shape[2] != a.shape[3]):
            raise InvalidArgument(f"tensor data has shape {a.shape}, expected {'(d,d,M)' if self.diagonal else '(d,d,M,M)'}")
        object.__setattr__(self, "data", a)

    @property
    def d(self) -> int:
        return self.data.shape[0]

    @property
    def M(self) -> int:
        return self.data.shape[2]

    @property
    def a(self) -> np.ndarray:
        """Full ``(d, d, M, M)`` array of auxiliary matrices."""
        if not self.diagonal:
            return self.data
        out = np.zeros((self.d, self.d, self.M, self.M), dtype=complex)
        idx = np.arange(self.M)
        out[:, :, idx, idx] = self.data
        return out

    def matrix(self, i: int, j: int) -> np.ndarray:
        return self.a[i, j]


@dataclass(frozen=True, eq=False)
class DenseOperator:
    n_sites: int
    d: int
    matrix: np.ndarray

    def __post_init__(self):
        n = self.d**self.n_sites
        if self.matrix.shape != (n, n):
            raise InvalidArgument(f"matrix shape {self.matrix.shape} inconsistent with d={self.d}, N={self.n_sites}")

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues of the Hermitian part, descending."""
        h = 0.5 * (self.matrix + self.matrix.conj().T)
        return np.linalg.eigvalsh(h)[::-1]


def _check_dense(d: int, N: int, cap: int):
    rows = d**N
    if rows > cap:
        raise ResourceError(f"dense operator needs {rows} rows (d={d}, N={N}), above the cap {cap}", rows, cap)


def _rotate(diag_data: np.ndarray, v: np.ndarray) -> np.ndarray:
    # B[:, :, a] = V A[:, :, a] V^dagger
    return np.einsum("pi,ija,qj->pqa", v, diag_data, v.conj(), optimize=True)


def build_family_mpo(
    sys: SingleSiteSystem,
    p: Partition | None,
    family: str,
    N: int,
    basis: str = "energy",
    rectangular_delta: bool = True,
) -> TIMPOTensor:
    """TI-MPO tensor of ``family`` in ``{"GHZ", "A", "B", "C"}`` for ``N`` sites.

    The tensor is assembled in the eigenbasis of ``rho``. With ``basis="energy"``
    (default) it is then rotated into the energy basis in which ``sys.rho`` is
    given, so the partial traces of the contraction reproduce ``sys.rho``
    itself; ``basis="eigen"`` keeps the eigenbasis.

    For family B with blocks of unequal size the block-position indices of the
    two sides are matched on their common range only; passing
    ``rectangular_delta=False`` refuses such partitions instead.
    """
    fam = family.upper()
    if N < 2:
        raise InvalidArgument("N must be >= 2")
    if basis not in ("energy", "eigen"):
        raise InvalidArgument(f"unknown basis {basis!r}")
    d, r = sys.d, sys.rank
    lam = sys.lam
    if fam != "GHZ" and p is None:
        raise InvalidArgument(f"family {fam} needs a partition")
    if p is not None and p.r != r:
        raise InvalidArgument(f"partition covers {p.r} eigenvalues but rho has rank {r}")

    if fam == "GHZ":
        data = np.zeros((d, d, r * r))
        for i in range(r):
            for j in range(r):
                data[i, j, i * r + j] = (lam[i] * lam[j]) ** (1.0 / (2 * N))
    elif fam == "A":
        data = np.zeros((d, d, p.power(2)))
        off = 0
        for l, block in enumerate(p.blocks):
            n = len(block)
            for a, i in enumerate(block):
                for b, j in enumerate(block):
                    data[i, j, off + a * n + b] = math.sqrt(lam[i] * lam[j]) ** (1.0 / N)
            off += n * n
    elif fam == "B":
        if not rectangular_delta and len(set(p.sizes.tolist())) > 1:
            raise ConfigurationError("non-uniform partition needs the rectangular delta for family B")
        L, S = p.L, p.weights
        blk, pos = p.block_of, p.position_in_block
        data = np.zeros((d, d, L * L))
        expo = (1.0 - N) / (2.0 * N)
        for i in range(r):
            for j in range(r):
                if pos[i] != pos[j]:
                    continue
                li, lj = blk[i], blk[j]
                data[i, j, li * L + lj] = math.sqrt(lam[i] * lam[j]) * (S[li] * S[lj]) ** expo
    elif fam == "C":
        S = p.weights
        data = np.zeros((d, d, p.L))
        for i in range(r):
            l = p.block_of[i]
            data[i, i, l] = lam[i] * S[l] ** ((1.0 - N) / N)
    else:
        raise InvalidArgument(f"unknown family {family!r}")

    data = data.astype(complex)
    if basis == "energy":
        data = _rotate(data, sys.eigenvectors)
    return TIMPOTensor(data, diagonal=True)


def contract_cyclic(t: TIMPOTensor, N: int, cap: int = DENSE_CAP) -> DenseOperator:
    """Dense N-site operator from the cyclic trace of ``t``."""
    d = t.d
    _check_dense(d, N, cap)
    if t.diagonal:
        rho = np.zeros((d**N, d**N), dtype=complex)
        for a in range(t.M):
            slab = t.data[:, :, a]
            if not np.any(slab):
                continue
            rho += reduce(np.kron, [slab] * N)
        return DenseOperator(N, d, rho)
    need = d ** (2 * N) * t.M**2
    if need > GENERAL_CAP:
        raise ResourceError(f"general contraction needs {need} amplitudes, above {GENERAL_CAP}", need, GENERAL_CAP)
    cur = t.data
    for _ in range(N - 1):
        cur = np.einsum("IJab,ijbc->IiJjac", cur, t.data)
        n = cur.shape[0] * cur.shape[1]
        cur = cur.reshape(n, n, t.M, t.M)
    rho = np.trace(cur, axis1=2, axis2=3)
    return DenseOperator(N, d, rho)


def reduced_single_site(op: DenseOperator, site: int) -> np.ndarray:
    """Partial trace onto ``site`` (1-based, ``1 <= site <= N``)."""
    N, d = op.n_sites, op.d
    if not 1 <= site <= N:
        raise InvalidArgument(f"site {site} outside [1, {N}]")
    k = site - 1
    t = op.matrix.reshape((d,) * (2 * N))
    t = np.moveaxis(t, (k, N + k), (0, 1))
    rest = d ** (N - 1)
    t = t.reshape(d, d, rest, rest)
    return np.trace(t, axis1=2, axis2=3)


def translate(op: DenseOperator, shift: int = 1) -> np.ndarray:
    """``T rho T^dagger`` for the cyclic site shift by ``shift``."""
    N, d = op.n_sites, op.d
    t = op.matrix.reshape((d,) * (2 * N))
    perm = [(a - shift) % N for a in range(N)]
    axes = perm + [N + q for q in perm]
    return t.transpose(axes).reshape(op.matrix.shape)


def permute_sites(op: DenseOperator, order) -> np.ndarray:
    """Operator with site ``order[a]`` moved to position ``a``."""
    N, d = op.n_sites, op.d
    order = list(order)
    t = op.matrix.reshape((d,) * (2 * N))
    return t.transpose(order + [N + q for q in order]).reshape(op.matrix.shape)


@dataclass(frozen=True)
class ValidationReport:
    trace_residual: float
    hermiticity_residual: float
    min_eigenvalue: float
    translation_residual: float
    numerical_rank: int
    rank_tol: float = RANK_TOL

    def ok(self, tol: float = 1e-10) -> bool:
        return (
            self.trace_residual < tol
            and self.hermiticity_residual < tol
            and self.min_eigenvalue > -tol
            and self.translation_residual < tol
        )


def validate_state(op: DenseOperator, rank_tol: float = RANK_TOL) -> ValidationReport:
    m = op.matrix
    tr = abs(complex(np.trace(m)) - 1.0)
    herm = float(np.max(np.abs(m - m.conj().T)))
    w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    ti = float(np.max(np.abs(m - translate(op)))) if op.n_sites > 1 else 0.0
    return ValidationReport(tr, herm, float(w.min()), ti, int(np.count_nonzero(w > rank_tol)), rank_tol)


def unitarity_residual(u: np.ndarray) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def change_local_basis(t: TIMPOTensor, u) -> TIMPOTensor:
    """Tensor whose contraction is ``U^{xN} rho U^{dagger xN}``.

    Each auxiliary matrix transforms as ``B[p, q] = sum_ij U[p, i] A[i, j] conj(U[q, j])``;
    the bond dimension is untouched.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (t.d, t.d):
        raise InvalidArgument(f"unitary shape {u.shape} does not match d={t.d}")
    res = unitarity_residual(u)
    if res > UNITARY_TOL:
        raise InvalidArgument(f"matrix is not unitary (residual {res:.3e})")
    if t.diagonal:
        return TIMPOTensor(_rotate(t.data, u), diagonal=True)
    return TIMPOTensor(np.einsum("pi,ijab,qj->pqab", u, t.data, u.conj(), optimize=True), diagonal=False)


def symmetrize_mpo(site_tensors) -> TIMPOTensor:
    """Translationally invariant tensor averaging the cyclic relabelings of a site-dependent MPO.

    ``site_tensors[k]`` holds the ``(d, d, Mbar, Mbar)`` matrices of site ``k``
    (a :class:`TIMPOTensor` or a raw array). The output has bond dimension
    ``Mbar * N``: a shift register over the block index carries site ``k`` to
    block ``(k, k+1)``, and each site gets the weight ``N**(-1/N)``.
    """
    arrs = [s.a if isinstance(s, TIMPOTensor) else np.asarray(s, dtype=complex) for s in site_tensors]
    if not arrs:
        raise InvalidArgument("no site tensors given")
    shape = arrs[0].shape
    if len(shape) != 4 or shape[0] != shape[1] or shape[2] != shape[3]:
        raise InvalidArgument(f"site tensor has shape {shape}, expected (d,d,M,M)")
    if any(a.shape != shape for a in arrs):
        raise InvalidArgument("site tensors must share d and bond dimension")
    N = len(arrs)
    d, mb = shape[0], shape[2]
    out = np.zeros((d, d, mb * N, mb * N), dtype=complex)
    w = N ** (-1.0 / N)
    for k, a in enumerate(arrs):
        nxt = (k + 1) % N
        out[:, :, k * mb : (k + 1) * mb, nxt * mb : (nxt + 1) * mb] = w * a
    return TIMPOTensor(out, diagonal=False)


def product_operator(rho, N: int, cap: int = DENSE_CAP) -> DenseOperator:
    rho = np.asarray(rho, dtype=complex)
    _check_dense(rho.shape[0], N, cap)
    return DenseOperator(N, rho.shape[0], reduce(np.kron, [rho] * N))


def _repeated_vector(v: np.ndarray, N: int) -> np.ndarray:
    return reduce(np.kron, [v] * N)


def ghz_operator(sys: SingleSiteSystem, N: int, cap: int = DENSE_CAP) -> DenseOperator:
    """Projector on ``sum_i sqrt(lam_i) |v_i ... v_i>`` in the energy basis."""
    _check_dense(sys.d, N, cap)
    psi = sum(math.sqrt(l) * _repeated_vector(sys.eigenvectors[:, i], N) for i, l in enumerate(sys.lam))
    return DenseOperator(N, sys.d, np.outer(psi, psi.conj()))


def classically_correlated_operator(sys: SingleSiteSystem, N: int, cap: int = DENSE_CAP) -> DenseOperator:
    """``sum_i lam_i |v_i..v_i><v_i..v_i|`` in the energy basis."""
    _check_dense(sys.d, N, cap)
    m = np.zeros((sys.d**N,) * 2, dtype=complex)
    for i, l in enumerate(sys.lam):
        v = _repeated_vector(sys.eigenvectors[:, i], N)
        m += l * np.outer(v, v.conj())
    return DenseOperator(N, sys.d, m)


def save_operator(path, op: DenseOperator):
    """Write the dense matrix as a ``.npy`` file (shape header, row-major complex128)."""
    np.save(Path(path), np.ascontiguousarray(op.matrix, dtype=np.complex128), allow_pickle=False)


def load_operator(path, d: int) -> DenseOperator:
    m = np.load(Path(path), allow_pickle=False)
    N = round(math.log(m.shape[0]) / math.log(d))
    return DenseOperator(N, d, m)


def save_tensor(path, t: TIMPOTensor):
    """Write the full ``(d, d, M, M)`` array as ``.npy``."""
    np.save(Path(path), np.ascontiguousarray(t.a, dtype=np.complex128), allow_pickle=False)


def load_tensor(path) -> TIMPOTensor:
    return TIMPOTensor(np.load(Path(path), allow_pickle=False), diagonal=False)
