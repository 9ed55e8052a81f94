"""Single-site states, eigenvalue partitions and exact family spectra.

A :class:`Partition` splits the positive eigenvalues of the single-site state
(sorted descending) into ``L`` disjoint blocks. From it three translationally
invariant N-site families are built:

* ``A`` -- mixture of block-wise GHZ vectors (rank ``L``)
* ``B`` -- block-wise purified state (rank ``#max ** N``)
* ``C`` -- classically correlated state (rank ``sum_l #K_l ** N``)

This module only does the eigenvalue bookkeeping; the operators themselves live
in :mod:`corrwork.mpo`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError, InvalidArgument, InvalidState, PartitionStrategyError, ResourceError
from .thermo import HamiltonianSpectrum, as_spectrum, shannon_entropy

RANK_TOL = 1e-12
STATE_TOL = 1e-12
ENUM_CAP = 10**6

FAMILIES = ("GHZ", "A", "B", "C")
STRATEGIES = ("uniform", "almost_uniform", "balanced")


@dataclass(frozen=True, eq=False)
class SingleSiteSystem:
    """Single-site Hamiltonian plus density matrix in the energy eigenbasis.

    ``eigenvalues`` holds all ``d`` eigenvalues of ``rho`` in descending order
    (tiny negative round-off clipped to 0) with ``eigenvectors[:, i]`` the
    matching eigenvector. ``lam`` is the positive part, of length ``rank``.
    """

    h: HamiltonianSpectrum
    rho: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rank: int

    @property
    def d(self) -> int:
        return self.h.d

    @property
    def lam(self) -> np.ndarray:
        return self.eigenvalues[: self.rank]

    @cached_property
    def mean_energy(self) -> float:
        return float(np.real(np.diag(self.rho)) @ self.h.levels)

    @cached_property
    def entropy(self) -> float:
        return shannon_entropy(self.lam)

    @cached_property
    def alpha(self) -> float:
        """Log ratio of the largest to the smallest positive eigenvalue."""
        return float(math.log(self.lam[0] / self.lam[-1]))

    @classmethod
    def diagonal(cls, levels, probs) -> "SingleSiteSystem":
        return decompose_state(levels, np.diag(np.asarray(probs, dtype=complex)))


def _check_density(rho: np.ndarray, tol: float = STATE_TOL):
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidArgument(f"rho must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidArgument("rho has non-finite entries")
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > tol:
        raise InvalidState("hermiticity", herm)
    tr = abs(complex(np.trace(rho)) - 1.0)
    if tr > tol:
        raise InvalidState("trace", tr)


def decompose_state(h, rho) -> SingleSiteSystem:
    """Validate ``rho`` and diagonalise it (descending, ties by original index)."""
    h = as_spectrum(h)
    rho = np.array(rho, dtype=complex)
    if rho.shape != (h.d, h.d):
        raise InvalidArgument(f"rho shape {rho.shape} does not match dimension {h.d}")
    _check_density(rho)
    rho = 0.5 * (rho + rho.conj().T)
    off = rho - np.diag(np.diag(rho))
    if not np.any(off):
        w = np.real(np.diag(rho)).copy()
        v = np.eye(h.d, dtype=complex)
    else:
        w, v = np.linalg.eigh(rho)
    if w.min() < -STATE_TOL:
        raise InvalidState("positivity", float(-w.min()))
    order = np.argsort(-w, kind="stable")
    w = np.clip(w[order], 0.0, None)
    v = v[:, order]
    rank = int(np.count_nonzero(w > RANK_TOL))
    w[rank:] = 0.0
    w.setflags(write=False)
    return SingleSiteSystem(h, rho, w, v, rank)


@dataclass(frozen=True, eq=False)
class Partition:
    """Disjoint blocks of indices into the positive descending spectrum ``lam``.

    Within each block indices are kept ascending, so the ``k``-th element of a
    block is its ``k``-th largest eigenvalue.
    """

    lam: np.ndarray
    blocks: tuple
    strategy: str = "custom"

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        r = lam.size
        if not blocks or any(len(b) == 0 for b in blocks):
            raise InvalidArgument("every block must be non-empty")
        flat = [i for b in blocks for i in b]
        if sorted(flat) != list(range(r)):
            raise InvalidArgument("blocks must be disjoint and cover every positive eigenvalue")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "blocks", blocks)

    @property
    def L(self) -> int:
        return len(self.blocks)

    @property
    def r(self) -> int:
        return int(self.lam.size)

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.array([len(b) for b in self.blocks])

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([self.lam[list(b)].sum() for b in self.blocks])

    def block_values(self, ell: int) -> np.ndarray:
        return self.lam[list(self.blocks[ell])]

    @cached_property
    def block_entropies(self) -> np.ndarray:
        return np.array([shannon_entropy(self.block_values(l) / self.weights[l]) for l in range(self.L)])

    @cached_property
    def block_alphas(self) -> np.ndarray:
        return np.array([math.log(v.max() / v.min()) for v in map(self.block_values, range(self.L))])

    @property
    def n_max(self) -> int:
        return int(self.sizes.max())

    def power(self, p: int) -> int:
        """Sum of p-th powers of the block cardinalities."""
        return sum(int(s) ** p for s in self.sizes)

    @property
    def almost_uniform(self) -> bool:
        return self.n_max == -(-self.r // self.L)

    @cached_property
    def block_of(self) -> np.ndarray:
        """``block_of[i]`` is the block holding eigenvalue ``i``."""
        out = np.empty(self.r, dtype=int)
        for l, b in enumerate(self.blocks):
            out[list(b)] = l
        return out

    @cached_property
    def position_in_block(self) -> np.ndarray:
        out = np.empty(self.r, dtype=int)
        for b in self.blocks:
            out[list(b)] = np.arange(len(b))
        return out

    def padded(self) -> np.ndarray:
        """``L x #max`` table of block values, zero-padded on the right."""
        out = np.zeros((self.L, self.n_max))
        for l in range(self.L):
            v = self.block_values(l)
            out[l, : v.size] = v
        return out


def make_partition(sys: SingleSiteSystem, L: int, strategy: str = "almost_uniform") -> Partition:
    """Split the positive spectrum of ``sys`` into ``L`` blocks.

    ``uniform`` and ``almost_uniform`` cut the descending spectrum into
    contiguous slices, larger slices first. ``balanced`` is the greedy
    longest-processing-time assignment: each eigenvalue, largest first, goes to
    the currently lightest block (lowest index on ties), which drives every
    block weight towards ``1/L``.
    """
    r = sys.rank
    L = int(L)
    if not 1 <= L <= r:
        raise DomainError(f"number of blocks L={L} outside [1, r={r}]")
    if strategy not in STRATEGIES:
        raise PartitionStrategyError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if strategy == "uniform" and r % L:
        raise PartitionStrategyError(f"uniform partition needs L | r (r={r}, L={L}); use 'almost_uniform'")
    lam = sys.lam
    if strategy in ("uniform", "almost_uniform"):
        q, extra = divmod(r, L)
        blocks, start = [], 0
        for l in range(L):
            size = q + (1 if l < extra else 0)
            blocks.append(range(start, start + size))
            start += size
    else:
        blocks = [[] for _ in range(L)]
        load = np.zeros(L)
        for i in range(r):
            l = int(np.argmin(load))
            blocks[l].append(i)
            load[l] += lam[i]
        if any(not b for b in blocks):
            raise AssertionError("LPT left an empty block")
    return Partition(lam, tuple(tuple(b) for b in blocks), strategy)


@dataclass(frozen=True, eq=False)
class FamilySpectrum:
    """Exact eigenvalues of an N-site family state.

    ``labels`` row ``n`` identifies ``eigenvalues[n]``: the block index for A,
    the tuple ``k`` (0-based, length N) for B, and ``(l, k_1..k_N)`` for C.
    """

    family: str
    N: int
    eigenvalues: np.ndarray
    labels: np.ndarray
    rank: int
    blr_upper_bound: int
    meta: dict = field(default_factory=dict)

    def sorted_values(self) -> np.ndarray:
        return np.sort(self.eigenvalues)[::-1]


def _require_enum(count: int, cap: int, what: str):
    if count > cap:
        raise ResourceError(f"{what} needs {count} eigenvalues, above the enumeration cap {cap}", count, cap)


def _tuples(n: int, N: int) -> np.ndarray:
    """All N-tuples over range(n) in lexicographic order, shape (n**N, N)."""
    grids = np.indices((n,) * N).reshape(N, -1).T
    return grids


def _outer_power(v: np.ndarray, N: int) -> np.ndarray:
    out = v.copy()
    for _ in range(N - 1):
        out = np.multiply.outer(out, v).reshape(-1)
    return out


def spectrum_A(p: Partition, N: int) -> FamilySpectrum:
    if N < 2:
        raise DomainError("N must be >= 2")
    w = p.weights
    order = np.argsort(-w, kind="stable")
    return FamilySpectrum("A", N, w[order], order.reshape(-1, 1), p.L, p.power(2))


def spectrum_B(p: Partition, N: int, cap: int = ENUM_CAP) -> FamilySpectrum:
    if N < 2:
        raise DomainError("N must be >= 2")
    n = p.n_max
    count = n**N
    _require_enum(count, cap, "family B")
    pad = p.padded()
    vals = np.zeros(count)
    for l in range(p.L):
        vals += _outer_power(pad[l], N) / p.weights[l] ** (N - 1)
    return FamilySpectrum("B", N, vals, _tuples(n, N), count, p.L**2)


def spectrum_C(p: Partition, N: int, cap: int = ENUM_CAP) -> FamilySpectrum:
    if N < 2:
        raise DomainError("N must be >= 2")
    count = p.power(N)
    _require_enum(count, cap, "family C")
    vals, labels = [], []
    for l in range(p.L):
        v = p.block_values(l)
        vals.append(_outer_power(v, N) * p.weights[l] ** (1 - N))
        k = _tuples(v.size, N)
        labels.append(np.column_stack([np.full(len(k), l), k]))
    return FamilySpectrum("C", N, np.concatenate(vals), np.concatenate(labels), count, p.L)


def spectrum_ghz(sys: SingleSiteSystem, N: int) -> FamilySpectrum:
    return FamilySpectrum("GHZ", N, np.array([1.0]), np.zeros((1, 1), int), 1, sys.rank**2)


def spectrum_product(sys: SingleSiteSystem, N: int, cap: int = ENUM_CAP) -> FamilySpectrum:
    count = sys.rank**N
    _require_enum(count, cap, "product state")
    return FamilySpectrum("Product", N, _outer_power(sys.lam, N), _tuples(sys.rank, N), count, 1)


def family_spectrum(p: Partition, family: str, N: int, cap: int = ENUM_CAP) -> FamilySpectrum:
    fam = family.upper()
    if fam == "A":
        return spectrum_A(p, N)
    if fam == "B":
        return spectrum_B(p, N, cap)
    if fam == "C":
        return spectrum_C(p, N, cap)
    if fam == "GHZ":
        return FamilySpectrum("GHZ", N, np.array([1.0]), np.zeros((1, 1), int), 1, p.r**2)
    raise InvalidArgument(f"unknown family {family!r}")


def family_shape(p: Partition, N: int) -> dict:
    """Rank and BLR upper bound of each family: ``{family: (rank, blr_bound)}``."""
    return {
        "A": (p.L, p.power(2)),
        "B": (p.n_max**N, p.L**2),
        "C": (p.power(N), p.L),
    }
