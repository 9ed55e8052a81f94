"""Exact ergotropy: sorted-pairing passive energy and low-lying levels of ``H^(N)``.

The minimum of ``Tr[U rho U^dagger H]`` over unitaries pairs the eigenvalues
of ``rho`` in descending order with the energies in ascending order. For the
non-interacting N-site Hamiltonian only the lowest ``rank(rho)`` energies are
ever needed, and :func:`k_smallest_energy_levels` produces them without
touching the full ``d**N`` spectrum.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DomainError, InvalidArgument, InvalidState, ResourceError
from .mpo import DenseOperator
from .spectra import ENUM_CAP, Partition, SingleSiteSystem, family_spectrum, spectrum_product
from .thermo import HamiltonianSpectrum, as_spectrum

MERGE_TOL = 1e-12
SUM_TOL = 1e-10


@dataclass(frozen=True)
class EnergyLevelList:
    """Distinct energies in ascending order with integer multiplicities.

    ``entries`` carry full multiplicities; :meth:`take` truncates the last
    run so that exactly ``k`` levels are listed.
    """

    entries: tuple

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def energies(self) -> np.ndarray:
        return np.array([e for e, _ in self.entries])

    def take(self, k: int) -> list:
        out, left = [], int(k)
        for e, m in self.entries:
            if left <= 0:
                break
            out.append((e, min(m, left)))
            left -= m
        return out

    def expand(self, k: int) -> np.ndarray:
        """The ``k`` smallest levels written out one by one."""
        k = min(int(k), self.total)
        out = np.empty(k)
        pos = 0
        for e, m in self.take(k):
            out[pos : pos + m] = e
            pos += m
        return out

    @classmethod
    def from_values(cls, values) -> "EnergyLevelList":
        v = np.sort(np.asarray(values, dtype=float))
        entries = []
        for x in v:
            if entries and abs(x - entries[-1][0]) <= MERGE_TOL * max(1.0, abs(x)):
                entries[-1][1] += 1
            else:
                entries.append([float(x), 1])
        return cls(tuple((e, m) for e, m in entries))


def _as_levels(levels) -> EnergyLevelList:
    if isinstance(levels, EnergyLevelList):
        return levels
    if isinstance(levels, HamiltonianSpectrum):
        levels = levels.levels
    return EnergyLevelList.from_values(levels)


def passive_energy(state_spectrum, level_list) -> float:
    """``sum_j eps_j^up * lam_j^down``, consuming the level runs lazily."""
    lam = np.sort(np.asarray(state_spectrum, dtype=float).reshape(-1))[::-1]
    if abs(lam.sum() - 1.0) > SUM_TOL:
        raise InvalidArgument(f"state spectrum sums to {lam.sum()!r}, not 1")
    levels = _as_levels(level_list)
    need = int(np.count_nonzero(lam > 0))
    if levels.total < need:
        raise DomainError(f"{need} nonzero eigenvalues but only {levels.total} energy levels supplied")
    cum = np.concatenate([[0.0], np.cumsum(lam[:need])])
    energy, pos = 0.0, 0
    for e, m in levels.entries:
        if pos >= need:
            break
        end = pos + min(m, need - pos)
        energy += e * (cum[end] - cum[pos])
        pos = end
    return float(energy)


def site_energy_grid(h, N: int) -> np.ndarray:
    """Diagonal of ``H^(N)`` in the product energy basis, site 1 most significant."""
    lv = as_spectrum(h).levels
    return reduce(lambda acc, _: np.add.outer(acc, lv).reshape(-1), range(N - 1), lv.copy())


def _check_operator(op: DenseOperator, tol: float = 1e-9):
    m = op.matrix
    tr = abs(complex(np.trace(m)) - 1.0)
    if tr > tol:
        raise InvalidState("trace", tr)
    herm = float(np.max(np.abs(m - m.conj().T)))
    if herm > tol:
        raise InvalidState("hermiticity", herm)


def ergotropy_dense(op: DenseOperator, h) -> tuple[float, float]:
    """(total, per-site) ergotropy of a dense N-site state under ``H^(N)``."""
    h = as_spectrum(h)
    if h.d != op.d:
        raise InvalidArgument(f"operator local dimension {op.d} does not match spectrum dimension {h.d}")
    _check_operator(op)
    grid = site_energy_grid(h, op.n_sites)
    mean = float(np.real(np.diag(op.matrix)) @ grid)
    w = np.clip(op.eigenvalues(), 0.0, None)
    w = w / w.sum()
    passive = float(np.sort(w)[::-1] @ np.sort(grid))
    total = max(mean - passive, 0.0)
    return total, total / op.n_sites


def _multinomial(idx: tuple) -> int:
    out = math.factorial(len(idx))
    for c in Counter(idx).values():
        out //= math.factorial(c)
    return out


def k_smallest_energy_levels(h, N: int, k: int) -> EnergyLevelList:
    """The ``k`` lowest eigenvalues of ``sum_a H_a`` on ``N`` sites, with multiplicities.

    Best-first search over non-decreasing index tuples ``i_1 <= ... <= i_N``
    (one per multiset of occupied single-site levels). Each tuple contributes
    its multinomial multiplicity. The search stops once ``k`` levels are
    covered and the last energy run is complete, so every entry carries its
    full multiplicity.
    """
    h = as_spectrum(h)
    N, k = int(N), int(k)
    if N < 1:
        raise DomainError("N must be >= 1")
    if k < 1:
        raise DomainError("k must be >= 1")
    d = h.d
    if k > d**N:
        raise DomainError(f"k={k} exceeds the {d}**{N} levels of the N-site Hamiltonian")
    lv = h.levels
    start = (0,) * N
    heap = [(0.0, start)]
    seen = {start}
    entries: list[list] = []
    count = 0
    while heap:
        e, idx = heap[0]
        if count >= k and abs(e - entries[-1][0]) > MERGE_TOL * max(1.0, abs(e)):
            break
        heapq.heappop(heap)
        mult = _multinomial(idx)
        if entries and abs(e - entries[-1][0]) <= MERGE_TOL * max(1.0, abs(e)):
            entries[-1][1] += mult
        else:
            entries.append([e, mult])
        count += mult
        for p in range(N):
            nxt = idx[p] + 1
            if nxt >= d or (p + 1 < N and nxt > idx[p + 1]):
                continue
            child = idx[:p] + (nxt,) + idx[p + 1 :]
            if child not in seen:
                seen.add(child)
                heapq.heappush(heap, (e + lv[nxt] - lv[idx[p]], child))
    return EnergyLevelList(tuple((float(e), int(m)) for e, m in entries))


def delta_gap(sys: SingleSiteSystem) -> float:
    """Mean energy minus single-site ergotropy, i.e. the single-site passive energy."""
    return passive_energy(sys.lam, sys.h)


def single_site_ergotropy(sys: SingleSiteSystem) -> float:
    return max(sys.mean_energy - delta_gap(sys), 0.0)


def family_A_ergotropy_per_site(sys: SingleSiteSystem, p: Partition, N: int) -> float:
    if N < 2:
        raise DomainError("N must be >= 2")
    levels = k_smallest_energy_levels(sys.h, N, p.L)
    return max(sys.mean_energy - passive_energy(p.weights, levels) / N, 0.0)


def spectrum_ergotropy_per_site(sys: SingleSiteSystem, eigenvalues, N: int) -> float:
    """Per-site ergotropy of an N-site state with single-site marginal ``sys.rho``."""
    eig = np.asarray(eigenvalues, dtype=float)
    k = int(np.count_nonzero(eig > 0))
    levels = k_smallest_energy_levels(sys.h, N, k)
    return max(sys.mean_energy - passive_energy(eig, levels) / N, 0.0)


def family_ergotropy_per_site(
    sys: SingleSiteSystem, p: Partition, family: str, N: int, cap: int = ENUM_CAP
) -> float:
    """Exact per-site ergotropy of family A, B or C from its analytic spectrum."""
    fam = family.upper()
    if fam == "A":
        return family_A_ergotropy_per_site(sys, p, N)
    try:
        spec = family_spectrum(p, fam, N, cap)
    except ResourceError as exc:
        raise ResourceError(
            f"{exc}; exact ergotropy is out of reach here, evaluate the lower bounds instead", exc.required, exc.cap
        ) from exc
    return spectrum_ergotropy_per_site(sys, spec.eigenvalues, N)


def product_ergotropy_per_site(sys: SingleSiteSystem, N: int, cap: int = ENUM_CAP) -> float:
    """Per-site ergotropy of ``rho^{xN}``."""
    if N == 1:
        return single_site_ergotropy(sys)
    return spectrum_ergotropy_per_site(sys, spectrum_product(sys, N, cap).eigenvalues, N)
