"""Single-site Gibbs thermodynamics.

Gibbs populations of a spectrum ``levels`` at inverse temperature ``beta`` and
the inverse maps from entropy to thermal energy, heat capacity and inverse
temperature. Every bound in :mod:`corrwork.bounds` is phrased through
:func:`thermal_at_entropy`.

The ground level is pinned to zero, so ``exp(-beta * levels)`` never overflows
and ``log Z = log1p(sum_{j>1} exp(-beta * eps_j))`` is accurate at large beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvalidArgument

ENTROPY_TOL = 1e-12
CMAX_GRID = 10_000
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class HamiltonianSpectrum:
    """Sorted single-site energies with ``levels[0] == 0``."""

    levels: np.ndarray

    def __post_init__(self):
        lv = np.asarray(self.levels, dtype=float).reshape(-1)
        if lv.size < 2:
            raise InvalidArgument(f"need at least two levels, got {lv.size}")
        if not np.all(np.isfinite(lv)):
            raise InvalidArgument("energies must be finite")
        if np.any(np.diff(lv) < 0):
            raise InvalidArgument("energies must be sorted non-decreasing")
        if abs(lv[0]) > 1e-12:
            raise InvalidArgument(f"ground energy must be 0, got {lv[0]!r}")
        lv = lv.copy()
        lv[0] = 0.0
        lv.setflags(write=False)
        object.__setattr__(self, "levels", lv)

    @property
    def d(self) -> int:
        return int(self.levels.size)

    @property
    def eps_max(self) -> float:
        return float(self.levels[-1])

    @property
    def degenerate(self) -> bool:
        """True when every level equals the ground energy."""
        return bool(self.levels[-1] == 0.0)

    @property
    def ground_degeneracy(self) -> int:
        return int(np.count_nonzero(self.levels == 0.0))


@dataclass(frozen=True)
class GibbsPoint:
    beta: float
    logZ: float
    energy: float
    entropy: float
    heat_capacity: float
    populations: np.ndarray


class ThermalPoint(NamedTuple):
    frakE: float
    frakC: float
    beta: float


def as_spectrum(h) -> HamiltonianSpectrum:
    return h if isinstance(h, HamiltonianSpectrum) else HamiltonianSpectrum(np.asarray(h, float))


def shannon_entropy(p) -> float:
    """Entropy in nats of a probability vector; zero entries contribute 0."""
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def _gibbs_arrays(levels: np.ndarray, beta: np.ndarray):
    """Vectorised (logZ, E, S, C, populations) for an array of betas."""
    beta = np.asarray(beta, dtype=float)
    w = np.exp(-beta[..., None] * levels)
    log_z = np.log1p(w[..., 1:].sum(axis=-1))
    p = w / w.sum(axis=-1, keepdims=True)
    energy = p @ levels
    dev = levels - energy[..., None]
    heat = np.sum(p * dev * dev, axis=-1)
    entropy = beta * energy + log_z
    return log_z, energy, entropy, heat, p


def gibbs_point(h, beta: float) -> GibbsPoint:
    """Gibbs state of ``h`` at inverse temperature ``beta`` (finite, >= 0)."""
    h = as_spectrum(h)
    beta = float(beta)
    if not math.isfinite(beta):
        raise InvalidArgument(f"beta must be finite, got {beta!r}")
    if beta < 0:
        raise DomainError(f"negative temperatures are not supported (beta={beta})")
    log_z, e, s, c, p = _gibbs_arrays(h.levels, np.array(beta))
    return GibbsPoint(beta, float(log_z), float(e), float(s), float(c), p)


def _entropy_floor(h: HamiltonianSpectrum) -> float:
    """Entropy of the beta -> infinity limit (log of ground degeneracy)."""
    return math.log(h.ground_degeneracy)


def _check_entropy(h: HamiltonianSpectrum, s: float) -> float:
    s = float(s)
    if not math.isfinite(s):
        raise InvalidArgument(f"entropy must be finite, got {s!r}")
    if h.degenerate:
        raise DomainError("all levels are equal: entropy cannot be inverted to a temperature")
    ln_d = math.log(h.d)
    if s < -ENTROPY_TOL or s > ln_d + ENTROPY_TOL:
        raise DomainError(f"entropy {s} outside [0, ln d = {ln_d}]")
    return min(max(s, 0.0), ln_d)


def _upper_bracket(levels, s: float) -> float:
    hi = 1.0
    while True:
        s_hi = float(_gibbs_arrays(levels, np.array(hi))[2])
        if s_hi < s or s_hi < 1e-14:
            return hi
        hi *= 2.0


def beta_from_entropy(h, s: float) -> float:
    """Inverse temperature whose Gibbs state has entropy ``s``.

    Returns ``math.inf`` as the explicit zero-temperature marker when ``s`` is
    at (or below) the entropy of the ground manifold, and exactly ``0.0`` at
    ``s = ln d``.
    """
    h = as_spectrum(h)
    s = _check_entropy(h, s)
    if s >= math.log(h.d):
        return 0.0
    if s <= _entropy_floor(h):
        return math.inf
    lv = h.levels
    lo, hi = 0.0, _upper_bracket(lv, s)
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if float(_gibbs_arrays(lv, np.array(mid))[2]) > s:
            lo = mid
        else:
            hi = mid
    # pick the endpoint with the smaller residual
    s_lo = float(_gibbs_arrays(lv, np.array(lo))[2])
    s_hi = float(_gibbs_arrays(lv, np.array(hi))[2])
    beta = lo if abs(s_lo - s) <= abs(s_hi - s) else hi
    resid = min(abs(s_lo - s), abs(s_hi - s))
    if resid > ENTROPY_TOL:
        raise ArithmeticError(f"entropy inversion stalled at residual {resid:.3e}")
    return beta


def betas_from_entropies(h, s) -> np.ndarray:
    """Vectorised :func:`beta_from_entropy` (bisection on all targets at once)."""
    h = as_spectrum(h)
    s = np.asarray(s, dtype=float)
    for v in (s.min(initial=0.0), s.max(initial=0.0)):
        _check_entropy(h, v)
    s = np.clip(s, 0.0, math.log(h.d))
    lv = h.levels
    out = np.empty_like(s)
    at_top = s >= math.log(h.d)
    at_floor = s <= _entropy_floor(h)
    inner = ~(at_top | at_floor)
    out[at_top] = 0.0
    out[at_floor & ~at_top] = math.inf
    if np.any(inner):
        tgt = s[inner]
        hi = np.full_like(tgt, _upper_bracket(lv, float(tgt.min())))
        lo = np.zeros_like(tgt)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            above = _gibbs_arrays(lv, mid)[2] > tgt
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
        out[inner] = 0.5 * (lo + hi)
    return out


def thermal_at_entropy(h, s: float) -> ThermalPoint:
    """(thermal energy, heat capacity, beta) of the Gibbs state with entropy ``s``."""
    h = as_spectrum(h)
    beta = beta_from_entropy(h, s)
    if math.isinf(beta):
        return ThermalPoint(0.0, 0.0, math.inf)
    g = gibbs_point(h, beta)
    return ThermalPoint(g.energy, g.heat_capacity, beta)


def thermal_energy(h, s: float) -> float:
    return thermal_at_entropy(h, s).frakE


def _heat_capacity_at(h: HamiltonianSpectrum, s: float) -> float:
    return thermal_at_entropy(h, s).frakC


def c_max(h, r: int, grid: int = CMAX_GRID) -> float:
    """Largest Gibbs heat capacity over entropies in ``[0, ln r]``.

    Dense scan in entropy followed by golden-section refinement around the best
    grid point. The closed interval is used; the supremum over the open one is
    the same number by continuity.
    """
    h = as_spectrum(h)
    r = int(r)
    if r < 2:
        raise DomainError(f"c_max needs rank r >= 2, got {r}")
    if r > h.d:
        raise DomainError(f"rank {r} exceeds dimension {h.d}")
    s_grid = np.linspace(0.0, math.log(r), grid)
    betas = betas_from_entropies(h, s_grid)
    caps = np.zeros_like(s_grid)
    finite = np.isfinite(betas)
    caps[finite] = _gibbs_arrays(h.levels, betas[finite])[3]
    i = int(np.argmax(caps))
    best = float(caps[i])
    a = s_grid[max(i - 1, 0)]
    b = s_grid[min(i + 1, grid - 1)]
    # golden-section on the bracketing cell
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = _heat_capacity_at(h, x1), _heat_capacity_at(h, x2)
    for _ in range(80):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = _heat_capacity_at(h, x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = _heat_capacity_at(h, x1)
        if b - a < 1e-13:
            break
    return max(best, f1, f2)


def total_ergotropy(sys) -> float:
    """Per-copy work of infinitely many uncorrelated copies."""
    value = sys.mean_energy - thermal_energy(sys.h, sys.entropy)
    return max(value, 0.0)
