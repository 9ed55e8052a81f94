"""Exhaustive checks of the concentration arguments behind the finite-N bounds.

* :func:`typical_set` -- Chernoff-type typical sets of an i.i.d. distribution
* :func:`energy_shell` -- count of N-site levels with per-site energy in a window
* :func:`family_T_set` -- high-weight eigenvalue subsets of families B and C
* :func:`shell_swap_work` -- work of the permutation moving such a subset into the shell

Everything is counted exactly. Above the brute-force cap the code switches to
exact alternatives (type classes, or a polynomial DP for commensurate
energies) and raises :class:`~corrwork.errors.ResourceError` only when those
are out of reach as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .bounds import ZETA, s_C, shell_constants
from .ergotropy import site_energy_grid
from .errors import DomainError, InvalidArgument, PreconditionError, ResourceError
from .spectra import ENUM_CAP, Partition, SingleSiteSystem, family_spectrum
from .thermo import as_spectrum, shannon_entropy

BRUTE_CAP = 10**7
ENERGY_SLACK = 1e-12
LOG_SLACK = 1e-12
MAX_DENOMINATOR = 10**6


@dataclass
class TypicalSetReport:
    N: int
    eta: float
    threshold: float | None
    cardinality: int
    population: float | None
    cardinality_bound: float
    population_bound: float | None
    holds: dict
    applicable: bool = True
    reason: str = ""
    method: str = "brute-force"
    members: np.ndarray | None = field(default=None, repr=False)
    s0: float | None = None
    N_star: float | None = None
    window: tuple | None = None
    spectrum: object = field(default=None, repr=False)


def _compositions(n: int, parts: int):
    """All tuples of ``parts`` non-negative integers summing to ``n``."""
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def _multinomial(counts) -> int:
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out


def _log_products(logp: np.ndarray, N: int) -> np.ndarray:
    out = logp.copy()
    for _ in range(N - 1):
        out = np.add.outer(out, logp).reshape(-1)
    return out


def _alpha(p: np.ndarray) -> float:
    return float(math.log(p.max() / p.min()))


def typical_set(probs, N: int, eta: float, cap: int = BRUTE_CAP) -> TypicalSetReport:
    """N-tuples whose probability is at least ``exp(-N (H + eta))``.

    Checks ``#set <= exp(N (H + eta))`` and
    ``weight >= 1 - exp(-2 N eta^2 / alpha^2)`` with ``alpha = ln(p_max / p_min)``.
    """
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size == 0 or np.any(p <= 0):
        raise InvalidArgument("probabilities must be a non-empty positive vector")
    if abs(p.sum() - 1.0) > 1e-10:
        raise InvalidArgument(f"probabilities sum to {p.sum()!r}")
    if N < 1 or eta <= 0:
        raise DomainError("need N >= 1 and eta > 0")
    s0 = shannon_entropy(p)
    log_thr = -N * (s0 + eta)
    logp = np.log(p)
    a = p.size
    if a**N <= cap:
        lp = _log_products(logp, N)
        keep = lp >= log_thr - LOG_SLACK
        card = int(np.count_nonzero(keep))
        pop = float(np.exp(lp[keep]).sum())
        method = "brute-force"
    else:
        n_types = math.comb(N + a - 1, a - 1)
        if n_types > cap:
            raise ResourceError(f"typical set needs {n_types} type classes, above the cap {cap}", n_types, cap)
        card, pop = 0, 0.0
        for counts in _compositions(N, a):
            lp = float(np.dot(counts, logp))
            if lp >= log_thr - LOG_SLACK:
                mult = _multinomial(counts)
                card += mult
                pop += mult * math.exp(lp)
        method = "type-classes"
    alpha = _alpha(p)
    pop_bound = 1.0 - math.exp(-2.0 * N * eta * eta / (alpha * alpha)) if alpha > 0 else 1.0
    card_bound = math.exp(N * (s0 + eta))
    holds = {
        "cardinality": card <= card_bound * (1 + 1e-12),
        "population": pop >= pop_bound - 1e-12,
    }
    return TypicalSetReport(N, eta, math.exp(log_thr), card, min(pop, 1.0), card_bound, pop_bound, holds, method=method)


def _commensurate(levels: np.ndarray):
    """Integer multiples ``k_j`` and quantum ``q`` with ``levels = q * k``, or ``None``."""
    fr = []
    for x in levels:
        f = Fraction(float(x)).limit_denominator(MAX_DENOMINATOR)
        if abs(float(f) - x) > 1e-12 * max(1.0, abs(x)):
            return None
        fr.append(f)
    den = math.lcm(*(f.denominator for f in fr))
    ints = [int(f * den) for f in fr]
    g = math.gcd(*ints) or 1
    return [k // g for k in ints], Fraction(g, den)


def _count_window(h, N: int, lo: float, hi: float, cap: int):
    """Number of N-site levels with energy in ``[lo, hi]`` (slack included)."""
    d = h.d
    lo, hi = lo - ENERGY_SLACK, hi + ENERGY_SLACK
    if d**N <= cap:
        e = site_energy_grid(h, N)
        return int(np.count_nonzero((e >= lo) & (e <= hi))), "brute-force"
    comm = _commensurate(h.levels)
    if comm is not None:
        ks, q = comm
        top = max(ks) * N
        if top + 1 <= cap:
            # polynomial power (sum_j x^k_j)^N with exact integer coefficients
            base = [0] * (max(ks) + 1)
            for k in ks:
                base[k] += 1
            poly = [1]
            for _ in range(N):
                nxt = [0] * (len(poly) + len(base) - 1)
                for i, c in enumerate(poly):
                    if c:
                        for j, b in enumerate(base):
                            if b:
                                nxt[i + j] += c * b
                poly = nxt
            qf = float(q)
            total = sum(c for E, c in enumerate(poly) if c and lo <= E * qf <= hi)
            return total, "polynomial-dp"
    n_types = math.comb(N + d - 1, d - 1)
    if n_types > cap:
        raise ResourceError(f"energy shell needs {n_types} occupation classes, above the cap {cap}", n_types, cap)
    total = 0
    for counts in _compositions(N, d):
        E = float(np.dot(counts, h.levels))
        if lo <= E <= hi:
            total += _multinomial(counts)
    return total, "type-classes"


def energy_shell(h, s0: float, xi: float, N: int, zeta: float = ZETA, cap: int = BRUTE_CAP) -> TypicalSetReport:
    """Count N-site levels with ``N E_s0 <= energy <= N (E_s0 + 2 xi)`` (inclusive).

    Compares the count with the lower bound ``exp(N (s0 + zeta xi^2 / (2 c_s0)))``
    and reports whether ``(xi, N)`` lies in the range where that bound is
    claimed (``xi <= xi_star`` and ``N >= K_star / xi^2``).
    """
    h = as_spectrum(h)
    if not 0 < s0 <= math.log(h.d) + 1e-12:
        raise DomainError(f"s0={s0} outside (0, ln d]")
    if xi <= 0:
        raise DomainError("xi must be positive")
    sc = shell_constants(h, s0, zeta)
    lo, hi = N * sc.frakE, N * (sc.frakE + 2 * xi)
    count, method = _count_window(h, N, lo, hi, cap)
    bound = math.exp(N * (s0 + zeta * xi * xi / (2 * sc.frakC))) if sc.frakC > 0 else math.inf
    n_star = sc.K_star / (xi * xi)
    reasons = []
    if xi > sc.xi_star:
        reasons.append(f"xi={xi} > xi_star={sc.xi_star:.6g}")
    if N < n_star:
        reasons.append(f"N={N} < N_star={n_star:.6g}")
    rep = TypicalSetReport(
        N, xi, lo, count, None, bound, None, {"cardinality_lower": count >= bound},
        applicable=not reasons, reason="; ".join(reasons) or "conservative", method=method,
        s0=s0, N_star=n_star, window=(lo, hi),
    )
    return rep


def _block_members(p: Partition, ell: int, N: int, eta: float):
    """Position tuples (as flat indices over the block's N-tuples) of the block typical set."""
    v = p.block_values(ell) / p.weights[ell]
    s_l = shannon_entropy(v)
    lp = _log_products(np.log(v), N)
    return np.nonzero(lp >= -N * (s_l + eta) - LOG_SLACK)[0], v.size


def family_T_set(
    sys: SingleSiteSystem, p: Partition, family: str, N: int, eta: float, cap: int = ENUM_CAP
) -> TypicalSetReport:
    """High-weight eigenvalue subset of family B or C and its two hypotheses.

    Per block, ``X_l`` holds the in-block position tuples whose normalised
    probability reaches ``exp(-N (s_l + eta))``. Family B takes the union of
    the ``X_l`` (eigenvalues are labelled by the position tuple only); family C
    takes their disjoint union. ``members`` lists the selected indices into
    ``family_spectrum(p, family, N).eigenvalues``.
    """
    fam = family.upper()
    if fam not in ("B", "C"):
        raise InvalidArgument("family_T_set is defined for families B and C")
    if eta <= 0:
        raise DomainError("eta must be positive")
    spec = family_spectrum(p, fam, N, cap)
    n_max = p.n_max
    if fam == "B":
        chosen = set()
        for l in range(p.L):
            idx, n = _block_members(p, l, N, eta)
            tuples = np.array(np.unravel_index(idx, (n,) * N))
            chosen.update(np.ravel_multi_index(tuples, (n_max,) * N).tolist())
        members = np.array(sorted(chosen), dtype=int)
    else:
        parts, off = [], 0
        for l in range(p.L):
            idx, n = _block_members(p, l, N, eta)
            parts.append(idx + off)
            off += n**N
        members = np.concatenate(parts)
    card = int(members.size)
    pop = float(spec.eigenvalues[members].sum())
    s0 = s_C(p.r, p.L, N)
    card_bound = math.exp(N * (s0 + eta))
    alpha = sys.alpha if sys.rank > 1 else 0.0
    pop_bound = 1.0 - math.exp(-2.0 * N * eta * eta / alpha**2) if alpha > 0 else 1.0
    holds = {"cardinality": card <= card_bound * (1 + 1e-12), "population": pop >= pop_bound - 1e-12}
    reason = "" if p.almost_uniform else "partition is not almost uniform: block entropies may exceed ln ceil(r/L)"
    return TypicalSetReport(
        N, eta, None, card, pop, card_bound, pop_bound, holds, True, reason,
        method="block-enumeration", members=members, s0=s0, spectrum=spec,
    )


class ShellSwap(NamedTuple):
    work: float
    chain_ok: bool
    energy_after: float
    chain_bound: float
    shell_count: int
    t_count: int


def shell_swap_work(
    state_spectrum, t_set, h, N: int, s0: float, xi: float, site_energy: float, cap: int = BRUTE_CAP
) -> ShellSwap:
    """Work of a permutation that moves the ``t_set`` eigenvalues into the energy shell.

    ``t_set`` indexes ``state_spectrum``. The selected eigenvalues fill the
    shell from its lowest level upward (largest eigenvalue first); all other
    eigenvalues are paired, in descending order, with the remaining levels in
    ascending order. ``site_energy`` is the single-site mean energy, so the
    initial N-site energy is ``N * site_energy``.
    """
    h = as_spectrum(h)
    lam = np.asarray(state_spectrum, dtype=float)
    t = np.unique(np.asarray(t_set, dtype=int))
    if t.size and (t.min() < 0 or t.max() >= lam.size):
        raise InvalidArgument("t_set indices out of range")
    if h.d**N > cap:
        raise ResourceError(f"shell swap needs all {h.d**N} levels, above the cap {cap}", h.d**N, cap)
    frakE = shell_constants(h, s0).frakE
    lo, hi = N * frakE, N * (frakE + 2 * xi)
    energies = np.sort(site_energy_grid(h, N))
    in_shell = (energies >= lo - ENERGY_SLACK) & (energies <= hi + ENERGY_SLACK)
    shell = energies[in_shell]
    if shell.size < t.size:
        raise PreconditionError(f"shell holds {shell.size} levels but the selected set has {t.size} eigenvalues")
    if lam.size > energies.size:
        raise InvalidArgument("more eigenvalues than N-site levels")
    sel = np.sort(lam[t])[::-1]
    rest_mask = np.ones(lam.size, bool)
    rest_mask[t] = False
    rest = np.sort(lam[rest_mask])[::-1]
    used = np.flatnonzero(in_shell)[: t.size]
    free = np.ones(energies.size, bool)
    free[used] = False
    e_after = float(sel @ shell[: t.size]) + float(rest @ energies[free][: rest.size])
    pop_t = float(sel.sum())
    chain = N * (frakE + 2 * xi) * pop_t + N * h.eps_max * (1.0 - pop_t)
    work = N * site_energy - e_after
    return ShellSwap(work, e_after <= chain + 1e-12, e_after, chain, int(shell.size), int(t.size))
