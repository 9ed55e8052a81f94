"""Lower bounds on per-site ergotropy of correlated TI states with bounded bond dimension.

All bounds have the shape

    E(rho; H) - thermal_energy(s) - correction

where ``s`` is an effective entropy set by the bond dimension ``m``, the rank
``r`` and the site count ``N``, and ``correction`` collects the typicality
terms ``2 sqrt(c C eta) + eps_d exp(-2 N eta^2 / alpha^2)`` with ``c = 2/zeta``
(``2.01`` at the default ``zeta``).

Passing ``N=math.inf`` selects the explicit limit mode: corrections vanish and
the ``1/N`` parts of the effective entropies are dropped.

Raw values may be negative; every result keeps the raw number and a copy
clamped at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .ergotropy import delta_gap
from .errors import DomainError, PreconditionError
from .spectra import SingleSiteSystem
from .thermo import as_spectrum, c_max, thermal_at_entropy, thermal_energy, total_ergotropy

ZETA = 2 / 2.01
ZETA_FRACTION = Fraction(200, 201)


def ceil_div_sqrt(r: int, m: int) -> int:
    """Exact ``ceil(r / sqrt(m))`` for positive integers."""
    c = -(-r * r // m)
    q = math.isqrt(c)
    return q if q * q == c else q + 1


def s_B(r: int, m: int, N=math.inf) -> float:
    tail = 0.0 if math.isinf(N) else 0.5 * math.log(m) / N
    return math.log(ceil_div_sqrt(r, m)) + tail


def s_C(r: int, m: int, N=math.inf) -> float:
    tail = 0.0 if math.isinf(N) else math.log(m) / N
    return math.log(-(-r // m)) + tail


@lru_cache(maxsize=256)
def _c_max_cached(levels: tuple, r: int) -> float:
    return c_max(levels, r)


def heat_capacity_max(sys: SingleSiteSystem) -> float:
    """``c_max(h, r)``, or 0 for a pure state where no concentration is needed."""
    if sys.rank < 2:
        return 0.0
    return _c_max_cached(tuple(sys.h.levels.tolist()), sys.rank)


@dataclass(frozen=True)
class BoundConstants:
    zeta: float
    s0: float
    frakC_s0: float
    frakC_max: float
    alpha_rho: float
    xi_star: float
    eta_star: float
    K_star: float
    K_star_prop: float

    @property
    def coefficient(self) -> float:
        return 2.0 / self.zeta

    def N_star(self, eta: float) -> float:
        """Minimal site count for the finite-N bounds at this ``eta``."""
        if self.K_star_prop == math.inf:
            return math.inf
        return math.ceil(self.K_star_prop / eta)

    def N_star_shell(self, xi: float) -> float:
        return self.K_star / (xi * xi)


class ShellConstants(NamedTuple):
    frakE: float
    frakC: float
    xi_star: float
    eta_star: float
    K_star: float
    K_star_prop: float


def shell_constants(h, s0: float, zeta: float = ZETA) -> ShellConstants:
    """Constants that depend only on the Hamiltonian and the entropy ``s0``.

    ``xi_star`` is taken as ``min(1, eps_d - thermal_energy(s0))``; the true
    threshold of the shell-counting argument has no closed form, so this is a
    conservative stand-in.
    """
    h = as_spectrum(h)
    if not 0 < zeta < 1:
        raise DomainError(f"zeta must lie in (0, 1), got {zeta}")
    coef = 2.0 / zeta
    frakE, frakC, _ = thermal_at_entropy(h, s0)
    xi_star = min(1.0, h.eps_max - frakE)
    if frakC > 0:
        eta_star = min(xi_star**2 / (coef * frakC), 1.0)
        K_star = 0.5 * max(h.eps_max**2 * math.log(math.e / (math.e - 1.0)), 4.0 * frakC / (1.0 - zeta))
        K_prop = K_star / (coef * frakC)
    else:
        eta_star, K_star, K_prop = 0.0, math.inf, math.inf
    return ShellConstants(frakE, frakC, xi_star, eta_star, K_star, K_prop)


def bound_constants(sys: SingleSiteSystem, s0: float, zeta: float = ZETA) -> BoundConstants:
    r = sys.rank
    if r < 2 or not 0 < s0 <= math.log(r) + 1e-12:
        raise DomainError(f"s0={s0} outside (0, ln r] with r={r}")
    sc = shell_constants(sys.h, s0, zeta)
    return BoundConstants(
        zeta, s0, sc.frakC, heat_capacity_max(sys), sys.alpha, sc.xi_star, sc.eta_star, sc.K_star, sc.K_star_prop
    )


@dataclass(frozen=True)
class BoundResult:
    raw: float | None
    s: float | None = None
    correction: float = 0.0
    applicable: bool = False
    reason: str = ""
    conservative: bool = True

    @property
    def value(self) -> float | None:
        return None if self.raw is None else max(self.raw, 0.0)


def correction_term(C: float, eta: float, N, alpha: float, eps_d: float, zeta: float = ZETA) -> float:
    if math.isinf(N):
        return 0.0
    tail = eps_d * math.exp(-2.0 * N * eta * eta / (alpha * alpha)) if alpha > 0 else 0.0
    return 2.0 * math.sqrt(2.0 / zeta * C * eta) + tail


def _check_eta(eta, N):
    if math.isinf(N):
        return
    if eta is None or not 0 < eta < 1:
        raise DomainError(f"eta must lie in (0, 1), got {eta}")


def _check_N(N):
    if not (math.isinf(N) or (N == int(N) and N >= 2)):
        raise DomainError(f"N must be an integer >= 2 or inf, got {N}")


def _applicability(sys, s, eta, N, zeta) -> tuple[bool, str]:
    if math.isinf(N):
        return True, "limit mode"
    try:
        bc = bound_constants(sys, s, zeta)
    except DomainError as exc:
        return False, f"constants undefined: {exc}"
    if not eta < bc.eta_star:
        return False, f"eta={eta} >= eta_star={bc.eta_star:.6g}"
    need = bc.N_star(eta)
    if N < need:
        return False, f"N={N} < N_star={need}"
    return True, "conservative"


def _typicality_bound(sys, s, N, eta, zeta, C) -> BoundResult:
    h = sys.h
    if s > math.log(h.d) + 1e-12:
        return BoundResult(None, s, reason=f"effective entropy {s:.6g} exceeds ln d")
    corr = correction_term(C, eta, N, sys.alpha if sys.rank > 1 else 0.0, h.eps_max, zeta)
    raw = sys.mean_energy - thermal_energy(h, min(s, math.log(h.d))) - corr
    ok, why = _applicability(sys, s, eta, N, zeta)
    return BoundResult(raw, s, corr, ok, why)


def prop1_bound(sys: SingleSiteSystem, m: int, N=math.inf, eta: float | None = None, zeta: float = ZETA) -> BoundResult:
    """Bound for any bond dimension ``m`` in ``[1, r^2]`` (effective entropy ``s_B``)."""
    r = sys.rank
    if not 1 <= m <= r * r:
        raise DomainError(f"m={m} outside [1, r^2={r * r}]")
    _check_N(N)
    _check_eta(eta, N)
    return _typicality_bound(sys, s_B(r, m, N), N, eta, zeta, heat_capacity_max(sys))


def prop2_bound(sys: SingleSiteSystem, m: int, N=math.inf, eta: float | None = None, zeta: float = ZETA) -> BoundResult:
    """Low bond-dimension bound, ``1 <= m <= r`` (effective entropy ``s_C``)."""
    r = sys.rank
    if m > r:
        raise DomainError(f"m={m} > r={r}: use prop3_bound in this regime")
    if m < 1:
        raise DomainError(f"m={m} < 1")
    _check_N(N)
    _check_eta(eta, N)
    return _typicality_bound(sys, s_C(r, m, N), N, eta, zeta, heat_capacity_max(sys))


def prop3_bound(sys: SingleSiteSystem, m: int, N=math.inf) -> BoundResult:
    """High bond-dimension bound ``E - Delta/N`` for ``r <= m <= r^2``; valid at every N."""
    r = sys.rank
    if m < r:
        raise DomainError(f"m={m} < r={r}: use prop1_bound or prop2_bound")
    if m > r * r:
        raise DomainError(f"m={m} outside [r, r^2={r * r}]")
    _check_N(N)
    gap = 0.0 if math.isinf(N) else delta_gap(sys) / N
    return BoundResult(sys.mean_energy - gap, None, gap, True, "exact at every N", conservative=False)


def corollary1_bound(sys: SingleSiteSystem, N=math.inf, eta: float | None = None, zeta: float = ZETA) -> BoundResult:
    """Total ergotropy minus typicality corrections built from ``c_{S(rho)}``."""
    if sys.rank < 2:
        raise PreconditionError("pure state: entropy is zero and the spectral ratio is undefined")
    _check_N(N)
    _check_eta(eta, N)
    s = sys.entropy
    C = thermal_at_entropy(sys.h, s).frakC
    corr = correction_term(C, eta, N, sys.alpha, sys.h.eps_max, zeta)
    ok, why = _applicability(sys, s, eta, N, zeta)
    return BoundResult(total_ergotropy(sys) - corr, s, corr, ok, why)


def heuristic_value(sys: SingleSiteSystem, m: int) -> float:
    """Non-rigorous improved bound ``E - thermal_energy(max(S - ln m, 0))`` for ``m <= r``."""
    if not 1 <= m <= sys.rank:
        raise DomainError(f"heuristic needs 1 <= m <= r={sys.rank}")
    if m == 1:
        return total_ergotropy(sys)
    return sys.mean_energy - thermal_energy(sys.h, max(sys.entropy - math.log(m), 0.0))


COLUMNS = ("m", "s_B", "s_C", "prop1", "prop2", "prop3", "asym_B", "asym_C", "flat", "heuristic", "envelope", "E", "ratio")


@dataclass
class CurveRow:
    """One bond dimension ``m``. Bound columns hold clamped values or ``None``."""

    m: int
    s_B: float | None = None
    s_C: float | None = None
    prop1: float | None = None
    prop2: float | None = None
    prop3: float | None = None
    asym_B: float | None = None
    asym_C: float | None = None
    flat: float | None = None
    heuristic: float | None = None
    envelope: float | None = None
    E: float | None = None
    ratio: float | None = None
    raw: dict = field(default_factory=dict)

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, c) for c in COLUMNS)


@dataclass
class BoundCurve:
    rows: list
    N: float = math.inf
    eta: float | None = None
    zeta: float = ZETA
    notes: list = field(default_factory=list)

    def column(self, name: str) -> list:
        return [getattr(row, name) for row in self.rows]


def _clamp(x):
    return None if x is None else max(x, 0.0)


def bound_curve(
    sys: SingleSiteSystem, m_range=None, N=math.inf, eta: float | None = None, zeta: float = ZETA
) -> BoundCurve:
    """Every bound at each ``m``.

    In limit mode the envelope is the maximum of the clamped ``asym_B``,
    ``asym_C`` (``m <= r``) and ``flat`` (``m >= r``). At finite N it is the
    maximum of the clamped rigorous finite-N bounds that apply at that ``m``.
    The heuristic column is reported but never enters the envelope.
    """
    r = sys.rank
    if m_range is None:
        m_range = range(1, r * r + 1)
    ms = [int(m) for m in m_range]
    bad = [m for m in ms if not 1 <= m <= r * r]
    if bad:
        raise DomainError(f"m values {bad[:5]} outside [1, r^2={r * r}]")
    _check_N(N)
    _check_eta(eta, N)
    h = sys.h
    E = sys.mean_energy
    ln_d = math.log(h.d)

    @lru_cache(maxsize=None)
    def frakE(s: float) -> float:
        return thermal_energy(h, min(s, ln_d))

    C = heat_capacity_max(sys)
    corr = correction_term(C, eta, N, sys.alpha if r > 1 else 0.0, h.eps_max, zeta)
    gap = delta_gap(sys)
    notes = []
    rows = []
    for m in ms:
        row = CurveRow(m=m, E=E)
        sb = s_B(r, m, N)
        row.s_B = sb
        sb_inf = s_B(r, m)
        row.raw["asym_B"] = E - frakE(sb_inf)
        row.asym_B = _clamp(row.raw["asym_B"])
        if sb <= ln_d + 1e-12:
            row.raw["prop1"] = E - frakE(sb) - corr
            row.prop1 = _clamp(row.raw["prop1"])
        if m <= r:
            sc = s_C(r, m, N)
            row.s_C = sc
            row.raw["asym_C"] = E - frakE(s_C(r, m))
            row.asym_C = _clamp(row.raw["asym_C"])
            if sc <= ln_d + 1e-12:
                row.raw["prop2"] = E - frakE(sc) - corr
                row.prop2 = _clamp(row.raw["prop2"])
            hv = total_ergotropy(sys) if m == 1 else E - frakE(max(sys.entropy - math.log(m), 0.0))
            row.raw["heuristic"] = hv
            row.heuristic = _clamp(hv)
        if m >= r:
            row.flat = E
            row.raw["prop3"] = E - (0.0 if math.isinf(N) else gap / N)
            row.prop3 = _clamp(row.raw["prop3"])
        if math.isinf(N):
            cands = [row.asym_B, row.asym_C, row.flat]
        else:
            cands = [row.prop1, row.prop2, row.prop3]
        cands = [c for c in cands if c is not None]
        row.envelope = max(cands) if cands else None
        row.ratio = row.envelope / E if (row.envelope is not None and E > 0) else None
        rows.append(row)
    if any(r_.prop1 is None for r_ in rows):
        notes.append("prop1 empty where the effective entropy s_B exceeds ln d")
    if any(r_.prop2 is None and r_.m <= r for r_ in rows):
        notes.append("prop2 empty where the effective entropy s_C exceeds ln d")
    notes.append("prop2, asym_C, heuristic, s_C empty for m > r; prop3 and flat empty for m < r")
    if E == 0:
        notes.append("ratio empty: mean energy is zero")
    return BoundCurve(rows, N, eta, zeta, notes)


def asymptotic_envelope(sys: SingleSiteSystem, m_range=None) -> BoundCurve:
    return bound_curve(sys, m_range, math.inf)
