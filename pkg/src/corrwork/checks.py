"""Desk-scale verification suites used by ``corrwork verify``.

Each suite returns a list of :class:`Check` records (name, residual,
tolerance, pass flag). Nothing here raises on a failed check; failures are
report content.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import instances
from .ergotropy import ergotropy_dense, family_ergotropy_per_site
from .mpo import (
    DENSE_CAP,
    build_family_mpo,
    change_local_basis,
    classically_correlated_operator,
    contract_cyclic,
    ghz_operator,
    product_operator,
    reduced_single_site,
    validate_state,
)
from .spectra import ENUM_CAP, STRATEGIES, family_spectrum, make_partition
from .thermo import beta_from_entropy, gibbs_point
from .typicality import energy_shell, typical_set

FAMILIES = ("GHZ", "A", "B", "C")


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tol: float
    passed: bool

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name}  residual={self.residual:.3e}  tol={self.tol:.1e}"


def _le(name, residual, tol) -> Check:
    return Check(name, float(residual), tol, bool(residual <= tol))


def well_conditioned_seeds(count: int, dims=range(2, 7), N: int = 3, start: int = 0):
    """Seeds whose random instance keeps ``lam_min**N`` above the numerical-rank tolerance."""
    out, seed = [], start
    dims = list(dims)
    while len(out) < count:
        d = dims[seed % len(dims)]
        mode = "rotated" if seed % 2 else "diagonal"
        sys = instances.random_system(seed, d, mode)
        if sys.lam[-1] ** N > 1e-8:
            out.append((seed, d, mode))
        seed += 1
    return out


def oracle_systems(n_random: int = 4, seed: int = 0):
    systems = [(name, make()) for name, make in instances.FIXTURES.items()]
    for s, d, mode in well_conditioned_seeds(n_random, start=seed):
        systems.append((f"seed{s}-d{d}-{mode}", instances.random_system(s, d, mode)))
    return systems


def oracle_suite(seed: int = 0, n_random: int = 4, dense_cap: int = DENSE_CAP, enum_cap: int = ENUM_CAP, tol=1e-10):
    checks = []
    for label, sys in oracle_systems(n_random, seed):
        r = sys.rank
        for N in (2, 3):
            if sys.d**N > dense_cap:
                continue
            for strategy in STRATEGIES:
                for L in range(1, r + 1):
                    if strategy == "uniform" and r % L:
                        continue
                    p = make_partition(sys, L, strategy)
                    for fam in FAMILIES:
                        tag = f"{label} N={N} {strategy} L={L} {fam}"
                        op = contract_cyclic(build_family_mpo(sys, p, fam, N), N, dense_cap)
                        rep = validate_state(op)
                        red = max(np.max(np.abs(reduced_single_site(op, k) - sys.rho)) for k in range(1, N + 1))
                        spec = family_spectrum(p, fam, N, enum_cap)
                        ev = op.eigenvalues()
                        ana = np.zeros_like(ev)
                        sv = spec.sorted_values()
                        ana[: sv.size] = sv
                        checks += [
                            _le(f"{tag} trace", rep.trace_residual, tol),
                            _le(f"{tag} hermiticity", rep.hermiticity_residual, tol),
                            _le(f"{tag} psd", max(-rep.min_eigenvalue, 0.0), tol),
                            _le(f"{tag} translation", rep.translation_residual, tol),
                            _le(f"{tag} marginal", red, tol),
                            _le(f"{tag} spectrum", np.max(np.abs(ev - ana)), tol),
                            Check(f"{tag} rank {rep.numerical_rank} vs {spec.rank}",
                                  abs(rep.numerical_rank - spec.rank), 0, rep.numerical_rank == spec.rank),
                        ]
                    if strategy == "almost_uniform" and L in (1, r):
                        checks += _extremal_checks(label, sys, N, tol, dense_cap)
            # ergotropy: spectrum path vs dense path
            p = make_partition(sys, max(1, r // 2))
            for fam in ("A", "B", "C"):
                op = contract_cyclic(build_family_mpo(sys, p, fam, N), N, dense_cap)
                dense = ergotropy_dense(op, sys.h)[1]
                exact = family_ergotropy_per_site(sys, p, fam, N, enum_cap)
                checks.append(_le(f"{label} N={N} {fam} ergotropy dense vs spectrum", abs(dense - exact), tol))
    return checks


def _extremal_checks(label, sys, N, tol, cap):
    r = sys.rank
    one, full = make_partition(sys, 1), make_partition(sys, r)
    dense = lambda p, fam: contract_cyclic(build_family_mpo(sys, p, fam, N), N, cap).matrix  # noqa: E731
    ghz = ghz_operator(sys, N, cap).matrix
    cc = classically_correlated_operator(sys, N, cap).matrix
    prod = product_operator(sys.rho, N, cap).matrix
    pairs = {
        "A(L=1)=GHZ": (dense(one, "A"), ghz),
        "A(L=r)=cc": (dense(full, "A"), cc),
        "B(L=1)=product": (dense(one, "B"), prod),
        "B(L=r)=GHZ": (dense(full, "B"), ghz),
        "C(L=1)=product": (dense(one, "C"), prod),
        "C(L=r)=cc": (dense(full, "C"), cc),
    }
    return [_le(f"{label} N={N} {k}", np.max(np.abs(a - b)), tol) for k, (a, b) in pairs.items()]


def basis_suite(seed: int = 0, tol=1e-10):
    rng = np.random.Generator(np.random.PCG64(seed))
    checks = []
    for label, sys in oracle_systems(2, seed):
        u = instances.random_unitary(rng, sys.d)
        for fam in FAMILIES:
            p = make_partition(sys, max(1, sys.rank // 2))
            t = build_family_mpo(sys, p, fam, 2)
            lhs = contract_cyclic(change_local_basis(t, u), 2).matrix
            uu = np.kron(u, u)
            rhs = uu @ contract_cyclic(t, 2).matrix @ uu.conj().T
            checks.append(_le(f"{label} {fam} basis change", np.max(np.abs(lhs - rhs)), tol))
    return checks


def thermo_suite(seed: int = 0):
    rng = np.random.Generator(np.random.PCG64(seed))
    checks = []
    delta = 1e-5
    for label, make in instances.FIXTURES.items():
        h = make().h
        worst_fd = worst_c = 0.0
        for beta in np.linspace(0.1, 10.0, 60):
            gp, gm = gibbs_point(h, beta + delta), gibbs_point(h, beta - delta)
            slope = (gp.energy - gm.energy) / (gp.entropy - gm.entropy)
            worst_fd = max(worst_fd, abs(slope * beta - 1.0))
            c_fd = -(gp.energy - gm.energy) / (2 * delta)
            c = gibbs_point(h, beta).heat_capacity
            worst_c = max(worst_c, abs(c_fd - c) / c)
        checks.append(_le(f"{label} dE/dS = 1/beta", worst_fd, 1e-4))
        checks.append(_le(f"{label} C = -dE/dbeta", worst_c, 1e-6))
        worst_cvx = 0.0
        for _ in range(100):
            b1, b2 = sorted(rng.uniform(0.0, 10.0, size=2))
            g1, g2 = gibbs_point(h, b1), gibbs_point(h, b2)
            # ln Z(b1) > ln Z(b2) - (b1 - b2) E(b2) for b1 < b2
            worst_cvx = max(worst_cvx, (g2.logZ - (b1 - b2) * g2.energy) - g1.logZ)
        checks.append(_le(f"{label} lnZ convexity", max(worst_cvx, 0.0), 0.0))
        worst_rt = 0.0
        for beta in rng.uniform(0.05, 8.0, size=100):
            back = beta_from_entropy(h, gibbs_point(h, beta).entropy)
            worst_rt = max(worst_rt, abs(back - beta))
        checks.append(_le(f"{label} entropy inversion round trip", worst_rt, 1e-9))
        neg = min(gibbs_point(h, b).heat_capacity for b in np.linspace(0, 50, 200))
        checks.append(_le(f"{label} heat capacity >= 0", max(-neg, 0.0), 0.0))
    return checks


def random_distribution(rng: np.random.Generator, size: int) -> np.ndarray:
    w = rng.random(size) + 1e-3
    return w / w.sum()


def chernoff_sweep(seed: int = 0, count: int = 100, etas=(0.05, 0.1, 0.3), max_N: int = 14):
    """Typical-set claims over random distributions; returns (violations, reports)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    bad, reports = [], []
    for i in range(count):
        a = int(rng.integers(2, 5))
        p = random_distribution(rng, a)
        N = int(rng.integers(1, max_N + 1))
        for eta in etas:
            rep = typical_set(p, N, eta)
            reports.append(rep)
            if not all(rep.holds.values()):
                bad.append((i, p, N, eta, rep))
    return bad, reports


def typicality_suite(seed: int = 0):
    bad, reports = chernoff_sweep(seed)
    checks = [Check(f"Chernoff sweep ({len(reports)} sets)", len(bad), 0, not bad)]
    for levels, s0, xi, N in (([0, 1], math.log(2), 0.5, 12), ([0, 1, 2], 0.8, 0.3, 8), ([0, 0.5, 2], 0.6, 0.2, 9)):
        brute = energy_shell(levels, s0, xi, N).cardinality
        other = energy_shell(levels, s0, xi, N, cap=len(levels) ** N - 1).cardinality
        checks.append(Check(f"shell count levels={levels} N={N} brute vs exact", abs(brute - other), 0, brute == other))
    return checks


SUITES = {
    "oracle": lambda seed, dense_cap, enum_cap: oracle_suite(seed, dense_cap=dense_cap, enum_cap=enum_cap)
    + basis_suite(seed),
    "thermo": lambda seed, dense_cap, enum_cap: thermo_suite(seed),
    "typicality": lambda seed, dense_cap, enum_cap: typicality_suite(seed),
}


def run_suite(name: str, seed: int = 0, dense_cap: int = DENSE_CAP, enum_cap: int = ENUM_CAP):
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        out += SUITES[n](seed, dense_cap, enum_cap)
    return out
