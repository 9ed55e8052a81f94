"""Command-line interface.

Subcommands::

    corrwork gen        --d 40 --mode diagonal            random instance file
    corrwork curves     INSTANCE --m all --N inf           bound curves as CSV
    corrwork verify     oracle|thermo|typicality|all       invariant suites
    corrwork ergotropy  INSTANCE --family A --L 2 --N 5    exact value and bounds
    corrwork gibbs      INSTANCE --beta 0,1.0986           Gibbs table
    corrwork typicality set|shell|family ...               typical-set reports

``INSTANCE`` is a JSON instance path or ``fixture:NAME`` (FIX-Q, FIX-QI,
FIX-4, FIX-3). Global flags go before the subcommand.

Curve CSV: header ``m,s_B,s_C,prop1,prop2,prop3,asym_B,asym_C,flat,heuristic,envelope,E,ratio``,
one row per ``m``, floats with 12 significant digits. Cells outside a
bound's regime are left empty and explained in trailing ``#`` comment lines.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

from . import bounds, checks, instances
from .ergotropy import (
    ergotropy_dense,
    family_ergotropy_per_site,
    product_ergotropy_per_site,
)
from .errors import CorrworkError, ResourceError
from .mpo import DENSE_CAP, build_family_mpo, contract_cyclic
from .spectra import ENUM_CAP, STRATEGIES, family_shape, make_partition
from .thermo import gibbs_point, thermal_at_entropy
from .typicality import energy_shell, family_T_set, typical_set


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return format(x, ".12g")


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.replace(" ", "").split(",") if t]


def parse_m_list(text: str, r: int) -> list[int]:
    """``all`` or a comma list of integers and ``a-b`` ranges."""
    if text.strip().lower() == "all":
        return list(range(1, r * r + 1))
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def parse_N(text: str):
    return math.inf if text.strip().lower() in ("inf", "infinity") else int(text)


def curve_to_csv(curve: bounds.BoundCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(bounds.COLUMNS)
    for row in curve.rows:
        w.writerow([_fmt(v) for v in row.as_tuple()])
    n = "inf" if math.isinf(curve.N) else str(int(curve.N))
    buf.write(f"# N={n} eta={_fmt(curve.eta)} zeta={_fmt(curve.zeta)}; bound columns clamped at 0\n")
    for note in curve.notes:
        buf.write(f"# {note}\n")
    return buf.getvalue()


def read_curve_csv(path) -> bounds.BoundCurve:
    """Parse a curve file written by :func:`curve_to_csv`."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    body = [ln for ln in lines if not ln.startswith("#")]
    notes = [ln[2:] for ln in lines if ln.startswith("# ")]
    reader = csv.DictReader(body)
    if tuple(reader.fieldnames or ()) != bounds.COLUMNS:
        raise ValueError(f"unexpected header {reader.fieldnames}")
    rows = []
    for rec in reader:
        vals = {k: (None if v == "" else float(v)) for k, v in rec.items()}
        vals["m"] = int(vals["m"])
        rows.append(bounds.CurveRow(**vals))
    N, eta, zeta = math.inf, None, bounds.ZETA
    if notes:
        meta = dict(kv.split("=", 1) for kv in notes[0].split(";")[0].split())
        N = parse_N(meta["N"])
        eta = float(meta["eta"]) if meta.get("eta") else None
        zeta = float(meta["zeta"])
    return bounds.BoundCurve(rows, N, eta, zeta, notes[1:])


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_gen(args) -> int:
    inst = instances.random_instance(args.seed, args.d, args.mode)
    _emit(instances.dumps_instance(inst), args.out)
    return 0


def _plot_curve(curve: bounds.BoundCurve, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ms = curve.column("m")
    E = curve.rows[0].E or 1.0
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, style in (("asym_B", "-"), ("asym_C", "-"), ("heuristic", ":"), ("envelope", "--")):
        ys = [None if v is None else v / E for v in curve.column(name)]
        pts = [(m, y) for m, y in zip(ms, ys) if y is not None]
        if pts:
            ax.plot(*zip(*pts), style, label=name)
    ax.set_xscale("log")
    ax.set_xlabel("bond dimension m")
    ax.set_ylabel("bound / E")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_curves(args) -> int:
    sys_ = instances.load_system(args.instance)
    N = parse_N(args.N)
    eta = None if math.isinf(N) else args.eta
    curve = bounds.bound_curve(sys_, parse_m_list(args.m, sys_.rank), N, eta, args.zeta)
    _emit(curve_to_csv(curve), args.out)
    if args.plot:
        _plot_curve(curve, args.plot)
    return 0


def cmd_verify(args) -> int:
    results = checks.run_suite(args.suite, args.seed, args.dense_cap, args.enum_cap)
    failed = [c for c in results if not c.passed]
    lines = [c.line() for c in results]
    lines.append(f"# {len(results) - len(failed)}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    return 1 if failed else 0


def cmd_ergotropy(args) -> int:
    sys_ = instances.load_system(args.instance)
    fam = args.family.upper()
    N = args.N
    rows = [("E", sys_.mean_energy)]
    if fam == "PRODUCT":
        exact = product_ergotropy_per_site(sys_, N, args.enum_cap)
        m = 1
    else:
        p = make_partition(sys_, args.L, args.strategy)
        shape = family_shape(p, N)
        m = {"GHZ": sys_.rank**2, "A": shape["A"][1], "B": shape["B"][1], "C": shape["C"][1]}[fam]
        try:
            if fam == "GHZ":
                exact = sys_.mean_energy
            else:
                exact = family_ergotropy_per_site(sys_, p, fam, N, args.enum_cap)
        except ResourceError as exc:
            print(f"exact: unavailable ({exc})", file=sys.stderr)
            exact = None
        if sys_.d**N <= args.dense_cap and fam != "GHZ":
            op = contract_cyclic(build_family_mpo(sys_, p, fam, N), N, args.dense_cap)
            rows.append(("dense", ergotropy_dense(op, sys_.h)[1]))
    rows.insert(1, ("exact", exact))
    rows.append(("m", m))
    r = sys_.rank
    if m <= r * r:
        rows.append(("prop1", bounds.prop1_bound(sys_, m, N, args.eta, args.zeta).value))
    if m <= r:
        rows.append(("prop2", bounds.prop2_bound(sys_, m, N, args.eta, args.zeta).value))
    if r <= m <= r * r:
        rows.append(("prop3", bounds.prop3_bound(sys_, m, N).value))
    text = "".join(f"{k}\t{_fmt(v)}\n" for k, v in rows)
    _emit(text, args.out)
    return 0


def cmd_gibbs(args) -> int:
    sys_ = instances.load_system(args.instance)
    h = sys_.h
    lines = ["beta\tE\tS\tC"]
    fmt = lambda x: "inf" if math.isinf(x) else f"{x:.{args.digits}f}"  # noqa: E731
    for beta in _float_list(args.beta or ""):
        g = gibbs_point(h, beta)
        lines.append("\t".join(fmt(v) for v in (g.beta, g.energy, g.entropy, g.heat_capacity)))
    for s in _float_list(args.s or ""):
        e, c, beta = thermal_at_entropy(h, s)
        lines.append("\t".join(fmt(v) for v in (beta, e, s, c)))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _report_text(rep, width_name: str = "eta") -> str:
    fields = ("N", "eta", "cardinality", "population", "cardinality_bound", "population_bound", "applicable", "reason", "method")
    lines = []
    for k in fields:
        v = getattr(rep, k)
        lines.append(f"{width_name if k == 'eta' else k}\t{_fmt(v) if isinstance(v, float) else v}")
    if rep.N_star is not None:
        lines.append(f"N_star\t{_fmt(rep.N_star)}")
    lines += [f"holds.{k}\t{v}" for k, v in rep.holds.items()]
    return "\n".join(lines) + "\n"


def cmd_typicality(args) -> int:
    if args.kind == "set":
        rep = typical_set(_float_list(args.probs), args.N, args.eta)
    elif args.kind == "shell":
        levels = _float_list(args.levels) if args.levels else instances.load_system(args.instance).h
        rep = energy_shell(levels, args.s0, args.xi, args.N, args.zeta)
    else:
        sys_ = instances.load_system(args.instance)
        p = make_partition(sys_, args.L, args.strategy)
        rep = family_T_set(sys_, p, args.family, args.N, args.eta, args.enum_cap)
    _emit(_report_text(rep, "xi" if args.kind == "shell" else "eta"), args.out)
    return 0 if all(rep.holds.values()) or args.kind == "shell" else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="corrwork", description="Ergotropy of correlated translationally invariant states")
    ap.add_argument("--seed", type=int, default=0, help="seed for generated instances and randomized checks")
    ap.add_argument("--dense-cap", type=int, default=DENSE_CAP, help="max rows of dense N-site operators")
    ap.add_argument("--enum-cap", type=int, default=ENUM_CAP, help="max enumerated family eigenvalues")
    ap.add_argument("--zeta", type=float, default=bounds.ZETA, help="shell constant zeta (default 2/2.01)")
    ap.add_argument("--out", default=None, help="output file (default stdout)")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a seeded random instance")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--mode", choices=instances.MODES, default="diagonal")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("curves", help="bound curves over m as CSV")
    c.add_argument("instance")
    c.add_argument("--m", default="all", help="'all' or list like 1,2,5-9")
    c.add_argument("--N", default="inf", help="site count or 'inf' for limit mode")
    c.add_argument("--eta", type=float, default=0.1)
    c.add_argument("--plot", default=None, help="optional image path (needs matplotlib)")
    c.set_defaults(func=cmd_curves)

    v = sub.add_parser("verify", help="run invariant suites")
    v.add_argument("suite", choices=("oracle", "thermo", "typicality", "all"))
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("ergotropy", help="exact per-site ergotropy of a family next to its bounds")
    e.add_argument("instance")
    e.add_argument("--family", required=True, choices=("GHZ", "A", "B", "C", "product"), type=lambda s: s if s == "product" else s.upper())
    e.add_argument("--L", type=int, default=1)
    e.add_argument("--N", type=int, required=True)
    e.add_argument("--strategy", choices=STRATEGIES, default="almost_uniform")
    e.add_argument("--eta", type=float, default=0.1)
    e.set_defaults(func=cmd_ergotropy)

    gb = sub.add_parser("gibbs", help="Gibbs table at given beta or entropy values")
    gb.add_argument("instance")
    gb.add_argument("--beta", default=None, help="comma list of inverse temperatures")
    gb.add_argument("--s", default=None, help="comma list of entropies")
    gb.add_argument("--digits", type=int, default=6)
    gb.set_defaults(func=cmd_gibbs)

    t = sub.add_parser("typicality", help="typical set, energy shell or family subset report")
    t.add_argument("kind", choices=("set", "shell", "family"))
    t.add_argument("--probs", default="0.75,0.25")
    t.add_argument("--instance", default="fixture:FIX-4")
    t.add_argument("--levels", default=None)
    t.add_argument("--N", type=int, required=True)
    t.add_argument("--eta", type=float, default=0.1)
    t.add_argument("--s0", type=float, default=math.log(2))
    t.add_argument("--xi", type=float, default=0.25)
    t.add_argument("--family", default="C", choices=("B", "C"))
    t.add_argument("--L", type=int, default=2)
    t.add_argument("--strategy", choices=STRATEGIES, default="almost_uniform")
    t.set_defaults(func=cmd_typicality)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "gen" and args.d < 2:
        ap.error("--d must be >= 2")
    try:
        return args.func(args)
    except CorrworkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
