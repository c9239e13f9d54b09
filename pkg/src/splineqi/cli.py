"""Command line front end.

Subcommands: ``build`` (functional tables), ``nearbest`` (per-index l1
optima), ``norms`` (bounds and empirical estimates), ``biv`` (bivariate
weight tables), ``quad`` (quadrature rules), ``repro`` (regenerate the
reference value tables and check them).  All numeric output is CSV with
17 significant digits; identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import bivariate, normest, quadrature
from .nearbest import NearBestProblem, solve_l1
from .partitions import parse_knot_spec, random_mesh
from .quasiinterp import (
    gs1,
    gs2,
    nb_dqi_nonuniform,
    s2,
    schoenberg,
    uniform_nb_dqi,
    uniform_nb_iqi,
)

_FAMILIES = ("s1", "s2", "g1", "g2", "qp2", "udqi", "uiqi")


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _emit(rows: list[dict], out_path: str | None, json_path: str | None) -> None:
    if not rows:
        return
    header = list(rows[0].keys())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row[k]) for k in header])
    text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if json_path:
        with open(json_path, "w") as fh:
            json.dump(rows, fh, indent=1, sort_keys=True)
            fh.write("\n")


def _build_family(args):
    name = args.family
    if name in ("udqi", "uiqi"):
        maker = uniform_nb_dqi if name == "udqi" else uniform_nb_iqi
        return maker(args.order, args.n, args.r, nspans=args.spans)
    ks = parse_knot_spec(args.knots, args.m, seed=args.seed)
    if name == "s1":
        return schoenberg(ks)
    if name == "s2":
        return s2(ks)
    if name == "g1":
        return gs1(ks)
    if name == "g2":
        return gs2(ks)
    if name == "qp2":
        return nb_dqi_nonuniform(ks, args.p)
    raise ValueError(f"unknown family {name}")


def cmd_build(args):
    q = _build_family(args)
    rows = []
    for lam in q.functionals:
        rec = lam.record()
        rows.append(
            {
                "family": q.family,
                "index": rec["anchor"],
                "kind": rec["kind"],
                "offsets": ";".join(str(o) for o in rec["offsets"]),
                "weights": ";".join(_fmt(float(w)) for w in rec["weights"]),
                "nu_i": lam.nu,
            }
        )
    _emit(rows, args.out, args.json)
    return 0


def cmd_nearbest(args):
    ks = parse_knot_spec(args.knots, args.m, seed=args.seed)
    glo, ghi = ks.greville_range() if ks.cardinal else (0, ks.nbasis - 1)
    rows = []
    worst = 0.0
    for i in ks.basis_indices:
        if i - args.p < glo or i + args.p > ghi:
            continue
        sol = solve_l1(NearBestProblem.from_discrete(ks, i, args.p, args.q))
        worst = max(worst, sol.nu)
        rows.append(
            {
                "index": i,
                "weights": ";".join(_fmt(float(w)) for w in sol.weights),
                "nu_i": sol.nu,
                "max_nu": "",
            }
        )
    if rows:
        rows[-1]["max_nu"] = worst
    _emit(rows, args.out, args.json)
    return 0


def cmd_norms(args):
    q = _build_family(args)
    bound = normest.nu_bound(q)
    if q.is_discrete:
        emp = normest.empirical_norm_discrete(q, samples_per_span=args.samples)
    else:
        emp = normest.empirical_norm_integral(q, samples_per_span=args.samples)
    rows = [
        {
            "family": q.family,
            "params": ";".join(str(p) for p in q.params),
            "nu_bound": bound,
            "empirical": emp,
            "samples_per_span": args.samples,
            "estimate_kind": "lower-estimate",
        }
    ]
    _emit(rows, args.out, args.json)
    return 0


def _load_mesh(args) -> bivariate.TensorMesh:
    if args.mesh_file:
        with open(args.mesh_file) as fh:
            return bivariate.TensorMesh.from_text(fh.read())
    if args.mesh == "uniform":
        return bivariate.TensorMesh.uniform(args.nx, args.ny)
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    return random_mesh(args.nx, args.ny, rng, ratio=args.ratio)


def cmd_biv(args):
    rows = []
    if args.table in ("nb3", "nb4"):
        kind = "three-direction" if args.table == "nb3" else "four-direction"
        for s in args.scales:
            center, vertex, nu = bivariate.nb_box_coeffs(kind, s)
            rows.append(
                {"table": args.table, "s": s, "center": center, "vertex": vertex, "nu": nu}
            )
    elif args.table in ("t2", "g2"):
        mesh = _load_mesh(args)
        fam = bivariate.crisscross_t2(mesh) if args.table == "t2" else bivariate.crisscross_g2(mesh)
        for i, j in mesh.interior_cells():
            rows.append(
                {
                    "table": args.table,
                    "i": i,
                    "j": j,
                    "a": fam.a[i],
                    "abar": fam.abar[i],
                    "c": fam.c[j],
                    "cbar": fam.cbar[j],
                    "center": fam.center(i, j),
                    "nu_ij": fam.nu(i, j),
                }
            )
    elif args.table == "residuals":
        mesh = _load_mesh(args)
        for tag in ("S1", "T1", "G1"):
            res = bivariate.monomial_residuals(tag, mesh)
            for i in range(mesh.ncx):
                for j in range(mesh.ncy):
                    rows.append(
                        {
                            "table": tag,
                            "i": i,
                            "j": j,
                            "res_e20": res["e20"][i, j],
                            "res_e02": res["e02"][i, j],
                        }
                    )
    else:
        raise ValueError(f"unknown bivariate table {args.table}")
    _emit(rows, args.out, args.json)
    return 0


def cmd_quad(args):
    q = _build_family(args)
    rule = quadrature.qi_to_quadrature(q)
    verified = quadrature.exactness_degree(rule, max_degree=q.ks.m)
    rows = [
        {"node": float(n), "weight": float(w)} for n, w in zip(rule.nodes, rule.weights)
    ]
    rows.append({"node": "exactness_degree", "weight": verified})
    _emit(rows, args.out, args.json)
    return 0


# --------------------------------------------------------------------- repro

_SECTION_ALIASES = {
    "2.1": "uniform-dqi",
    "2.2": "uniform-iqi",
    "3.2": "box-dqi",
    "3.3": "box-dqi",
    "4.1": "s2-uniform",
    "5.2": "crisscross-uniform",
}


_REPRO_GROUPS = ("uniform-dqi", "uniform-iqi", "box-dqi", "s2-uniform", "crisscross-uniform")


def _repro_rows(section: str | None, samples: int) -> list[dict]:
    groups = set()
    if section:
        key = _SECTION_ALIASES.get(section, section)
        if key not in _REPRO_GROUPS:
            raise ValueError(
                f"unknown table key {section!r}; use one of "
                f"{', '.join(_REPRO_GROUPS)} or an alias {', '.join(sorted(_SECTION_ALIASES))}"
            )
        groups.add(key)
    else:
        groups.update(_REPRO_GROUPS)
    checks = []  # (claim, reference, computed, tol, kind)

    if "uniform-dqi" in groups:
        for n, ref_nu, ref_emp in ((1, 1.666, 1.222), (2, 1.166, 1.139), (3, 1.074, 1.074)):
            q = uniform_nb_dqi(4, n)
            checks.append((f"uniform-dqi/nu/n={n}", ref_nu, normest.nu_bound(q), 1e-3, "eq"))
            emp = normest.empirical_norm_discrete(q, samples_per_span=samples)
            checks.append((f"uniform-dqi/norm/n={n}", ref_emp, emp, 0.011, "eq"))
    if "uniform-iqi" in groups:
        for n, ref_nu, ref_emp in ((1, 2.333, 1.5278), (2, 1.333, 1.2778), (3, 1.1482, 1.1481)):
            q = uniform_nb_iqi(4, n)
            checks.append((f"uniform-iqi/nu/n={n}", ref_nu, normest.nu_bound(q), 1e-3, "eq"))
            emp = normest.empirical_norm_integral(q, samples_per_span=samples)
            checks.append((f"uniform-iqi/norm/n={n}", ref_emp, emp, 0.011, "eq"))
    if "box-dqi" in groups:
        for s, ref in ((1, 2.0), (2, 1.25), (3, 1.111)):
            for kind, tag in (("three-direction", "nb3"), ("four-direction", "nb4")):
                _, _, nu = bivariate.nb_box_coeffs(kind, s)
                checks.append((f"box-dqi/{tag}/nu/s={s}", ref, nu, 1e-3, "eq"))
        for s, ref in ((1, 1.5), (2, 1.25), (3, 1.111)):
            emp = bivariate.zp_dqi_empirical_norm(s)
            checks.append((f"box-dqi/nb4/norm/s={s}", ref, emp, 0.011, "eq"))
    if "s2-uniform" in groups:
        from .splinecore import KnotSequence

        q = s2(KnotSequence.clamped(2, np.linspace(0.0, 1.0, 51)))
        emp = normest.empirical_norm_discrete(q, samples_per_span=samples)
        checks.append(("s2-uniform/norm", 305.0 / 207.0, emp, 0.0055, "eq"))
        checks.append(("s2-uniform/nu-within-2.5", 2.5, normest.nu_bound(q), 1e-12, "le"))
    if "crisscross-uniform" in groups:
        mesh = bivariate.TensorMesh.uniform(6, 6)
        t2 = bivariate.crisscross_t2(mesh)
        g2 = bivariate.crisscross_g2(mesh)
        i = j = 3
        checks.append(("crisscross/t2/a", -3.0 / 20.0, float(t2.a[i]), 1e-12, "eq"))
        checks.append(("crisscross/t2/center", 8.0 / 5.0, t2.center(i, j), 1e-12, "eq"))
        checks.append(("crisscross/t2/nu", 11.0 / 5.0, t2.nu(i, j), 1e-12, "eq"))
        checks.append(("crisscross/g2/a", -1.0 / 6.0, float(g2.a[i]), 1e-12, "eq"))
        checks.append(("crisscross/g2/center", 5.0 / 3.0, g2.center(i, j), 1e-12, "eq"))
        checks.append(("crisscross/g2/nu", 7.0 / 3.0, g2.nu(i, j), 1e-12, "eq"))

    rows = []
    for claim, ref, got, tol, kind in checks:
        if kind == "le":
            diff = max(0.0, got - ref)
        else:
            diff = abs(got - ref)
        rows.append(
            {
                "claim": claim,
                "reference": ref,
                "computed": got,
                "abs_diff": diff,
                "status": "pass" if diff <= tol else "fail",
            }
        )
    return rows


def cmd_repro(args):
    rows = _repro_rows(args.section, args.samples)
    _emit(rows, args.out, args.json)
    if any(r["status"] == "fail" for r in rows):
        print("repro: at least one claim failed", file=sys.stderr)
        return 1
    return 0


# --------------------------------------------------------------------- main

def _apply_config(parser: argparse.ArgumentParser, path: str):
    defaults = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, val = (part.strip() for part in line.split("=", 1))
            defaults[key.replace("-", "_")] = val
    parser.set_defaults(**defaults)


def _add_family_args(sp):
    sp.add_argument("--family", required=True, choices=_FAMILIES)
    sp.add_argument("--m", type=int, default=2, help="spline degree for knot-based families")
    sp.add_argument("--knots", default="uniform:16")
    sp.add_argument("--p", type=int, default=2, help="stencil offset for qp2")
    sp.add_argument("--order", type=int, default=4, help="even order for udqi/uiqi")
    sp.add_argument("--n", type=int, default=2, help="stencil half-width for udqi/uiqi")
    sp.add_argument("--r", type=int, default=None, help="reproduction degree for udqi/uiqi")
    sp.add_argument("--spans", type=int, default=50, help="emulation spans for udqi/uiqi")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="splineqi", description=__doc__)
    parser.add_argument("--config", help="key=value file preloading option defaults")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", help="write CSV here instead of stdout")
    parser.add_argument("--json", help="also write a JSON mirror to this path")

    # the global options are also accepted after the subcommand; SUPPRESS
    # keeps the subparser from clobbering values parsed at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--json", default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("build", help="emit a family's functional table", parents=[common])
    _add_family_args(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser(
        "nearbest", help="solve the per-index l1 minimizations", parents=[common]
    )
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--knots", required=True)
    sp.set_defaults(func=cmd_nearbest)

    sp = sub.add_parser("norms", help="nu bound and empirical norm estimate", parents=[common])
    _add_family_args(sp)
    sp.add_argument("--samples", type=int, default=64)
    sp.set_defaults(func=cmd_norms)

    sp = sub.add_parser("biv", help="bivariate weight tables", parents=[common])
    sp.add_argument("--table", required=True, choices=("nb3", "nb4", "t2", "g2", "residuals"))
    sp.add_argument("--scales", type=int, nargs="+", default=[1, 2, 3])
    sp.add_argument("--mesh", default="uniform", choices=("uniform", "random"))
    sp.add_argument("--mesh-file")
    sp.add_argument("--nx", type=int, default=8)
    sp.add_argument("--ny", type=int, default=8)
    sp.add_argument("--ratio", type=float, default=1e3)
    sp.set_defaults(func=cmd_biv)

    sp = sub.add_parser("quad", help="quadrature rule from a discrete family", parents=[common])
    _add_family_args(sp)
    sp.set_defaults(func=cmd_quad)

    sp = sub.add_parser(
        "repro", help="regenerate and verify the reference tables", parents=[common]
    )
    sp.add_argument("--section", help="restrict to one table key (e.g. 2.1 or uniform-dqi)")
    sp.add_argument("--samples", type=int, default=64)
    sp.set_defaults(func=cmd_repro)

    if argv is None:
        argv = sys.argv[1:]
    if "--config" in argv:
        idx = argv.index("--config")
        if idx + 1 >= len(argv):
            parser.error("--config needs a file path")
        try:
            _apply_config(parser, argv[idx + 1])
        except OSError as exc:
            parser.error(f"cannot read config file: {exc}")
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
