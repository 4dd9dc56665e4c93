"""Command-line front end: spectra, potentials, discriminants, gaps,
Dirichlet tables and cluster enumeration as CSV or JSON.

Exit codes: 0 success, 2 validation, 3 internal consistency,
4 singular potential, 5 integrator failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .darboux import (
    ClusterSet,
    darboux_transform,
    dirichlet_edge_prediction,
    enumerate_clusters,
    transformed_potential,
)
from .errors import IntegrationError, InternalConsistencyError, SingularPotentialError
from .floquet import (
    band_edges,
    dirichlet_eigenvalues,
    discriminant_scan,
    free_potential,
    whittaker_hill_potential,
)
from .spectrum import WHParams, solvable_spectrum

_EDGE_MATCH_TOL = 1e-6


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    v = float(x)
    if v == 0.0:
        v = 0.0  # normalize -0.0
    return f"{v:.15g}"


def _render_csv(config: dict, columns: list[str], rows: list[list]) -> str:
    lines = [f"# {k}={_fmt(v) if isinstance(v, (int, float, np.floating)) else v}"
             for k, v in config.items()]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    return "\n".join(lines) + "\n"


def _render_json(config: dict, records: list[dict]) -> str:
    payload = {"config": config, "data": records}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(args, config, columns, rows, records) -> str:
    if args.format == "json":
        return _render_json(config, records)
    return _render_csv(config, columns, rows)


def _parse_cluster(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ValueError(f"--cluster must be a comma list of integers: {exc}")


def _require_params(args) -> WHParams:
    if args.s is None or args.alpha is None:
        raise ValueError("--s and --alpha are required for this command")
    return WHParams(alpha=args.alpha, s=args.s)


def _select_potential(args):
    """(potential, params_or_None, cluster_or_None) honoring --free/--cluster."""
    if getattr(args, "free", False):
        if getattr(args, "cluster", None):
            raise ValueError("--free and --cluster are mutually exclusive")
        return free_potential(), None, None
    params = _require_params(args)
    members = _parse_cluster(getattr(args, "cluster", None))
    if not members:
        return whittaker_hill_potential(params), params, None
    cluster = ClusterSet(members, params.s)
    op = darboux_transform(solvable_spectrum(params), cluster)
    return transformed_potential(op), params, cluster


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------


def cmd_spectrum(args) -> str:
    params = _require_params(args)
    spec = solvable_spectrum(params)
    config = {"command": "spectrum", "s": params.s, "alpha": params.alpha}
    columns = ["index", "label", "nu", "lambda", "parity",
               "phi_basis", "phi_freqs", "phi_coeffs"]
    rows, records = [], []
    for e in spec.entries:
        terms = sorted(e.phi.coeffs.items())
        basis = "cos" if e.parity == "even" else "sin"
        freqs = [n for n, _ in terms]
        coeffs = [(a if e.parity == "even" else b) for _, (a, b) in terms]
        rows.append([e.index, e.label, e.nu, e.lam, e.parity, basis,
                     " ".join(str(n) for n in freqs),
                     " ".join(_fmt(c) for c in coeffs)])
        records.append({
            "index": e.index, "label": e.label, "nu": e.nu, "lambda": e.lam,
            "parity": e.parity,
            "phi": {"basis": basis, "freqs": freqs, "coeffs": coeffs},
        })
    return _emit(args, config, columns, rows, records)


def cmd_potential(args) -> str:
    params = _require_params(args)
    members = _parse_cluster(args.cluster)
    cluster = ClusterSet(members, params.s)
    op = darboux_transform(solvable_spectrum(params), cluster)
    pot = transformed_potential(op)  # raises SingularPotentialError when singular
    span = 2.0 * math.pi if args.two_pi else math.pi
    n = args.samples
    xs = np.linspace(0.0, span, n)
    vs = pot.values(xs)
    config = {
        "command": "potential", "s": params.s, "alpha": params.alpha,
        "cluster": " ".join(str(i) for i in cluster.indices),
        "margin": op.margin, "span": span,
    }
    rows = [[x, v] for x, v in zip(xs, vs)]
    records = [{"x": float(x), "v": float(v)} for x, v in zip(xs, vs)]
    return _emit(args, config, ["x", "v"], rows, records)


def cmd_discriminant(args) -> str:
    pot, params, cluster = _select_potential(args)
    table = discriminant_scan(pot, args.lmin, args.lmax, args.samples, rtol=args.tol)
    config = {"command": "discriminant", "potential": pot.description,
              "lmin": args.lmin, "lmax": args.lmax, "samples": args.samples,
              "tol": args.tol}
    rows = [[lam, d] for lam, d in table]
    records = [{"lambda": float(lam), "delta": float(d)} for lam, d in table]
    return _emit(args, config, ["lambda", "delta"], rows, records)


def _theorem_prediction(s: int | None, index: int) -> str:
    if s is None:
        return "closed"  # free operator
    m = (s - 1) // 2 if s % 2 else s // 2
    if s % 2:  # even gaps closed except the first m
        if index % 2 == 0:
            return "open" if index // 2 <= m else "closed"
        return "generic"
    if index % 2 == 1:  # odd gaps closed except the first m
        return "open" if (index + 1) // 2 <= m else "closed"
    return "generic"


def cmd_gaps(args) -> str:
    pot, params, cluster = _select_potential(args)
    s = params.s if params is not None else None
    if args.lmax is not None:
        lam_max = args.lmax
    else:
        xs = np.linspace(0.0, math.pi, 257)
        amp = float(np.max(np.abs(pot.values(xs))))
        lam_max = (args.ngaps + 1.2) ** 2 + amp
    report = band_edges(pot, lam_max, closure_tol=args.closure_tol)
    if len(report.gaps) < args.ngaps:
        report = band_edges(pot, 1.6 * lam_max, closure_tol=args.closure_tol)
    gaps = report.gaps[: args.ngaps]

    observed, predicted = [], []
    for g in gaps:
        pred = _theorem_prediction(s, g.index)
        observed.append("closed" if g.closed else "open")
        predicted.append(pred)
    governed = [(o, p) for o, p in zip(observed, predicted) if p != "generic"]
    ok = all(o == p for o, p in governed)
    summary = (
        f"observed [{' '.join(observed)}] vs predicted [{' '.join(predicted)}]: "
        + ("match" if ok else "MISMATCH")
    )
    config = {"command": "gaps", "potential": pot.description,
              "lambda0": report.lambda0, "ngaps": args.ngaps,
              "closure_tol": args.closure_tol, "summary": summary}
    columns = ["index", "left", "right", "width", "closed", "predicted"]
    rows = [[g.index, g.left, g.right, g.width, g.closed, _theorem_prediction(s, g.index)]
            for g in gaps]
    records = [{"index": g.index, "left": g.left, "right": g.right,
                "width": g.width, "closed": g.closed,
                "predicted": _theorem_prediction(s, g.index)} for g in gaps]
    return _emit(args, config, columns, rows, records)


def cmd_dirichlet(args) -> str:
    pot, params, cluster = _select_potential(args)
    gammas = dirichlet_eigenvalues(pot, args.lmin, args.lmax)
    report = band_edges(pot, args.lmax, closure_tol=args.closure_tol)
    predictions = {}
    if params is not None:
        cl = cluster if cluster is not None else ClusterSet([], params.s)
        for p in dirichlet_edge_prediction(cl, params.s):
            predictions[p.gap_index] = p.edge

    columns = ["gamma", "gap", "left", "right", "position", "predicted"]
    rows, records = [], []
    for g in gammas:
        gap_index, left, right, pos = 0, math.nan, math.nan, "band"
        for rec in report.gaps:
            if rec.left - _EDGE_MATCH_TOL <= g <= rec.right + _EDGE_MATCH_TOL:
                gap_index, left, right = rec.index, rec.left, rec.right
                if rec.closed:
                    pos = "closed"
                elif abs(g - rec.left) <= _EDGE_MATCH_TOL:
                    pos = "left"
                elif abs(g - rec.right) <= _EDGE_MATCH_TOL:
                    pos = "right"
                else:
                    pos = "interior"
                break
        pred = predictions.get(gap_index, "-")
        rows.append([g, gap_index, left, right, pos, pred])
        records.append({"gamma": float(g), "gap": gap_index, "left": left,
                        "right": right, "position": pos, "predicted": pred})
    config = {"command": "dirichlet", "potential": pot.description,
              "lmin": args.lmin, "lmax": args.lmax}
    return _emit(args, config, columns, rows, records)


def cmd_clusters(args) -> str:
    params = _require_params(args)
    spec = solvable_spectrum(params)
    sets = enumerate_clusters(params.s, include_zero=args.include_zero_cluster)
    columns = ["indices", "k", "regular", "margin", "edges"]
    rows, records = [], []
    for cl in sets:
        op = darboux_transform(spec, cl)
        edges = [p.edge for p in op.spectrum_map] if op.spectrum_map else []
        rows.append([" ".join(str(i) for i in cl.indices), cl.k, op.regular,
                     op.margin, " ".join(edges)])
        records.append({"indices": list(cl.indices), "k": cl.k,
                        "regular": op.regular, "margin": op.margin,
                        "edges": edges})
    config = {"command": "clusters", "s": params.s, "alpha": params.alpha,
              "include_zero_cluster": bool(args.include_zero_cluster)}
    return _emit(args, config, columns, rows, records)


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="whittaker-hill",
        description="Solvable spectra, Darboux transforms and Floquet analysis "
                    "of the Whittaker-Hill operator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, free_ok=False):
        p.add_argument("--s", type=int, default=None, help="integer parameter s >= 1")
        p.add_argument("--alpha", type=float, default=None, help="coupling alpha > 0")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if free_ok:
            p.add_argument("--free", action="store_true",
                           help="use the free operator u = 0 (oracle mode)")

    p = sub.add_parser("spectrum", help="solvable eigenvalues and eigenfunctions")
    common(p)
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("potential", help="sampled (possibly transformed) potential")
    common(p)
    p.add_argument("--cluster", default="", help="comma list of labels, e.g. 1,2")
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--two-pi", action="store_true", help="sample over [0, 2*pi]")
    p.set_defaults(handler=cmd_potential)

    p = sub.add_parser("discriminant", help="Hill discriminant trace")
    common(p, free_ok=True)
    p.add_argument("--cluster", default="", help="transform by this cluster first")
    p.add_argument("--lmin", type=float, default=-10.0)
    p.add_argument("--lmax", type=float, default=30.0)
    p.add_argument("--samples", type=int, default=601)
    p.add_argument("--tol", type=float, default=1e-10, help="integrator tolerance")
    p.set_defaults(handler=cmd_discriminant)

    p = sub.add_parser("gaps", help="band/gap report with closure classification")
    common(p, free_ok=True)
    p.add_argument("--cluster", default="")
    p.add_argument("--ngaps", type=int, default=8)
    p.add_argument("--lmax", type=float, default=None)
    p.add_argument("--closure-tol", type=float, default=1e-6)
    p.set_defaults(handler=cmd_gaps)

    p = sub.add_parser("dirichlet", help="Dirichlet eigenvalues and gap edges")
    common(p, free_ok=True)
    p.add_argument("--cluster", default="")
    p.add_argument("--lmin", type=float, default=-20.0)
    p.add_argument("--lmax", type=float, default=40.0)
    p.add_argument("--closure-tol", type=float, default=1e-6)
    p.set_defaults(handler=cmd_dirichlet)

    p = sub.add_parser("clusters", help="enumerate cluster sets with regularity")
    common(p)
    p.add_argument("--include-zero-cluster", action="store_true")
    p.set_defaults(handler=cmd_clusters)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.handler(args)
    except SingularPotentialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except InternalConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except IntegrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
