"""Command-line entry point: ``neumaier <group> <command> [flags]``."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import platform
import sys
import time
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InternalInconsistency, ValidationError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=_json_default)


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


class Run:
    """Collects outputs for the run manifest."""

    def __init__(self, argv: list[str], args: argparse.Namespace):
        self.argv = argv
        self.args = args
        self.outputs: list[dict] = []
        self.start = time.perf_counter()

    def write_text(self, path: str, text: str) -> None:
        p = Path(path)
        p.write_text(text, newline="")
        self.outputs.append({"path": str(p), "sha256": hashlib.sha256(text.encode()).hexdigest()})

    def manifest(self, status: int) -> dict:
        config = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func", "manifest")}
        versions = {"neumaier": __version__, "python": platform.python_version()}
        for pkg in ("numpy", "scipy", "sympy", "networkx"):
            try:
                versions[pkg] = version(pkg)
            except PackageNotFoundError:
                versions[pkg] = None
        return {
            "argv": self.argv,
            "config_sha256": hashlib.sha256(canonical_json(config).encode()).hexdigest(),
            "config": config,
            "versions": versions,
            "wall_seconds": round(time.perf_counter() - self.start, 3),
            "outputs": self.outputs,
            "exit_code": status,
        }


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _write_graph(run: Run, graph, path: str, fmt: str | None) -> None:
    from .graphs import to_graph6, to_json

    fmt = fmt or ("graph6" if Path(path).suffix in (".g6", ".graph6") else "json")
    text = (to_graph6(graph) if fmt == "graph6" else to_json(graph)) + "\n"
    run.write_text(path, text)


def _graph_summary(graph) -> dict:
    deg = graph.degrees()
    return {"n": graph.n, "edges": graph.num_edges(), "degrees": sorted(set(deg.tolist())), "meta": graph.meta}


def _emit_graph(run: Run, graph, args) -> None:
    if args.out:
        _write_graph(run, graph, args.out, args.format)
    summary = _graph_summary(graph)
    if args.json:
        _out(canonical_json(summary))
    else:
        _out(f"{summary['n']} vertices, {summary['edges']} edges, degrees {summary['degrees']}")


# -- handlers -----------------------------------------------------------------------

def cmd_cyclo_table(run: Run, args) -> None:
    from .cyclotomy import cyclotomic_numbers
    from .finitefield import build_field, default_dlog, primitive_elements

    f = build_field(args.p, args.r)
    dl = default_dlog(f, args.alpha_index)
    t = cyclotomic_numbers(f, dl, args.m)
    if args.json:
        d = t.to_json()
        d["alpha_index"] = args.alpha_index
        d["primitive_elements"] = len(primitive_elements(f))
        _out(canonical_json(d))
        return
    width = max(len(str(int(x))) for x in t.counts.ravel())
    _out(f"GF({f.q}), m = {t.m}, alpha = {t.alpha_id} (index {args.alpha_index})")
    for row in t.counts:
        _out(" ".join(str(int(x)).rjust(width) for x in row))


def cmd_gamma_build(run: Run, args) -> None:
    from .constructions import GammaSpec, gamma

    _emit_graph(run, gamma(GammaSpec(args.m, args.q1, args.q2, args.alpha1, args.alpha2)), args)


def cmd_gk_build(run: Run, args) -> None:
    from .constructions import gk_graph, icosahedron, validate_drg
    from .graphs import read_graph

    base = icosahedron() if args.drg is None else read_graph(args.drg)
    _emit_graph(run, gk_graph(validate_drg(base)), args)


def cmd_whiteman_build(run: Run, args) -> None:
    from .constructions import whiteman_graph

    perms = None
    if args.perm:
        perms = [[int(x) for x in p.split(",")] for p in args.perm]
    _emit_graph(run, whiteman_graph(args.p, args.q, args.alpha, perms), args)


def cmd_fixture(run: Run, args) -> None:
    from .constructions import icosahedron, omega_fixture

    _emit_graph(run, omega_fixture() if args.name == "omega" else icosahedron(), args)


def _parse_clique(text: str | None):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"--clique must be comma-separated integers, got {text!r}") from None


def cmd_check(run: Run, args) -> None:
    from .graphs import read_graph
    from .regularity import classify

    g = read_graph(args.graph)
    report = classify(g, _parse_clique(args.clique))
    if args.json:
        _out(canonical_json(report.to_json()))
        return
    _out(f"verdict: {report.verdict}")
    if report.k is not None:
        _out(f"edge-regular (v,k,lambda) = ({report.v},{report.k},{report.lam})")
    _out(f"mu set: {list(report.mu_set)}")
    if report.clique is not None:
        _out(f"regular clique: order s = {report.s}, nexus e = {report.e}")
    if report.witness:
        _out(f"note: {report.witness}")


def cmd_wl_rank(run: Run, args) -> None:
    from .coherent import minimal_polynomial_degree, structural_flags, support, wl_closure
    from .graphs import read_graph

    g = read_graph(args.graph)
    if g.n > args.cap:
        raise ValidationError(
            f"graph has {g.n} vertices, above the WL cap {args.cap}; WL refinement skipped "
            "(for Gamma_3/Gamma_4 graphs the rank follows analytically from the search equations)"
        )
    c = wl_closure(g, args.cap)
    out = {"rank": c.rank, "rounds": c.rounds, "path": "wl"}
    if args.flags:
        out["flags"] = structural_flags(c)
    if args.support:
        s = support(g, c)
        out["support"] = {"classes": list(s.classes), "cardinality": s.cardinality}
    if args.spectral:
        out["distinct_eigenvalues"] = minimal_polynomial_degree(g)
    if args.json:
        _out(canonical_json(out))
        return
    _out(f"coherent rank: {c.rank} ({c.rounds} refinement rounds)")
    if args.flags:
        _out("flags: " + ", ".join(f"{k}={v}" for k, v in out["flags"].items()))
    if args.support:
        _out(f"support: classes {out['support']['classes']} (cardinality {out['support']['cardinality']})")
    if args.spectral:
        _out(f"distinct eigenvalues (rank lower bound): {out['distinct_eigenvalues']}")


def cmd_schur(run: Run, args) -> None:
    from .coherent import schur_verify
    from .constructions import GammaSpec

    r = schur_verify(GammaSpec(args.m, args.q1, args.q2, args.alpha1, args.alpha2))
    if args.json:
        _out(canonical_json(r.to_json()))
    else:
        _out(f"{r.products} products checked: {'ok' if r.ok else 'MISMATCH'}")
        for line in r.mismatches:
            _out("  " + line)
    if not r.ok:
        raise InternalInconsistency("Schur partition check failed")


def _csv_text(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)  # RFC 4180: quoting as needed, CRLF line ends
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def cmd_search_pairs(run: Run, args) -> None:
    from .search import CSV_COLUMNS, csv_row, search_pairs

    hits = search_pairs(args.m, args.q1_max, args.verify, args.include_srg, args.threads)
    if args.csv:
        run.write_text(args.csv, _csv_text([list(CSV_COLUMNS)] + [csv_row(h) for h in hits]))
    if args.json:
        _out(canonical_json([h.to_json() for h in hits]))
        return
    for h in hits:
        tag = "" if h.coprime else " (same prime)"
        tag += " [srg]" if h.srg else ""
        rank = f" rank {h.rank}" if h.rank is not None else ""
        _out(f"{h.q1} & {h.q2}  u1={h.u1} v1={h.v1} u2={h.u2} v2={h.v2}  {h.verified}{rank}{tag}")
    _out(f"{len(hits)} pairs")


def cmd_search_nexus(run: Run, args) -> None:
    from .search import CSV_COLUMNS, csv_row, nexus_table

    table = nexus_table(args.m_max, args.q2_max, args.e_max, args.verify, args.threads)
    hits = [h for e in sorted(table) for h in table[e]]
    if args.csv:
        run.write_text(args.csv, _csv_text([list(CSV_COLUMNS)] + [csv_row(h) for h in hits]))
    if args.json:
        _out(canonical_json({str(e): [h.to_json() for h in hs] for e, hs in table.items()}))
        return
    for e in sorted(table):
        _out(f"{e:>3} | " + ", ".join(f"({h.m};{h.q1},{h.q2})" for h in table[e]))
    _out(f"{len(hits)} graphs")


# -- parser ---------------------------------------------------------------------------

def _graph_out(p):
    p.add_argument("--out", help="write the graph here (.g6/.graph6 for graph6, else JSON)")
    p.add_argument("--format", choices=("json", "graph6"), help="override the format chosen by suffix")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output and errors")
    common.add_argument("--manifest", metavar="PATH", help="write the run manifest here instead of stderr")

    parser = _Parser(prog="neumaier", description=__doc__, parents=[common])
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(sub, name, func, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func)
        return p

    cyclo = groups.add_parser("cyclo", help="cyclotomic numbers").add_subparsers(dest="cmd", required=True)
    p = leaf(cyclo, "table", cmd_cyclo_table, "print the cyclotomic table of order m")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha-index", type=int, default=0)

    gam = groups.add_parser("gamma", help="Gamma_m graphs").add_subparsers(dest="cmd", required=True)
    p = leaf(gam, "build", cmd_gamma_build, "build Gamma_m(alpha1, alpha2) on GF(q1) x GF(q2)")
    for name in ("--m", "--q1", "--q2"):
        p.add_argument(name, type=int, required=True)
    p.add_argument("--alpha1", type=int, default=0, help="index into the primitive elements of GF(q1)")
    p.add_argument("--alpha2", type=int, default=0)
    _graph_out(p)

    gk = groups.add_parser("gk", help="blow-up of an antipodal DRG").add_subparsers(dest="cmd", required=True)
    p = leaf(gk, "build", cmd_gk_build, "build the blow-up of a 3-class antipodal DRG (default: icosahedron)")
    p.add_argument("--drg", help="graph file of the DRG")
    _graph_out(p)

    wm = groups.add_parser("whiteman", help="Z/pqZ family").add_subparsers(dest="cmd", required=True)
    p = leaf(wm, "build", cmd_whiteman_build, "build the generalised-cyclotomy Neumaier graph")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True, help="common primitive root of p and q")
    p.add_argument("--perm", action="append", help="comma-separated permutation of range(p); repeat t-1 times")
    _graph_out(p)

    fx = groups.add_parser("fixture", help="fixed graphs").add_subparsers(dest="name", required=True)
    for name in ("omega", "icosahedron"):
        _graph_out(leaf(fx, name, cmd_fixture, f"the {name} graph"))

    p = leaf(groups, "check", cmd_check, "classify a graph (edge-regular / Neumaier / SRG)")
    p.add_argument("--graph", required=True)
    p.add_argument("--clique", help="comma-separated candidate clique")

    wl = groups.add_parser("wl", help="coherent closure").add_subparsers(dest="cmd", required=True)
    p = leaf(wl, "rank", cmd_wl_rank, "coherent rank by 2-WL refinement")
    p.add_argument("--graph", required=True)
    p.add_argument("--cap", type=int, default=1024)
    p.add_argument("--flags", action="store_true")
    p.add_argument("--support", action="store_true")
    p.add_argument("--spectral", action="store_true", help="also report the distinct-eigenvalue bound")

    sc = groups.add_parser("schur", help="Schur partition of GF(q1) x GF(q2)").add_subparsers(
        dest="cmd", required=True)
    p = leaf(sc, "verify", cmd_schur, "check the m+3 basic-set products by convolution")
    for name in ("--m", "--q1", "--q2"):
        p.add_argument(name, type=int, required=True)
    p.add_argument("--alpha1", type=int, default=0)
    p.add_argument("--alpha2", type=int, default=0)

    threads_default = len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
    se = groups.add_parser("search", help="prime-power pair searches").add_subparsers(dest="cmd", required=True)
    p = leaf(se, "pairs", cmd_search_pairs, "m = 3 or 4 pairs from the quadratic-form equations")
    p.add_argument("--m", type=int, required=True, choices=(3, 4))
    p.add_argument("--q1-max", type=int, required=True)
    p.add_argument("--csv")
    p.add_argument("--verify", choices=("wl", "construct", "none"), default="wl")
    p.add_argument("--include-srg", action="store_true", help="keep strongly regular (same-prime) hits")
    p.add_argument("--threads", type=int, default=threads_default)
    p = leaf(se, "nexus", cmd_search_nexus, "strictly Neumaier Gamma_m grouped by nexus")
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--q2-max", type=int, required=True)
    p.add_argument("--e-max", type=int, required=True)
    p.add_argument("--csv")
    p.add_argument("--verify", choices=("wl", "construct", "none"), default="construct")
    p.add_argument("--threads", type=int, default=threads_default)
    return parser


def _error(args_json: bool, kind: str, message: str, code: int) -> int:
    if args_json:
        sys.stderr.write(canonical_json({"error": kind, "message": message, "exit_code": code}) + "\n")
    else:
        sys.stderr.write(f"error ({kind}): {message}\n")
    return code


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ValidationError as exc:
        return _error(want_json, "usage", str(exc), 1)
    run = Run(argv, args)
    code = 0
    try:
        args.func(run, args)
    except ValidationError as exc:
        code = _error(args.json, "validation", str(exc), 1)
    except (InternalInconsistency, AssertionError) as exc:
        code = _error(args.json, "internal", str(exc) or type(exc).__name__, 2)
    manifest = canonical_json(run.manifest(code))
    if args.manifest:
        Path(args.manifest).write_text(manifest + "\n")
    else:
        sys.stderr.write(manifest + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
