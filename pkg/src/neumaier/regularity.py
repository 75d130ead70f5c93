"""Edge-regularity, regular cliques, strong regularity and the Neumaier verdict."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import networkx as nx
import numpy as np

from .constructions import GammaSpec
from .cyclotomy import cyclotomic_numbers, x_row
from .errors import ValidationError
from .graphs import Graph

CLIQUE_SEARCH_CAP = 512

VERDICTS = ("not-edge-regular", "edge-regular-only", "strictly-neumaier", "strongly-regular", "neumaier-and-srg")


@dataclass(frozen=True)
class EdgeRegularity:
    v: int
    k: int | None = None
    lam: int | None = None
    witness: str | None = None

    @property
    def ok(self) -> bool:
        return self.witness is None


@dataclass(frozen=True)
class NeumaierReport:
    v: int
    k: int | None
    lam: int | None
    mu_set: tuple[int, ...]
    srg: bool
    clique: tuple[int, ...] | None
    e: int | None
    s: int | None
    verdict: str
    witness: str | None = None

    @property
    def neumaier(self) -> bool:
        return self.verdict in ("strictly-neumaier", "neumaier-and-srg")

    @property
    def parameters(self) -> tuple | None:
        if not self.neumaier:
            return None
        return (self.v, self.k, self.lam, self.e, self.s)

    def to_json(self) -> dict:
        d = asdict(self)
        d["mu_set"] = list(self.mu_set)
        d["clique"] = list(self.clique) if self.clique is not None else None
        return d


def _square(adj: np.ndarray, rows: np.ndarray | None = None) -> np.ndarray:
    """Common-neighbour counts (A^2)[rows, :], exact in float32 for n < 2^24."""
    a = adj.astype(np.float32)
    left = a if rows is None else a[rows]
    return np.rint(left @ a).astype(np.int64)


def _common(g: Graph, vertex_transitive: bool) -> tuple[np.ndarray, np.ndarray]:
    """(A^2 restricted to the inspected rows, the inspected row indices)."""
    rows = np.array([0]) if vertex_transitive and g.n else np.arange(g.n)
    return _square(g.adj, rows), rows


def edge_regularity(g: Graph, vertex_transitive: bool = False) -> EdgeRegularity:
    """(v, k, lambda) or the first vertex/edge that breaks regularity.

    With ``vertex_transitive`` only the neighbourhood of vertex 0 is inspected;
    callers must know the graph is vertex-transitive (e.g. a Cayley graph).
    """
    n = g.n
    deg = g.degrees()
    if n == 0:
        return EdgeRegularity(0, 0, 0)
    bad = np.nonzero(deg != deg[0])[0]
    if bad.size:
        return EdgeRegularity(n, witness=f"vertex {bad[0]} has degree {deg[bad[0]]} != {deg[0]}")
    sq, rows = _common(g, vertex_transitive)
    adj_rows = g.adj[rows]
    lams = sq[adj_rows]
    if lams.size == 0:
        return EdgeRegularity(n, int(deg[0]), 0)
    if lams.min() != lams.max():
        r, c = np.argwhere(adj_rows & (sq != lams[0]))[0]
        x = int(rows[r])
        return EdgeRegularity(n, witness=f"edge ({x}, {c}) lies in {sq[r, c]} triangles, edge-regularity needs {lams[0]}")
    return EdgeRegularity(n, int(deg[0]), int(lams[0]))


def mu_set(g: Graph, vertex_transitive: bool = False) -> tuple[int, ...]:
    """Sorted distinct common-neighbour counts over non-adjacent pairs of distinct vertices."""
    sq, rows = _common(g, vertex_transitive)
    mask = ~g.adj[rows]
    mask[np.arange(len(rows)), rows] = False
    return tuple(sorted(set(np.unique(sq[mask]).tolist())))


def _is_clique(g: Graph, c: list[int]) -> bool:
    sub = g.adj[np.ix_(c, c)]
    return bool(sub.sum() == len(c) * (len(c) - 1))


def regular_clique_check(g: Graph, clique) -> tuple[int | None, str | None]:
    """(nexus e, None) when every outside vertex sees exactly e > 0 clique vertices, else (None, witness)."""
    c = sorted({int(x) for x in clique})
    if not c or c[0] < 0 or c[-1] >= g.n:
        raise ValidationError("clique vertices out of range")
    if not _is_clique(g, c):
        raise ValidationError("given vertex set is not a clique")
    outside = np.setdiff1d(np.arange(g.n), c)
    if outside.size == 0:
        return None, "clique covers every vertex"
    counts = g.adj[np.ix_(outside, c)].sum(axis=1)
    e = int(counts[0])
    bad = np.nonzero(counts != e)[0]
    if bad.size:
        x = int(outside[bad[0]])
        return None, f"vertex {x} has {int(counts[bad[0]])} neighbours in the clique, vertex {int(outside[0])} has {e}"
    if e == 0:
        return None, "outside vertices have no neighbours in the clique"
    return e, None


def find_regular_clique(g: Graph) -> tuple[list[int], int] | None:
    """Exhaustive search over maximal cliques for a regular one."""
    if g.n > CLIQUE_SEARCH_CAP:
        raise ValidationError(f"clique search is capped at {CLIQUE_SEARCH_CAP} vertices; supply a clique")
    nxg = nx.from_numpy_array(g.adj.astype(np.int8))
    seen_sizes: set[int] = set()
    for clique in nx.find_cliques(nxg):
        e, _ = regular_clique_check(g, clique)
        if e is not None:
            return sorted(clique), e
        seen_sizes.add(len(clique))
    return None


def classify(g: Graph, candidate_clique=None, vertex_transitive: bool = False) -> NeumaierReport:
    er = edge_regularity(g, vertex_transitive)
    mus = mu_set(g, vertex_transitive) if g.n else ()
    if not er.ok:
        return NeumaierReport(g.n, None, None, mus, False, None, None, None, "not-edge-regular", er.witness)
    complete = er.k == g.n - 1
    srg = len(mus) == 1 and not complete
    clique, e, witness = None, None, None
    if not complete and er.k > 0:
        if candidate_clique is not None:
            e, witness = regular_clique_check(g, candidate_clique)
            if e is not None:
                clique = tuple(sorted(int(x) for x in candidate_clique))
        elif g.n <= CLIQUE_SEARCH_CAP:
            found = find_regular_clique(g)
            if found is not None:
                clique, e = tuple(found[0]), found[1]
            else:
                witness = "no maximal clique is regular"
        else:
            witness = f"no clique supplied and v > {CLIQUE_SEARCH_CAP}"
    if clique is not None:
        verdict = "neumaier-and-srg" if srg else "strictly-neumaier"
    else:
        verdict = "strongly-regular" if srg else "edge-regular-only"
    return NeumaierReport(
        g.n, er.k, er.lam, mus, srg, clique, e, len(clique) if clique else None, verdict, witness
    )


def mu_spectrum_prediction(spec: GammaSpec, t1=None, t2=None) -> tuple[int, ...]:
    """{n1(n2+1)} ∪ {2 n1 + X_{0,0,i} : 0 < i < m}."""
    if t1 is None:
        t1 = cyclotomic_numbers(spec.field1, spec.dlog1, spec.m)
    if t2 is None:
        t2 = cyclotomic_numbers(spec.field2, spec.dlog2, spec.m)
    row = x_row(t1, t2)
    vals = {spec.n1 * (spec.n2 + 1)} | {2 * spec.n1 + row[i] for i in range(1, spec.m)}
    return tuple(sorted(vals))


def edge_regular_condition(spec: GammaSpec, t1=None, t2=None) -> bool:
    """X_{0,0,0} = q1 + n1 n2 - 2 n1 - n2 together with the parity condition."""
    if not spec.undirected:
        return False
    if t1 is None:
        t1 = cyclotomic_numbers(spec.field1, spec.dlog1, spec.m)
    if t2 is None:
        t2 = cyclotomic_numbers(spec.field2, spec.dlog2, spec.m)
    x000 = x_row(t1, t2)[0]
    return x000 == spec.q1 + spec.n1 * spec.n2 - 2 * spec.n1 - spec.n2


def classify_cayley(group, connection, clique=None) -> NeumaierReport:
    """Classify Cay(G, S) from group-ring products alone, without an adjacency matrix.

    (1_S * 1_S)(x) counts common neighbours of 0 and x; (1_S * 1_C)(x) counts
    neighbours of x in C.  Vertex-transitivity lets vertex 0 stand for all.
    """
    from .graphs import group_ring_mul, indicator

    n = group.size
    s = indicator(group, connection)
    k = int(s.sum())
    common = group_ring_mul(group, s, s)
    on_s = common[s == 1]
    off = (s == 0)
    off[0] = False
    mus = tuple(sorted(set(np.unique(common[off]).tolist())))
    if on_s.size and on_s.min() != on_s.max():
        x = int(np.nonzero(s == 1)[0][np.argmax(on_s != on_s[0])])
        return NeumaierReport(n, None, None, mus, False, None, None, None, "not-edge-regular",
                              f"edge (0, {x}) lies in {common[x]} triangles, edge-regularity needs {on_s[0]}")
    lam = int(on_s[0]) if on_s.size else 0
    complete = k == n - 1
    srg = len(mus) == 1 and not complete
    clique_t, e, witness = None, None, None
    if clique is not None and not complete:
        c = indicator(group, clique)
        members = np.nonzero(c)[0]
        inside = group_ring_mul(group, s, c)
        if np.any(inside[members] != len(members) - 1):
            raise ValidationError("given vertex set is not a clique")
        outside = inside[c == 0]
        if outside.size and outside.min() == outside.max() and outside[0] > 0:
            clique_t, e = tuple(int(x) for x in members), int(outside[0])
        else:
            witness = "clique is not regular"
    if clique_t is not None:
        verdict = "neumaier-and-srg" if srg else "strictly-neumaier"
    else:
        verdict = "strongly-regular" if srg else "edge-regular-only"
    return NeumaierReport(n, k, lam, mus, srg, clique_t, e, len(clique_t) if clique_t else None, verdict, witness)


def classify_gamma(spec: GammaSpec) -> NeumaierReport:
    """Convolution-based classification of Gamma_m with its canonical clique {0} ∪ C1."""
    from .constructions import build_classes

    if not spec.undirected:
        raise ValidationError(f"Gamma_{spec.m} on ({spec.q1}, {spec.q2}) is directed")
    cls = build_classes(spec)
    conn = np.concatenate([cls.c1, cls.d[0]])
    return classify_cayley(spec.group, conn, np.concatenate([[0], cls.c1]))
