"""Graph families: cyclotomic Cayley graphs Gamma_m, the antipodal-DRG blow-up,
the Whiteman Z/pqZ family and the 16-vertex Omega fixture."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np
from scipy.sparse.csgraph import shortest_path
from sympy import isprime, n_order

from .errors import ValidationError
from .finitefield import DlogTable, FieldSpec, default_dlog, field_for_order
from .graphs import AbelianGroup, ConnectionSet, Graph, cayley_graph


@dataclass(frozen=True)
class GammaSpec:
    """Data for Gamma_m(alpha1, alpha2) on GF(q1) x GF(q2).

    ``alpha1``/``alpha2`` index into :func:`primitive_elements` of each field.
    """

    m: int
    q1: int
    q2: int
    alpha1: int = 0
    alpha2: int = 0

    def __post_init__(self):
        if self.m < 2:
            raise ValidationError(f"m must be >= 2, got {self.m}")
        for q in (self.q1, self.q2):
            if (q - 1) % self.m:
                raise ValidationError(f"m = {self.m} does not divide q - 1 for q = {q}")
        self.field1, self.field2  # validates prime powers

    @cached_property
    def field1(self) -> FieldSpec:
        return field_for_order(self.q1)

    @cached_property
    def field2(self) -> FieldSpec:
        return field_for_order(self.q2)

    @cached_property
    def dlog1(self) -> DlogTable:
        return default_dlog(self.field1, self.alpha1)

    @cached_property
    def dlog2(self) -> DlogTable:
        return default_dlog(self.field2, self.alpha2)

    @property
    def n1(self) -> int:
        return (self.q1 - 1) // self.m

    @property
    def n2(self) -> int:
        return (self.q2 - 1) // self.m

    @property
    def undirected(self) -> bool:
        return (self.q1 * self.n1 - self.q2 * self.n2) % 2 == 0

    @cached_property
    def group(self) -> AbelianGroup:
        return AbelianGroup.field_pair(self.field1, self.field2)

    def meta(self) -> dict:
        return {
            "construction": "gamma",
            "m": self.m,
            "q1": self.q1,
            "q2": self.q2,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
        }


@dataclass(frozen=True, eq=False)
class GammaClasses:
    """The m + 3 basic sets {0}, C1, C2, D_0..D_{m-1} as sorted index arrays."""

    c1: np.ndarray
    c2: np.ndarray
    d: tuple[np.ndarray, ...]

    def named(self) -> list[tuple[str, np.ndarray]]:
        out = [("O", np.array([0])), ("C1", self.c1), ("C2", self.c2)]
        out += [(f"D{i}", di) for i, di in enumerate(self.d)]
        return out


def build_classes(spec: GammaSpec) -> GammaClasses:
    q2, m = spec.q2, spec.m
    pw1, pw2 = spec.dlog1.pow, spec.dlog2.pow
    c1 = np.sort(pw1 * q2)
    c2 = np.sort(pw2.copy())
    i1, i2 = np.meshgrid(np.arange(spec.q1 - 1), np.arange(q2 - 1), indexing="ij")
    elems = (pw1[i1] * q2 + pw2[i2]).ravel()
    cls = ((i1 - i2) % m).ravel()
    d = tuple(np.sort(elems[cls == i]) for i in range(m))
    return GammaClasses(c1, c2, d)


def canonical_clique(spec: GammaSpec) -> list[int]:
    """{(0,0)} ∪ C1, a clique of order q1 in Gamma_m."""
    return [0] + build_classes(spec).c1.tolist()


def gamma(spec: GammaSpec) -> Graph:
    if not spec.undirected:
        raise ValidationError(
            f"Gamma_{spec.m} on ({spec.q1}, {spec.q2}) is directed: undirectedness needs "
            f"q1*n1 = q2*n2 (mod 2), got {spec.q1 * spec.n1} and {spec.q2 * spec.n2}"
        )
    classes = build_classes(spec)
    s = ConnectionSet.of(np.concatenate([classes.c1, classes.d[0]]), "C1+D0")
    return cayley_graph(spec.group, s, spec.meta())


# -- antipodal distance-regular graphs and the Kronecker blow-up --------------

@dataclass(frozen=True, eq=False)
class DrgInput:
    graph: Graph
    a: int
    k: int
    lam: int
    array: tuple[tuple[int, int, int], tuple[int, int, int]]
    dist: np.ndarray

    @property
    def v(self) -> int:
        return self.graph.n


def validate_drg(graph: Graph) -> DrgInput:
    """Check that ``graph`` is an antipodal distance-regular graph of diameter 3."""
    n = graph.n
    dist = shortest_path(graph.adj.astype(np.int8), unweighted=True, directed=False)
    if np.isinf(dist).any():
        raise ValidationError("DRG input is disconnected")
    dist = dist.astype(np.int64)
    diameter = int(dist.max())
    if diameter != 3:
        raise ValidationError(f"DRG input must have diameter 3, got {diameter}")
    mats = [(dist == i).astype(np.int64) for i in range(4)]
    a1 = mats[1]
    b, c = [], []
    for i in range(4):
        mask = dist == i
        # c_i: neighbours of y at distance i-1 from x; b_i: at distance i+1
        if i > 0:
            vals = np.unique((mats[i - 1] @ a1)[mask])
            if len(vals) != 1:
                raise ValidationError(f"not distance-regular: c_{i} takes values {vals.tolist()}")
            c.append(int(vals[0]))
        if i < 3:
            vals = np.unique((mats[i + 1] @ a1)[mask])
            if len(vals) != 1:
                raise ValidationError(f"not distance-regular: b_{i} takes values {vals.tolist()}")
            b.append(int(vals[0]))
    k = b[0]
    lam = k - b[1] - c[0]
    anti = mats[0] + mats[3]
    sizes = np.unique(anti.sum(axis=1))
    if len(sizes) != 1 or not np.array_equal((anti @ anti > 0), anti.astype(bool)):
        raise ValidationError("distance-3-or-0 relation is not an equivalence with equal classes")
    a = int(sizes[0])
    if a < 2:
        raise ValidationError("graph is not antipodal")
    expected_b = [k, k - lam - 1, 1]
    expected_c = [1, (k - lam - 1) / (a - 1), k]
    for name, got, want in zip(("b0", "b1", "b2", "c1", "c2", "c3"), b + c, expected_b + expected_c):
        if got != want:
            raise ValidationError(f"intersection number {name} = {got}, expected {want}")
    return DrgInput(graph, a, k, lam, (tuple(b), tuple(c)), dist)


def gk_graph(d: DrgInput) -> Graph:
    """I_t ⊗ (A1 + A3) + (J_t - I_t) ⊗ (I + A3) with t = (lambda + 2)/a."""
    a, lam = d.a, d.lam
    if (lam + 2) % a:
        raise ValidationError(f"a = {a} does not divide lambda + 2 = {lam + 2}")
    if a == lam + 2:
        raise ValidationError(f"a = lambda + 2 = {a} gives a strongly regular graph; a proper divisor is required")
    t = (lam + 2) // a
    a1 = (d.dist == 1).astype(np.int8)
    a3 = (d.dist == 3).astype(np.int8)
    eye = np.eye(d.v, dtype=np.int8)
    adj = np.kron(np.eye(t, dtype=np.int8), a1 + a3) + np.kron(np.ones((t, t), np.int8) - np.eye(t, dtype=np.int8), eye + a3)
    meta = {"construction": "gk", "t": t, "a": a, "drg_v": d.v, "drg_k": d.k, "drg_lambda": lam}
    return Graph.from_adjacency(adj.astype(bool), meta)


def icosahedron() -> Graph:
    g = nx.icosahedral_graph()
    return Graph.from_adjacency(nx.to_numpy_array(g, nodelist=range(12), dtype=bool), {"construction": "icosahedron"})


# -- Whiteman generalised cyclotomy --------------------------------------------

def whiteman_classes(p: int, q: int, alpha: int) -> tuple[int, list[list[int]]]:
    """Smallest x for which K_i = {x^i alpha^j} (i < gcd(p-1, q-1)) partition (Z/pqZ)^*."""
    N = p * q
    m = math.gcd(p - 1, q - 1)
    n = (p - 1) * (q - 1) // m
    k0 = sorted({pow(alpha, j, N) for j in range(n)})
    if len(k0) != n:
        raise ValidationError(f"alpha = {alpha} has order {len(k0)} < {n} modulo {N}")
    units = {y for y in range(1, N) if math.gcd(y, N) == 1}
    k0set = set(k0)
    for x in range(2, N):
        if x not in units:
            continue
        classes = [sorted({pow(x, i, N) * y % N for y in k0}) for i in range(m)]
        covered = set().union(*map(set, classes))
        if covered == units and sum(map(len, classes)) == len(units):
            return x, classes
    if m == 1 and k0set == units:
        return 1, [k0]
    raise ValidationError(f"no x partitions the units of Z/{N}Z into cosets of <{alpha}>")


def whiteman_graph(p: int, q: int, alpha: int, perms: list[list[int]] | None = None) -> Graph:
    if p == q or not (isprime(p) and isprime(q)) or p == 2 or q == 2:
        raise ValidationError("p and q must be distinct odd primes")
    if (p - 1) % (q - 1):
        raise ValidationError(f"q - 1 = {q - 1} does not divide p - 1 = {p - 1}")
    if math.gcd(alpha, p * q) != 1 or n_order(alpha, p) != p - 1 or n_order(alpha, q) != q - 1:
        raise ValidationError(f"{alpha} is not a common primitive root of {p} and {q}")
    N = p * q
    x, classes = whiteman_classes(p, q, alpha)
    k0 = classes[0]
    k0set = set(k0)
    if any((-y) % N not in k0set for y in k0):
        raise ValidationError("K_0 is not closed under negation; the Cayley graph would be directed")
    overlap = sum(1 for y in k0 if (y - 1) % N in k0set)
    if (overlap + 2) % q:
        raise ValidationError(f"t = ({overlap} + 2)/{q} is not an integer")
    t = (overlap + 2) // q
    perms = [list(range(p)) for _ in range(t - 1)] if perms is None else [list(pi) for pi in perms]
    if len(perms) != t - 1 or any(sorted(pi) != list(range(p)) for pi in perms):
        raise ValidationError(f"need {t - 1} permutations of range({p})")
    base = cayley_graph(AbelianGroup.cyclic(N), ConnectionSet.of(k0, "K0")).adj
    adj = np.kron(np.eye(t, dtype=bool), base)
    # spread of cocliques: residue classes mod p within each copy
    ys = np.arange(N)
    for k in range(p):
        verts = [ys[ys % p == k]]
        for c, pi in enumerate(perms, start=1):
            verts.append(c * N + ys[ys % p == pi[k]])
        vs = np.concatenate(verts)
        adj[np.ix_(vs, vs)] = True
    np.fill_diagonal(adj, False)
    meta = {"construction": "whiteman", "p": p, "q": q, "alpha": alpha, "x": x, "t": t}
    return Graph.from_adjacency(adj, meta)


def omega_fixture() -> Graph:
    """Cay(Z/2 x Z/8, S4 ∪ S5 ∪ S6), the (16,9,2;2,4) Neumaier graph."""
    g = AbelianGroup.cyclic(2, 8)
    pairs = [(1, 4), (0, 1), (0, 7), (1, 1), (1, 7), (0, 2), (0, 6), (1, 2), (1, 6)]
    s = ConnectionSet.of([a * 8 + b for a, b in pairs], "S4+S5+S6")
    return cayley_graph(g, s, {"construction": "omega"})

