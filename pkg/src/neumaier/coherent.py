"""Coherent closure by 2-dimensional Weisfeiler-Leman refinement.

Colours of ordered pairs are refined by the exact vector of counts
``#{z : colour(x,z) = i, colour(z,y) = j}`` over all colour pairs (i, j).  The
count vectors are compared directly (never hashed), so the partition is exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import InternalInconsistency, ValidationError
from .graphs import Graph

log = logging.getLogger(__name__)

DEFAULT_CAP = 1024
INTERSECTION_RANK_CAP = 16


@dataclass(frozen=True, eq=False)
class CoherentConfiguration:
    n: int
    color: np.ndarray
    rank: int
    class_reps: tuple[tuple[int, int], ...]
    transpose: tuple[int, ...]
    diag_classes: frozenset[int]
    rounds: int = 0
    _intersections: dict = field(default_factory=dict, repr=False)

    def relation(self, i: int) -> np.ndarray:
        return self.color == i

    def sizes(self) -> list[int]:
        return np.bincount(self.color.ravel(), minlength=self.rank).tolist()

    @property
    def homogeneous(self) -> bool:
        return len(self.diag_classes) == 1

    @property
    def symmetric(self) -> bool:
        return all(self.transpose[i] == i for i in range(self.rank))

    def intersection_numbers(self) -> np.ndarray:
        """p[i, j, k] = #{z : (x,z) in R_i, (z,y) in R_j} for (x,y) in R_k (rank <= 16)."""
        if "p" in self._intersections:
            return self._intersections["p"]
        if self.rank > INTERSECTION_RANK_CAP:
            raise ValidationError(f"intersection numbers are stored only for rank <= {INTERSECTION_RANK_CAP}")
        r = self.rank
        mats = _relation_matrices(self.color, r)
        xs = np.array([rep[0] for rep in self.class_reps])
        ys = np.array([rep[1] for rep in self.class_reps])
        p = np.zeros((r, r, r), dtype=np.int64)
        for i in range(r):
            rows = mats[i][xs]
            for j in range(r):
                p[i, j] = np.rint((rows * mats[j][:, ys].T).sum(axis=1)).astype(np.int64)
        self._intersections["p"] = p
        return p

    @property
    def commutative(self) -> bool:
        if self.rank > INTERSECTION_RANK_CAP:
            raise ValidationError(f"commutativity is checked only for rank <= {INTERSECTION_RANK_CAP}")
        p = self.intersection_numbers()
        return bool(np.array_equal(p, p.transpose(1, 0, 2)))


def _relation_matrices(color: np.ndarray, r: int) -> list[np.ndarray]:
    dtype = np.float32 if color.shape[0] < 2**24 else np.float64
    return [(color == i).astype(dtype) for i in range(r)]


def _canonical(key: np.ndarray, n: int) -> tuple[np.ndarray, int]:
    """Renumber classes by first occurrence in row-major pair order."""
    _, first, inv = np.unique(key, return_index=True, return_inverse=True)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    return relabel[inv.reshape(-1)].reshape(n, n), len(order)


SORT_REFINE_MAX_N = 256


def _refine_sorted(color: np.ndarray, r: int) -> tuple[np.ndarray, int]:
    """Exact refinement from the sorted multisets {(c(x,z), c(z,y)) : z}; O(n^3 log n)."""
    n = color.shape[0]
    rows = np.empty((n, n, n + 1), dtype=np.int64)
    rows[:, :, 0] = color
    for x in range(n):
        codes = color[x][:, None] * r + color  # [z, y]
        rows[x, :, 1:] = np.sort(codes.T, axis=1)
    _, key = np.unique(rows.reshape(n * n, n + 1), axis=0, return_inverse=True)
    return _canonical(key.reshape(-1), n)


def _refine_once(color: np.ndarray, r: int) -> tuple[np.ndarray, int]:
    n = color.shape[0]
    if n <= SORT_REFINE_MAX_N and r * r > n:
        return _refine_sorted(color, r)
    mats = _relation_matrices(color, r)
    key = color.reshape(-1).astype(np.int64)
    for i in range(r):
        for j in range(r):
            prod = np.rint(mats[i] @ mats[j]).astype(np.int64).reshape(-1)
            _, key = np.unique(key * (n + 1) + prod, return_inverse=True)
            key = key.reshape(-1)
    return _canonical(key, n)


def initial_coloring(g: Graph) -> np.ndarray:
    color = np.where(g.adj, 1, 2).astype(np.int64)
    np.fill_diagonal(color, 0)
    return color


def refine(color: np.ndarray, max_rounds: int | None = None) -> tuple[np.ndarray, int, int]:
    """Refine a pair colouring to the coarsest stable colouring below it."""
    n = color.shape[0]
    color, r = _canonical(color.reshape(-1), n)
    rounds = 0
    while max_rounds is None or rounds < max_rounds:
        new, r_new = _refine_once(color, r)
        rounds += 1
        log.debug("WL round %d: %d -> %d classes", rounds, r, r_new)
        if r_new == r:
            return new, r, rounds
        color, r = new, r_new
    return color, r, rounds


def _build(color: np.ndarray, r: int, rounds: int) -> CoherentConfiguration:
    n = color.shape[0]
    flat = color.reshape(-1)
    _, first = np.unique(flat, return_index=True)
    reps = tuple((int(ix // n), int(ix % n)) for ix in first)
    transpose = tuple(int(color[y, x]) for x, y in reps)
    diag = frozenset(np.unique(np.diag(color)).tolist())
    return CoherentConfiguration(n, color, r, reps, transpose, diag, rounds)


def wl_closure(g: Graph, cap: int = DEFAULT_CAP) -> CoherentConfiguration:
    if g.n > cap:
        raise ValidationError(f"graph has {g.n} vertices, above the WL cap {cap}")
    color, r, rounds = refine(initial_coloring(g))
    return _build(color, r, rounds)


def coherent_rank(g: Graph, cap: int = DEFAULT_CAP) -> int:
    return wl_closure(g, cap).rank


# -- axioms ------------------------------------------------------------------

def verify_axioms(c: CoherentConfiguration, exhaustive: bool | None = None, samples: int = 10_000,
                  seed: int = 0) -> dict[str, bool]:
    """Check CC1-CC4; CC4 exhaustively for n <= 128 (or when asked), else on random triples."""
    color, r, n = c.color, c.rank, c.n
    out = {}
    out["CC1"] = bool(color.min() >= 0 and color.max() == r - 1 and len(np.unique(color)) == r)
    out["CC2"] = all(
        np.array_equal(color.T == i, color == c.transpose[i]) for i in range(r)
    )
    diag_mask = np.eye(n, dtype=bool)
    out["CC3"] = all(not np.any(color[~diag_mask] == d) for d in c.diag_classes)
    if exhaustive is None:
        exhaustive = n <= 128
    mats = _relation_matrices(color, r)
    ok = True
    if exhaustive:
        for i in range(r):
            for j in range(r):
                prod = np.rint(mats[i] @ mats[j]).astype(np.int64)
                for k in range(r):
                    vals = prod[color == k]
                    if vals.min() != vals.max():
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
    else:
        rng = np.random.default_rng(seed)
        p = c.intersection_numbers() if r <= INTERSECTION_RANK_CAP else None
        for _ in range(samples):
            i, j = rng.integers(r, size=2)
            x, y = rng.integers(n, size=2)
            k = color[x, y]
            val = int(np.rint(mats[i][x] @ mats[j][:, y]))
            if p is not None:
                ref = int(p[i, j, k])
            else:
                rx, ry = c.class_reps[k]
                ref = int(np.rint(mats[i][rx] @ mats[j][:, ry]))
            if val != ref:
                ok = False
                break
    out["CC4"] = ok
    return out


def structural_flags(c: CoherentConfiguration) -> dict[str, bool]:
    flags = {"homogeneous": c.homogeneous, "symmetric": c.symmetric}
    flags["commutative"] = c.commutative if c.rank <= INTERSECTION_RANK_CAP else None
    return flags


@dataclass(frozen=True)
class SupportInfo:
    classes: tuple[int, ...]

    @property
    def cardinality(self) -> int:
        return len(self.classes)


def support(g: Graph, c: CoherentConfiguration) -> SupportInfo:
    """Closure classes whose union is the edge relation."""
    classes = tuple(sorted(np.unique(c.color[g.adj]).tolist()))
    union = np.isin(c.color, classes)
    if not np.array_equal(union, g.adj):
        raise InternalInconsistency("adjacency is not a union of closure classes")
    return SupportInfo(classes)


def rank_bound_check(g: Graph, c: CoherentConfiguration, m: int | None = None) -> dict:
    """rank <= m + 3 for Gamma_m graphs; rank >= 3 for non-complete non-empty graphs."""
    report: dict = {"rank": c.rank}
    if m is not None:
        report["upper_bound"] = m + 3
        report["upper_ok"] = c.rank <= m + 3
    edges = int(g.adj.sum())
    nontrivial = 0 < edges < g.n * (g.n - 1)
    if nontrivial:
        report["lower_ok"] = c.rank >= 3
    report["ok"] = report.get("upper_ok", True) and report.get("lower_ok", True)
    return report


# -- distinct-eigenvalue lower bound -----------------------------------------

SPECTRAL_CAP = 256
_SPECTRAL_PRIMES = (67_108_859, 67_108_837, 67_108_819)


def _rank_mod_p(rows: np.ndarray, p: int) -> int:
    a = rows.copy() % p
    r = 0
    nrows, ncols = a.shape
    for col in range(ncols):
        piv = np.nonzero(a[r:, col])[0]
        if piv.size == 0:
            continue
        k = r + int(piv[0])
        a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, col]), -1, p)
        a[r] = a[r] * inv % p
        others = np.nonzero(a[:, col])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - a[others, col][:, None] * a[r][None, :]) % p
        r += 1
        if r == nrows:
            break
    return r


def minimal_polynomial_degree(g: Graph, cap: int = SPECTRAL_CAP) -> int:
    """Degree of the minimal polynomial of A(g), i.e. its number of distinct eigenvalues.

    Computed from the linear dependency of I, A, A^2, ... reduced modulo a few
    26-bit primes; a reduction can only lose rank, so the maximum is taken.
    """
    n = g.n
    if n > cap:
        raise ValidationError(f"spectral bound is capped at {cap} vertices")
    if n == 0:
        return 0
    a = g.adj.astype(np.int64)
    best = 0
    for p in _SPECTRAL_PRIMES:
        powers = [np.eye(n, dtype=np.int64).reshape(-1)]
        cur = np.eye(n, dtype=np.int64)
        deg = n
        for d in range(1, n + 1):
            cur = (cur @ a) % p
            powers.append(cur.reshape(-1))
            if _rank_mod_p(np.array(powers), p) < len(powers):
                deg = d
                break
        best = max(best, deg)
    return best


# -- Schur partition of GF(q1) x GF(q2) ----------------------------------------

SCHUR_CAP = 5000


@dataclass(frozen=True)
class SchurReport:
    m: int
    q1: int
    q2: int
    products: int
    mismatches: tuple[str, ...]
    printed_dd2_mismatches: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "m": self.m, "q1": self.q1, "q2": self.q2, "products": self.products, "ok": self.ok,
            "mismatches": list(self.mismatches), "printed_dd2_mismatches": list(self.printed_dd2_mismatches),
        }


def _schur_prediction(spec, t1, t2, x: int, y: int, printed_dd2: bool = False) -> np.ndarray:
    """Expected coefficients of basis x times basis y over [O, C1, C2, D0..D_{m-1}]."""
    from .cyclotomy import x_sum

    m, n1, n2, q1, q2 = spec.m, spec.n1, spec.n2, spec.q1, spec.q2
    out = np.zeros(m + 3, dtype=np.int64)
    if x > y:
        x, y = y, x
    if x == 0:
        out[y] = 1
        return out
    qs, ns = (None, q1, q2), (None, n1, n2)
    if x in (1, 2) and y == x:
        out[0], out[x] = qs[x] - 1, qs[x] - 2
        return out
    if (x, y) == (1, 2):
        out[3:] = 1
        return out
    if x in (1, 2):
        i, j = x, y - 3
        ni = ns[i]
        out[3 + j] = ni - 1
        out[3 - i] = ni  # the other C
        for k in range(m):
            if k != j:
                out[3 + k] = ni
        return out
    i, j = x - 3, y - 3
    f = np.zeros(m + 3, dtype=np.int64)
    f[1] = f[2] = n1 * n2
    for k in range(m):
        f[3 + k] = x_sum(t1, t2, i, j, k)
    gg = f.copy()
    gg[1] -= n2
    gg[2] -= n1
    same = (q1 * n1) % 2 == (q2 * n2) % 2
    if same:
        if i == j:
            gg[0] = m * n1 * n2
            return gg
        return f
    half = (i - j - m // 2) % m == 0
    if printed_dd2:
        if i == j:
            f[0] = m * n1 * n2
            return f
        return gg if half else f
    # -D_j = D_{j + m/2} here, so the identity term sits on the G-case
    if half:
        gg[0] = m * n1 * n2
        return gg
    return f


def schur_verify(spec, t1=None, t2=None) -> SchurReport:
    """Convolve every pair of the m + 3 basic sets and compare with the predicted expansion."""
    from .constructions import build_classes
    from .cyclotomy import cyclotomic_numbers
    from .graphs import group_ring_mul, indicator

    if spec.q1 * spec.q2 > SCHUR_CAP:
        raise ValidationError(f"q1*q2 = {spec.q1 * spec.q2} exceeds the Schur check cap {SCHUR_CAP}")
    if t1 is None:
        t1 = cyclotomic_numbers(spec.field1, spec.dlog1, spec.m)
    if t2 is None:
        t2 = cyclotomic_numbers(spec.field2, spec.dlog2, spec.m)
    group = spec.group
    named = build_classes(spec).named()
    label = np.full(group.size, -1, dtype=np.int64)
    for idx, (_, elems) in enumerate(named):
        label[elems] = idx
    if (label < 0).any():
        raise InternalInconsistency("basic sets do not cover the group")
    reps = [int(elems[0]) for _, elems in named]
    vecs = [indicator(group, elems) for _, elems in named]
    mismatches, printed = [], []
    count = 0
    for x in range(len(named)):
        for y in range(x, len(named)):
            prod = group_ring_mul(group, vecs[x], vecs[y])
            count += 1
            coef = prod[reps]
            pair = f"{named[x][0]}*{named[y][0]}"
            if not np.array_equal(prod, coef[label]):
                bad = int(np.nonzero(prod != coef[label])[0][0])
                mismatches.append(f"{pair}: not constant on {named[label[bad]][0]} (element {bad})")
                continue
            want = _schur_prediction(spec, t1, t2, x, y)
            if not np.array_equal(coef, want):
                mismatches.append(f"{pair}: got {coef.tolist()}, predicted {want.tolist()}")
            if x >= 3 and not np.array_equal(coef, _schur_prediction(spec, t1, t2, x, y, printed_dd2=True)):
                printed.append(pair)
    return SchurReport(spec.m, spec.q1, spec.q2, count, tuple(mismatches), tuple(printed))
