"""Finite abelian groups, Cayley graphs, group-ring products and graph files."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .finitefield import FieldSpec

MAX_VERTICES = 50_000


@dataclass(frozen=True)
class AbelianGroup:
    """Product of cyclic groups Z/orders[0] x ... x Z/orders[-1].

    Elements are indexed mixed-radix with the last factor least significant,
    so GF(q1) x GF(q2) built by :meth:`field_pair` indexes (x1, x2) as
    ``x1 * q2 + x2`` where x1, x2 are the field encodings.
    """

    orders: tuple[int, ...]
    label: str = ""

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @classmethod
    def cyclic(cls, *orders: int) -> "AbelianGroup":
        return cls(tuple(orders), "x".join(f"Z/{o}" for o in orders))

    @classmethod
    def field_pair(cls, f1: FieldSpec, f2: FieldSpec) -> "AbelianGroup":
        return cls((f1.p,) * f1.r + (f2.p,) * f2.r, f"GF({f1.q})xGF({f2.q})")

    def digits(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        out = np.empty(x.shape + (len(self.orders),), dtype=np.int64)
        for pos in range(len(self.orders) - 1, -1, -1):
            x, out[..., pos] = np.divmod(x, self.orders[pos])
        return out

    def index(self, digits) -> np.ndarray:
        d = np.asarray(digits, dtype=np.int64)
        out = np.zeros(d.shape[:-1], dtype=np.int64)
        for pos, o in enumerate(self.orders):
            out = out * o + d[..., pos] % o
        return out

    def add(self, x, y) -> np.ndarray:
        return self.index(self.digits(x) + self.digits(y))

    def neg(self, x) -> np.ndarray:
        return self.index(-self.digits(x))


@dataclass(frozen=True)
class ConnectionSet:
    members: tuple[int, ...]
    label: str = ""

    @classmethod
    def of(cls, members, label: str = "") -> "ConnectionSet":
        return cls(tuple(sorted({int(x) for x in members})), label)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with a dense boolean adjacency matrix."""

    n: int
    adj: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        a = self.adj
        if a.shape != (self.n, self.n):
            raise ValidationError(f"adjacency shape {a.shape} does not match n={self.n}")
        if a.dtype != bool:
            object.__setattr__(self, "adj", a.astype(bool))
        if self.adj.flags.writeable:
            object.__setattr__(self, "adj", self.adj.copy())
            self.adj.setflags(write=False)

    @classmethod
    def from_adjacency(cls, adj, meta: dict | None = None) -> "Graph":
        adj = np.asarray(adj, dtype=bool)
        n = adj.shape[0]
        if n > MAX_VERTICES:
            raise ValidationError(f"{n} vertices exceed the cap {MAX_VERTICES}")
        if np.any(np.diag(adj)):
            raise ValidationError("graph has loops")
        if not np.array_equal(adj, adj.T):
            i, j = np.argwhere(adj != adj.T)[0]
            raise ValidationError(f"adjacency is not symmetric at ({i}, {j})")
        return cls(n, adj, dict(meta or {}))

    @classmethod
    def from_edges(cls, n: int, edges, meta: dict | None = None) -> "Graph":
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValidationError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise ValidationError(f"loop at vertex {i}")
            adj[i, j] = adj[j, i] = True
        return cls(n, adj, dict(meta or {}))

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adj, 1))
        return list(zip(i.tolist(), j.tolist()))

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def num_edges(self) -> int:
        return int(self.adj.sum()) // 2


def cayley_graph(g: AbelianGroup, s: ConnectionSet, meta: dict | None = None) -> Graph:
    """x ~ x + s for s in S; S must be inverse-closed and avoid the identity."""
    n = g.size
    if n > MAX_VERTICES:
        raise ValidationError(f"{n} vertices exceed the cap {MAX_VERTICES}")
    members = np.asarray(s.members, dtype=np.int64)
    if members.size and (members.min() < 0 or members.max() >= n):
        raise ValidationError("connection set has elements outside the group")
    if 0 in s.members:
        raise ValidationError("connection set contains the identity")
    if members.size:
        negs = g.neg(members)
        missing = np.setdiff1d(negs, members)
        if missing.size:
            x = int(g.neg(missing[:1])[0])
            raise ValidationError(
                f"connection set is not closed under negation: {x} in S but {int(missing[0])} = -{x} is not"
            )
    adj = np.zeros((n, n), dtype=bool)
    if members.size:
        xs = np.arange(n, dtype=np.int64)
        adj[xs[:, None], g.add(xs[:, None], members[None, :])] = True
    info = {"group": list(g.orders), "connection_set": s.label}
    info.update(meta or {})
    return Graph(n, adj, info)


# -- group ring --------------------------------------------------------------

def indicator(g: AbelianGroup, elements) -> np.ndarray:
    v = np.zeros(g.size, dtype=np.int64)
    v[np.asarray(list(elements), dtype=np.int64)] = 1
    return v


def group_ring_mul(g: AbelianGroup, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Convolution (sum_x a_x x)(sum_y b_y y) over the group, exact on integer input."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != (g.size,) or b.shape != (g.size,):
        raise ValidationError(f"group ring vectors must have length {g.size}")
    shape = g.orders
    fa = np.fft.fftn(a.reshape(shape).astype(np.float64))
    fb = np.fft.fftn(b.reshape(shape).astype(np.float64))
    c = np.fft.ifftn(fa * fb).real.reshape(-1)
    out = np.rint(c)
    err = np.abs(c - out).max() if c.size else 0.0
    bound = float(np.abs(a).sum()) * float(np.abs(b).sum())
    if err > 0.25 or bound > 2**50:
        raise AssertionError(f"convolution lost integrality (max residual {err})")
    return out.astype(np.int64)


# -- serialisation ----------------------------------------------------------

def to_json(graph: Graph) -> str:
    payload = {"n": graph.n, "edges": [list(e) for e in graph.edges()], "meta": graph.meta}
    return json.dumps(payload, sort_keys=True)


def from_json(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed graph JSON at byte {exc.pos}: {exc.msg}") from None
    if not isinstance(data, dict) or "n" not in data or "edges" not in data:
        raise ValidationError("graph JSON needs keys 'n' and 'edges'")
    n = int(data["n"])
    if n < 0 or n > MAX_VERTICES:
        raise ValidationError(f"vertex count {n} out of range")
    return Graph.from_edges(n, [tuple(e) for e in data["edges"]], data.get("meta") or {})


def _g6_size(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def to_graph6(graph: Graph) -> str:
    n = graph.n
    iu = np.triu_indices(n, 1)
    # graph6 orders the upper triangle column by column: (0,1),(0,2),(1,2),(0,3),...
    order = np.lexsort((iu[0], iu[1]))
    bits = graph.adj[iu[0][order], iu[1][order]].astype(np.uint8)
    pad = (-len(bits)) % 6
    bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    groups = bits.reshape(-1, 6) @ (1 << np.arange(5, -1, -1)) if bits.size else np.zeros(0, int)
    return (_g6_size(n) + bytes((groups + 63).astype(np.uint8).tolist())).decode("ascii")


def from_graph6(text: str) -> Graph:
    data = text.strip().encode("ascii")
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    if not data:
        raise ValidationError("graph6 parse error at byte 0: empty input")
    for pos, ch in enumerate(data):
        if not 63 <= ch <= 126:
            raise ValidationError(f"graph6 parse error at byte {pos}: invalid character {chr(ch)!r}")
    if data[0] != 126:
        n, off = data[0] - 63, 1
    elif len(data) > 1 and data[1] == 126:
        if len(data) < 8:
            raise ValidationError(f"graph6 parse error at byte {len(data)}: truncated size header")
        n = 0
        for ch in data[2:8]:
            n = (n << 6) | (ch - 63)
        off = 8
    else:
        if len(data) < 4:
            raise ValidationError(f"graph6 parse error at byte {len(data)}: truncated size header")
        n = 0
        for ch in data[1:4]:
            n = (n << 6) | (ch - 63)
        off = 4
    if n > MAX_VERTICES:
        raise ValidationError(f"graph6 header declares {n} vertices, above the cap")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[off:]
    if len(body) != need:
        raise ValidationError(
            f"graph6 parse error at byte {off + min(len(body), need)}: expected {need} data bytes, got {len(body)}"
        )
    vals = np.frombuffer(body, dtype=np.uint8).astype(np.int64) - 63
    bits = ((vals[:, None] >> np.arange(5, -1, -1)) & 1).reshape(-1)[:nbits].astype(bool)
    iu = np.triu_indices(n, 1)
    order = np.lexsort((iu[0], iu[1]))
    adj = np.zeros((n, n), dtype=bool)
    adj[iu[0][order], iu[1][order]] = bits
    adj |= adj.T
    return Graph(n, adj, {})


def write_graph(graph: Graph, path: str | Path, fmt: str | None = None) -> None:
    path = Path(path)
    fmt = fmt or ("graph6" if path.suffix in (".g6", ".graph6") else "json")
    text = to_graph6(graph) + "\n" if fmt == "graph6" else to_json(graph) + "\n"
    path.write_text(text)


def read_graph(path: str | Path, fmt: str | None = None) -> Graph:
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"graph file not found: {path}")
    text = path.read_text()
    if fmt is None:
        fmt = "graph6" if path.suffix in (".g6", ".graph6") or not text.lstrip().startswith("{") else "json"
    return from_graph6(text) if fmt == "graph6" else from_json(text)
