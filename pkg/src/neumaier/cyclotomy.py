"""Cyclotomic numbers of order m and the sums of their products.

Brute force (one pass over a discrete-log table) is the reference; the closed
forms for m = 2, 3, 4 are accelerators that must agree with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sympy import factorint

from .errors import InternalInconsistency, ValidationError
from .finitefield import DlogTable, FieldSpec, add_one, default_dlog, primitive_elements


@dataclass(frozen=True, eq=False)
class CyclotomicTable:
    """``counts[a, b]`` = |{alpha^k + 1 : k = a mod m} ∩ {alpha^k : k = b mod m}|."""

    q: int
    m: int
    counts: np.ndarray
    alpha_id: int = -1

    @property
    def n(self) -> int:
        return (self.q - 1) // self.m

    def __getitem__(self, ab: tuple[int, int]) -> int:
        a, b = ab
        return int(self.counts[a % self.m, b % self.m])

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclotomicTable):
            return NotImplemented
        return self.q == other.q and self.m == other.m and np.array_equal(self.counts, other.counts)

    def relabel(self, s: int) -> "CyclotomicTable":
        """Table for alpha^s where s is a unit mod m: c(alpha^s; a, b) = c(alpha; s a, s b)."""
        if math.gcd(s, self.m) != 1:
            raise ValidationError(f"multiplier {s} is not a unit modulo {self.m}")
        idx = (s * np.arange(self.m)) % self.m
        return CyclotomicTable(self.q, self.m, self.counts[np.ix_(idx, idx)], -1)

    def to_json(self) -> dict:
        return {"q": self.q, "m": self.m, "alpha": self.alpha_id, "counts": self.counts.tolist()}


@dataclass(frozen=True)
class UVPair:
    """4q = u^2 + 27 v^2 (m = 3) or q = u^2 + 4 v^2 (m = 4); the sign of v is tied to alpha."""

    m: int
    q: int
    u: int
    v: int


def _check_order(q: int, m: int) -> None:
    if m < 2:
        raise ValidationError(f"order m must be >= 2, got {m}")
    if (q - 1) % m:
        raise ValidationError(f"m = {m} does not divide q - 1 = {q - 1}")


def cyclotomic_numbers(f: FieldSpec, dl: DlogTable, m: int) -> CyclotomicTable:
    q = f.q
    _check_order(q, m)
    j = np.arange(q - 1)
    shifted = add_one(f, dl.pow)
    nz = shifted != 0
    k = dl.log[shifted[nz]]
    counts = np.zeros((m, m), dtype=np.int64)
    np.add.at(counts, (j[nz] % m, k % m), 1)
    return CyclotomicTable(q, m, counts, int(dl.alpha))


def table_for(q: int, m: int, alpha_index: int = 0) -> CyclotomicTable:
    from .finitefield import field_for_order

    f = field_for_order(q)
    return cyclotomic_numbers(f, default_dlog(f, alpha_index), m)


def _div(num: int, den: int, what: str) -> int:
    if num % den:
        raise ValidationError(f"closed form for {what} is not integral ({num}/{den}); wrong u/v or sign")
    val = num // den
    if val < 0:
        raise ValidationError(f"closed form for {what} is negative ({val}); wrong u/v or sign")
    return val


def closed_form(m: int, q: int, uv: UVPair | None = None) -> CyclotomicTable:
    """Cyclotomic table from the classical formulas for m in {2, 3, 4}."""
    if m not in (2, 3, 4):
        raise ValidationError(f"closed forms exist only for m in {{2,3,4}}, got {m}")
    _check_order(q, m)
    n = (q - 1) // m
    rn = n % 2
    c = np.zeros((m, m), dtype=np.int64)
    if m == 2:
        c[0, rn] = _div(n - 2 + 3 * rn, 2, "c2(0,r)")
        c[0, 1 - rn] = c[1, 0] = c[1, 1] = _div(n - rn, 2, "c2(1,0)")
        return CyclotomicTable(q, 2, c)
    if uv is None or uv.m != m or uv.q != q:
        raise ValidationError(f"closed form of order {m} needs the (u, v) pair of q = {q}")
    u, v = uv.u, uv.v
    if m == 3:
        c[0, 0] = _div(q - 8 + u, 9, "c3(0,0)")
        c[0, 1] = c[1, 0] = c[2, 2] = _div(2 * q - 4 - u - 9 * v, 18, "c3(0,1)")
        c[0, 2] = c[2, 0] = c[1, 1] = _div(2 * q - 4 - u + 9 * v, 18, "c3(0,2)")
        c[1, 2] = c[2, 1] = _div(q + 1 + u, 9, "c3(1,2)")
        return CyclotomicTable(q, 3, c)
    s = 2 * rn
    c[0, s % 4] = _div(q - 6 * u - 11 + 12 * rn, 16, "c4(0,2r)")
    x = _div(q + 2 * u - 3 - 8 * v + 4 * rn, 16, "c4(1,1+2r)")
    for a, b in ((1, 1 + s), (0, 3 + s), (3, s)):
        c[a, b % 4] = x
    x = _div(q + 2 * u - 3 - 4 * rn, 16, "c4(2,2+2r)")
    for a, b in ((2, 2 + s), (0, 2 + s), (2, s)):
        c[a, b % 4] = x
    x = _div(q + 2 * u - 3 + 8 * v + 4 * rn, 16, "c4(0,1+2r)")
    for a, b in ((3, 3 + s), (0, 1 + s), (1, s)):
        c[a, b % 4] = x
    # (q + 1 - 2u - 4r)/16; agrees with brute force for both parities of n
    x = _div(q - 2 * u + 1 - 4 * rn, 16, "c4(i,j+2r)")
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i != j:
                c[i, (j + s) % 4] = x
    return CyclotomicTable(q, 4, c)


def _isqrt_exact(x: int) -> int | None:
    if x < 0:
        return None
    r = math.isqrt(x)
    return r if r * r == x else None


def u_value(q: int, m: int) -> tuple[int, int]:
    """The unique u and |v| for q under the congruence and gcd side conditions."""
    if m not in (3, 4):
        raise ValidationError(f"u/v decomposition is defined for m in {{3,4}}, got {m}")
    _check_order(q, m)
    ((p, _),) = factorint(q).items()
    target, coef = (4 * q, 27) if m == 3 else (q, 4)
    found = []
    v = 0
    while coef * v * v <= target:
        w = _isqrt_exact(target - coef * v * v)
        if w is not None:
            for u in {w, -w}:
                if u % m != 1:
                    continue
                if p % m == 1 and math.gcd(u, p) != 1:
                    continue
                found.append((u, v))
        v += 1
    us = {u for u, _ in found}
    if len(us) != 1:
        raise InternalInconsistency(f"expected a unique u for q={q}, m={m}; found {sorted(found)}")
    (u,) = us
    vs = {v for uu, v in found if uu == u}
    if len(vs) != 1:
        raise InternalInconsistency(f"expected a unique |v| for q={q}, m={m}; found {sorted(found)}")
    return u, vs.pop()


def _calibration_entry(m: int, q: int, u: int, v: int) -> tuple[tuple[int, int], int]:
    n = (q - 1) // m
    if m == 3:
        return (0, 1), 2 * q - 4 - u - 9 * v
    rn = n % 2
    return (0, (1 + 2 * rn) % 4), q + 2 * u - 3 + 8 * v + 4 * rn


def calibrate_sign(table: CyclotomicTable, u: int, v_abs: int) -> int:
    """The signed v matching one brute-force cyclotomic number of ``table``."""
    m, q = table.m, table.q
    den = 18 if m == 3 else 16
    matches = []
    for v in sorted({v_abs, -v_abs}):
        (a, b), num = _calibration_entry(m, q, u, v)
        if num % den == 0 and num // den == table[a, b]:
            matches.append(v)
    if not matches:
        raise InternalInconsistency(f"no sign of v={v_abs} matches the cyclotomic table of q={q}, m={m}")
    return matches[0]


def uv_decomposition(f: FieldSpec, dl: DlogTable, m: int) -> UVPair:
    u, v_abs = u_value(f.q, m)
    table = cyclotomic_numbers(f, dl, m)
    return UVPair(m, f.q, u, calibrate_sign(table, u, v_abs))


def x_sum(t1: CyclotomicTable, t2: CyclotomicTable, i: int, j: int, k: int) -> int:
    """sum_{a,b} c(alpha1; a, b) c(alpha2; a+i-j, b+i-k)."""
    if t1.m != t2.m:
        raise ValidationError(f"tables have different orders {t1.m} and {t2.m}")
    m = t1.m
    ra = (np.arange(m) + i - j) % m
    rb = (np.arange(m) + i - k) % m
    return int((t1.counts * t2.counts[np.ix_(ra, rb)]).sum())


def x_row(t1: CyclotomicTable, t2: CyclotomicTable) -> list[int]:
    """[X_{0,0,k} for k in 0..m-1]."""
    return [x_sum(t1, t2, 0, 0, k) for k in range(t1.m)]


def minus_one_is_power(p: int, m: int) -> bool:
    """Whether -1 is a power of p modulo m."""
    target = (-1) % m
    x = 1 % m
    seen = set()
    while x not in seen:
        if x == target:
            return True
        seen.add(x)
        x = x * p % m
    return False


def is_uniform(t: CyclotomicTable) -> tuple[bool, dict]:
    """Uniformity of the table; when uniform also checks the closed form in r = sqrt(q)."""
    m = t.m
    c = t.counts
    base = c[0, 1]
    uniform = True
    for i in range(1, m):
        if not (c[i, 0] == c[0, i] == c[i, i] == base):
            uniform = False
        for j in range(1, m):
            if i != j and c[i, j] != c[1, 2]:
                uniform = False
    info: dict = {"uniform": uniform}
    if uniform and m > 2:
        # r is the square root of q with r = 1 (mod m); it may be negative
        s = _isqrt_exact(t.q)
        r = None if s is None else next((x for x in (s, -s) if (x - 1) % m == 0), None)
        info["r"] = r
        ok = r is not None
        if ok:
            c00 = ((r - 1) ** 2 - m * (m - 3) * (r - 1) - m * m) // (m * m)
            ok = (
                ((r - 1) ** 2 - m * (m - 3) * (r - 1) - m * m) % (m * m) == 0
                and c[0, 0] == c00
                and base * m * m == (r - 1) * (r - 1 + m)
                and c[1, 2] * m * m == (r - 1) ** 2
            )
        info["closed_form_ok"] = bool(ok)
    return uniform, info


def distinct_tables(q: int, m: int) -> list[tuple[int, CyclotomicTable]]:
    """(unit s mod m, table of alpha0^s) for every unit s; alpha0 is the first primitive element."""
    base = table_for(q, m)
    return [(s, base.relabel(s)) for s in range(1, m) if math.gcd(s, m) == 1]


def alpha_index_for_multiplier(q: int, s: int, m: int) -> int:
    """Index into primitive_elements(GF(q)) of the first alpha0^s' with s' = s (mod m)."""
    from .finitefield import dlog_table, field_for_order

    f = field_for_order(q)
    gens = primitive_elements(f)
    dl = dlog_table(f, gens[0])
    for idx, g in enumerate(gens):
        if int(dl.log[g]) % m == s % m:
            return idx
    raise InternalInconsistency(f"no primitive element of GF({q}) with log = {s} mod {m}")


def sum_rule_violations(t: CyclotomicTable) -> list[str]:
    """Symmetry and row/column sum identities every table must satisfy; empty when all hold."""
    m, n, q = t.m, t.n, t.q
    c = t.counts
    out = []
    qn_odd = (q * n) % 2 == 1
    for a in range(m):
        for b in range(m):
            if qn_odd:
                other = c[(b + m // 2) % m, (a + m // 2) % m]
            else:
                other = c[b, a]
            if c[a, b] != other:
                out.append(f"symmetry fails at ({a}, {b}): {c[a, b]} != {other}")
    col = c.sum(axis=0)
    for b in range(m):
        want = n - 1 if b == 0 else n
        if col[b] != want:
            out.append(f"sum over a for b={b} is {col[b]}, expected {want}")
    row = c.sum(axis=1)
    special = m // 2 if qn_odd else 0
    for a in range(m):
        want = n - 1 if a == special else n
        if row[a] != want:
            out.append(f"sum over b for a={a} is {row[a]}, expected {want}")
    return out


def vandiver_violations(t: CyclotomicTable) -> list[str]:
    """X_{0,0,0}(a,a) = (n-1)^2 + n(m-1) and X_{0,0,i}(a,a) = n(n-1) for i != 0."""
    m, n = t.m, t.n
    out = []
    for i, x in enumerate(x_row(t, t)):
        want = (n - 1) ** 2 + n * (m - 1) if i == 0 else n * (n - 1)
        if x != want:
            out.append(f"X_(0,0,{i}) = {x}, expected {want}")
    return out
