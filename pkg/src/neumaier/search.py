"""Searches for prime-power pairs (q1, q2) whose Gamma_m graph is Neumaier.

For m = 3, 4 the search is analytic (quadratic-form data u, v and a bounded
window for q2); for general m it evaluates X_{0,0,0} from brute-force tables.
Hits are then witnessed by concrete primitive elements and optionally built.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from functools import lru_cache

import numpy as np
from sympy import factorint, primerange

from .coherent import DEFAULT_CAP, coherent_rank
from .constructions import GammaSpec, canonical_clique, gamma
from .cyclotomy import (
    CyclotomicTable,
    alpha_index_for_multiplier,
    calibrate_sign,
    distinct_tables,
    u_value,
)
from .errors import InternalInconsistency, ValidationError
from .regularity import classify, classify_gamma, mu_spectrum_prediction

CONSTRUCT_CAP = 5000
VERIFY_LEVELS = ("none", "construct", "wl")


@dataclass(frozen=True)
class SearchHit:
    m: int
    q1: int
    q2: int
    u1: int | None
    v1: int | None
    u2: int | None
    v2: int | None
    nexus: int
    alpha1: int = 0
    alpha2: int = 0
    coprime: bool = True
    srg: bool = False
    verified: str = "analytic-only"
    rank: int | None = None

    def __post_init__(self):
        if self.nexus * self.m + 1 != self.q1:
            raise InternalInconsistency(f"nexus {self.nexus} does not match q1 = {self.q1}, m = {self.m}")

    @property
    def spec(self) -> GammaSpec:
        return GammaSpec(self.m, self.q1, self.q2, self.alpha1, self.alpha2)

    def to_json(self) -> dict:
        return asdict(self)


CSV_COLUMNS = ("m", "q1", "q2", "u1", "v1", "u2", "v2", "nexus", "verified", "rank")


def csv_row(h: SearchHit) -> list:
    return ["" if getattr(h, c) is None else getattr(h, c) for c in CSV_COLUMNS]


# -- prime powers ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _prime_powers_upto(bound: int) -> tuple[tuple[int, int, int], ...]:
    out = []
    for p in primerange(2, bound + 1):
        q, r = p, 1
        while q <= bound:
            out.append((q, int(p), r))
            q *= p
            r += 1
    return tuple(sorted(out))


def prime_powers(m: int, bound: int) -> list[tuple[int, int, int]]:
    """(q, p, r) for every prime power q = p^r <= bound with q = 1 (mod m), ascending."""
    if m < 2:
        raise ValidationError(f"m must be >= 2, got {m}")
    return [t for t in _prime_powers_upto(bound) if (t[0] - 1) % m == 0]


def _is_prime_power(q: int) -> bool:
    return q >= 2 and len(factorint(q)) == 1


# -- witnesses ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def signed_v_by_unit(q: int, m: int) -> dict[int, int]:
    """Calibrated signed v for alpha0^s, keyed by unit s mod m."""
    u, v_abs = u_value(q, m)
    return {s: calibrate_sign(t, u, v_abs) for s, t in distinct_tables(q, m)}


def _witness(q: int, m: int, v: int) -> int:
    for s, vs in signed_v_by_unit(q, m).items():
        if vs == v:
            return alpha_index_for_multiplier(q, s, m)
    raise InternalInconsistency(f"no primitive element of GF({q}) realises v = {v} (m = {m})")


def _srg_predicted(spec: GammaSpec) -> bool:
    return len(mu_spectrum_prediction(spec)) == 1


def _finish(m: int, q1: int, q2: int, u1, v1, u2, v2, a1: int, a2: int) -> SearchHit:
    spec = GammaSpec(m, q1, q2, a1, a2)
    return SearchHit(
        m, q1, q2, u1, v1, u2, v2, (q1 - 1) // m, a1, a2,
        coprime=math.gcd(q1, q2) == 1, srg=_srg_predicted(spec),
    )


# -- m = 3 and m = 4 ------------------------------------------------------------

def _window(limit_sq_num: int, offset: int, scale: int, den: int) -> range:
    """A superset of the integers x with (den*x + offset)^2 <= limit_sq_num * scale^2."""
    r = math.isqrt(limit_sq_num * scale * scale) + 1
    return range((-r - offset) // den, (r - offset) // den + 2)


def _analytic_search(m: int, q1_max: int, scale: int) -> list[SearchHit]:
    hits = []
    for q1, _, _ in prime_powers(m, q1_max):
        u1, a1 = u_value(q1, m)
        n1 = (q1 - 1) // m
        found: dict[int, tuple] = {}
        for v1 in sorted({a1, -a1}):
            if m == 3:
                # (2 u2 + u1)^2 <= 36 q1 and 3 (2 v2 + v1)^2 <= 4 q1
                us = [x for x in _window(36 * q1, u1, scale, 2) if (2 * x + u1) ** 2 <= 36 * q1 * scale**2]
                vs = [y for y in _window(4 * q1 // 3 + 1, v1, scale, 2)
                      if 3 * (2 * y + v1) ** 2 <= 4 * q1 * scale**2]
            else:
                us = [x for x in _window(4 * q1, u1, scale, 1) if (x + u1) ** 2 <= 4 * q1 * scale**2]
                vs = [y for y in _window(q1, v1, scale, 1) if (y + v1) ** 2 <= q1 * scale**2]
            for u2 in us:
                if u2 % m != 1:
                    continue
                for v2 in vs:
                    if m == 3:
                        num = u2 * u2 + 27 * v2 * v2
                        if num % 4:
                            continue
                        q2 = num // 4
                    else:
                        q2 = u2 * u2 + 4 * v2 * v2
                    if q2 <= q1 or (q2 - 1) % m or not _is_prime_power(q2):
                        continue
                    if m == 4 and ((q2 - 1) // 4 - n1) % 2:
                        continue
                    if u_value(q2, m) != (u2, abs(v2)):
                        continue
                    lhs = 4 * (2 * q1 - q2) if m == 3 else 3 * q1 - q2
                    rhs = u1 * u2 + 27 * v1 * v2 if m == 3 else 2 * (u1 * u2 + 4 * v1 * v2)
                    if lhs == rhs and q2 not in found:
                        found[q2] = (u1, v1, u2, v2)
        for q2 in sorted(found):
            u1_, v1_, u2_, v2_ = found[q2]
            hits.append(_finish(m, q1, q2, u1_, v1_, u2_, v2_, _witness(q1, m, v1_), _witness(q2, m, v2_)))
    return hits


def solve_m3(q1_max: int, window_scale: int = 1) -> list[SearchHit]:
    """Pairs q1 < q2 with 4(2 q1 - q2) = u1 u2 + 27 v1 v2 for some signs of v1, v2."""
    if q1_max < 4:
        raise ValidationError("q1_max must be >= 4")
    return _analytic_search(3, q1_max, window_scale)


def solve_m4(q1_max: int, window_scale: int = 1) -> list[SearchHit]:
    """Pairs q1 < q2, n1 = n2 (mod 2), with (3 q1 - q2)/2 = u1 u2 + 4 v1 v2."""
    if q1_max < 5:
        raise ValidationError("q1_max must be >= 5")
    return _analytic_search(4, q1_max, window_scale)


# -- general m ------------------------------------------------------------------------

def _units(m: int) -> list[int]:
    return [s for s in range(1, m) if math.gcd(s, m) == 1]


def _tables(q: int, m: int) -> list[tuple[int, CyclotomicTable]]:
    return distinct_tables(q, m)


def general_search(m: int, q1_max: int, q2_max: int, q1_min: int = 2) -> list[SearchHit]:
    """Pairs q1 != q2 satisfying X_{0,0,0} = q1 + n1 n2 - 2 n1 - n2 and the parity condition.

    X_{0,0,0} only sees alpha through its cyclotomic table, and relabelling both
    tables by the same unit leaves it unchanged, so alpha1 is fixed at alpha0
    and alpha2 runs over one representative per unit class.  Among witnessing
    alpha2 a non-strongly-regular one is preferred.
    """
    q1s = [q for q, _, _ in prime_powers(m, q1_max) if q >= q1_min]
    q2s = [q for q, _, _ in prime_powers(m, q2_max)]
    if not q1s or not q2s:
        return []
    stacks = {}
    units = _units(m)
    for q2 in q2s:
        stacks[q2] = np.stack([t.counts for _, t in _tables(q2, m)])
    q2_arr = np.array(q2s)
    big = np.stack([stacks[q] for q in q2s])  # (N, U, m, m)
    n2 = (q2_arr - 1) // m
    hits = []
    for q1 in q1s:
        n1 = (q1 - 1) // m
        t1 = _tables(q1, m)[0][1].counts
        x000 = np.einsum("ab,nuab->nu", t1, big)
        target = q1 + n1 * n2 - 2 * n1 - n2
        parity = ((q1 * n1) % 2) == ((q2_arr * n2) % 2)
        ok = (x000 == target[:, None]) & parity[:, None] & (q2_arr != q1)[:, None]
        for idx in np.nonzero(ok.any(axis=1))[0]:
            q2 = int(q2_arr[idx])
            choice = None
            for ui in np.nonzero(ok[idx])[0]:
                a2 = alpha_index_for_multiplier(q2, units[ui], m)
                h = _finish(m, q1, q2, None, None, None, None, 0, a2)
                if choice is None or (choice.srg and not h.srg):
                    choice = h
            hits.append(choice)
    return hits


# -- verification -------------------------------------------------------------------

def expected_parameters(spec: GammaSpec) -> tuple[int, int, int, int, int]:
    q1, q2, n1, n2 = spec.q1, spec.q2, spec.n1, spec.n2
    return (q1 * q2, (q1 - 1) * (n2 + 1), q1 - 2 + (n1 - 1) * n2, n1, q1)


def verify_hit(hit: SearchHit, level: str = "wl", construct_cap: int = CONSTRUCT_CAP,
               wl_cap: int = DEFAULT_CAP) -> SearchHit:
    """Build the witness graph and confirm the Neumaier parameters (and WL rank when small).

    Up to ``construct_cap`` vertices the dense graph is built and classified;
    above it the connection set is built and classified by group-ring products.
    """
    if level not in VERIFY_LEVELS:
        raise ValidationError(f"verify level must be one of {VERIFY_LEVELS}")
    if level == "none":
        return hit
    spec = hit.spec
    v = hit.q1 * hit.q2
    g = None
    if v <= construct_cap:
        g = gamma(spec)
        report = classify(g, canonical_clique(spec), vertex_transitive=True)
    else:
        report = classify_gamma(spec)
    if report.parameters != expected_parameters(spec):
        raise InternalInconsistency(
            f"Gamma_{hit.m}({hit.q1},{hit.q2}) classified as {report.verdict} {report.parameters}, "
            f"expected {expected_parameters(spec)}"
        )
    if report.srg != hit.srg or report.mu_set != mu_spectrum_prediction(spec):
        raise InternalInconsistency(
            f"Gamma_{hit.m}({hit.q1},{hit.q2}): mu-set {report.mu_set} disagrees with the prediction"
        )
    if level == "wl" and g is not None and v <= wl_cap:
        return replace(hit, verified="wl-confirmed", rank=coherent_rank(g, wl_cap))
    return replace(hit, verified="constructed")


def _verify_all(hits, level, threads):
    if threads > 1 and len(hits) > 1:
        with ProcessPoolExecutor(threads) as ex:
            return list(ex.map(verify_hit, hits, [level] * len(hits)))
    return [verify_hit(h, level) for h in hits]


def search_pairs(m: int, q1_max: int, verify: str = "wl", include_srg: bool = False,
                 threads: int = 1) -> list[SearchHit]:
    if m == 3:
        hits = solve_m3(q1_max)
    elif m == 4:
        hits = solve_m4(q1_max)
    else:
        raise ValidationError(f"search pairs supports m in {{3,4}}, got {m}; use search nexus")
    if not include_srg:
        hits = [h for h in hits if not h.srg]
    return _verify_all(hits, verify, threads)


# -- nexus table ----------------------------------------------------------------------

def _nexus_for_m(args) -> list[SearchHit]:
    m, q2_max, e_max = args
    return general_search(m, 1 + m * e_max, q2_max)


def nexus_table(m_max: int, q2_max: int, e_max: int, verify: str = "construct",
                threads: int = 1) -> dict[int, list[SearchHit]]:
    """Strictly Neumaier hits grouped by nexus e = n1 <= e_max, m = 2..m_max."""
    if m_max < 2 or q2_max < 3 or e_max < 1:
        raise ValidationError("bounds must be positive (m_max >= 2)")
    jobs = [(m, q2_max, e_max) for m in range(2, m_max + 1)]
    if threads > 1:
        with ProcessPoolExecutor(threads) as ex:
            per_m = list(ex.map(_nexus_for_m, jobs))
    else:
        per_m = [_nexus_for_m(j) for j in jobs]
    hits = [h for hs in per_m for h in hs if not h.srg]
    hits = _verify_all(hits, verify, threads)
    table: dict[int, list[SearchHit]] = {}
    for h in sorted(hits, key=lambda h: (h.nexus, h.m, h.q1, h.q2)):
        table.setdefault(h.nexus, []).append(h)
    return table
