import math

import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint

from neumaier.constructions import GammaSpec
from neumaier.cyclotomy import u_value
from neumaier.errors import ValidationError
from neumaier.regularity import classify_gamma, edge_regular_condition
from neumaier.search import (
    CSV_COLUMNS,
    csv_row,
    expected_parameters,
    general_search,
    nexus_table,
    prime_powers,
    search_pairs,
    solve_m3,
    solve_m4,
    verify_hit,
)
from table_data import NEXUS_TABLE, TABLE_M3, TABLE_M4


def pairs(hits):
    return sorted((h.q1, h.q2) for h in hits)


@pytest.mark.parametrize("m,bound,want", [
    (3, 20, [4, 7, 13, 16, 19]),
    (4, 30, [5, 9, 13, 17, 25, 29]),
    (10, 50, [11, 31, 41]),
    (2, 10, [3, 5, 7, 9]),
])
def test_prime_powers(m, bound, want):
    assert [q for q, _, _ in prime_powers(m, bound)] == want


@settings(max_examples=40)
@given(m=st.integers(2, 12), bound=st.integers(2, 400))
def test_prime_powers_oracle(m, bound):
    want = [q for q in range(2, bound + 1) if len(factorint(q)) == 1 and (q - 1) % m == 0]
    got = prime_powers(m, bound)
    assert [q for q, _, _ in got] == want
    assert all(p**r == q for q, p, r in got)


def test_m3_example_equation():
    # 4(2*4 - 7) = 4 = u1 u2 + 27 v1 v2 with (u, v) = (4, 0), (1, +-1)
    h = solve_m3(4)[0]
    assert (h.q1, h.q2) == (4, 7)
    assert 4 * (2 * h.q1 - h.q2) == h.u1 * h.u2 + 27 * h.v1 * h.v2
    assert 4 * h.q1 == h.u1**2 + 27 * h.v1**2 and 4 * h.q2 == h.u2**2 + 27 * h.v2**2


def test_m4_example_equation():
    h = solve_m4(5)[0]
    assert (h.q1, h.q2) == (5, 13)
    assert 3 * h.q1 - h.q2 == 2 * (h.u1 * h.u2 + 4 * h.v1 * h.v2)
    assert h.q1 == h.u1**2 + 4 * h.v1**2 and h.q2 == h.u2**2 + 4 * h.v2**2


def test_m3_matches_table_except_typo():
    got = pairs(search_pairs(3, 250, verify="none"))
    assert len(got) == 20
    assert set(TABLE_M3) - set(got) == {(109, 443)}
    assert set(got) - set(TABLE_M3) == {(109, 433)}


def test_m4_matches_table():
    assert pairs(search_pairs(4, 250, verify="none")) == TABLE_M4


@pytest.mark.parametrize("solver", [solve_m3, solve_m4])
def test_window_is_not_binding(solver):
    assert pairs(solver(250)) == pairs(solver(250, window_scale=2))


def test_even_coprime_solutions():
    got = {(h.q1, h.q2) for h in solve_m3(400) if h.q1 * h.q2 % 2 == 0 and math.gcd(h.q1, h.q2) == 1}
    assert got == {(4, 7), (4, 13), (7, 16), (13, 16)}


def test_m3_agrees_with_brute_force():
    analytic = {(h.q1, h.q2) for h in solve_m3(100)}
    brute = {(h.q1, h.q2) for h in general_search(3, 100, 2000) if h.q2 > h.q1}
    assert analytic == brute


def test_m4_agrees_with_brute_force():
    analytic = {(h.q1, h.q2) for h in solve_m4(60)}
    brute = {(h.q1, h.q2) for h in general_search(4, 60, 2000) if h.q2 > h.q1}
    assert analytic == brute


def test_hits_satisfy_edge_regular_condition():
    for h in general_search(5, 41, 400):
        assert edge_regular_condition(h.spec)


@pytest.mark.parametrize("m,q1,q2,e", [(5, 16, 31, 3), (7, 8, 29, 1), (10, 11, 131, 1)])
def test_general_hits(m, q1, q2, e):
    hits = [h for h in general_search(m, q1, q2, q1_min=q1) if h.q2 == q2]
    assert len(hits) == 1 and hits[0].nexus == e and not hits[0].srg
    rep = classify_gamma(hits[0].spec)
    assert rep.verdict == "strictly-neumaier"
    assert rep.parameters == expected_parameters(hits[0].spec)


def test_m2_no_off_diagonal():
    assert [h for h in general_search(2, 50, 50) if not h.srg] == []


def test_verify_levels():
    h = solve_m3(4)[0]
    assert verify_hit(h, "none").verified == "analytic-only"
    assert verify_hit(h, "construct").verified == "constructed"
    w = verify_hit(h, "wl")
    assert w.verified == "wl-confirmed" and w.rank == 6
    with pytest.raises(ValidationError):
        verify_hit(h, "bogus")


def test_search_pairs_threads_same_order():
    a = search_pairs(4, 60, verify="construct")
    b = search_pairs(4, 60, verify="construct", threads=2)
    assert a == b


def test_search_pairs_rejects_m():
    with pytest.raises(ValidationError):
        search_pairs(5, 100)


def test_include_srg_adds_same_prime_pairs():
    plain = pairs(search_pairs(3, 60, verify="none"))
    full = pairs(search_pairs(3, 60, verify="none", include_srg=True))
    assert set(plain) < set(full)


def test_csv_row_shape():
    h = verify_hit(solve_m3(4)[0], "wl")
    row = csv_row(h)
    assert len(row) == len(CSV_COLUMNS)
    assert dict(zip(CSV_COLUMNS, row))["rank"] == 6


def test_nexus_small():
    table = nexus_table(10, 1000, 2, verify="construct")
    want = {e: [t for t in rows if t[2] <= 1000] for e, rows in NEXUS_TABLE.items() if e <= 2}
    got = {e: [(h.m, h.q1, h.q2) for h in hs] for e, hs in table.items()}
    for e, rows in want.items():
        assert set(rows) <= set(got[e])
    assert all(h.verified == "constructed" for hs in table.values() for h in hs)


def test_expected_parameters_formula():
    spec = GammaSpec(3, 4, 7)
    assert expected_parameters(spec) == (28, 9, 2, 1, 4)


def test_u_value_table_entries():
    # u is pinned by u = 1 (mod m): 4*7 = 1 + 27, 13 = (-3)^2 + 4
    assert u_value(7, 3)[0] == 1 and u_value(13, 4)[0] == -3
