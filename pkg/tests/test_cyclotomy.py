import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint

from neumaier.cyclotomy import (
    CyclotomicTable,
    UVPair,
    alpha_index_for_multiplier,
    closed_form,
    cyclotomic_numbers,
    distinct_tables,
    is_uniform,
    minus_one_is_power,
    sum_rule_violations,
    table_for,
    u_value,
    uv_decomposition,
    vandiver_violations,
    x_row,
    x_sum,
)
from neumaier.errors import ValidationError
from neumaier.finitefield import dlog_table, field_add, field_for_order, field_pow, primitive_elements

PRIME_POWERS = [q for q in range(3, 201) if len(factorint(q)) == 1]


def naive_table(q, alpha, m):
    """Straight from the definition with field operations only."""
    f = field_for_order(q)
    powers = [field_pow(f, alpha, k) for k in range(q - 1)]
    cls = {x: k % m for k, x in enumerate(powers)}
    c = np.zeros((m, m), dtype=np.int64)
    for k, x in enumerate(powers):
        y = field_add(f, x, 1)
        if y in cls:
            c[k % m, cls[y]] += 1
    return c


@pytest.mark.parametrize("q,m", [(7, 3), (13, 4), (16, 5), (25, 6), (27, 13), (49, 8), (64, 9)])
def test_brute_force_matches_definition(q, m):
    f = field_for_order(q)
    for a in primitive_elements(f)[:4]:
        t = cyclotomic_numbers(f, dlog_table(f, a), m)
        assert np.array_equal(t.counts, naive_table(q, a, m))


def test_q5_m2():
    f = field_for_order(5)
    t = cyclotomic_numbers(f, dlog_table(f, 2), 2)
    assert t.counts.tolist() == [[0, 1], [1, 1]]


def test_q4_m3():
    t = table_for(4, 3)
    assert t[0, 0] == 0 and t[1, 2] == 1


def test_q13_m3_column_sum():
    t = table_for(13, 3)
    assert t.counts[:, 0].sum() == 3


def test_bad_order_rejected():
    with pytest.raises(ValidationError):
        table_for(13, 5)


def test_closed_form_examples():
    t = closed_form(3, 7, UVPair(3, 7, 1, 1))
    assert (t[0, 1], t[0, 2], t[1, 2]) == (0, 1, 1)
    t = closed_form(2, 9)
    assert t[0, 0] == 1 and t[0, 1] == t[1, 0] == t[1, 1] == 2
    assert closed_form(4, 13, UVPair(4, 13, -3, 1))[0, 2] == 2


def test_closed_form_rejects_bad_input():
    with pytest.raises(ValidationError):
        closed_form(5, 11)
    with pytest.raises(ValidationError):
        closed_form(3, 7)
    with pytest.raises(ValidationError):
        closed_form(3, 7, UVPair(3, 7, 1, 3))


@pytest.mark.parametrize("q,m,want", [(4, 3, (4, 0)), (13, 3, (-5, 1)), (5, 4, (1, 1)), (7, 3, (1, 1)),
                                      (9, 4, (-3, 0)), (13, 4, (-3, 1))])
def test_u_values(q, m, want):
    assert u_value(q, m) == want


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_closed_forms_equal_brute_force(q):
    f = field_for_order(q)
    for m in (2, 3, 4):
        if (q - 1) % m:
            continue
        for a in primitive_elements(f):
            dl = dlog_table(f, a)
            brute = cyclotomic_numbers(f, dl, m)
            uv = uv_decomposition(f, dl, m) if m > 2 else None
            assert closed_form(m, q, uv) == brute, (q, m, a)


@pytest.mark.parametrize("q", [q for q in PRIME_POWERS if (q - 1) % 3 == 0 or (q - 1) % 4 == 0])
def test_sign_of_v_only_depends_on_alpha(q):
    f = field_for_order(q)
    for m in (3, 4):
        if (q - 1) % m:
            continue
        u, v_abs = u_value(q, m)
        seen = set()
        for a in primitive_elements(f):
            uv = uv_decomposition(f, dlog_table(f, a), m)
            assert uv.u == u and abs(uv.v) == v_abs
            seen.add(uv.v)
        assert seen == {v_abs, -v_abs}


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_sum_rules_and_vandiver(q):
    f = field_for_order(q)
    for m in range(2, 11):
        if (q - 1) % m:
            continue
        for a in primitive_elements(f)[:3]:
            t = cyclotomic_numbers(f, dlog_table(f, a), m)
            assert sum_rule_violations(t) == []
            assert vandiver_violations(t) == []


def test_vandiver_example_q7():
    t = table_for(7, 3)
    assert x_sum(t, t, 0, 0, 0) == 5
    assert x_sum(t, t, 0, 0, 1) == 2


def test_sum_rules_detect_corruption():
    t = table_for(13, 3)
    bad = t.counts.copy()
    bad[0, 1] += 1
    assert sum_rule_violations(CyclotomicTable(13, 3, bad))


tables = st.sampled_from([(13, 3), (16, 3), (31, 5), (37, 6), (41, 8), (49, 4), (61, 10)])


@settings(max_examples=40, deadline=None)
@given(qm=tables, data=st.data())
def test_x_translation_identity(qm, data):
    q, m = qm
    t1 = table_for(q, m)
    t2 = table_for(q, m, data.draw(st.integers(0, 2)))
    a, b = data.draw(st.integers(0, m - 1)), data.draw(st.integers(0, m - 1))
    assert x_sum(t1, t2, 0, 0, b) == x_sum(t1, t2, a, a, a + b)


def test_x_sum_requires_same_order():
    with pytest.raises(ValidationError):
        x_sum(table_for(13, 3), table_for(13, 4), 0, 0, 0)


@pytest.mark.parametrize("q,m", [(13, 3), (31, 5), (41, 8), (64, 9), (49, 6)])
def test_relabel_matches_power_of_alpha(q, m):
    f = field_for_order(q)
    a0 = primitive_elements(f)[0]
    for s, t in distinct_tables(q, m):
        idx = alpha_index_for_multiplier(q, s, m)
        b = primitive_elements(f)[idx]
        assert np.array_equal(cyclotomic_numbers(f, dlog_table(f, b), m).counts, t.counts)
        assert dlog_table(f, a0).log[b] % m == s


def test_relabel_rejects_non_unit():
    with pytest.raises(ValidationError):
        table_for(13, 4).relabel(2)


@pytest.mark.parametrize("q,m,uniform", [(16, 3, True), (7, 3, False), (49, 3, False), (9, 4, True),
                                         (64, 9, True), (81, 4, True)])
def test_uniformity(q, m, uniform):
    ok, info = is_uniform(table_for(q, m))
    assert ok == uniform
    if uniform:
        assert info["closed_form_ok"]
        assert abs(info["r"]) == math.isqrt(q) and (info["r"] - 1) % m == 0


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_uniformity_criterion(q):
    p = next(iter(factorint(q)))
    for m in range(3, 11):
        if (q - 1) % m:
            continue
        ok, _ = is_uniform(table_for(q, m))
        # uniform iff -1 is a power of p mod m (for q a square)
        if ok:
            assert minus_one_is_power(p, m)
        elif math.isqrt(q) ** 2 == q and minus_one_is_power(p, m):
            pytest.fail(f"q={q}, m={m} should be uniform")


def test_x_row_length():
    t = table_for(31, 5)
    assert len(x_row(t, t)) == 5
