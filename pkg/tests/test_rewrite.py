import pytest
from hypothesis import given, settings, strategies as st

from affsl2.algebra import AFFINE_SL2, BOREL_VIR, C, sym
from affsl2.exact import Q
from affsl2.rewrite import (
    borel_vir_slot,
    borel_vir_slot_symbol,
    cmp_principal,
    cmp_revlex,
    cmp_size_highslot,
    compare,
    degree_D,
    ev,
    ev_freeze,
    ev_size,
    leading_term,
    normal_order,
    unit_ev,
)


def test_normal_order_single_bracket():
    # f(1) e(0) = e(0) f(1) - h(1)
    got = normal_order(AFFINE_SL2, (sym("f", 1), sym("e", 0)), "sl2")
    assert got == {
        (sym("e", 0), sym("f", 1)): Q(1),
        (sym("h", 1),): Q(-1),
    }


def test_normal_order_commuting_square():
    got = normal_order(AFFINE_SL2, (sym("e", 0), sym("e", 0)), "sl2")
    assert got == {(sym("e", 0), sym("e", 0)): Q(1)}


def test_normal_order_central_collapse():
    # h(1) h(-1) = h(-1) h(1) + 2 c
    got = normal_order(AFFINE_SL2, (sym("h", 1), sym("h", -1)), "sl2")
    assert got == {
        (sym("h", -1), sym("h", 1)): Q(1),
        (C,): Q(2),
    }


def test_normal_order_idempotent_on_sorted_words():
    word = (sym("e", -2), sym("h", 0), sym("f", 0), sym("f", 1))
    once = normal_order(AFFINE_SL2, word, "sl2")
    assert once == {word: Q(1)}
    for mono in once:
        again = normal_order(AFFINE_SL2, mono, "sl2")
        assert again == {mono: Q(1)}


def test_normal_order_coefficient_folding():
    got = normal_order(AFFINE_SL2, (sym("h", 1), sym("h", -1)), "sl2", coeff=Q(1, 2))
    assert got[(C,)] == Q(1)


@st.composite
def small_words(draw):
    n = draw(st.integers(1, 4))
    fams = st.sampled_from(["e", "f", "h"])
    return tuple(sym(draw(fams), draw(st.integers(-2, 2))) for _ in range(n))


@given(small_words())
@settings(max_examples=120, deadline=None)
def test_normal_order_result_is_sorted(word):
    from affsl2.rewrite import ORDERS

    key = ORDERS["sl2"]
    for mono in normal_order(AFFINE_SL2, word, "sl2"):
        assert all(key(mono[i]) <= key(mono[i + 1]) for i in range(len(mono) - 1))


def test_degree_frozen_values():
    assert degree_D({}) == 0
    assert degree_D(unit_ev(4)) == 1
    assert degree_D(ev((2, 2), (6, 1))) == 1
    assert ev_size(ev((2, 2), (6, 1))) == 3


def test_compare_frozen_values():
    assert compare("revlex", unit_ev(1), unit_ev(2)) == 1
    assert compare("principal", ev((3, 2)), ev((3, 2))) == 0
    assert compare("principal", unit_ev(4), ev((1, 1), (2, 1), (3, 1))) == 1


def test_compare_shape_mismatch():
    triple = (unit_ev(1), {}, {})
    with pytest.raises(ValueError):
        compare("kji", triple, unit_ev(1))


def test_kji_triple_order_layers():
    a = (unit_ev(1), {}, unit_ev(2))
    b = (ev((1, 5)), {}, unit_ev(1))
    # third component decides first
    assert compare("kji", a, b) == 1
    c = (unit_ev(1), unit_ev(3), unit_ev(2))
    assert compare("kji", c, a) == 1


def test_leading_term_frozen_values():
    only = ev_freeze(unit_ev(2))
    assert leading_term({only: Q(5)}) == only
    v = {ev_freeze(unit_ev(1)): Q(1), ev_freeze(unit_ev(4)): Q(1)}
    assert leading_term(v, cmp_principal) == ev_freeze(unit_ev(4))
    with pytest.raises(ValueError):
        leading_term({})


vectors = st.dictionaries(st.integers(1, 6), st.integers(1, 3), max_size=3)


@given(vectors, vectors, vectors)
@settings(max_examples=200)
def test_orders_are_total(i, j, k):
    for cmp in (cmp_revlex, cmp_principal, cmp_size_highslot):
        cij, cji = cmp(i, j), cmp(j, i)
        assert cij == -cji
        assert (cij == 0) == (i == j)
        # transitivity through a middle element
        if cmp(i, j) <= 0 and cmp(j, k) <= 0:
            assert cmp(i, k) <= 0


def test_borel_vir_slots_roundtrip():
    assert borel_vir_slot(sym("e", -1)) == 1
    assert borel_vir_slot(sym("L", 0)) == 2
    assert borel_vir_slot(sym("h", 0)) == 3
    assert borel_vir_slot(sym("e", -2)) == 4
    assert borel_vir_slot(sym("h", -1)) == 6
    for slot in range(1, 20):
        assert borel_vir_slot(borel_vir_slot_symbol(slot)) == slot


def test_borel_vir_normal_order_layout():
    # h(0) commutes leftwards past L(0) and e(-1) up to bracket terms
    got = normal_order(BOREL_VIR, (sym("L", 0), sym("h", 0)), "borel_vir")
    assert got == {(sym("h", 0), sym("L", 0)): Q(1)}
    got = normal_order(BOREL_VIR, (sym("e", -1), sym("h", 0)), "borel_vir")
    assert got == {
        (sym("h", 0), sym("e", -1)): Q(1),
        (sym("e", -1),): Q(-2),
    }
