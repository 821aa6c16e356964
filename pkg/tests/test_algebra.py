import itertools

import pytest
from hypothesis import given, settings, strategies as st

from affsl2.algebra import (
    AFFINE_SL2,
    ALGEBRAS,
    ALPHABETS,
    BOREL1,
    BOREL_T,
    BOREL_VIR,
    C,
    C1,
    D,
    EXTENDED_SL2,
    TTILDE,
    alphabet_symbols,
    b2_bracket,
    bracket,
    bracket_vec,
    phi_chi_s,
    sigma,
    sigma_vec,
    spectral_flow,
    spectral_flow_vec,
    sym,
)
from affsl2.exact import Q, vec_iadd, vec_scale, vec_sub


def test_bracket_frozen_values():
    assert bracket(AFFINE_SL2, sym("e", 1), sym("f", -1)) == {sym("h", 0): Q(1), C: Q(1)}
    assert bracket(AFFINE_SL2, sym("h", 2), sym("h", -2)) == {C: Q(4)}
    assert bracket(AFFINE_SL2, sym("e", 3), sym("e", -3)) == {}
    assert bracket(BOREL_VIR, sym("L", 2), sym("L", -2)) == {sym("L", 0): Q(4), C1: Q(1, 2)}
    assert bracket(BOREL_VIR, sym("L", 1), sym("h", -1)) == {sym("h", 0): Q(1)}
    assert bracket(BOREL_VIR, sym("L", 1), sym("e", 2)) == {sym("e", 3): Q(-2)}
    assert bracket(EXTENDED_SL2, D, sym("e", -3)) == {sym("e", -3): Q(-3)}
    assert bracket(BOREL_T, D, sym("T", 2)) == {sym("T", 2): Q(2)}
    assert bracket(TTILDE, sym("T", 1), sym("T", -1)) == {}
    assert bracket(BOREL1, sym("h", 1), sym("h", -1)) == {C: Q(-4)}
    assert bracket(BOREL1, sym("h", 2), sym("e", -1)) == {sym("e", 1): Q(2)}
    assert bracket(AFFINE_SL2, sym("h", 0), sym("f", 1)) == {sym("f", 1): Q(-2)}


def test_bracket_rejects_foreign_symbols():
    with pytest.raises(ValueError):
        bracket(AFFINE_SL2, D, sym("e", 0))
    with pytest.raises(ValueError):
        bracket(TTILDE, sym("e", 1), sym("T", 0))
    with pytest.raises(ValueError):
        bracket(BOREL_VIR, sym("f", 1), sym("L", 0))


@pytest.mark.parametrize("alg", ALGEBRAS)
def test_antisymmetry_small_modes(alg):
    symbols = alphabet_symbols(alg, 3)
    for x, y in itertools.product(symbols, repeat=2):
        lhs = bracket(alg, x, y)
        rhs = vec_scale(bracket(alg, y, x), Q(-1))
        assert lhs == rhs, (alg, x, y)


def jacobi_defect(alg, x, y, z):
    total = {}
    vec_iadd(total, bracket_vec(alg, {x: Q(1)}, bracket(alg, y, z)))
    vec_iadd(total, bracket_vec(alg, {y: Q(1)}, bracket(alg, z, x)))
    vec_iadd(total, bracket_vec(alg, {z: Q(1)}, bracket(alg, x, y)))
    return total


@given(st.sampled_from(ALGEBRAS), st.data())
@settings(max_examples=300, deadline=None)
def test_jacobi_random_triples(alg, data):
    symbols = alphabet_symbols(alg, 4)
    x = data.draw(st.sampled_from(symbols))
    y = data.draw(st.sampled_from(symbols))
    z = data.draw(st.sampled_from(symbols))
    assert jacobi_defect(alg, x, y, z) == {}


def test_sigma_frozen_values():
    assert sigma(sym("h", 0)) == {sym("h", 0): Q(-1), C: Q(1)}
    assert sigma(D) == {D: Q(1), sym("h", 0): Q(1, 2)}
    assert sigma(sym("e", 2)) == {sym("f", 3): Q(1)}
    assert sigma(sym("f", -2)) == {sym("e", -3): Q(1)}
    # sigma([e(2), f(-2)]) = -h(0) + 3c, matching both expansion routes
    lhs = sigma_vec(bracket(EXTENDED_SL2, sym("e", 2), sym("f", -2)))
    rhs = bracket_vec(EXTENDED_SL2, sigma(sym("e", 2)), sigma(sym("f", -2)))
    assert lhs == rhs == {sym("h", 0): Q(-1), C: Q(3)}


def test_sigma_is_bracket_homomorphism():
    symbols = alphabet_symbols(EXTENDED_SL2, 5)
    for x, y in itertools.product(symbols, repeat=2):
        lhs = sigma_vec(bracket(EXTENDED_SL2, x, y))
        rhs = bracket_vec(EXTENDED_SL2, sigma(x), sigma(y))
        assert lhs == rhs, (x, y)


def test_spectral_flow_frozen_values():
    assert spectral_flow(1, sym("e", 0)) == {sym("e", -1): Q(1)}
    assert spectral_flow(2, sym("h", 0)) == {sym("h", 0): Q(1), C: Q(-2)}
    for x in alphabet_symbols(AFFINE_SL2, 2):
        assert spectral_flow(0, x) == {x: Q(1)}


@pytest.mark.parametrize("s", range(-3, 4))
def test_spectral_flow_is_bracket_homomorphism(s):
    symbols = alphabet_symbols(AFFINE_SL2, 5)
    for x, y in itertools.product(symbols, repeat=2):
        lhs = spectral_flow_vec(s, bracket(AFFINE_SL2, x, y))
        rhs = bracket_vec(AFFINE_SL2, spectral_flow(s, x), spectral_flow(s, y))
        assert lhs == rhs, (s, x, y)


def test_phi_map_frozen_values():
    chi = {-2: Q(5)}
    assert phi_chi_s({-2}, chi, sym("T", -2)) == {("e", 1): Q(5)}
    assert phi_chi_s({-2}, chi, sym("T", 7)) == {}
    assert phi_chi_s({-2}, chi, D) == {("h", 1): Q(-1)}
    # with two strides the gcd sets the exponent scale
    chi2 = {-4: Q(1), -6: Q(2)}
    assert phi_chi_s({-4, -6}, chi2, sym("T", -6)) == {("e", 3): Q(2)}


def test_phi_map_rejects_zero_character():
    with pytest.raises(ValueError):
        phi_chi_s({-2}, {-2: Q(0)}, sym("T", -2))
    with pytest.raises(ValueError):
        phi_chi_s(set(), {}, D)
    with pytest.raises(ValueError):
        phi_chi_s({2}, {2: Q(1)}, D)


def test_phi_map_respects_d_bracket():
    s_set = {-2, -3}
    chi = {-2: Q(5), -3: Q(7), 0: Q(2)}
    for i in sorted(s_set | {0}):
        # [d, T(i)] = i T(i) must map to the bracket of the images
        img_d = phi_chi_s(s_set, chi, D)
        img_t = phi_chi_s(s_set, chi, sym("T", i))
        lhs = vec_scale(phi_chi_s(s_set, chi, sym("T", i)), Q(i))
        assert b2_bracket(img_d, img_t) == lhs, i


def test_alphabet_enumeration_counts():
    assert len(alphabet_symbols(AFFINE_SL2, 4)) == 3 * 9 + 1
    assert len(alphabet_symbols(TTILDE, 4)) == 9 + 1
    assert len(alphabet_symbols(BOREL_VIR, 2)) == 3 * 5 + 2
