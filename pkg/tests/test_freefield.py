import itertools

import pytest
from hypothesis import given, settings, strategies as st

from affsl2.algebra import AFFINE_SL2, C, bracket, sym
from affsl2.exact import Q, QONE, QZERO, vec_eq, vec_iadd, vec_scale
from affsl2.freefield import (
    WakimotoModule,
    basis_certificate,
    central_series_report,
    critical_match_report,
    cyclic_identity_report,
    cyclicity_probe,
    generalized_whittaker_check,
    nonisomorphism_fingerprint,
    realized_central_series,
    twisted_whittaker_check,
)
from affsl2.quadratic import L_mode, Laurent, central_character_from_chi
from affsl2.whittaker import TruncationBox

LAM, MU, KAP = Q(2), Q(3), Q(1)
CHI = {0: Q(5), 1: Q(7)}


@pytest.fixture
def W():
    return WakimotoModule(LAM, MU, KAP, CHI)


@pytest.fixture
def W1():
    return WakimotoModule(Q(2), Q(0), Q(-2), {0: Q(1), -1: Q(2)}, variant="onedim")


def test_weyl_pair_primitives(W):
    v = W.cyclic()
    created = W.act(sym("astar", -1), W.act(sym("a", -2), v))
    assert created == {((2,), (2,), ()): QONE}
    # a(2) pairs against the a(-2) entry, a*(1) against nothing but mu
    assert W.act(sym("a", 2), created) == {}
    back = W.act(sym("astar", 2), created)
    assert back == {((), (2,), ()): -QONE}
    assert W.act(sym("a", 0), v) == {W.cyclic_label: LAM}
    assert W.act(sym("astar", 1), v) == {W.cyclic_label: MU}


def test_weyl_commutator_on_box(W):
    labels = W.box_labels(TruncationBox(2, 2))
    for n in range(-2, 3):
        for m in range(-2, 3):
            x, y = sym("a", n), sym("astar", m)
            for lbl in labels:
                v = {lbl: QONE}
                lhs = W.act(x, W.act(y, v))
                vec_iadd(lhs, W.act(y, W.act(x, v)), -QONE)
                want = v if n + m == 0 else {}
                assert lhs == want, (n, m, lbl)


def test_heisenberg_tail_modes(W):
    v = W.cyclic()
    assert W.act(sym("b", 0), v) == {W.cyclic_label: CHI[0]}
    assert W.act(sym("b", 1), v) == {W.cyclic_label: CHI[1]}
    assert W.act(sym("b", 2), v) == {}
    deep = W.act(sym("b", -2), v)
    assert deep == {((), (), (2,)): QONE}
    # [b(2), b(-2)] = 4 (kappa + 2) plus the mode-2 tail, which is zero
    assert W.act(sym("b", 2), deep) == {W.cyclic_label: 4 * (KAP + 2)}


def test_cyclic_identities_frozen(W):
    rep = cyclic_identity_report(W)
    assert rep["ok"], rep["mismatches"]
    f1 = W.act(sym("f", 1), W.cyclic())
    assert f1 == {
        ((), (1,), ()): CHI[1] - 2 * MU * LAM,
        W.cyclic_label: MU * (CHI[0] - KAP),
        ((1,), (), ()): -MU * MU,
    }
    f2 = W.act(sym("f", 2), W.cyclic())
    assert f2 == {W.cyclic_label: MU * (CHI[1] - LAM * MU)}


@settings(max_examples=25, deadline=None)
@given(
    st.integers(-4, 4).filter(bool),
    st.integers(-3, 3),
    st.integers(-3, 3),
    st.integers(-3, 3),
    st.integers(-3, 3).filter(lambda k: k != -2),
)
def test_cyclic_identities_sampled(lam, mu, chi0, chi1, kap):
    handle = WakimotoModule(lam, mu, kap, {0: Q(chi0), 1: Q(chi1)})
    rep = cyclic_identity_report(handle, n_max=3)
    assert rep["ok"], rep["mismatches"]


def _commutator_suite(handle, box, mode_bound):
    gens = [sym(f, n) for f in "efh" for n in range(-mode_bound, mode_bound + 1)]
    vectors = [{lbl: QONE} for lbl in handle.box_labels(box)]
    for x, y in itertools.combinations_with_replacement(gens, 2):
        br = bracket(AFFINE_SL2, x, y)
        for v in vectors:
            lhs = handle.act(x, handle.act(y, v))
            vec_iadd(lhs, handle.act(y, handle.act(x, v)), -QONE)
            rhs = {}
            for s, c in br.items():
                if s == C:
                    vec_iadd(rhs, v, c * handle.level)
                else:
                    vec_iadd(rhs, handle.act(s, v), c)
            assert lhs == rhs, (x, y)


def test_commutators_tensor(W):
    _commutator_suite(W, TruncationBox(2, 2), 2)


def test_commutators_onedim(W1):
    _commutator_suite(W1, TruncationBox(2, 2), 2)


def test_phi_brackets(W):
    labels = W.box_labels(TruncationBox(2, 2))
    for n in range(-2, 3):
        for m in range(-2, 3):
            for lbl in labels:
                v = {lbl: QONE}
                lhs = W.act(sym("phi", n), W.act(sym("phi", m), v))
                vec_iadd(lhs, W.act(sym("phi", m), W.act(sym("phi", n), v)), -QONE)
                want = vec_scale(v, Q(-4 * n)) if n + m == 0 else {}
                assert lhs == want, (n, m, lbl)
                lhs = W.act(sym("phi", n), W.act(sym("e", m), v))
                vec_iadd(lhs, W.act(sym("e", m), W.act(sym("phi", n), v)), -QONE)
                assert lhs == vec_scale(W.act(sym("e", n + m), v), Q(2)), (n, m, lbl)


def test_phi_zero_on_cyclic(W):
    got = W.act(sym("phi", 0), W.cyclic())
    assert got == {((), (1,), ()): -2 * LAM, ((1,), (), ()): -2 * MU}


def test_annihilator_pair_lands_on_cyclic_line(W):
    start = W.apply_word((sym("a", -1), sym("a", -2)), W.cyclic())
    landed = W.apply_word((sym("phi", 1), sym("phi", 2)), start)
    coeff = landed.get(W.cyclic_label, QZERO)
    assert coeff == 4 * LAM * LAM
    assert set(landed) > {W.cyclic_label}  # mu != 0 leaves side terms


def test_annihilator_pair_pure_at_mu_zero():
    handle = WakimotoModule(LAM, Q(0), KAP, {0: Q(5)})
    start = handle.apply_word((sym("a", -1), sym("a", -2)), handle.cyclic())
    landed = handle.apply_word((sym("phi", 1), sym("phi", 2)), start)
    assert landed == {handle.cyclic_label: 4 * LAM * LAM}


def test_plain_vector_at_mu_zero():
    # mu = 0, chi_1 = 0: f(1) kills the cyclic vector and the energy
    # operator acts by chi_0 (chi_0 + 2) / (4 (kappa + 2))
    for lam, chi0, kap in [(2, 5, 1), (3, -1, 2), (1, 0, -3), (-2, 7, 5)]:
        handle = WakimotoModule(lam, 0, kap, {0: Q(chi0)})
        v = handle.cyclic()
        assert handle.act(sym("f", 1), v) == {}
        want = Q(chi0) * (Q(chi0) + 2) / (4 * (Q(kap) + 2))
        assert L_mode(0, handle, v) == ({handle.cyclic_label: want} if want else {})


def test_generalized_eigenvector_examples():
    # top mode 2 with mu = 0: f(3) vanishes
    h = WakimotoModule(2, 0, -2, {0: Q(1), 2: Q(3)}, variant="onedim")
    rep = generalized_whittaker_check(h)
    assert rep["top_mode"] == 2
    assert rep["ok"], rep["mismatches"]
    assert h.act(sym("f", 3), h.cyclic()) == {}
    # top mode 2 with mu = 2: f(3) acts by mu * chi_2 = 6
    h = WakimotoModule(1, 2, -2, {0: Q(1), 1: Q(2), 2: Q(3)}, variant="onedim")
    rep = generalized_whittaker_check(h)
    assert rep["ok"], rep["mismatches"]
    assert h.act(sym("f", 3), h.cyclic()) == {h.cyclic_label: Q(6)}
    # top mode 3: h(3) reads off chi_3
    h = WakimotoModule(1, 0, -2, {0: Q(1), 3: Q(4)}, variant="onedim")
    assert h.act(sym("h", 3), h.cyclic()) == {h.cyclic_label: Q(4)}


def test_twisted_eigenvector_family():
    h = WakimotoModule(2, 1, -2, {0: Q(1), 1: Q(2), 2: Q(3)}, variant="onedim")
    for s in range(-3, 4):
        rep = twisted_whittaker_check(h, s)
        assert rep["ok"], (s, rep["mismatches"])


def test_fingerprints_separate_realizations():
    base = nonisomorphism_fingerprint(
        WakimotoModule(2, 0, -2, {0: Q(1)}, variant="onedim")
    )
    other_lam = nonisomorphism_fingerprint(
        WakimotoModule(3, 0, -2, {0: Q(1)}, variant="onedim")
    )
    assert base["e0"] != other_lam["e0"]
    deeper_tail = nonisomorphism_fingerprint(
        WakimotoModule(2, 0, -2, {0: Q(1), -1: Q(2)}, variant="onedim")
    )
    assert base["central"] != deeper_tail["central"]
    other_mu = nonisomorphism_fingerprint(
        WakimotoModule(2, 1, -2, {0: Q(1), 1: Q(2)}, variant="onedim")
    )
    assert base["h"][1] != other_mu["h"][1]


def test_cyclicity_probe_tensor(W):
    rep = cyclicity_probe(W, TruncationBox(2, 2))
    assert rep["ok"], rep
    assert not rep["targets_missed"]
    assert not rep["not_regained"]
    assert rep["annihilation_coefficient"] == "16"


def test_cyclicity_probe_onedim():
    handle = WakimotoModule(3, 0, -2, {0: Q(1)}, variant="onedim")
    rep = cyclicity_probe(handle, TruncationBox(2, 2))
    assert rep["ok"], rep
    assert rep["annihilation_pure"]


def test_basis_certificate_onedim():
    handle = WakimotoModule(3, 0, -2, {0: Q(1)}, variant="onedim")
    rep = basis_certificate(handle, TruncationBox(3, 3), span_box=TruncationBox(2, 2))
    assert rep["independent"]
    assert rep["spans"], rep["span_missed"]
    assert rep["ok"]


def test_realized_series_is_half_of_squared_character():
    chi = Laurent("weight1", {0: Q(1), -1: Q(2)})
    series = realized_central_series(chi)
    doubled = central_character_from_chi(chi)
    assert series.support() == doubled.support()
    for m in series.support():
        assert series[m] == doubled[m] / 2
    assert series[0] == Q(3, 4)
    assert series[-1] == QONE
    assert series[-2] == QONE


def test_central_series_measured(W1):
    rep = central_series_report(W1)
    assert rep["ok"], rep["mismatches"]
    assert rep["measured"][0] == "3/4"
    assert rep["measured"][-2] == "1"
    # fringe modes outside the support act by zero
    assert rep["measured"][2] == "0"
    assert rep["measured"][-4] == "0"


def test_central_series_needs_critical_level(W):
    with pytest.raises(ValueError):
        central_series_report(W)


def test_critical_match_small_box():
    rep = critical_match_report(2, 0, {0: Q(1), -1: Q(2)}, TruncationBox(2, 2))
    assert rep["ok"], rep["mismatches"]
    assert rep["independent"]
    assert rep["series"] == {0: "3/4", -1: "1", -2: "1"}
    assert rep["series_convention"] == "half-squared-character"


def test_critical_match_rejections():
    box = TruncationBox(2, 2)
    with pytest.raises(ValueError):
        critical_match_report(2, 1, {0: Q(1)}, box)
    with pytest.raises(ValueError):
        critical_match_report(2, 0, {0: Q(1), 1: Q(2)}, box)
    with pytest.raises(ValueError):
        critical_match_report(2, 0, {0: Q(1), 2: Q(3)}, box)


def test_constructor_rejections():
    with pytest.raises(ValueError):
        WakimotoModule(2, 3, 1, {0: Q(1), -1: Q(2)})  # tensor tail too deep
    with pytest.raises(ValueError):
        WakimotoModule(2, 3, 1, {0: Q(1)}, variant="onedim")  # wrong level
    with pytest.raises(ValueError):
        WakimotoModule(2, 3, 1, {0: Q(1)}, variant="diagonal")
    with pytest.raises(ValueError):
        WakimotoModule(2, 3, 1, Laurent("weight2", {0: Q(1)}))
    with pytest.raises(ValueError):
        nonisomorphism_fingerprint(WakimotoModule(2, 3, 1, {0: Q(1)}))
    with pytest.raises(ValueError):
        generalized_whittaker_check(WakimotoModule(2, 3, 1, {0: Q(1)}))


def test_unknown_symbol_rejected(W):
    with pytest.raises(ValueError):
        W.act(sym("L", 0), W.cyclic())


words = st.lists(
    st.tuples(st.sampled_from(["a", "astar", "b"]), st.integers(-2, 2)).map(
        lambda t: sym(*t)
    ),
    min_size=1,
    max_size=4,
)


@settings(max_examples=40, deadline=None)
@given(words)
def test_act_is_linear(word):
    handle = WakimotoModule(LAM, MU, KAP, CHI)
    u = handle.apply_word(word, handle.cyclic())
    v = handle.apply_word(word, vec_scale(handle.cyclic(), Q(7, 3)))
    assert v == vec_scale(u, Q(7, 3))


def test_box_labels_shape(W):
    box = TruncationBox(2, 2)
    labels = W.box_labels(box)
    assert W.cyclic_label in labels
    assert len(set(labels)) == len(labels)
    for lbl in labels:
        assert W.weight_of_label(lbl) <= box.max_weight
        assert sum(len(p) for p in lbl) <= box.max_length
    # onedim labels never carry b entries
    onedim = WakimotoModule(3, 0, -2, {0: Q(1)}, variant="onedim")
    assert all(lbl[2] == () for lbl in onedim.box_labels(box))
