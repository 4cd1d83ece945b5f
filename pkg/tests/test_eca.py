import math
from collections import Counter

import pytest

from qgca import automaton as ca
from qgca import eca
from qgca import groups as gr
from qgca import matfp as mf
from qgca import quasigroup as qg
from qgca.errors import (BadParams, NotAffine, NotAGroup, NotEndomorphicCA,
                         NotEndomorphism, OrderTooLarge, ParseError)

from oracles import subgroups_bitmask


def led_rule(p, c0, c1):
    return ca.from_quasigroup(qg.builtin("ledrappier", [p, c0, c1]))


# ---------------------------------------------------------------------------
# group tables

def test_quaternion_group_structure(quat):
    g = gr.from_quasigroup(quat)
    assert g.identity == quat.index("1")
    assert not g.abelian
    assert g.inv(quat.index("i")) == quat.index("-i")
    assert g.inv(quat.index("-1")) == quat.index("-1")


def test_cyclic_group_is_abelian():
    g = gr.cyclic_group(6)
    assert g.abelian and g.identity == 0
    assert g.inv(2) == 4


def test_non_group_rejected(d7):
    with pytest.raises(NotAGroup):
        gr.from_quasigroup(d7)


def test_group_product_packing():
    g = gr.group_product(gr.cyclic_group(2), gr.quaternion_group())
    assert g.order == 16 and g.identity == 0
    assert g.mul(1 * 8 + 2, 1 * 8 + 4) == 0 * 8 + 6      # (1,i)*(1,j) = (0,k)


def test_elementary_abelian_group():
    g = gr.elementary_abelian_group(7, 4)
    assert g.order == 2401 and g.abelian and g.identity == 0
    a = gr.digits_index(7, (1, 2, 3, 4))
    b = gr.digits_index(7, (6, 6, 6, 6))
    assert g.mul(a, b) == gr.digits_index(7, (0, 1, 2, 3))
    assert gr.element_digits(7, 4, a) == (1, 2, 3, 4)


def test_group_file_roundtrip():
    g = gr.quaternion_group()
    text = gr.format_group(g)
    again = gr.parse_group(text)
    assert again == g
    assert gr.format_group(again) == text


def test_group_file_identity_must_match(quat):
    text = qg.format_table(quat) + "identity i\n"
    with pytest.raises(NotAGroup):
        gr.parse_group(text)
    with pytest.raises(ParseError):
        gr.parse_group(qg.format_table(quat))


# ---------------------------------------------------------------------------
# affine decomposition

def test_decompose_xor():
    g = gr.cyclic_group(2)
    dec = eca.decompose_affine(led_rule(2, 1, 1), g)
    assert dec.phi0 == (0, 1) and dec.phi1 == (0, 1)
    assert dec.bipermutative and dec.phi0_automorphism and dec.phi1_automorphism


def test_decompose_ledrappier_scalars():
    g = gr.cyclic_group(5)
    dec = eca.decompose_affine(led_rule(5, 2, 3), g)
    assert dec.phi0 == tuple(2 * a % 5 for a in range(5))
    assert dec.phi1 == tuple(3 * b % 5 for b in range(5))


def test_decompose_rejects_nonaffine():
    g = gr.cyclic_group(4)
    table = [[(a + b + a * b) % 4 for b in range(4)] for a in range(4)]
    rule = ca.make_rule(4, 0, 1, table)
    with pytest.raises(NotAffine) as exc:
        eca.decompose_affine(rule, g)
    a, b = exc.value.witness
    assert (a + b + a * b) % 4 != (a + b) % 4


def test_decompose_rejects_non_endomorphism():
    g = gr.cyclic_group(4)
    f = [0, 1, 3, 2]                      # f(0)=0 but f(1+1) != f(1)+f(1)
    table = [[(f[a] + b) % 4 for b in range(4)] for a in range(4)]
    rule = ca.make_rule(4, 0, 1, table)
    with pytest.raises(NotEndomorphism):
        eca.decompose_affine(rule, g)


def test_decompose_needs_abelian(quat):
    g = gr.from_quasigroup(quat)
    with pytest.raises(BadParams):
        eca.decompose_affine(ca.from_quasigroup(quat), g)


# ---------------------------------------------------------------------------
# kernel

def test_kernel_xor():
    g = gr.cyclic_group(2)
    rep = eca.kernel(led_rule(2, 1, 1), g)
    assert rep.rho == (0, 1)
    assert rep.zeta == ((0,), (1,))
    assert rep.periods == (1, 1)


def test_kernel_identity_rho_ledrappier_321():
    g = gr.cyclic_group(3)
    rep = eca.kernel(led_rule(3, 2, 1), g)
    assert rep.rho == (0, 1, 2)
    assert rep.zeta == ((0,), (1,), (2,))


def test_kernel_rho_fixes_identity_and_matches_affine(rng):
    cases = [(gr.cyclic_group(5), led_rule(5, 2, 3)),
             (gr.cyclic_group(7), led_rule(7, 3, 4)),
             (gr.cyclic_group(2), led_rule(2, 1, 1))]
    for p, k in ((2, 2), (3, 2)):
        m0 = _random_invertible(p, k, rng)
        m1 = _random_invertible(p, k, rng)
        g, rule = eca.affine_matrix_system(m0, m1)
        cases.append((g, rule))
    for g, rule in cases:
        rep = eca.kernel(rule, g)
        assert rep.rho[g.identity] == g.identity
        dec = eca.decompose_affine(rule, g)
        assert rep.rho == eca.affine_rho(g, dec)


def _random_invertible(p, k, rng):
    while True:
        rows = [[rng.randrange(p) for _ in range(k)] for _ in range(k)]
        m = mf.MatrixFp.from_rows(p, rows)
        if mf.char_roots(m).count(0) == 0 and mf.p_eval(mf.char_poly(m), 0, p):
            return m


def test_kernel_shift_relation():
    g = gr.cyclic_group(7)
    rep = eca.kernel(led_rule(7, 3, 4), g)
    for a in range(7):
        za = rep.zeta[a]
        assert za[1:] + (za[0],) == rep.zeta[rep.rho[a]]


def test_kernel_zeta_is_isomorphism_abelian():
    g = gr.cyclic_group(6)
    table = [[(5 * a + b) % 6 for b in range(6)] for a in range(6)]
    rule = ca.make_rule(6, 0, 1, table)
    rep = eca.kernel(rule, g)
    for a in range(6):
        for b in range(6):
            la, lb = rep.periods[a], rep.periods[b]
            period = math.lcm(la, lb)
            summed = tuple(g.mul(rep.zeta[a][i % la], rep.zeta[b][i % lb])
                           for i in range(period))
            c = g.mul(a, b)
            lc = rep.periods[c]
            assert period % lc == 0
            assert summed == tuple(rep.zeta[c][i % lc] for i in range(period))


def test_kernel_rejects_nonabelian_inverse_rule(quat):
    g = gr.from_quasigroup(quat)
    rule = ca.dual_rule(ca.from_quasigroup(quat))   # phi(a,b) = a^{-1} b
    with pytest.raises(NotEndomorphicCA):
        eca.kernel(rule, g)


def test_abelian_inverse_rule_is_endomorphic():
    g = gr.cyclic_group(6)
    rule = ca.dual_rule(ca.from_quasigroup(g.quasigroup()))
    rep = eca.kernel(rule, g)
    assert rep.rho == tuple(range(6))               # k_{i+1} = k_i


def test_kernel_rejects_non_endomorphic_quasigroup(d7):
    # D7 is not even a group, so feed its rule with a genuine group alphabet
    rule = ca.from_quasigroup(d7)
    g = gr.cyclic_group(7)
    with pytest.raises(NotEndomorphicCA):
        eca.kernel(rule, g)


# ---------------------------------------------------------------------------
# orbits and subgroup lattices

def test_rho_orbits_identity_z3():
    g = gr.cyclic_group(3)
    rep = eca.rho_orbits((0, 1, 2), g)
    assert rep.orbits == ((1,), (2,))
    assert not rep.single_orbit


def test_rho_orbits_z2_identity_is_single():
    g = gr.cyclic_group(2)
    rep = eca.rho_orbits((0, 1), g)
    assert rep.single_orbit


def test_rho_orbits_rejects_bad_rho():
    g = gr.cyclic_group(3)
    with pytest.raises(BadParams):
        eca.rho_orbits((1, 0, 2), g)       # moves the identity
    with pytest.raises(BadParams):
        eca.rho_orbits((0, 1, 1), g)       # not a permutation


def test_invariant_subgroups_z3_identity():
    g = gr.cyclic_group(3)
    assert eca.invariant_subgroups(g) == [(0,), (0, 1, 2)]


def test_invariant_subgroups_v4_swap_frozen():
    g = gr.group_product(gr.cyclic_group(2), gr.cyclic_group(2))
    swap = (0, 2, 1, 3)
    subs = eca.invariant_subgroups(g, swap)
    assert subs == [(0,), (0, 3), (0, 1, 2, 3)]


@pytest.mark.parametrize("make,rho_kind", [
    (lambda: gr.quaternion_group(), "identity"),
    (lambda: gr.quaternion_group(), "inverse"),
    (lambda: gr.cyclic_group(12), "identity"),
    (lambda: gr.cyclic_group(12), "inverse"),
    (lambda: gr.group_product(gr.cyclic_group(2), gr.cyclic_group(2)), "swap"),
])
def test_invariant_subgroups_match_bitmask_oracle(make, rho_kind):
    g = make()
    if rho_kind == "identity":
        rho = tuple(range(g.order))
    elif rho_kind == "inverse":
        rho = tuple(g.inv(a) for a in range(g.order))
    else:
        rho = (0, 2, 1, 3)
    found = eca.invariant_subgroups(g, rho)
    oracle = sorted(subgroups_bitmask(g.rows, g.identity, g.inverse, rho),
                    key=lambda s: (len(s), s))
    assert found == oracle


def test_invariant_subgroups_bound():
    with pytest.raises(OrderTooLarge):
        eca.invariant_subgroups(gr.elementary_abelian_group(7, 4))


def test_single_orbit_implies_no_nontrivial_invariant_subgroup(rng):
    # forward direction of the single-orbit lemma, over a spread of systems
    cases = [(gr.cyclic_group(p), led_rule(p, c0, c1))
             for p, c0, c1 in ((2, 1, 1), (3, 1, 1), (5, 2, 3), (7, 3, 4),
                               (5, 4, 1), (7, 1, 6))]
    for p, k in ((2, 2), (3, 2), (2, 3)):
        for _ in range(3):
            m0 = _random_invertible(p, k, rng)
            cases.append(eca.affine_matrix_system(m0))
    seen_single = 0
    for g, rule in cases:
        rep = eca.kernel(rule, g)
        orb = eca.rho_orbits(rep.rho, g)
        if orb.single_orbit:
            seen_single += 1
            subs = eca.invariant_subgroups(g, rep.rho)
            assert not [s for s in subs if 1 < len(s) < g.order]
    assert seen_single >= 1


def test_subgroup_orders_quaternion(quat):
    g = gr.from_quasigroup(quat)
    assert sorted(len(s) for s in eca.subgroups(g)) == [1, 2, 4, 4, 4, 8]
    assert eca.h_max(g) == 2.0


def test_subgroup_orders_nonabelian21():
    g = gr.nonabelian21_group()
    counts = Counter(len(s) for s in eca.subgroups(g))
    assert counts == Counter({1: 1, 3: 7, 7: 1, 21: 1})
    assert eca.h_max(g) == math.log2(7)
    assert abs(eca.h_max(g) - 2.807354922057604) <= 1e-12


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_h_max_prime_cyclic_is_zero(p):
    assert eca.h_max(gr.cyclic_group(p)) == 0.0


# ---------------------------------------------------------------------------
# linear view and matrix systems

def test_affine_matrix_system_identity_is_addition():
    ident = mf.MatrixFp.identity(2, 2)
    g, rule = eca.affine_matrix_system(ident)
    assert rule.table.tolist() == g.table.tolist()


def test_linear_view_extracts_matrix(rng):
    m0 = mf.MatrixFp.from_rows(3, [[0, 2], [2, 0]])
    g, rule = eca.affine_matrix_system(m0)
    rep = eca.kernel(rule, g)
    view = eca.linear_view(g, rep.rho)
    assert view is not None
    assert view.matrix == mf.MatrixFp.from_rows(3, [[0, 1], [1, 0]])  # -m0


def test_linear_view_rejects_nonlinear():
    g = gr.cyclic_group(4)                 # not elementary abelian
    assert eca.linear_view(g, (0, 1, 2, 3)) is None
    g2 = gr.group_product(gr.cyclic_group(3), gr.cyclic_group(3))
    # swap (0,1) <-> (1,0), fix the rest: rho(1+1) != rho(1)+rho(1)
    nonadditive = tuple(3 if a == 1 else 1 if a == 3 else a for a in range(9))
    assert eca.linear_view(g2, nonadditive) is None


def test_subspace_to_subgroup_is_closed():
    g, rule = eca.affine_matrix_system(
        mf.MatrixFp.from_rows(7, [[0, 0, 0, 1], [1, 0, 0, 1],
                                  [0, 1, 0, 1], [0, 0, 1, 1]]))
    rep = eca.lemma_audit(g, rule)
    members = set(rep.subgroup_witness)
    assert len(members) == 7
    assert all(g.mul(a, b) in members for a in members for b in members)
    assert all(rep.rho[a] in members for a in members)


# ---------------------------------------------------------------------------
# audits

def test_audit_z3_identity_disagrees():
    g = gr.cyclic_group(3)
    rep = eca.lemma_audit(g, led_rule(3, 2, 1))
    assert rep.kernel_lemma_verdict == "DISAGREE"
    assert rep.orbits == ((1,), (2,))
    assert rep.has_invariant_subgroup is False
    assert rep.rcf_lemma_verdict == "AGREE"          # 1x1 identity matrix


def test_audit_xor_agrees():
    g = gr.cyclic_group(2)
    rep = eca.lemma_audit(g, led_rule(2, 1, 1))
    assert rep.kernel_lemma_verdict == "AGREE"
    assert rep.single_orbit and rep.has_invariant_subgroup is False
    assert rep.rcf_lemma_verdict == "AGREE" and rep.simple


def test_audit_z7x4_frozen():
    g, rule = eca.affine_matrix_system(
        mf.MatrixFp.from_rows(7, [[0, 0, 0, 1], [1, 0, 0, 1],
                                  [0, 1, 0, 1], [0, 0, 1, 1]]))
    rep = eca.lemma_audit(g, rule)
    assert rep.kernel_lemma_verdict == "AGREE"       # both sides false
    assert not rep.single_orbit
    assert rep.has_invariant_subgroup is True
    assert rep.subgroup_method == "subspace"
    assert rep.simple is True
    assert rep.rcf_lemma_verdict == "DISAGREE"       # simple, yet subspaces
    assert rep.eigenvalues == (2,)
    assert [len(b) for b in [rep.subspace_witness]] == [1]
