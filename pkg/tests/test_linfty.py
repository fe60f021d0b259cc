"""Homotopy Lie structures: decalage, generalized Jacobi, the DGLA functor,
morphisms, homotopy Maurer-Cartan, cohomology bracket, Hodge models."""

import random
from fractions import Fraction

from defalg.coalg import all_words
from defalg.core import Element, GradedBasis
from defalg.dgla import DGLA, ArtinDg, check_dgla, tensor_dgla
from defalg.linfty import (
    HodgeModel,
    LInftyMorphism,
    LInftyStructure,
    check_linfty,
    decalage,
    from_dgla,
    h_bracket_check,
    hodge_F,
    hodge_model_check,
    identity_morphism,
    mc_linfty,
    mc_suspended_residual,
    morphism_check,
    op_is_zero,
    suspend_basis,
)

F = Fraction


def e(i, c=1):
    return Element.basis_vector(i, F(c))


# -- decalage -----------------------------------------------------------------


def test_decalage_signs():
    V = GradedBasis.of(("u", 1), ("v", 2), ("w", 0))
    # arity 1: sign (-1)^{1+0} = -1 uniformly (the suspension of the word)
    t = decalage(V, {1: {(0,): e(1)}}, "to_suspended")
    assert t[1][(0,)] == e(1, -1)
    # arity 2 on (v1, v2): exponent 2 + deg v1: sign (-1)^{deg v1}
    t = decalage(V, {2: {(0, 1): e(2, 1)}}, "to_suspended")
    assert t[1 + 1][(0, 1)] == e(2, -1)  # deg u = 1 -> sign -1
    t = decalage(V, {2: {(1, 2): e(0)}}, "to_suspended")
    assert t[2][(1, 2)] == e(0)  # deg v = 2 -> sign +1


def test_decalage_roundtrip():
    V = GradedBasis.of(("u", 1), ("v", 2), ("w", 0))
    rng = random.Random(3)
    tables = {3: {}}
    for word in all_words(suspend_basis(V), 3, min_len=3):
        val = Element({i: F(rng.randint(-3, 3)) for i in range(3)})
        if not val.is_zero():
            tables[3][word] = val
    there = decalage(V, tables, "to_suspended")
    back = decalage(V, there, "to_unsuspended")
    for w, v in tables[3].items():
        assert back[3][w] == v


# -- structure checking ---------------------------------------------------------


def abelian_l():
    return LInftyStructure(GradedBasis.of(("x", 1), ("y", 2)), {})


def odd_square_dgla():
    basis = GradedBasis.of(("x", 1), ("y", 2))
    return DGLA(basis, {(0, 0): e(1)}, {})


def test_check_linfty_zero_brackets():
    assert check_linfty(abelian_l(), 4).ok()


def test_from_dgla_passes_check():
    S = from_dgla(odd_square_dgla())
    assert check_linfty(S, 5).ok()


def test_from_dgla_sign_of_q1():
    basis = GradedBasis.of(("x", 1), ("y", 2))
    L = DGLA(basis, {}, {0: e(1)})  # d x = y
    S = from_dgla(L)
    assert S.components.tables[1][(0,)] == e(1, -1)  # q1(x[1]) = -dx


def test_from_dgla_abelian_is_minimal_zero():
    L = DGLA(GradedBasis.of(("x", 1), ("y", 2)), {}, {})
    S = from_dgla(L)
    assert S.is_minimal()
    assert not S.components.tables


def test_jacobi_violation_fails_exactly_at_arity_three():
    # an l2 violating Jacobi with l3 = 0: bracket on a degree-0 pair
    basis = GradedBasis.of(("a", 0), ("b", 0), ("c", 0))
    # [a,b] = c, [a,c] = a: Jacobi fails
    L = DGLA(basis, {(0, 1): e(2), (0, 2): e(0)}, {})
    assert not check_dgla(L).ok()
    S = from_dgla(L, checked=False)
    rep = check_linfty(S, 4)
    assert not rep.ok()
    arities = {v.message[-1] for v in rep.violations}
    assert arities == {"3"}


def test_checker_equivalence_with_coderivation_square():
    # check_linfty passes iff the lifted coderivation squares to zero
    rng = random.Random(5)
    basis = GradedBasis.of(("a", 0), ("b", 0), ("c", 0))
    good = from_dgla(DGLA(basis, {(0, 1): e(2)}, {}))  # Heisenberg
    bad = from_dgla(
        DGLA(basis, {(0, 1): e(2), (0, 2): e(0)}, {}), checked=False
    )
    for S, expect in ((good, True), (bad, False)):
        Q = S.coderivation()
        square_zero = True
        for word in all_words(S.shifted, 4):
            inner = Q.apply_word(word)
            acc = None
            for w, c in inner.words.items():
                part = Q.apply_word(w).scale(c)
                acc = part if acc is None else acc + part
            if acc is not None and not acc.is_zero():
                square_zero = False
                break
        assert square_zero == expect
        assert check_linfty(S, 4).ok() == expect


# -- morphisms -------------------------------------------------------------------


def test_identity_morphism_passes():
    S = from_dgla(odd_square_dgla())
    assert morphism_check(identity_morphism(S), 4).ok()


def test_strong_morphism_from_dgla_map():
    # f: L -> N a DGLA morphism induces a strong homotopy morphism
    basis_l = GradedBasis.of(("x", 1), ("y", 2))
    L = DGLA(basis_l, {(0, 0): e(1)}, {})
    basis_n = GradedBasis.of(("u", 1), ("v", 2), ("w", 3))
    N = DGLA(basis_n, {(0, 0): e(1)}, {})
    S, T = from_dgla(L), from_dgla(N)
    f1 = {(0,): e(0), (1,): e(1)}  # x -> u, y -> v: respects d and brackets
    Fm = LInftyMorphism.strong(S, T, f1)
    assert morphism_check(Fm, 4).ok()


def test_non_morphism_detected():
    basis_l = GradedBasis.of(("x", 1), ("y", 2))
    L = DGLA(basis_l, {(0, 0): e(1)}, {})
    S = from_dgla(L)
    f1 = {(0,): e(0, 2), (1,): e(1)}  # x -> 2x breaks the bracket relation
    Fm = LInftyMorphism.strong(S, S, f1)
    rep = morphism_check(Fm, 3)
    assert not rep.ok()


def test_morphism_taylor_components():
    S = abelian_l()
    T = abelian_l()
    f1 = {(0,): e(0)}
    f2 = {(0, 1): e(1)}  # degree check: word (x[1], y[1]) deg 0+1 -> y[1] deg 1
    Fm = LInftyMorphism(S, T, {1: f1, 2: f2})
    tay = Fm.taylor((0, 1))
    assert tay.get(1, {}) == {(1,): 1}
    # f1 kills y, so the square component dies
    assert 2 not in tay
    tay1 = Fm.taylor((0,))
    assert tay1 == {1: {(0,): 1}}
    assert Fm.coalg.comorphism_report(all_words(S.shifted, 4)).ok()


def test_taylor_single_component_is_symmetric_power():
    V = GradedBasis.of(("x", 1), ("z", 1))
    S = LInftyStructure(V, {})
    f1 = {(0,): e(0), (1,): e(1, 2)}
    Fm = LInftyMorphism(S, S, {1: f1})
    tay = Fm.taylor((0, 0, 1))
    assert list(tay) == [3]
    assert tay[3] == {(0, 0, 1): 2}


# -- homotopy Maurer-Cartan --------------------------------------------------------


def tmax3():
    return ArtinDg(GradedBasis.of(("t", 0), ("t2", 0)), {(0, 0): e(1)}, {})


def test_mc_zero_element():
    S = from_dgla(odd_square_dgla())
    assert mc_linfty(S, tmax3(), {}).is_zero()


def test_mc_arity_one_reduces_to_classical_complex():
    basis = GradedBasis.of(("x", 1), ("y", 2))
    L = DGLA(basis, {}, {0: e(1)})
    S = from_dgla(L)
    A = tmax3()
    m = {(0, 0): F(3)}  # 3 x (x) t
    res = mc_linfty(S, A, m)
    M = tensor_dgla(L, A)
    x = M.vector("x", "t", F(3))
    assert res == M.mc_residual(x)


def test_mc_matches_classical_for_dgla_structures():
    # d(a) = b, d(x) = y, [x,x] = y: both the differential and the
    # quadratic term contribute to the residual
    rng = random.Random(11)
    basis = GradedBasis.of(("a", 0), ("x", 1), ("b", 1), ("y", 2))
    L = DGLA(basis, {(1, 1): e(3)}, {0: e(2), 1: e(3)})
    assert check_dgla(L).ok()
    S = from_dgla(L)
    A = tmax3()
    M = tensor_dgla(L, A)
    saw_nonlinear = False
    for _ in range(50):
        m = {}
        x = Element()
        for i in range(len(basis)):
            for j in range(len(A.basis)):
                if basis.degree(i) + A.basis.degree(j) == 1:
                    c = rng.randint(-2, 2)
                    if c:
                        m[(i, j)] = F(c)
                        x.add_term(M.pair_index[(i, j)], F(c))
        res_l = mc_linfty(S, A, m)
        res_c = M.mc_residual(x)
        assert res_l == res_c
        res_s = mc_suspended_residual(S, A, m)
        assert res_s == res_c
        saw_nonlinear = saw_nonlinear or (
            not res_c.is_zero() and not (res_c - M.d(x)).is_zero()
        )
    assert saw_nonlinear


def test_mc_suspended_equals_unsuspended_with_higher_brackets():
    # a genuine arity-3 structure: q3(p (.) p (.) z) = p on the shifted
    # space (degrees p,q,z -> 0,1,-1 after the shift; the word has degree
    # -1, the target degree 0: a degree +1 component)
    V = GradedBasis.of(("p", 1), ("q", 2), ("z", 0))
    tables = {3: {(0, 0, 2): e(0)}}
    S = LInftyStructure(V, tables)
    assert check_linfty(S, 5).ok()

    # base with a degree-1 generator and products deep enough that the
    # cubic bracket sees a nonzero triple product t*t*s
    basis_a = GradedBasis.of(("t", 0), ("t2", 0), ("s", 1), ("st", 1), ("t2s", 1))
    table_a = {
        (0, 0): e(1),  # t*t = t2
        (0, 2): e(3),  # t*s = st
        (0, 3): e(4),  # t*st = t2s
        (1, 2): e(4),  # t2*s = t2s
    }
    A = ArtinDg(basis_a, table_a, {})
    from defalg.dgla import check_na

    assert check_na(A).ok()

    rng = random.Random(7)
    slots = [
        (i, j)
        for i in range(len(V))
        for j in range(len(basis_a))
        if V.degree(i) + basis_a.degree(j) == 1
    ]
    saw_cubic = False
    for _ in range(20):
        m = {}
        for key in slots:
            c = rng.randint(-2, 2)
            if c:
                m[key] = F(c)
        res = mc_linfty(S, A, m)
        assert res == mc_suspended_residual(S, A, m)
        saw_cubic = saw_cubic or not res.is_zero()
    assert saw_cubic


# -- cohomology bracket -------------------------------------------------------------


def test_h_bracket_minimal_structure():
    basis = GradedBasis.of(("a", 0), ("b", 0), ("c", 0))
    L = DGLA(basis, {(0, 1): e(2)}, {})
    S = from_dgla(L)
    rep = h_bracket_check(S)
    assert rep.ok()
    assert rep.info["h_dims"] == {"0": 3}


def test_h_bracket_abelian():
    rep = h_bracket_check(abelian_l())
    assert rep.ok()


def test_h_bracket_matches_dgla_bracket_on_h():
    # Heisenberg in degree 0 plus an exact pair z -> x orthogonal to the
    # brackets: H^0 carries the Heisenberg bracket, H^1 = 0
    basis = GradedBasis.of(("a", 0), ("b", 0), ("c", 0), ("z", 0), ("x", 1))
    L = DGLA(basis, {(0, 1): e(2)}, {3: e(4)})
    assert check_dgla(L).ok()
    S = from_dgla(L)
    rep = h_bracket_check(S)
    assert rep.ok()
    assert rep.info["h_dims"] == {"0": 3, "1": 0}


# -- Hodge models --------------------------------------------------------------------


from defalg.models import (
    derived_hodge_model as derived_model,
    rank_one_hodge_model as rank_one_model,
    trivial_hodge_model as trivial_model,
)


def test_trivial_model_checks_and_F():
    M = trivial_model()
    assert hodge_model_check(M).ok()
    comps, rep = hodge_F(M, 4)
    assert rep.ok()
    # only F_1 survives (tau = 0 kills every higher product)
    assert set(comps) == {1}


def test_rank_one_model_passes():
    M = rank_one_model()
    assert hodge_model_check(M).ok()
    comps, rep = hodge_F(M, 4)
    assert rep.ok()


def test_tau_h_violation_detected():
    space = GradedBasis.of(("c", 0), ("x", 1), ("hp", 1), ("hq", 2), ("hx", 1))
    bideg = [(0, 0), (0, 1), (1, 0), (1, 1), (0, 1)]
    h_space = GradedBasis.of(("Hp", 1), ("Hq", 2), ("Hx", 1))
    incl = {0: e(2), 1: e(3), 2: e(4)}
    proj = {2: e(0), 3: e(1), 4: e(2)}
    delbar = {0: e(1)}
    tau = {4: e(2)}  # tau(hx) = hp: hits and leaves the harmonic subspace
    source = GradedBasis.of(("r", 0),)
    hat = {0: {2: e(2)}}
    M = HodgeModel(
        space, bideg, h_space, incl, proj, {}, delbar, tau, source, {}, {}, hat
    )
    rep = hodge_model_check(M)
    assert not rep.ok()
    locations = {v.location for v in rep.violations}
    assert "tau h" in locations


def test_derived_model_passes_and_F_vanishes():
    M = derived_model()
    rep = hodge_model_check(M)
    assert rep.ok(), rep.text()
    comps, frep = hodge_F(M, 4)
    assert frep.ok(), frep.text()
    # arity-2 and arity-3 components are genuinely nonzero
    assert 2 in comps and 3 in comps


def test_derived_model_has_content_at_arity_two():
    # F_1 applied to the product component alone is nonzero: the identity
    # balances it against the differential part
    M = derived_model()
    A_, G_, B_ = 0, 1, 2
    q_val = M.q_word((A_, B_))
    op = M.hat_of(q_val)
    from defalg.linfty import op_compose

    composed = op_compose(M.projection, op_compose(op, M.inclusion))
    assert not op_is_zero(composed)


def test_broken_q_hat_detected_at_arity_two():
    M = derived_model()
    M.q_table[(0, 2)] = e(6)  # flip the sign of Q(a, b)
    rep = hodge_model_check(M)
    assert not rep.ok()
    comps, frep = hodge_F(M, 2, check_model=False)
    assert not frep.ok()
    assert any("('a', 'b')" in v.location for v in frep.violations)
