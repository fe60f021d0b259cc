"""Sign calculus: Koszul signs, unshuffles, canonical words, symmetrization."""

import itertools
import random
from fractions import Fraction
from math import comb

import pytest

from defalg import core
from defalg.core import (
    Element,
    GradedBasis,
    block_split_sign,
    ext_canonical,
    exterior_sign,
    gerstenhaber_bullet,
    is_unshuffle,
    koszul_sign,
    parity,
    subset_split_sign,
    sym_canonical,
    symmetrize,
    unshuffles,
)
from defalg.errors import InputError


def oracle_koszul(degrees, images):
    """Independent oracle: sort the permuted word back by adjacent swaps,
    each swap of items of degrees (d, e) contributing (-1)^{d e}."""
    word = list(images)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                if degrees[word[i]] * degrees[word[i + 1]] % 2:
                    sign = -sign
                word[i], word[i + 1] = word[i + 1], word[i]
                changed = True
    return Fraction(sign)


def test_koszul_identity_and_swap():
    assert koszul_sign([1, 1], (0, 1)) == 1
    assert koszul_sign([1, 1], (1, 0)) == -1
    assert koszul_sign([2, 1], (1, 0)) == 1
    assert koszul_sign([3, 5], (1, 0)) == -1


def test_koszul_against_adjacent_swap_oracle():
    # worked instance: degrees [1,2,1], sigma = (3,1,2)
    assert koszul_sign([1, 2, 1], (2, 0, 1)) == oracle_koszul([1, 2, 1], (2, 0, 1))
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(1, 6)
        degrees = [rng.randint(-2, 3) for _ in range(n)]
        images = list(range(n))
        rng.shuffle(images)
        assert koszul_sign(degrees, tuple(images)) == oracle_koszul(degrees, images)


def test_koszul_is_sign():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(1, 5)
        degrees = [rng.randint(-3, 3) for _ in range(n)]
        images = list(range(n))
        rng.shuffle(images)
        s = koszul_sign(degrees, tuple(images))
        assert s in (1, -1) and s * s == 1


def test_koszul_cocycle_property():
    # eps(sigma tau; d) = eps(sigma; d) * eps(tau; d o sigma-placement)
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(2, 6)
        degrees = [rng.randint(0, 3) for _ in range(n)]
        sigma = list(range(n))
        tau = list(range(n))
        rng.shuffle(sigma)
        rng.shuffle(tau)
        st = core.compose(tuple(sigma), tuple(tau))
        perm_degrees = [degrees[sigma[i]] for i in range(n)]
        lhs = koszul_sign(degrees, st)
        rhs = koszul_sign(degrees, tuple(sigma)) * koszul_sign(perm_degrees, tuple(tau))
        assert lhs == rhs


def test_koszul_length_mismatch():
    with pytest.raises(InputError):
        koszul_sign([1, 1, 1], (0, 1))


def test_unshuffle_counts_and_membership():
    assert unshuffles(1, 1) == [(0, 1), (1, 0)]
    assert len(unshuffles(2, 2)) == 6
    three = unshuffles(1, 2)
    assert len(three) == 3
    for u in three:
        assert is_unshuffle(u, 1)
    for p in range(0, 5):
        for q in range(0, 9 - p):
            us = unshuffles(p, q)
            assert len(us) == comb(p + q, p)
            assert len(set(us)) == len(us)
            assert all(is_unshuffle(u, p) for u in us)


def test_unshuffles_are_the_monotone_permutations():
    for p, q in [(1, 2), (2, 2), (2, 3)]:
        expected = {
            s for s in itertools.permutations(range(p + q)) if is_unshuffle(s, p)
        }
        assert set(unshuffles(p, q)) == expected


def test_unique_unshuffle_block_factorization():
    # every sigma factors uniquely as (unshuffle) o (block permutation)
    for p, q in [(1, 1), (1, 2), (2, 2), (3, 2), (2, 4)]:
        n = p + q
        blocks = []
        for rho_head in itertools.permutations(range(p)):
            for rho_tail in itertools.permutations(range(p, n)):
                blocks.append(tuple(rho_head) + tuple(rho_tail))
        seen = {}
        for tau in unshuffles(p, q):
            for rho in blocks:
                sigma = core.compose(tau, rho)
                assert sigma not in seen
                seen[sigma] = (tau, rho)
        assert len(seen) == len(list(itertools.permutations(range(n))))


def test_sym_canonical_examples():
    basis = GradedBasis.of(("x", 2), ("y", 2), ("e", 1), ("z", 0))
    deg = basis.degree
    # [y, x] both even -> ([x, y], +1)
    assert sym_canonical([1, 0], deg) == ((0, 1), 1)
    # odd repeat -> zero
    assert sym_canonical([2, 2], deg) is None
    # degrees (z:1, x:1, y:2) with fresh basis
    b2 = GradedBasis.of(("x", 1), ("y", 2), ("z", 1))
    word, sign = sym_canonical([2, 0, 1], b2.degree)
    assert word == (0, 1, 2)
    # oracle: adjacent swaps (z,x,y)->(x,z,y) [-1, odd*odd] ->(x,y,z) [+1, odd*even]
    assert sign == -1


def test_sym_canonical_idempotent_and_reorder_consistent():
    rng = random.Random(3)
    basis = GradedBasis.of(("a", 1), ("b", 2), ("c", 3), ("d", 0))
    for _ in range(100):
        n = rng.randint(1, 5)
        word = [rng.randrange(4) for _ in range(n)]
        canon = sym_canonical(word, basis.degree)
        if canon is None:
            continue
        cw, cs = canon
        again = sym_canonical(cw, basis.degree)
        assert again == (cw, 1)
        # canonicalizing any reordering agrees up to the reordering's sign
        perm = list(range(n))
        rng.shuffle(perm)
        reordered = [word[p] for p in perm]
        re_canon = sym_canonical(reordered, basis.degree)
        assert re_canon is not None
        rw, rs = re_canon
        assert rw == cw
        degs = [basis.degree(i) for i in word]
        assert rs == cs * koszul_sign(degs, tuple(perm))


def test_ext_canonical_even_repeat_is_zero():
    basis = GradedBasis.of(("x", 2), ("e", 1))
    assert ext_canonical([0, 0], basis.degree) is None
    assert ext_canonical([1, 1], basis.degree) == ((1, 1), 1)
    word, sign = ext_canonical([1, 0], basis.degree)
    assert (word, sign) == ((0, 1), -1)  # swap odd past even: parity only


def test_exterior_sign_is_koszul_times_parity():
    degrees = [1, 2, 1, 0]
    for images in itertools.permutations(range(4)):
        assert exterior_sign(degrees, images) == koszul_sign(degrees, images) * parity(
            images
        )


def test_symmetrize_arity_one_and_even_product():
    basis = GradedBasis.of(("x", 0), ("y", 0), ("xy", 0))

    def f(args):
        return Element.basis_vector(args[0])

    assert symmetrize(f, (1,), [0]) == Element.basis_vector(1)

    # f(x (x) y) = xy on a commutative even algebra: f~(x (.) y) = 2xy
    def mul(args):
        a, b = args
        if {a, b} == {0, 1}:
            return Element.basis_vector(2)
        return Element()

    assert symmetrize(mul, (0, 1), [0, 0]) == Element.basis_vector(2, Fraction(2))


def test_symmetrization_lemma_instance():
    # f~ composed with g via (l, m-1)-unshuffles equals the full
    # symmetrization of the composition product f*g, on a 3-letter example
    # with m = 2, l = 2.
    basis = GradedBasis.of(("a", 1), ("b", 2), ("c", 1), ("p", 3), ("q", 2))
    deg = basis.degree
    g_degree = 0

    def g_raw(args):
        # g: tensor^2 V -> V, nonzero on a few slots
        table = {
            (0, 1): Element.basis_vector(3),
            (1, 0): Element.basis_vector(3, Fraction(2)),
            (0, 2): Element.basis_vector(4),
            (2, 0): Element.basis_vector(4, Fraction(-1)),
            (1, 2): Element.basis_vector(0),
        }
        return table.get(args, Element()).copy()

    def f_raw(args):
        # f: tensor^2 V -> V multilinear over Elements in either slot
        def pairs(x):
            return x.terms.items() if isinstance(x, Element) else [(x, Fraction(1))]

        out = Element()
        table = {(3, 2): 0, (0, 3): 1, (4, 0): 2, (0, 4): 3, (2, 3): 4, (0, 0): 2}
        for i, ci in pairs(args[0]):
            for j, cj in pairs(args[1]):
                if (i, j) in table:
                    out.add_term(table[(i, j)], ci * cj)
        return out

    letters = (0, 1, 2)
    degrees = [deg(i) for i in letters]

    # left side: full symmetrization of the composition product
    def fg(args):
        return gerstenhaber_bullet(
            f_raw, 2, g_raw, 2, g_degree, args, [deg(i) if isinstance(i, int) else 0 for i in args]
        )

    lhs = symmetrize(fg, letters, degrees)

    # right side: sum over (l, m-1) = (2, 1) unshuffles of f~(g~(..) (.) ..)
    def f_tilde(args):
        degs = []
        for a in args:
            if isinstance(a, Element):
                degs.append(a.degree(basis) + g_degree - g_degree)
            else:
                degs.append(deg(a))
        return symmetrize(f_raw, args, degs)

    def g_tilde(args):
        return symmetrize(g_raw, args, [deg(i) for i in args])

    rhs = Element()
    for u in unshuffles(2, 1):
        sign = koszul_sign(degrees, u)
        inner = g_tilde(tuple(letters[i] for i in u[:2]))
        part = f_tilde((inner, letters[u[2]]))
        for k, v in part.terms.items():
            rhs.add_term(k, v * sign)
    assert lhs == rhs


def test_block_split_signs():
    degrees = [1, 1, 2]
    assert subset_split_sign(degrees, [0]) == 1
    assert subset_split_sign(degrees, [1]) == -1  # move v2 past odd v1
    assert subset_split_sign(degrees, [2]) == 1  # even moves freely
    assert block_split_sign(degrees, [(1,), (0, 2)]) == -1
