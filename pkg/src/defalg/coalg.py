"""Truncated reduced symmetric coalgebras: the subset coproduct, iterated
coproducts, the embedding into symmetric tensors, and the lifting formulas
turning corestriction components into coderivations and coalgebra morphisms.

Elements of S(V) (reduced: word length >= 1) are sparse maps from canonical
words (tuples of basis indices) to Fraction.  All computations are truncated
at an explicit word length; conclusions about words of length <= N are exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .core import (
    Element,
    GradedBasis,
    koszul_sign,
    signed_permutations,
    subset_split_sign,
    sym_canonical,
    unshuffles,
)
from .errors import DomainError, InputError
from .report import CheckReport

# ---------------------------------------------------------------------------
# Words and sparse coalgebra elements
# ---------------------------------------------------------------------------


def word_degree(basis: GradedBasis, word) -> int:
    return sum(basis.degree(i) for i in word)


def canonical_word(basis: GradedBasis, word):
    """(canonical word, sign) or None for the zero word."""
    return sym_canonical(word, basis.degree)


class SymElement:
    """Sparse element of the reduced symmetric algebra on a graded basis."""

    __slots__ = ("basis", "words")

    def __init__(self, basis: GradedBasis, words=None):
        self.basis = basis
        self.words = {}
        if words:
            for w, c in words.items():
                if c:
                    self.words[w] = c

    @staticmethod
    def of_word(basis, word, coeff=Fraction(1)):
        out = SymElement(basis)
        out.add_word(word, coeff)
        return out

    def add_word(self, word, coeff):
        canon = canonical_word(self.basis, word)
        if canon is None or not coeff:
            return
        w, sign = canon
        val = self.words.get(w, 0) + coeff * sign
        if val:
            self.words[w] = val
        else:
            self.words.pop(w, None)

    def __add__(self, other):
        out = SymElement(self.basis, dict(self.words))
        for w, c in other.words.items():
            val = out.words.get(w, 0) + c
            if val:
                out.words[w] = val
            else:
                out.words.pop(w, None)
        return out

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, c):
        if not c:
            return SymElement(self.basis)
        return SymElement(self.basis, {w: v * c for w, v in self.words.items()})

    def is_zero(self):
        return not self.words

    def __eq__(self, other):
        return isinstance(other, SymElement) and self.words == other.words

    def component(self, length):
        return {w: c for w, c in self.words.items() if len(w) == length}

    def __repr__(self):
        def show(w):
            return "(.)".join(self.basis.names[i] for i in w)

        return " + ".join(f"{c}*{show(w)}" for w, c in sorted(self.words.items())) or "0"


class TensorProductElement:
    """Sparse element of S(V)^{(x) k}: maps k-tuples of canonical words to
    coefficients.  Used for iterated coproducts."""

    __slots__ = ("basis", "slots", "terms")

    def __init__(self, basis, slots, terms=None):
        self.basis = basis
        self.slots = slots
        self.terms = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = v

    def add(self, key, coeff):
        if not coeff:
            return
        val = self.terms.get(key, 0) + coeff
        if val:
            self.terms[key] = val
        else:
            self.terms.pop(key, None)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, TensorProductElement)
            and self.slots == other.slots
            and self.terms == other.terms
        )

    def __sub__(self, other):
        out = TensorProductElement(self.basis, self.slots, dict(self.terms))
        for k, v in other.terms.items():
            out.add(k, -v)
        return out


# ---------------------------------------------------------------------------
# Coproduct and the symmetric-tensor embedding
# ---------------------------------------------------------------------------


def coproduct(basis: GradedBasis, word) -> TensorProductElement:
    """Reduced coproduct: sum over nonempty proper position subsets I with
    the Koszul sign eps(I, I^c) of w_I (x) w_{I^c} (sign ledger C1)."""
    n = len(word)
    degrees = [basis.degree(i) for i in word]
    out = TensorProductElement(basis, 2)
    for mask in range(1, (1 << n) - 1):
        left = tuple(i for i in range(n) if mask >> i & 1)
        right = tuple(i for i in range(n) if not mask >> i & 1)
        sign = subset_split_sign(degrees, left)
        lw = canonical_word(basis, tuple(word[i] for i in left))
        rw = canonical_word(basis, tuple(word[i] for i in right))
        if lw is None or rw is None:
            continue
        out.add((lw[0], rw[0]), sign * lw[1] * rw[1])
    return out


def coproduct_element(el: SymElement) -> TensorProductElement:
    out = TensorProductElement(el.basis, 2)
    for w, c in el.words.items():
        part = coproduct(el.basis, w)
        for k, v in part.terms.items():
            out.add(k, v * c)
    return out


def iterated_coproduct(basis: GradedBasis, word, slots: int) -> TensorProductElement:
    """l^{(slots-1)}: S(V) -> S(V)^{(x) slots}, by ordered set partitions of
    the word positions into `slots` nonempty blocks with Koszul signs.
    Coassociativity makes any composition order agree with this formula."""
    n = len(word)
    degrees = [basis.degree(i) for i in word]
    out = TensorProductElement(basis, slots)

    def partitions(rest, k):
        if k == 1:
            yield (tuple(rest),)
            return
        rest = tuple(rest)
        for mask in range(1, 1 << len(rest)):
            block = tuple(rest[i] for i in range(len(rest)) if mask >> i & 1)
            remaining = tuple(rest[i] for i in range(len(rest)) if not mask >> i & 1)
            if not remaining and k > 1:
                continue
            for tail in partitions(remaining, k - 1):
                yield (block,) + tail

    for blocks in partitions(range(n), slots):
        if any(not b for b in blocks):
            continue
        sign = koszul_sign(degrees, tuple(i for b in blocks for i in b))
        words = []
        total_sign = sign
        ok = True
        for b in blocks:
            cw = canonical_word(basis, tuple(word[i] for i in b))
            if cw is None:
                ok = False
                break
            words.append(cw[0])
            total_sign *= cw[1]
        if ok:
            out.add(tuple(words), total_sign)
    return out


def n_map(basis: GradedBasis, word) -> dict:
    """N(v_1 (.) ... (.) v_n) = sum over all permutations with Koszul signs,
    valued in the tensor algebra (tuples of indices, order significant)."""
    degrees = [basis.degree(i) for i in word]
    out = {}
    for sign, images in signed_permutations(degrees):
        key = tuple(word[i] for i in images)
        val = out.get(key, 0) + sign
        if val:
            out[key] = val
        else:
            out.pop(key, None)
    return out


def tensor_coproduct_reduced(tensor: dict) -> dict:
    """Reduced deconcatenation on the tensor algebra: the oracle side of
    the N-map intertwining law.  Keys are (left_tuple, right_tuple)."""
    out = {}
    for word, c in tensor.items():
        for cut in range(1, len(word)):
            key = (word[:cut], word[cut:])
            val = out.get(key, 0) + c
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


# ---------------------------------------------------------------------------
# Coderivations
# ---------------------------------------------------------------------------


class ComponentMap:
    """Corestriction components q_k: k-th symmetric power -> V, all of one
    degree; the table maps canonical words of length k to Elements of V."""

    def __init__(self, basis: GradedBasis, degree: int, tables):
        self.basis = basis
        self.degree = degree
        self.tables = {}
        for k, table in tables.items():
            clean = {}
            for word, value in table.items():
                canon = canonical_word(basis, word)
                if canon is None:
                    raise InputError(f"component on a zero word {word}")
                cw, sign = canon
                if cw != tuple(word):
                    raise InputError(f"component word {word} is not canonical")
                if not value.is_zero():
                    clean[cw] = value.copy()
                    got = value.degree(basis)
                    want = word_degree(basis, cw) + degree
                    if got is not None and got != want:
                        raise DomainError(
                            f"component q_{k}{word} has degree {got}, expected {want}"
                        )
            if clean:
                self.tables[k] = clean

    def arities(self):
        return sorted(self.tables)

    def apply_word(self, word) -> Element:
        """q_{len(word)} on a not-necessarily-canonical word."""
        table = self.tables.get(len(word))
        if not table:
            return Element()
        canon = canonical_word(self.basis, word)
        if canon is None:
            return Element()
        cw, sign = canon
        base = table.get(cw)
        if base is None:
            return Element()
        return base.scale(sign)

    def apply(self, el: SymElement) -> Element:
        out = Element()
        for w, c in el.words.items():
            part = self.apply_word(w)
            for k, v in part.terms.items():
                out.add_term(k, v * c)
        return out


class Coderivation:
    """Coderivation of S(V) presented by its corestriction components.

    The lift is Q(w) = sum_k sum_{(k, n-k) unshuffles} eps * q_k(front) (.)
    rest (sign ledger C2); it preserves word length filtration and is the
    unique coderivation with the given components.
    """

    def __init__(self, components: ComponentMap):
        self.components = components
        self.basis = components.basis
        self.degree = components.degree

    def apply_word(self, word) -> SymElement:
        n = len(word)
        degrees = [self.basis.degree(i) for i in word]
        out = SymElement(self.basis)
        for k in self.components.arities():
            if k > n:
                continue
            for u in unshuffles(k, n - k):
                sign = koszul_sign(degrees, u)
                front = tuple(word[i] for i in u[:k])
                rest = tuple(word[i] for i in u[k:])
                value = self.components.apply_word(front)
                for idx, c in value.terms.items():
                    out.add_word((idx,) + rest, c * sign)
        return out

    def apply(self, el: SymElement) -> SymElement:
        out = SymElement(self.basis)
        for w, c in el.words.items():
            out = out + self.apply_word(w).scale(c)
        return out

    def corestriction(self, word) -> Element:
        """(Q w)^1: the V-component of the lift."""
        full = self.apply_word(word)
        out = Element()
        for w, c in full.words.items():
            if len(w) == 1:
                out.add_term(w[0], c)
        return out

    def coleibnitz_report(self, words) -> CheckReport:
        """Delta Q = (Q (x) Id + Id (x) Q) Delta on the given words."""
        rep = CheckReport("coder-coleibnitz")
        for word in words:
            lhs = coproduct_element(self.apply_word(word))
            rhs = TensorProductElement(self.basis, 2)
            for (lw, rw), c in coproduct(self.basis, word).terms.items():
                for w2, c2 in self.apply_word(lw).words.items():
                    rhs.add((w2, rw), c * c2)
                sign = -1 if (self.degree * word_degree(self.basis, lw)) % 2 else 1
                for w2, c2 in self.apply_word(rw).words.items():
                    rhs.add((lw, w2), c * c2 * sign)
            if not (lhs - rhs).is_zero():
                rep.add(
                    f"word {word}",
                    str((lhs - rhs).terms),
                    "coLeibnitz fails",
                )
        return rep


def coder_lift(basis, degree, tables) -> Coderivation:
    """Assemble a coderivation from raw component tables
    {arity: {word: Element}}."""
    return Coderivation(ComponentMap(basis, degree, tables))


def coder_square_corestriction(Q: Coderivation, word) -> Element:
    """(Q o Q)^1 on a word; zero for all words iff Q is a codifferential."""
    out = Element()
    inner = Q.apply_word(word)
    for w, c in inner.words.items():
        part = Q.corestriction(w)
        for k, v in part.terms.items():
            out.add_term(k, v * c)
    return out


# ---------------------------------------------------------------------------
# Coalgebra morphisms
# ---------------------------------------------------------------------------


class CoalgMorphism:
    """Morphism S(V) -> S(W) presented by degree-0 components f_k: k-th
    symmetric power of V -> W; the lift is F = sum_s ((.)^s f)/s! of the
    iterated coproduct (sign ledger C3)."""

    def __init__(self, source: GradedBasis, target: GradedBasis, tables):
        self.source = source
        self.target = target
        self.tables = {}
        for k, table in tables.items():
            clean = {}
            for word, value in table.items():
                canon = canonical_word(source, word)
                if canon is None:
                    raise InputError(f"morphism component on a zero word {word}")
                if canon[0] != tuple(word):
                    raise InputError(f"component word {word} is not canonical")
                if not value.is_zero():
                    got = value.degree(target)
                    want = word_degree(source, word)
                    if got is not None and got != want:
                        raise DomainError(
                            f"morphism component f_{k}{word} is not degree 0"
                        )
                    clean[tuple(word)] = value.copy()
            if clean:
                self.tables[k] = clean

    def component_word(self, word) -> Element:
        table = self.tables.get(len(word))
        if not table:
            return Element()
        canon = canonical_word(self.source, word)
        if canon is None:
            return Element()
        cw, sign = canon
        base = table.get(cw)
        return base.scale(sign) if base is not None else Element()

    def component(self, el: SymElement) -> Element:
        out = Element()
        for w, c in el.words.items():
            for k, v in self.component_word(w).terms.items():
                out.add_term(k, v * c)
        return out

    def apply_word(self, word) -> SymElement:
        """F(w) = sum over ordered partitions into s blocks, divided by s!."""
        n = len(word)
        out = SymElement(self.target)
        for s in range(1, n + 1):
            parts = iterated_coproduct(self.source, word, s)
            scale = Fraction(1, factorial(s))
            for block_words, sign in parts.terms.items():
                # apply f to every slot (components have degree 0: no signs),
                # then multiply the resulting target vectors symmetrically
                factors = [self.component_word(bw) for bw in block_words]
                if any(f.is_zero() for f in factors):
                    continue
                self._accumulate_products(out, factors, sign * scale)
        return out

    def _accumulate_products(self, out, factors, coeff):
        def rec(i, word_acc, c_acc):
            if i == len(factors):
                out.add_word(tuple(word_acc), c_acc)
                return
            for idx, c in factors[i].terms.items():
                rec(i + 1, word_acc + [idx], c_acc * c)

        rec(0, [], coeff)

    def apply(self, el: SymElement) -> SymElement:
        out = SymElement(self.target)
        for w, c in el.words.items():
            out = out + self.apply_word(w).scale(c)
        return out

    def comorphism_report(self, words) -> CheckReport:
        """l F = (F (x) F) l on the given source words."""
        rep = CheckReport("comorphism")
        for word in words:
            lhs = coproduct_element(self.apply_word(word))
            rhs = TensorProductElement(self.target, 2)
            for (lw, rw), c in coproduct(self.source, word).terms.items():
                for w1, c1 in self.apply_word(lw).words.items():
                    for w2, c2 in self.apply_word(rw).words.items():
                        rhs.add((w1, w2), c * c1 * c2)
            if not (lhs - rhs).is_zero():
                rep.add(f"word {word}", str((lhs - rhs).terms), "l F != (F x F) l")
        return rep


def morphism_lift(source, target, tables) -> CoalgMorphism:
    return CoalgMorphism(source, target, tables)


def compose_morphisms(G: CoalgMorphism, F: CoalgMorphism, words) -> dict:
    """Components of G o F on the given canonical source words:
    {word: Element} with (G o F)^1 = G^1 o F."""
    out = {}
    for word in words:
        img = F.apply_word(word)
        val = G.component(img)
        out[tuple(word)] = val
    return out


def all_words(basis: GradedBasis, max_len: int, min_len: int = 1):
    """All canonical words of length min_len..max_len (odd symbols without
    repetition), in deterministic order."""
    idx = list(range(len(basis)))
    out = []

    def rec(start, word, length):
        if length == 0:
            out.append(tuple(word))
            return
        for i in idx[start:]:
            if word and word[-1] == i and basis.degree(i) % 2:
                continue
            if basis.degree(i) % 2 and i in word:
                continue
            rec(i, word + [i], length - 1)

    for n in range(min_len, max_len + 1):
        rec(0, [], n)
    return out
