"""Truncated tensor algebras, exponential/logarithm, the Dynkin-Specht-Wever
projection, Friedrichs' Lie-membership test, and Baker-Campbell-Hausdorff
products computed two independent ways (series oracle vs explicit term sum).

Generators here are ungraded (degree 0); graded brackets live in `dgla`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import linalg
from .core import Element, GradedBasis
from .errors import DomainError, InputError, InternalError, StructureError

# ---------------------------------------------------------------------------
# Truncated tensor series
# ---------------------------------------------------------------------------


class TensorSeries:
    """Element of the tensor algebra on named degree-0 generators, truncated
    at word length `order`.  Words are tuples of generator indices; the empty
    word is the constant term."""

    __slots__ = ("gens", "order", "words")

    def __init__(self, gens, order, words=None):
        self.gens = tuple(gens)
        self.order = order
        self.words = {}
        if words:
            for w, c in words.items():
                if c and len(w) <= order:
                    self.words[w] = c

    @staticmethod
    def zero(gens, order):
        return TensorSeries(gens, order)

    @staticmethod
    def one(gens, order):
        return TensorSeries(gens, order, {(): Fraction(1)})

    @staticmethod
    def generator(gens, order, name):
        gens = tuple(gens)
        if name not in gens:
            raise InputError(f"unknown generator {name!r}")
        return TensorSeries(gens, order, {(gens.index(name),): Fraction(1)})

    def _check_compat(self, other):
        if self.gens != other.gens or self.order != other.order:
            raise InputError("tensor series on different generators/truncations")

    def copy(self):
        return TensorSeries(self.gens, self.order, dict(self.words))

    def add_term(self, word, coeff):
        if len(word) > self.order:
            return
        new = self.words.get(word, 0) + coeff
        if new:
            self.words[word] = new
        else:
            self.words.pop(word, None)

    def __add__(self, other):
        self._check_compat(other)
        out = self.copy()
        for w, c in other.words.items():
            out.add_term(w, c)
        return out

    def __sub__(self, other):
        self._check_compat(other)
        out = self.copy()
        for w, c in other.words.items():
            out.add_term(w, -c)
        return out

    def __neg__(self):
        return TensorSeries(self.gens, self.order, {w: -c for w, c in self.words.items()})

    def scale(self, c):
        if not c:
            return TensorSeries.zero(self.gens, self.order)
        return TensorSeries(self.gens, self.order, {w: v * c for w, v in self.words.items()})

    def __mul__(self, other):
        self._check_compat(other)
        out = TensorSeries.zero(self.gens, self.order)
        for w1, c1 in self.words.items():
            for w2, c2 in other.words.items():
                if len(w1) + len(w2) <= self.order:
                    out.add_term(w1 + w2, c1 * c2)
        return out

    def bracket(self, other):
        return self * other - other * self

    def constant_term(self):
        return self.words.get((), Fraction(0))

    def is_zero(self):
        return not self.words

    def __eq__(self, other):
        return (
            isinstance(other, TensorSeries)
            and self.gens == other.gens
            and self.order == other.order
            and self.words == other.words
        )

    def component(self, length):
        return {w: c for w, c in self.words.items() if len(w) == length}

    def max_length(self):
        return max((len(w) for w in self.words), default=0)

    def __repr__(self):
        names = lambda w: "*".join(self.gens[i] for i in w) or "1"
        parts = [f"{c}·{names(w)}" for w, c in sorted(self.words.items())]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Exponential, logarithm, DSW projection, Friedrichs test
# ---------------------------------------------------------------------------


def tensor_exp(x: TensorSeries, order=None) -> TensorSeries:
    """e^x = sum x^n / n!, truncated; requires zero constant term."""
    if x.constant_term() != 0:
        raise DomainError("tensor_exp needs a zero constant term")
    order = x.order if order is None else order
    out = TensorSeries.one(x.gens, order)
    power = TensorSeries.one(x.gens, order)
    xo = TensorSeries(x.gens, order, x.words)
    for n in range(1, order + 1):
        power = power * xo
        if power.is_zero():
            break
        out = out + power.scale(Fraction(1, factorial(n)))
    return out


def tensor_log(y: TensorSeries, order=None) -> TensorSeries:
    """log(1+x) = sum (-1)^{n-1} x^n / n; requires constant term 1."""
    if y.constant_term() != 1:
        raise DomainError("tensor_log needs constant term 1")
    order = y.order if order is None else order
    x = TensorSeries(y.gens, order, y.words)
    x.add_term((), Fraction(-1))
    out = TensorSeries.zero(y.gens, order)
    power = TensorSeries.one(y.gens, order)
    for n in range(1, order + 1):
        power = power * x
        if power.is_zero():
            break
        out = out + power.scale(Fraction((-1) ** (n - 1), n))
    return out


def right_nested_bracket(gens, order, word) -> TensorSeries:
    """[v1,[v2,[...,[v_{n-1},v_n]].]] expanded inside the tensor algebra."""
    if not word:
        raise InputError("empty bracket word")
    out = TensorSeries(gens, order, {(word[-1],): Fraction(1)})
    for idx in reversed(word[:-1]):
        v = TensorSeries(gens, order, {(idx,): Fraction(1)})
        out = v.bracket(out)
    return out


def dsw_project(x: TensorSeries) -> TensorSeries:
    """Dynkin-Specht-Wever map: each word w of length n goes to its
    right-nested bracketing divided by n.  A projection onto the free Lie
    algebra (sign ledger F1)."""
    if x.constant_term() != 0:
        raise DomainError("dsw_project needs a zero constant term")
    out = TensorSeries.zero(x.gens, x.order)
    for w, c in x.words.items():
        nested = right_nested_bracket(x.gens, x.order, w)
        out = out + nested.scale(c * Fraction(1, len(w)))
    return out


def is_lie(x: TensorSeries) -> bool:
    """Friedrichs' criterion: x is a Lie element iff the DSW map fixes it."""
    return dsw_project(x) == x


@dataclass(frozen=True)
class LieWord:
    """Right-nested bracket word with an exact coefficient."""

    letters: tuple
    coeff: Fraction = Fraction(1)

    def expand(self, gens, order) -> TensorSeries:
        gens = tuple(gens)
        idx = tuple(gens.index(l) if isinstance(l, str) else l for l in self.letters)
        return right_nested_bracket(gens, order, idx).scale(self.coeff)


# ---------------------------------------------------------------------------
# Baker-Campbell-Hausdorff
# ---------------------------------------------------------------------------


def _bch_term_compositions(max_len):
    """Yield (coeff, ops, last) over the explicit BCH term sum: for each n and
    each composition (p_1,q_1)..(p_n,q_n) with p_i+q_i > 0 and total <= max_len,
    the word ad(a)^{p_1}ad(b)^{q_1}...ad(a)^{p_n}ad(b)^{q_n-1}(last) with
    coefficient (-1)^{n-1}/(n * m * prod p_i! q_i!), m = total length.

    Terms whose trailing block forces [x,x] = 0 are skipped.
    """
    def compositions(budget, parts):
        if parts == 0:
            yield ()
            return
        for p in range(budget + 1):
            for q in range(budget - p + 1):
                if p + q == 0 or p + q > budget - (parts - 1):
                    continue
                for rest in compositions(budget - p - q, parts - 1):
                    yield ((p, q),) + rest

    for n in range(1, max_len + 1):
        for combo in compositions(max_len, n):
            m = sum(p + q for p, q in combo)
            p_n, q_n = combo[-1]
            if q_n >= 2 or (q_n == 0 and p_n >= 2):
                continue  # inner ad(x)x = [x,x] = 0
            ops = []
            for p, q in combo[:-1]:
                ops += ["a"] * p + ["b"] * q
            if q_n == 0:
                ops += ["a"] * (p_n - 1)
                last = "a"
            else:
                ops += ["a"] * p_n + ["b"] * (q_n - 1)
                last = "b"
            denom = n * m
            for p, q in combo:
                denom *= factorial(p) * factorial(q)
            yield Fraction((-1) ** (n - 1), denom), ops, last


def bch_term_sum(a, b, bracket, max_len, add, zero):
    """Generic explicit BCH driver over any bracket (sign ledger F2)."""
    total = zero
    for coeff, ops, last in _bch_term_compositions(max_len):
        value = a if last == "a" else b
        for op in reversed(ops):
            value = bracket(a if op == "a" else b, value)
        total = add(total, value, coeff)
    return total


def bch_free(a: TensorSeries, b: TensorSeries, order=None) -> TensorSeries:
    """Series oracle: sigma(log(e^a e^b)) inside the truncated tensor algebra."""
    a._check_compat(b)
    order = a.order if order is None else order
    product = tensor_exp(a, order) * tensor_exp(b, order)
    return dsw_project(tensor_log(product, order))


def bch_explicit(a: TensorSeries, b: TensorSeries, order=None) -> TensorSeries:
    """Explicit termwise BCH sum, expanded in the tensor algebra."""
    a._check_compat(b)
    order = a.order if order is None else order
    ao = TensorSeries(a.gens, order, a.words)
    bo = TensorSeries(b.gens, order, b.words)
    return bch_term_sum(
        ao,
        bo,
        lambda x, y: x.bracket(y),
        order,
        lambda acc, v, c: acc + v.scale(c),
        TensorSeries.zero(a.gens, order),
    )


# ---------------------------------------------------------------------------
# Nilpotent Lie algebras
# ---------------------------------------------------------------------------


class NilpotentLie:
    """Finite-dimensional nilpotent Lie algebra given by structure constants.

    `table[(i, j)]` is the Element [e_i, e_j]; missing pairs mean zero.
    Antisymmetry, Jacobi, and nilpotency are verified at construction.
    """

    def __init__(self, basis: GradedBasis, table):
        self.basis = basis
        self.table = {}
        n = len(basis)
        for (i, j), val in table.items():
            if not val.is_zero():
                self.table[(i, j)] = val
        for i in range(n):
            for j in range(n):
                if (i, j) in self.table and (j, i) in self.table:
                    lhs = self.table[(i, j)]
                    rhs = self.table[(j, i)]
                    if not (lhs + rhs).is_zero():
                        raise StructureError(
                            f"antisymmetry fails on ({basis.names[i]}, {basis.names[j]})"
                        )
            if not self.bracket_basis(i, i).is_zero():
                raise StructureError(f"[{basis.names[i]}, {basis.names[i]}] != 0")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    jac = (
                        self.bracket(self.bracket_basis(i, j), Element.basis_vector(k))
                        + self.bracket(self.bracket_basis(j, k), Element.basis_vector(i))
                        + self.bracket(self.bracket_basis(k, i), Element.basis_vector(j))
                    )
                    if not jac.is_zero():
                        raise StructureError(
                            "Jacobi fails on "
                            f"({basis.names[i]}, {basis.names[j]}, {basis.names[k]})"
                        )
        self.nilpotency_index = self._compute_nilpotency()

    def bracket_basis(self, i, j) -> Element:
        if (i, j) in self.table:
            return self.table[(i, j)].copy()
        if (j, i) in self.table:
            return self.table[(j, i)].scale(Fraction(-1))
        return Element()

    def bracket(self, x: Element, y: Element) -> Element:
        out = Element()
        for i, ci in x.terms.items():
            for j, cj in y.terms.items():
                for k, ck in self.bracket_basis(i, j).terms.items():
                    out.add_term(k, ci * cj * ck)
        return out

    def _compute_nilpotency(self):
        """Smallest s with L^s = 0 for the lower central series; error if the
        algebra is not nilpotent."""
        n = len(self.basis)
        span = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
        s = 1
        while span:
            if s > n + 1:
                raise StructureError("algebra is not nilpotent")
            nxt = []
            for i in range(n):
                for vec in span:
                    x = Element({k: c for k, c in enumerate(vec) if c})
                    br = self.bracket(Element.basis_vector(i), x)
                    if not br.is_zero():
                        nxt.append([br.terms.get(k, Fraction(0)) for k in range(n)])
            rows, pivots = linalg.rref(nxt) if nxt else ([], [])
            span = [rows[r] for r in range(len(pivots))]
            s += 1
        return s

    def bch(self, x: Element, y: Element) -> Element:
        """The group law x * y; terminates because bracket words of length
        >= nilpotency_index vanish."""
        result = bch_term_sum(
            x,
            y,
            self.bracket,
            self.nilpotency_index - 1 if self.nilpotency_index > 1 else 1,
            lambda acc, v, c: acc + v.scale(c),
            Element(),
        )
        # safety: every longer bracket must vanish
        probe = x
        for _ in range(self.nilpotency_index):
            probe = self.bracket(y, probe)
        if not probe.is_zero():
            raise InternalError("nilpotency bound exceeded in BCH sum")
        return result
