"""Sign-correct substrate: graded bases, sparse elements, Koszul signs,
unshuffles, canonical symmetric words and symmetrization.

Sign conventions are fixed once, in docs/sign_ledger.md; every other
module routes its signs through the functions here (ledger entries K1-K4).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import DomainError, InputError
from .scalars import Q1

# ---------------------------------------------------------------------------
# Graded bases and sparse elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedBasis:
    """Ordered list of named homogeneous basis symbols.

    Declaration order is canonical: it fixes word ordering and makes every
    output deterministic.
    """

    names: tuple
    degrees: tuple

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise InputError("basis names/degrees length mismatch")
        if len(set(self.names)) != len(self.names):
            raise InputError("basis names must be unique")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @staticmethod
    def of(*pairs) -> "GradedBasis":
        return GradedBasis(tuple(n for n, _ in pairs), tuple(d for _, d in pairs))

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"unknown basis symbol {name!r}") from None

    def degree(self, i: int) -> int:
        return self.degrees[i]

    def indices_of_degree(self, d: int):
        return [i for i, deg in enumerate(self.degrees) if deg == d]


class Element:
    """Sparse exact linear combination of basis symbols (no stored zeros)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = v

    @staticmethod
    def basis_vector(i: int, coeff=Q1) -> "Element":
        return Element({i: coeff})

    def copy(self) -> "Element":
        return Element(dict(self.terms))

    def add_term(self, key, coeff):
        new = self.terms.get(key, 0) + coeff
        if new:
            self.terms[key] = new
        else:
            self.terms.pop(key, None)

    def __add__(self, other):
        out = self.copy()
        for k, v in other.terms.items():
            out.add_term(k, v)
        return out

    def __sub__(self, other):
        out = self.copy()
        for k, v in other.terms.items():
            out.add_term(k, -v)
        return out

    def __neg__(self):
        return Element({k: -v for k, v in self.terms.items()})

    def scale(self, c) -> "Element":
        if not c:
            return Element()
        return Element({k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Element) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def degree(self, basis: GradedBasis):
        """The common degree of all terms; DomainError if inhomogeneous."""
        degs = {basis.degree(i) for i in self.terms}
        if len(degs) > 1:
            raise DomainError(f"inhomogeneous element (degrees {sorted(degs)})")
        return degs.pop() if degs else None

    def __repr__(self):
        return f"Element({self.terms!r})"


ZERO = Element()

# ---------------------------------------------------------------------------
# Permutations and Koszul signs
# ---------------------------------------------------------------------------
#
# A permutation sigma of {1..n} is stored as a tuple `images` of 0-based
# values: images[i] = sigma(i+1)-1.  The Koszul sign eps(sigma; v_1..v_n) is
# defined by  v_1 (.) ... (.) v_n = eps * v_{s(1)} (.) ... (.) v_{s(n)}
# (ledger K1): one factor (-1)^{deg v_a * deg v_b} per pair {a,b} whose
# relative order sigma inverts.


def is_permutation(images) -> bool:
    return sorted(images) == list(range(len(images)))


def parity(images) -> int:
    inv = 0
    n = len(images)
    for i in range(n):
        for j in range(i + 1, n):
            if images[i] > images[j]:
                inv += 1
    return -1 if inv % 2 else 1


def koszul_sign(degrees, images) -> Fraction:
    """eps(sigma; degrees): product over inverted pairs of (-1)^{d_a d_b}."""
    if len(degrees) != len(images):
        raise InputError("koszul_sign: degree list and permutation size differ")
    if not is_permutation(images):
        raise InputError(f"not a permutation: {images}")
    sign = 1
    n = len(images)
    for i in range(n):
        for j in range(i + 1, n):
            if images[i] > images[j] and degrees[images[i]] * degrees[images[j]] % 2:
                sign = -sign
    return Fraction(sign)


def exterior_sign(degrees, images) -> Fraction:
    """Koszul sign times permutation parity (the sign for wedge words)."""
    return koszul_sign(degrees, images) * parity(images)


def compose(sigma, tau):
    """(sigma tau)(i) = sigma(tau(i))."""
    return tuple(sigma[t] for t in tau)


def is_unshuffle(images, p: int) -> bool:
    head = images[:p]
    tail = images[p:]
    return all(head[i] < head[i + 1] for i in range(len(head) - 1)) and all(
        tail[i] < tail[i + 1] for i in range(len(tail) - 1)
    )


def unshuffles(p: int, q: int):
    """All (p,q)-unshuffles, ordered lexicographically on the image of the
    first block; count is binomial(p+q, p)."""
    if p < 0 or q < 0:
        raise InputError("unshuffle block sizes must be nonnegative")
    n = p + q
    out = []
    universe = range(n)
    for head in itertools.combinations(universe, p):
        head_set = set(head)
        tail = tuple(i for i in universe if i not in head_set)
        out.append(head + tail)
    assert len(out) == comb(n, p)
    return out


def subset_split_sign(degrees, subset) -> Fraction:
    """Koszul sign eps(I, I^c) for pulling the positions in `subset`
    (0-based, will be sorted) to the front, complement order preserved."""
    ordered = tuple(sorted(subset))
    rest = tuple(i for i in range(len(degrees)) if i not in set(ordered))
    return koszul_sign(degrees, ordered + rest)


def block_split_sign(degrees, blocks) -> Fraction:
    """Koszul sign for rearranging positions 0..n-1 into the given disjoint
    blocks (each block kept in its listed order)."""
    images = tuple(itertools.chain.from_iterable(blocks))
    return koszul_sign(degrees, images)


# ---------------------------------------------------------------------------
# Canonical symmetric words
# ---------------------------------------------------------------------------


def sym_canonical(indices, degree_of):
    """Canonical form of a symmetric word of basis indices.

    Returns (sorted_tuple, koszul_sign) or None when the word is zero
    (an odd-degree symbol repeated; char 0 kills 2(e.e)).
    `degree_of` maps a basis index to its degree.
    """
    word = list(indices)
    degrees = [degree_of(i) for i in word]
    sign = 1
    # insertion sort, accumulating (-1)^{d_a d_b} per adjacent swap
    for i in range(1, len(word)):
        j = i
        while j > 0 and word[j - 1] > word[j]:
            if degrees[j - 1] * degrees[j] % 2:
                sign = -sign
            word[j - 1], word[j] = word[j], word[j - 1]
            degrees[j - 1], degrees[j] = degrees[j], degrees[j - 1]
            j -= 1
    for a, b in zip(word, word[1:]):
        if a == b and degree_of(a) % 2:
            return None
    return tuple(word), Fraction(sign)


def ext_canonical(indices, degree_of):
    """Canonical form of a wedge word: sorted with the exterior sign
    (Koszul times parity); zero when an even-degree symbol repeats."""
    word = list(indices)
    degrees = [degree_of(i) for i in word]
    sign = 1
    for i in range(1, len(word)):
        j = i
        while j > 0 and word[j - 1] > word[j]:
            if degrees[j - 1] * degrees[j] % 2 == 0:
                sign = -sign
            word[j - 1], word[j] = word[j], word[j - 1]
            degrees[j - 1], degrees[j] = degrees[j], degrees[j - 1]
            j -= 1
    for a, b in zip(word, word[1:]):
        if a == b and degree_of(a) % 2 == 0:
            return None
    return tuple(word), Fraction(sign)


# ---------------------------------------------------------------------------
# Symmetrization and the composition product
# ---------------------------------------------------------------------------


def signed_permutations(degrees):
    """Yield (eps(sigma), images) over the full symmetric group."""
    for images in itertools.permutations(range(len(degrees))):
        yield koszul_sign(degrees, images), images


def symmetrize(f, args, degrees) -> Element:
    """f~(a_1 (.) ... (.) a_m) = sum over all permutations with Koszul signs.

    `f` is a multilinear map taking a tuple of args and returning Element.
    """
    if len(args) != len(degrees):
        raise InputError("symmetrize: args/degrees arity mismatch")
    out = Element()
    for sign, images in signed_permutations(degrees):
        part = f(tuple(args[i] for i in images))
        for k, v in part.terms.items():
            out.add_term(k, v * sign)
    return out


def gerstenhaber_bullet(f, m, g, l, g_degree, args, degrees) -> Element:
    """Composition product (f o g) on m+l-1 tensor arguments:
    sum_i (-1)^{g_degree*(d_1+..+d_i)} f(a_1,..,a_i, g(a_{i+1}..a_{i+l}), .., a_{m+l-1}).

    `g` returns an Element over the same basis the remaining args live in;
    `f` must accept Element arguments in the substituted slot (the caller
    provides a multilinear f).
    """
    if len(args) != m + l - 1:
        raise InputError("gerstenhaber_bullet: arity mismatch")
    out = Element()
    for i in range(m):
        sign = 1
        if g_degree % 2 and sum(degrees[:i]) % 2:
            sign = -1
        inner = g(tuple(args[i : i + l]))
        part = f(tuple(args[:i]) + (inner,) + tuple(args[i + l :]))
        for k, v in part.terms.items():
            out.add_term(k, v * sign)
    return out
