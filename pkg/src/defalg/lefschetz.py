"""The exterior algebra of a Hermitian space in its standard basis: the
operators L, Lambda, C, *, the projections, exact verification of the
commutation relations, primitivity testing and the Lefschetz decomposition.

Basis symbols are indexed by four disjoint sets (A, B, M, N) partitioning
{1..n}; bidegree (|A|+|M|, |B|+|M|); weight = |N| - |M| = n - total degree.
The * operator is DEFINED through its explicit swap form composed with C
(sign ledger X1); the wedge characterization is a verified invariant, not a
definition.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

from .errors import DomainError, InputError
from .report import CheckReport
from .scalars import GAUSS_ONE, GaussianScalar

# keys are (A, B, M, N): four sorted tuples of 1-based indices


def make_key(n, A, B, M, N):
    A, B, M, N = (tuple(sorted(s)) for s in (A, B, M, N))
    union = list(A) + list(B) + list(M) + list(N)
    if sorted(union) != list(range(1, n + 1)):
        raise InputError(f"(A,B,M,N) must partition 1..{n}: got {(A,B,M,N)}")
    return (A, B, M, N)


def all_keys(n):
    out = []
    universe = range(1, n + 1)
    for assignment in itertools.product(range(4), repeat=n):
        A, B, M, N = [], [], [], []
        for idx, slot in zip(universe, assignment):
            (A, B, M, N)[slot].append(idx)
        out.append((tuple(A), tuple(B), tuple(M), tuple(N)))
    return out


def bidegree(key):
    A, B, M, N = key
    return (len(A) + len(M), len(B) + len(M))


def total_degree(key):
    a, b = bidegree(key)
    return a + b


def weight(key):
    _, _, M, N = key
    return len(N) - len(M)


class CovectorElement:
    """Sparse exact combination of standard basis symbols over Q(i)."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = v

    @staticmethod
    def basis(n, key, coeff=GAUSS_ONE):
        return CovectorElement(n, {key: coeff})

    def add_term(self, key, coeff):
        val = self.terms.get(key, GaussianScalar.of(0)) + coeff
        if val:
            self.terms[key] = val
        else:
            self.terms.pop(key, None)

    def __add__(self, other):
        out = CovectorElement(self.n, dict(self.terms))
        for k, v in other.terms.items():
            out.add_term(k, v)
        return out

    def __sub__(self, other):
        out = CovectorElement(self.n, dict(self.terms))
        for k, v in other.terms.items():
            out.add_term(k, -v)
        return out

    def scale(self, c):
        if isinstance(c, (int, Fraction)):
            c = GaussianScalar.of(c)
        if not c:
            return CovectorElement(self.n)
        return CovectorElement(self.n, {k: v * c for k, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, CovectorElement)
            and self.n == other.n
            and self.terms == other.terms
        )

    def homogeneous_degree(self):
        degs = {total_degree(k) for k in self.terms}
        if len(degs) > 1:
            raise DomainError("inhomogeneous covector")
        return degs.pop() if degs else None

    def conjugate(self) -> "CovectorElement":
        out = CovectorElement(self.n)
        for (A, B, M, N), v in self.terms.items():
            sign = (-1) ** ((len(A) * len(B)) % 2)
            out.add_term((B, A, M, N), v.conjugate() * sign)
        return out

    def __repr__(self):
        def show(key):
            A, B, M, N = key
            return f"z[A={A},B={B},M={M},N={N}]"

        return (
            " + ".join(f"({v})*{show(k)}" for k, v in sorted(self.terms.items()))
            or "0"
        )


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------


def op_L_i(i, v: CovectorElement) -> CovectorElement:
    out = CovectorElement(v.n)
    for (A, B, M, N), c in v.terms.items():
        if i in N:
            out.add_term(
                (A, B, tuple(sorted(M + (i,))), tuple(x for x in N if x != i)), c
            )
    return out


def op_Lambda_i(i, v: CovectorElement) -> CovectorElement:
    out = CovectorElement(v.n)
    for (A, B, M, N), c in v.terms.items():
        if i in M:
            out.add_term(
                (A, B, tuple(x for x in M if x != i), tuple(sorted(N + (i,)))), c
            )
    return out


def op_L(v: CovectorElement) -> CovectorElement:
    out = CovectorElement(v.n)
    for i in range(1, v.n + 1):
        out = out + op_L_i(i, v)
    return out


def op_Lambda(v: CovectorElement) -> CovectorElement:
    out = CovectorElement(v.n)
    for i in range(1, v.n + 1):
        out = out + op_Lambda_i(i, v)
    return out


def op_C(v: CovectorElement) -> CovectorElement:
    out = CovectorElement(v.n)
    for key, c in v.terms.items():
        a, b = bidegree(key)
        out.add_term(key, c * GaussianScalar.i_power(a - b))
    return out


def op_C_inv(v: CovectorElement) -> CovectorElement:
    out = CovectorElement(v.n)
    for key, c in v.terms.items():
        a, b = bidegree(key)
        out.add_term(key, c * GaussianScalar.i_power(b - a))
    return out


def op_P_bidegree(a, b, v: CovectorElement) -> CovectorElement:
    return CovectorElement(
        v.n, {k: c for k, c in v.terms.items() if bidegree(k) == (a, b)}
    )


def op_P_total(p, v: CovectorElement) -> CovectorElement:
    return CovectorElement(
        v.n, {k: c for k, c in v.terms.items() if total_degree(k) == p}
    )


def op_c_inv_star(v: CovectorElement) -> CovectorElement:
    """C^{-1}*: the fully explicit swap form
    (-1)^{(p+q)(p+q+1)/2 + |M|} z_{A,B,N,M}."""
    out = CovectorElement(v.n)
    for (A, B, M, N), c in v.terms.items():
        pq = total_degree((A, B, M, N))
        exp = (pq * (pq + 1)) // 2 + len(M)
        sign = (-1) ** (exp % 2)
        out.add_term((A, B, N, M), c * sign)
    return out


def op_star(v: CovectorElement) -> CovectorElement:
    """* = C applied to the explicit swap image."""
    return op_C(op_c_inv_star(v))


OPERATORS = {
    "L": op_L,
    "Lambda": op_Lambda,
    "C": op_C,
    "C_inv": op_C_inv,
    "star": op_star,
    "c_inv_star": op_c_inv_star,
}


def apply_op(name, v: CovectorElement, index=None, bidegree_pair=None, p=None):
    """Uniform dispatcher: L, Lambda, L_i, Lambda_i, C, star, P_{a,b}, P_p."""
    if name == "L_i":
        return op_L_i(index, v)
    if name == "Lambda_i":
        return op_Lambda_i(index, v)
    if name == "P_bidegree":
        return op_P_bidegree(bidegree_pair[0], bidegree_pair[1], v)
    if name == "P_total":
        return op_P_total(p, v)
    if name in OPERATORS:
        return OPERATORS[name](v)
    raise InputError(f"unknown operator {name!r}")


def op_power(op, k, v):
    for _ in range(k):
        v = op(v)
    return v


# ---------------------------------------------------------------------------
# The wedge-expansion oracle
# ---------------------------------------------------------------------------
#
# Raw exterior algebra over Q(i) on 2n odd letters z_1..z_n, zbar_1..zbar_n
# (letter j in 0..n-1 is z_{j+1}, letter n+j is zbar_{j+1}).  Basis symbols
# expand as z_A ^ zbar_B ^ u_M with u_j = (i/2) z_j ^ zbar_j; the 2^{-s/2}
# normalizations only ever appear in pairs multiplying to 2^{-s}, so the
# oracle never leaves Q(i).


def _raw_sort(letters):
    letters = list(letters)
    sign = 1
    for i in range(1, len(letters)):
        j = i
        while j > 0 and letters[j - 1] > letters[j]:
            letters[j - 1], letters[j] = letters[j], letters[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(letters, letters[1:]):
        if a == b:
            return None
    return tuple(letters), sign


def raw_expand(n, key) -> dict:
    """Un-normalized expansion of a standard basis symbol: map from sorted
    letter tuples to GaussianScalar; the true symbol is 2^{-(|A|+|B|)/2}
    times this."""
    A, B, M, N = key
    letters = [a - 1 for a in A] + [n + b - 1 for b in B]
    for j in M:
        letters += [j - 1, n + j - 1]
    sorted_letters = _raw_sort(letters)
    if sorted_letters is None:
        return {}
    word, sign = sorted_letters
    half_i = GaussianScalar.of(0, Fraction(1, 2))  # i/2 per u_j factor
    coeff = GaussianScalar.of(sign)
    for _ in M:
        coeff = coeff * half_i
    return {word: coeff}


def raw_wedge(x: dict, y: dict) -> dict:
    out = {}
    for w1, c1 in x.items():
        for w2, c2 in y.items():
            merged = _raw_sort(list(w1) + list(w2))
            if merged is None:
                continue
            word, sign = merged
            val = out.get(word, GaussianScalar.of(0)) + c1 * c2 * sign
            if val:
                out[word] = val
            else:
                out.pop(word, None)
    return out


def raw_volume(n) -> dict:
    """u_1 ^ ... ^ u_n expanded."""
    out = {(): GAUSS_ONE}
    for j in range(1, n + 1):
        out = raw_wedge(out, {( j - 1, n + j - 1): GaussianScalar.of(0, Fraction(1, 2))})
    return out


def wedge_identity_report(n, star_fn=None) -> CheckReport:
    """Defining wedge characterization, checked for every basis symbol:
    z ^ *(conj z) = z ^ conj(*z) = u_1 ^ ... ^ u_n.  A corrupted * (passed
    as star_fn) is caught here."""
    rep = CheckReport("wedge-oracle")
    star = star_fn or op_star
    vol = raw_volume(n)
    for key in all_keys(n):
        z = CovectorElement.basis(n, key)
        s = len(key[0]) + len(key[1])
        norm = GaussianScalar.of(Fraction(1, 2 ** s))
        for tag, other in (
            ("z ^ *(conj z)", star(z.conjugate())),
            ("z ^ conj(*z)", star(z).conjugate()),
        ):
            total = {}
            raw_z = raw_expand(n, key)
            for okey, ocoeff in other.terms.items():
                part = raw_wedge(raw_z, raw_expand(n, okey))
                for w, c in part.items():
                    val = total.get(w, GaussianScalar.of(0)) + c * ocoeff
                    if val:
                        total[w] = val
                    else:
                        total.pop(w, None)
            total = {w: c * norm for w, c in total.items()}
            if total != vol:
                rep.add(f"{tag} at {key}", str(total), "wedge identity fails")
    return rep


# ---------------------------------------------------------------------------
# Identities sweep
# ---------------------------------------------------------------------------


def identities_report(n, include_wedge=True) -> CheckReport:
    """All commutation relations as exact operator identities on the full
    standard basis, plus the wedge characterization."""
    rep = CheckReport("lefschetz-identities")
    keys = all_keys(n)

    def check(name, lhs_fn, rhs_fn):
        for key in keys:
            v = CovectorElement.basis(n, key)
            diff = lhs_fn(v) - rhs_fn(v)
            if not diff.is_zero():
                rep.add(f"{name} at {key}", repr(diff), f"{name} fails")
                return

    check("[L,C]", lambda v: op_L(op_C(v)), lambda v: op_C(op_L(v)))
    check("[Lambda,C]", lambda v: op_Lambda(op_C(v)), lambda v: op_C(op_Lambda(v)))
    check("[*,C]", lambda v: op_star(op_C(v)), lambda v: op_C(op_star(v)))

    def lambda_l_comm(v):
        return op_Lambda(op_L(v)) - op_L(op_Lambda(v))

    def weight_scale(v):
        out = CovectorElement(n)
        for key, c in v.terms.items():
            w = n - total_degree(key)
            if w:
                out.add_term(key, c * GaussianScalar.of(w))
        return out

    check("[Lambda,L]", lambda_l_comm, weight_scale)

    for r in range(1, n + 1):
        def comm_r(v, r=r):
            return op_Lambda(op_power(op_L, r, v)) - op_power(
                op_L, r, op_Lambda(v)
            )

        def rhs_r(v, r=r):
            out = CovectorElement(n)
            for key, c in v.terms.items():
                alpha = weight(key)
                factor = r * (alpha - r + 1)
                if factor:
                    part = op_power(
                        op_L, r - 1, CovectorElement.basis(n, key, c)
                    ).scale(Fraction(factor))
                    out = out + part
            return out

        check(f"[Lambda,L^{r}]", comm_r, rhs_r)

    check(
        "(C^-1 *)^2",
        lambda v: op_c_inv_star(op_c_inv_star(v)),
        lambda v: v,
    )

    def signed_projection(v):
        out = CovectorElement(n)
        for key, c in v.terms.items():
            out.add_term(key, c * GaussianScalar.of((-1) ** (total_degree(key) % 2)))
        return out

    check("*^2", lambda v: op_star(op_star(v)), signed_projection)
    check("C^2", lambda v: op_C(op_C(v)), signed_projection)

    # * permutes basis symbols up to fourth roots of unity
    for key in keys:
        img = op_star(CovectorElement.basis(n, key))
        if len(img.terms) != 1:
            rep.add(f"* at {key}", repr(img), "* is not a signed permutation")
            break
        [(k2, c)] = list(img.terms.items())
        if c * c * c * c != GAUSS_ONE:
            rep.add(f"* at {key}", str(c), "* coefficient is not a 4th root of 1")
            break

    if include_wedge:
        rep.merge(wedge_identity_report(n))
    rep.info = {"dimension": n, "basis_size": len(keys)}
    return rep


# ---------------------------------------------------------------------------
# Primitivity and the Lefschetz decomposition
# ---------------------------------------------------------------------------


def is_primitive(v: CovectorElement) -> bool:
    v.homogeneous_degree()
    return op_Lambda(v).is_zero()


def lefschetz_decompose(v: CovectorElement):
    """Write homogeneous v as sum_{r >= max(-alpha, 0)} L^r v_r with each
    v_r primitive of weight alpha + 2r, via
    v_q = Lambda^{alpha+2q} L^{alpha+q} v / (alpha+2q)!^2 from the top."""
    n = v.n
    p = v.homogeneous_degree()
    if p is None:
        return []
    alpha = n - p
    out = []
    rest = v
    q_top = max((p // 2), 0)
    for q in range(q_top, max(-alpha, 0) - 1, -1):
        if rest.is_zero():
            break
        exp_l = alpha + q
        exp_ll = alpha + 2 * q
        if exp_l < 0 or exp_ll < 0:
            continue
        vq = op_power(op_Lambda, exp_ll, op_power(op_L, exp_l, rest)).scale(
            Fraction(1, factorial(exp_ll) ** 2)
        )
        if vq.is_zero():
            continue
        if not op_Lambda(vq).is_zero():
            raise DomainError("decomposition produced a non-primitive component")
        out.append((q, vq))
        rest = rest - op_power(op_L, q, vq)
    if not rest.is_zero():
        raise DomainError("Lefschetz decomposition failed to terminate")
    return sorted(out)


def reconstruct(n, parts) -> CovectorElement:
    out = CovectorElement(n)
    for r, vr in parts:
        out = out + op_power(op_L, r, vr)
    return out


def primitive_star_report(v: CovectorElement, r_values=None) -> CheckReport:
    """C^{-1} * L^r v = (-1)^{p(p+1)/2} r!/(n-p-r)! L^{n-p-r} v for a
    primitive p-covector and r <= n-p, zero beyond; plus the
    Lambda^alpha L^alpha = alpha!^2 sub-check."""
    rep = CheckReport("primitive-star")
    n = v.n
    p = v.homogeneous_degree()
    if p is None:
        return rep
    if not is_primitive(v):
        raise DomainError("primitive_star_report needs a primitive covector")
    alpha = n - p
    rs = r_values if r_values is not None else range(0, n + 1)
    for r in rs:
        lhs = op_c_inv_star(op_power(op_L, r, v))
        if r <= n - p:
            sign = (-1) ** (((p * (p + 1)) // 2) % 2)
            coeff = Fraction(sign * factorial(r), factorial(n - p - r))
            rhs = op_power(op_L, n - p - r, v).scale(coeff)
        else:
            rhs = CovectorElement(n)
            if not op_power(op_L, r, v).is_zero():
                rep.add(f"L^{r}", "", "L^r v != 0 beyond n-p on a primitive")
        if not (lhs - rhs).is_zero():
            rep.add(f"r={r}", repr(lhs - rhs), "primitive star identity fails")
    if alpha >= 0:
        lhs = op_power(op_Lambda, alpha, op_power(op_L, alpha, v))
        rhs = v.scale(Fraction(factorial(alpha) ** 2))
        if not (lhs - rhs).is_zero():
            rep.add(
                "Lambda^a L^a",
                repr(lhs - rhs),
                "Lambda^alpha L^alpha != alpha!^2 on a primitive",
            )
    return rep


def primitive_coefficient_report(v: CovectorElement) -> CheckReport:
    """Block coefficient relation for a primitive element: within each
    (A, B) block with m = |M|, a_M = (-1)^m sum_{Nsub in complement,
    |Nsub| = m} a_{Nsub}."""
    rep = CheckReport("primitive-coefficients")
    if not is_primitive(v):
        raise DomainError("coefficient relation needs a primitive covector")
    blocks = {}
    for (A, B, M, N), c in v.terms.items():
        blocks.setdefault((A, B), {})[tuple(M)] = c
    for (A, B), coeffs in blocks.items():
        free = tuple(sorted(set(range(1, v.n + 1)) - set(A) - set(B)))
        sizes = {len(m) for m in coeffs}
        for M in coeffs:
            m = len(M)
            total = GaussianScalar.of(0)
            complement = [x for x in free if x not in M]
            for sub in itertools.combinations(complement, m):
                total = total + coeffs.get(tuple(sub), GaussianScalar.of(0))
            expect = total * GaussianScalar.of((-1) ** (m % 2))
            if coeffs[M] != expect:
                rep.add(
                    f"block (A={A},B={B}) M={M}",
                    str(coeffs[M] - expect),
                    "coefficient relation fails",
                )
    return rep
