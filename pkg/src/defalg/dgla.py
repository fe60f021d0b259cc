"""Differential graded Lie algebras over nilpotent dg-commutative base
algebras: axiom checkers, Maurer-Cartan residuals, the gauge action,
cohomology, obstruction classes, mapping cones of small extensions,
exponentials of derivations, and polynomial-path homotopy evaluation.

Base algebras carry no unit: a classical local Artinian ring is represented
by its maximal ideal (nilpotency is structural, not an extra hypothesis).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from . import linalg
from .core import Element, GradedBasis
from .errors import DomainError, InputError, InternalError, StructureError
from .freelie import bch_term_sum
from .report import CheckReport

# ---------------------------------------------------------------------------
# Table-driven graded structures
# ---------------------------------------------------------------------------


def _format_element(basis, el: Element) -> str:
    if el.is_zero():
        return "0"
    parts = []
    for i, c in el:
        parts.append(f"{c}*{basis.names[i]}")
    return " + ".join(parts)


class _Tabled:
    """Shared plumbing for structures given by a basis, a differential table
    and a binary-operation table (bracket or product)."""

    def __init__(self, basis: GradedBasis, table, diff):
        self.basis = basis
        self.table = {k: v.copy() for k, v in table.items() if not v.is_zero()}
        self.diff = {k: v.copy() for k, v in diff.items() if not v.is_zero()}
        for (i, j) in self.table:
            if not (0 <= i < len(basis) and 0 <= j < len(basis)):
                raise InputError("table entry outside basis")
        for i in self.diff:
            if not 0 <= i < len(basis):
                raise InputError("differential entry outside basis")

    def d(self, x: Element) -> Element:
        out = Element()
        for i, c in x.terms.items():
            for k, v in self.diff.get(i, Element()).terms.items():
                out.add_term(k, c * v)
        return out

    def _sign_swap(self, i, j):
        return -1 if (self.basis.degree(i) * self.basis.degree(j)) % 2 else 1

    def op2(self, x: Element, y: Element) -> Element:
        out = Element()
        for i, ci in x.terms.items():
            for j, cj in y.terms.items():
                for k, v in self._op_basis(i, j).terms.items():
                    out.add_term(k, ci * cj * v)
        return out

    def element(self, pairs) -> Element:
        """Element from (name, coeff) pairs."""
        out = Element()
        for name, coeff in pairs:
            out.add_term(self.basis.index(name), coeff)
        return out

    def show(self, el: Element) -> str:
        return _format_element(self.basis, el)


class DGLA(_Tabled):
    """Finite-dimensional DGLA: differential table d(e_i) and bracket table
    [e_i, e_j].  Missing (i, j) entries derive from (j, i) by graded
    antisymmetry; missing both means zero."""

    def _op_basis(self, i, j) -> Element:
        if (i, j) in self.table:
            return self.table[(i, j)]
        if (j, i) in self.table:
            # [a,b] = -(-1)^{deg a deg b} [b,a]
            return self.table[(j, i)].scale(-self._sign_swap(i, j))
        return Element()

    def bracket(self, x, y):
        return self.op2(x, y)


class ArtinDg(_Tabled):
    """Object of the category of nilpotent finite-dimensional graded-
    commutative dg-algebras: multiplication table, differential, and the
    computed nilpotency index (smallest s with A^s = 0)."""

    def __init__(self, basis, table, diff):
        super().__init__(basis, table, diff)
        self.nilpotency_index = self._nilpotency_index()

    def _op_basis(self, i, j) -> Element:
        if (i, j) in self.table:
            return self.table[(i, j)]
        if (j, i) in self.table:
            return self.table[(j, i)].scale(self._sign_swap(i, j))
        return Element()

    def product(self, x, y):
        return self.op2(x, y)

    def _nilpotency_index(self):
        n = len(self.basis)
        span = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
        s = 1
        while span:
            if s > n + 1:
                return None  # not nilpotent; reported by check_na
            nxt = []
            for i in range(n):
                for vec in span:
                    x = Element({k: c for k, c in enumerate(vec) if c})
                    prod = self.product(Element.basis_vector(i), x)
                    if not prod.is_zero():
                        nxt.append([prod.terms.get(k, Fraction(0)) for k in range(n)])
            rows, pivots = linalg.rref(nxt) if nxt else ([], [])
            span = [rows[r] for r in range(len(pivots))]
            s += 1
        return s

    def is_classical(self) -> bool:
        return all(d == 0 for d in self.basis.degrees) and not self.diff


# ---------------------------------------------------------------------------
# Axiom checkers
# ---------------------------------------------------------------------------


def check_dgla(L: DGLA) -> CheckReport:
    """Verify every DGLA axiom instance on basis tuples; violations are
    report content, never exceptions."""
    rep = CheckReport("check-dgla")
    basis = L.basis
    n = len(basis)
    deg = basis.degree

    for i, el in L.diff.items():
        degs = {deg(k) for k in el.terms}
        if degs and degs != {deg(i) + 1}:
            rep.add(f"d({basis.names[i]})", L.show(el), "differential is not degree +1")
    for (i, j), el in L.table.items():
        degs = {deg(k) for k in el.terms}
        if degs and degs != {deg(i) + deg(j)}:
            rep.add(
                f"[{basis.names[i]},{basis.names[j]}]",
                L.show(el),
                "bracket is not degree-additive",
            )

    for i in range(n):
        res = L.d(L.d(Element.basis_vector(i)))
        if not res.is_zero():
            rep.add(f"d^2({basis.names[i]})", L.show(res), "d^2 != 0")

    for i in range(n):
        for j in range(n):
            a = Element.basis_vector(i)
            b = Element.basis_vector(j)
            anti = L.bracket(a, b) + L.bracket(b, a).scale(L._sign_swap(i, j))
            if not anti.is_zero():
                rep.add(
                    f"antisym({basis.names[i]},{basis.names[j]})",
                    L.show(anti),
                    "graded antisymmetry fails",
                )
            leib = (
                L.d(L.bracket(a, b))
                - L.bracket(L.d(a), b)
                - L.bracket(a, L.d(b)).scale((-1) ** (deg(i) % 2))
            )
            if not leib.is_zero():
                rep.add(
                    f"leibnitz({basis.names[i]},{basis.names[j]})",
                    L.show(leib),
                    "graded Leibnitz fails",
                )

    for i in range(n):
        if deg(i) % 2 == 0:
            sq = L.bracket(Element.basis_vector(i), Element.basis_vector(i))
            if not sq.is_zero():
                rep.add(
                    f"[{basis.names[i]},{basis.names[i]}]",
                    L.show(sq),
                    "even element with nonzero self-bracket",
                )

    for i in range(n):
        for j in range(n):
            for k in range(n):
                a, b, c = (Element.basis_vector(t) for t in (i, j, k))
                jac = (
                    L.bracket(a, L.bracket(b, c))
                    - L.bracket(L.bracket(a, b), c)
                    - L.bracket(b, L.bracket(a, c)).scale(
                        (-1) ** ((deg(i) * deg(j)) % 2)
                    )
                )
                if not jac.is_zero():
                    rep.add(
                        f"jacobi({basis.names[i]},{basis.names[j]},{basis.names[k]})",
                        L.show(jac),
                        "graded Jacobi fails",
                    )
    return rep


def check_na(A: ArtinDg) -> CheckReport:
    """Verify associativity, graded commutativity, Leibnitz, d^2 = 0 and
    nilpotency; the report carries the computed nilpotency index."""
    rep = CheckReport("check-na")
    basis = A.basis
    n = len(basis)
    deg = basis.degree

    for i, el in A.diff.items():
        degs = {deg(k) for k in el.terms}
        if degs and degs != {deg(i) + 1}:
            rep.add(f"d({basis.names[i]})", A.show(el), "differential is not degree +1")
    for (i, j), el in A.table.items():
        degs = {deg(k) for k in el.terms}
        if degs and degs != {deg(i) + deg(j)}:
            rep.add(
                f"{basis.names[i]}*{basis.names[j]}",
                A.show(el),
                "product is not degree-additive",
            )

    for i in range(n):
        res = A.d(A.d(Element.basis_vector(i)))
        if not res.is_zero():
            rep.add(f"d^2({basis.names[i]})", A.show(res), "d^2 != 0")

    for i in range(n):
        for j in range(n):
            a, b = Element.basis_vector(i), Element.basis_vector(j)
            comm = A.product(a, b) - A.product(b, a).scale(A._sign_swap(i, j))
            if not comm.is_zero():
                rep.add(
                    f"comm({basis.names[i]},{basis.names[j]})",
                    A.show(comm),
                    "graded commutativity fails",
                )
            leib = (
                A.d(A.product(a, b))
                - A.product(A.d(a), b)
                - A.product(a, A.d(b)).scale((-1) ** (deg(i) % 2))
            )
            if not leib.is_zero():
                rep.add(
                    f"leibnitz({basis.names[i]},{basis.names[j]})",
                    A.show(leib),
                    "Leibnitz fails",
                )

    for i in range(n):
        if deg(i) % 2:
            sq = A.product(Element.basis_vector(i), Element.basis_vector(i))
            if not sq.is_zero():
                rep.add(
                    f"{basis.names[i]}^2",
                    A.show(sq),
                    "odd element with nonzero square",
                )

    for i in range(n):
        for j in range(n):
            for k in range(n):
                a, b, c = (Element.basis_vector(t) for t in (i, j, k))
                ass = A.product(A.product(a, b), c) - A.product(a, A.product(b, c))
                if not ass.is_zero():
                    rep.add(
                        f"assoc({basis.names[i]},{basis.names[j]},{basis.names[k]})",
                        A.show(ass),
                        "associativity fails",
                    )

    if A.nilpotency_index is None:
        rep.add("nilpotency", "", "algebra is not nilpotent")
    else:
        rep.info = {"nilpotency_index": A.nilpotency_index}
    return rep


# ---------------------------------------------------------------------------
# The tensor DGLA L (x) A
# ---------------------------------------------------------------------------


class TensorDgla:
    """The DGLA L (x) A on pair basis (x_i, a_j), total degree summed, with
    d(x(x)a) = dx(x)a + (-1)^x x(x)da  and
    [x(x)a, y(x)b] = (-1)^{deg a deg y} [x,y](x)ab  (sign ledger T1)."""

    def __init__(self, L: DGLA, A: ArtinDg):
        self.L = L
        self.A = A
        names = []
        degrees = []
        self.pairs = []
        self.pair_index = {}
        for i in range(len(L.basis)):
            for j in range(len(A.basis)):
                self.pair_index[(i, j)] = len(self.pairs)
                self.pairs.append((i, j))
                names.append(f"{L.basis.names[i]}(x){A.basis.names[j]}")
                degrees.append(L.basis.degree(i) + A.basis.degree(j))
        self.basis = GradedBasis(tuple(names), tuple(degrees))

    def vector(self, l_name, a_name, coeff=Fraction(1)) -> Element:
        key = (self.L.basis.index(l_name), self.A.basis.index(a_name))
        return Element.basis_vector(self.pair_index[key], coeff)

    def d(self, x: Element) -> Element:
        out = Element()
        for p, c in x.terms.items():
            i, j = self.pairs[p]
            for k, v in self.L.diff.get(i, Element()).terms.items():
                out.add_term(self.pair_index[(k, j)], c * v)
            sign = (-1) ** (self.L.basis.degree(i) % 2)
            for k, v in self.A.diff.get(j, Element()).terms.items():
                out.add_term(self.pair_index[(i, k)], c * v * sign)
        return out

    def bracket(self, x: Element, y: Element) -> Element:
        out = Element()
        for p, cp in x.terms.items():
            i, a = self.pairs[p]
            for q, cq in y.terms.items():
                j, b = self.pairs[q]
                sign = (
                    -1
                    if (self.A.basis.degree(a) * self.L.basis.degree(j)) % 2
                    else 1
                )
                lb = self.L._op_basis(i, j)
                ab = self.A._op_basis(a, b)
                if lb.is_zero() or ab.is_zero():
                    continue
                c = cp * cq * sign
                for k, vk in lb.terms.items():
                    for m, vm in ab.terms.items():
                        out.add_term(self.pair_index[(k, m)], c * vk * vm)
        return out

    def as_dgla(self) -> DGLA:
        table = {}
        diff = {}
        n = len(self.basis)
        for p in range(n):
            dv = self.d(Element.basis_vector(p))
            if not dv.is_zero():
                diff[p] = dv
        for p in range(n):
            for q in range(n):
                br = self.bracket(Element.basis_vector(p), Element.basis_vector(q))
                if not br.is_zero():
                    table[(p, q)] = br
        return DGLA(self.basis, table, diff)

    def degree_part(self, x: Element, d: int) -> Element:
        return Element(
            {p: c for p, c in x.terms.items() if self.basis.degree(p) == d}
        )

    def show(self, el: Element) -> str:
        return _format_element(self.basis, el)

    # -- Maurer-Cartan and gauge ------------------------------------------

    def mc_residual(self, x: Element) -> Element:
        """dx + (1/2)[x,x]; input must be homogeneous of total degree 1."""
        if not x.is_zero() and x.degree(self.basis) != 1:
            raise DomainError("Maurer-Cartan argument must have total degree 1")
        return self.d(x) + self.bracket(x, x).scale(Fraction(1, 2))

    def is_mc(self, x: Element) -> bool:
        return self.mc_residual(x).is_zero()

    def gauge_apply(self, a: Element, w: Element) -> Element:
        """exp(a) acting on w:  w + sum_{n>=0} ad(a)^n/(n+1)! ([a,w] - da).

        Terminates by nilpotency of A (guarded)."""
        if not a.is_zero() and a.degree(self.basis) != 0:
            raise DomainError("gauge parameter must have total degree 0")
        if not w.is_zero() and w.degree(self.basis) != 1:
            raise DomainError("gauge target must have total degree 1")
        out = w.copy()
        term = self.bracket(a, w) - self.d(a)
        bound = (self.A.nilpotency_index or len(self.A.basis) + 2) + 2
        n = 0
        while not term.is_zero():
            if n > bound:
                raise InternalError("gauge series failed to terminate")
            out = out + term.scale(Fraction(1, factorial(n + 1)))
            term = self.bracket(a, term)
            n += 1
        return out

    def bch_degree0(self, a: Element, b: Element) -> Element:
        """Baker-Campbell-Hausdorff product on the nilpotent Lie algebra
        (L (x) A)^0; terminates by nilpotency of A."""
        max_len = max((self.A.nilpotency_index or 2) - 1, 1)
        return bch_term_sum(
            a,
            b,
            self.bracket,
            max_len,
            lambda acc, v, c: acc + v.scale(c),
            Element(),
        )


def tensor_dgla(L: DGLA, A: ArtinDg) -> TensorDgla:
    """Build L (x) A after checking both factors."""
    rl = check_dgla(L)
    if not rl.ok():
        raise StructureError("tensor_dgla: DGLA factor fails axioms: " + rl.text())
    ra = check_na(A)
    if not ra.ok():
        raise StructureError("tensor_dgla: base algebra fails axioms: " + ra.text())
    return TensorDgla(L, A)


# ---------------------------------------------------------------------------
# Cohomology
# ---------------------------------------------------------------------------


def cohomology(structure, i: int):
    """Exact H^i of a _Tabled structure (DGLA or ArtinDg) or TensorDgla.

    Returns (representatives, project, dims) where `representatives` is a
    list of Elements spanning H^i, `project` maps a degree-i cycle to its
    coordinate list in that basis (raising DomainError on non-cycles), and
    dims = (dim Z^i, dim B^i, dim H^i).
    """
    basis = structure.basis
    idx_i = basis.indices_of_degree(i)
    idx_prev = basis.indices_of_degree(i - 1)
    idx_next = basis.indices_of_degree(i + 1)

    def d_matrix(src, dst):
        # column k = d(e_{src[k]}) in coordinates dst
        cols = []
        for s in src:
            img = structure.d(Element.basis_vector(s))
            cols.append([img.terms.get(t, Fraction(0)) for t in dst])
        return [[cols[k][r] for k in range(len(src))] for r in range(len(dst))]

    m_out = d_matrix(idx_i, idx_next)  # d: degree i -> i+1
    m_in = d_matrix(idx_prev, idx_i)  # d: degree i-1 -> i

    if idx_i:
        z_vectors = (
            linalg.kernel_basis(m_out)
            if idx_next
            else [
                [Fraction(1 if r == k else 0) for r in range(len(idx_i))]
                for k in range(len(idx_i))
            ]
        )
    else:
        z_vectors = []
    b_vectors = []
    if idx_prev and idx_i:
        for k in range(len(idx_prev)):
            col = [m_in[r][k] for r in range(len(idx_i))]
            if any(col):
                b_vectors.append(col)

    reps = []
    kept = list(b_vectors)
    for z in z_vectors:
        if not linalg.in_span(kept, z):
            kept.append(z)
            reps.append(z)

    rep_elements = [
        Element({idx_i[r]: v[r] for r in range(len(idx_i)) if v[r]}) for v in reps
    ]

    def project(el: Element):
        vec = [el.terms.get(t, Fraction(0)) for t in idx_i]
        for t in el.terms:
            if t not in idx_i:
                raise DomainError("element not concentrated in the requested degree")
        img = structure.d(el)
        if not img.is_zero():
            raise DomainError("cannot project a non-cycle to cohomology")
        coords = linalg.express_in_span(reps + b_vectors, vec)
        if coords is None:
            raise InternalError("cycle not in Z (projection inconsistency)")
        return coords[: len(reps)]

    if b_vectors:
        b_rank = linalg.rank([[v[r] for v in b_vectors] for r in range(len(idx_i))])
    else:
        b_rank = 0
    dims = (len(z_vectors), b_rank, len(reps))
    return rep_elements, project, dims


# ---------------------------------------------------------------------------
# Small extensions, obstruction classes, mapping cones
# ---------------------------------------------------------------------------


class SmallExtension:
    """0 -> I -> A -> B -> 0 with A*I = 0; B is the induced structure on the
    complementary basis."""

    def __init__(self, total: ArtinDg, kernel_names):
        self.total = total
        self.kernel = tuple(sorted(total.basis.index(n) for n in kernel_names))
        kernel_set = set(self.kernel)
        if not kernel_set:
            raise InputError("small extension needs a nonempty kernel")
        # A*I = 0
        for i in range(len(total.basis)):
            for k in self.kernel:
                prod = total.product(Element.basis_vector(i), Element.basis_vector(k))
                if not prod.is_zero():
                    raise StructureError(
                        f"A*I != 0: {total.basis.names[i]} * {total.basis.names[k]}"
                    )
        # d(I) inside I
        for k in self.kernel:
            img = total.d(Element.basis_vector(k))
            if any(t not in kernel_set for t in img.terms):
                raise StructureError("kernel is not a differential ideal")
        self.quotient_indices = tuple(
            i for i in range(len(total.basis)) if i not in kernel_set
        )
        qnames = tuple(total.basis.names[i] for i in self.quotient_indices)
        qdegs = tuple(total.basis.degrees[i] for i in self.quotient_indices)
        self._q_pos = {i: p for p, i in enumerate(self.quotient_indices)}
        qtable = {}
        qdiff = {}
        for (i, j), val in total.table.items():
            if i in kernel_set or j in kernel_set:
                continue
            qtable[(self._q_pos[i], self._q_pos[j])] = self._project(val)
        for i, val in total.diff.items():
            if i in kernel_set:
                continue
            pr = self._project(val)
            if not pr.is_zero():
                qdiff[self._q_pos[i]] = pr
        self.quotient = ArtinDg(GradedBasis(qnames, qdegs), qtable, qdiff)

    def _project(self, el: Element) -> Element:
        return Element(
            {self._q_pos[t]: c for t, c in el.terms.items() if t in self._q_pos}
        )

    def section(self, el: Element) -> Element:
        """The basis-wise linear section B -> A of the projection."""
        return Element({self.quotient_indices[t]: c for t, c in el.terms.items()})

    def kernel_complex_acyclic(self) -> bool:
        return _subcomplex_acyclic(self.total, list(self.kernel))


def obstruction_class(L: DGLA, ext: SmallExtension, x_over_b: Element):
    """Obstruction of a Maurer-Cartan element over B to lifting over A.

    x_over_b lives in the tensor DGLA L (x) B.  Returns a dict with the
    kernel-indexed cycle h, its cohomology class coordinates, the H^2 data,
    and (when the class vanishes) a certified Maurer-Cartan lift.
    """
    if ext.total.nilpotency_index is None:
        raise StructureError("extension total algebra is not nilpotent")
    MB = TensorDgla(L, ext.quotient)
    if not MB.is_mc(x_over_b):
        raise DomainError("element is not Maurer-Cartan over the quotient")
    MA = TensorDgla(L, ext.total)

    # lift through the basis-wise section
    lift = Element()
    for p, c in x_over_b.terms.items():
        i, jb = MB.pairs[p]
        ja = ext.quotient_indices[jb]
        lift.add_term(MA.pair_index[(i, ja)], c)

    h = MA.mc_residual(lift)
    kernel_set = set(ext.kernel)
    by_kernel = {}
    for p, c in h.terms.items():
        i, j = MA.pairs[p]
        if j not in kernel_set:
            raise InternalError("obstruction residual escapes L (x) I")
        by_kernel.setdefault(j, Element()).add_term(i, c)

    reps, project, dims = cohomology(L, 2)
    classes = {}
    for j in sorted(kernel_set):
        comp = by_kernel.get(j, Element())
        if not L.d(comp).is_zero():
            raise InternalError("obstruction component is not a cycle")
        classes[ext.total.basis.names[j]] = project(comp)

    vanishes = all(all(c == 0 for c in v) for v in classes.values())
    result = {
        "h": by_kernel,
        "classes": classes,
        "h2_dim": dims[2],
        "vanishes": vanishes,
        "lift": None,
    }
    if vanishes:
        # solve d z_j = h_j in L^1 for each kernel coordinate
        correction = Element()
        idx1 = L.basis.indices_of_degree(1)
        idx2 = L.basis.indices_of_degree(2)
        matrix = [
            [
                L.d(Element.basis_vector(s)).terms.get(t, Fraction(0))
                for s in idx1
            ]
            for t in idx2
        ]
        for j, comp in by_kernel.items():
            rhs = [comp.terms.get(t, Fraction(0)) for t in idx2]
            sol = linalg.solve(matrix, rhs)
            if sol is None:
                raise InternalError("vanishing class but unsolvable d z = h")
            for s_pos, c in enumerate(sol):
                if c:
                    correction.add_term(MA.pair_index[(idx1[s_pos], j)], c)
        candidate = lift - correction
        if not MA.is_mc(candidate):
            raise InternalError("constructed lift fails Maurer-Cartan")
        result["lift"] = candidate
    return result


def cones(ext: SmallExtension):
    """Mapping cone C = A (+) I[1] and, when B is a complex (A^2 in I),
    the inverse cone D = A (+) B[-1]; returns (C, D_or_None, report)."""
    rep = CheckReport("cones")
    A = ext.total
    kernel_set = set(ext.kernel)
    n = len(A.basis)

    # --- C = A (+) I[1]
    names = list(A.basis.names) + [A.basis.names[k] + "'" for k in ext.kernel]
    degs = list(A.basis.degrees) + [A.basis.degrees[k] - 1 for k in ext.kernel]
    shift_pos = {k: n + t for t, k in enumerate(ext.kernel)}
    table = {(i, j): v.copy() for (i, j), v in A.table.items()}
    diff = {i: v.copy() for i, v in A.diff.items()}
    for k in ext.kernel:
        dk = Element.basis_vector(k)  # iota(m)
        for t, c in A.diff.get(k, Element()).terms.items():
            dk.add_term(shift_pos[t], -c)  # -(d_I m) shifted
        diff[shift_pos[k]] = dk
    C = ArtinDg(GradedBasis(tuple(names), tuple(degs)), table, diff)

    c_check = check_na(C)
    rep.merge(c_check, prefix="cone C: ")

    # kernel of C -> B is I (+) I[1]; verify it is acyclic
    sub_idx = sorted(list(kernel_set) + [shift_pos[k] for k in ext.kernel])
    acyclic = _subcomplex_acyclic(C, sub_idx)
    if not acyclic:
        rep.add("cone C kernel", "", "kernel complex I (+) I[1] is not acyclic")

    # --- D = A (+) B[-1], only when B is a complex (A^2 in I)
    b_is_complex = True
    for (i, j) in A.table:
        prod = A.table[(i, j)]
        if any(t not in kernel_set for t in prod.terms):
            b_is_complex = False
            break
    D = None
    if b_is_complex:
        q_idx = ext.quotient_indices
        dnames = list(A.basis.names) + [A.basis.names[q] + "''" for q in q_idx]
        ddegs = list(A.basis.degrees) + [A.basis.degrees[q] + 1 for q in q_idx]
        opp_pos = {q: n + t for t, q in enumerate(q_idx)}
        dtable = {(i, j): v.copy() for (i, j), v in A.table.items()}
        ddiff = {}
        for i in range(n):
            di = A.diff.get(i, Element()).copy()
            if i in opp_pos:
                di.add_term(opp_pos[i], Fraction(1))  # alpha(x) in B[-1]
            if not di.is_zero():
                ddiff[i] = di
        for q in q_idx:
            img = Element()
            for t, c in A.diff.get(q, Element()).terms.items():
                if t in opp_pos:
                    img.add_term(opp_pos[t], -c)  # -(d_B b) shifted
            if not img.is_zero():
                ddiff[opp_pos[q]] = img
        D = ArtinDg(GradedBasis(tuple(dnames), tuple(ddegs)), dtable, ddiff)
        rep.merge(check_na(D), prefix="cone D: ")
    else:
        rep.info = {"inverse_cone": "skipped: B is not a complex (A^2 not in I)"}
    return C, D, rep


def _subcomplex_acyclic(structure, indices) -> bool:
    idx_set = set(indices)
    degs = sorted({structure.basis.degree(i) for i in indices})
    for dgr in degs:
        here = [i for i in indices if structure.basis.degree(i) == dgr]
        above = [i for i in indices if structure.basis.degree(i) == dgr + 1]
        below = [i for i in indices if structure.basis.degree(i) == dgr - 1]
        m_out = [
            [
                structure.d(Element.basis_vector(s)).terms.get(t, Fraction(0))
                for s in here
            ]
            for t in above
        ]
        m_in = [
            [
                structure.d(Element.basis_vector(s)).terms.get(t, Fraction(0))
                for s in below
            ]
            for t in here
        ]
        for s in here:
            img = structure.d(Element.basis_vector(s))
            if any(t not in idx_set for t in img.terms):
                return False
        z_dim = len(here) - (linalg.rank(m_out) if above else 0)
        b_dim = linalg.rank(m_in) if below else 0
        if z_dim != b_dim:
            return False
    return True


# ---------------------------------------------------------------------------
# Exponential of nilpotent derivations
# ---------------------------------------------------------------------------


class UnitalGradedAlgebra:
    """Finite unital graded-commutative algebra (coefficient algebra R for
    derivation exponentials).  `unit` names the basis element acting as 1."""

    def __init__(self, basis: GradedBasis, table, unit: str):
        self.basis = basis
        self.unit = basis.index(unit)
        if basis.degree(self.unit) != 0:
            raise InputError("unit must have degree 0")
        self.table = {k: v.copy() for k, v in table.items() if not v.is_zero()}

    def _sign_swap(self, i, j):
        return -1 if (self.basis.degree(i) * self.basis.degree(j)) % 2 else 1

    def _op_basis(self, i, j) -> Element:
        if i == self.unit:
            return Element.basis_vector(j)
        if j == self.unit:
            return Element.basis_vector(i)
        if (i, j) in self.table:
            return self.table[(i, j)]
        if (j, i) in self.table:
            return self.table[(j, i)].scale(self._sign_swap(i, j))
        return Element()

    def product(self, x: Element, y: Element) -> Element:
        out = Element()
        for i, ci in x.terms.items():
            for j, cj in y.terms.items():
                for k, v in self._op_basis(i, j).terms.items():
                    out.add_term(k, ci * cj * v)
        return out


class ExpDerivation:
    """e^d for a degree-0 derivation d of R valued in R (x) m_A, acting as an
    automorphism of R (x) (K + m_A).

    Elements of R (x) (K + m_A) are sparse maps {(r_index, a_index): coeff}
    with a_index = -1 denoting the unit of the base.
    """

    UNIT = -1

    def __init__(self, R: UnitalGradedAlgebra, A: ArtinDg, values):
        if not A.is_classical():
            raise InputError("derivation exponentials need a degree-0 base")
        self.R = R
        self.A = A
        self.values = {r: dict(v) for r, v in values.items()}  # r -> {(ri,ai): c}
        leib = self.leibnitz_report()
        if not leib.ok():
            raise DomainError("input is not a derivation:\n" + leib.text())

    # elements -------------------------------------------------------------

    def embed(self, r_index, a_index=UNIT):
        return {(r_index, a_index): Fraction(1)}

    def _mul(self, x, y):
        out = {}
        for (r1, a1), c1 in x.items():
            for (r2, a2), c2 in y.items():
                rr = self.R.product(Element.basis_vector(r1), Element.basis_vector(r2))
                if a1 == self.UNIT and a2 == self.UNIT:
                    aa = {self.UNIT: Fraction(1)}
                elif a1 == self.UNIT:
                    aa = {a2: Fraction(1)}
                elif a2 == self.UNIT:
                    aa = {a1: Fraction(1)}
                else:
                    prod = self.A.product(
                        Element.basis_vector(a1), Element.basis_vector(a2)
                    )
                    aa = prod.terms
                for rk, rv in rr.terms.items():
                    for ak, av in aa.items():
                        key = (rk, ak)
                        val = out.get(key, 0) + c1 * c2 * rv * av
                        if val:
                            out[key] = val
                        else:
                            out.pop(key, None)
        return out

    def _apply_d(self, x):
        out = {}
        for (r, a), c in x.items():
            for (rk, ak), v in self.values.get(r, {}).items():
                if ak == self.UNIT:
                    raise InputError("derivation values must lie in R (x) m_A")
                if a == self.UNIT:
                    keys = {ak: Fraction(1)}
                else:
                    keys = self.A.product(
                        Element.basis_vector(ak), Element.basis_vector(a)
                    ).terms
                for am, cm in keys.items():
                    key = (rk, am)
                    val = out.get(key, 0) + c * v * cm
                    if val:
                        out[key] = val
                    else:
                        out.pop(key, None)
        return out

    def leibnitz_report(self) -> CheckReport:
        rep = CheckReport("exp-der-leibnitz")
        nR = len(self.R.basis)
        for i in range(nR):
            for j in range(nR):
                lhs = {}
                prod = self.R.product(Element.basis_vector(i), Element.basis_vector(j))
                for rk, rv in prod.terms.items():
                    for key, c in self.values.get(rk, {}).items():
                        val = lhs.get(key, 0) + rv * c
                        if val:
                            lhs[key] = val
                        else:
                            lhs.pop(key, None)
                rhs = self._mul(self.values.get(i, {}), self.embed(j))
                for key, c in self._mul(self.embed(i), self.values.get(j, {})).items():
                    val = rhs.get(key, 0) + c
                    if val:
                        rhs[key] = val
                    else:
                        rhs.pop(key, None)
                diff = dict(lhs)
                for key, c in rhs.items():
                    val = diff.get(key, 0) - c
                    if val:
                        diff[key] = val
                    else:
                        diff.pop(key, None)
                if diff:
                    rep.add(
                        f"leibnitz({self.R.basis.names[i]},{self.R.basis.names[j]})",
                        str(diff),
                        "derivation rule fails",
                    )
        return rep

    def apply(self, x):
        """e^d(x) = sum d^n(x)/n!; terminates by nilpotency of m_A."""
        out = dict(x)
        term = dict(x)
        bound = (self.A.nilpotency_index or len(self.A.basis) + 2) + 2
        n = 1
        while term:
            term = self._apply_d(term)
            if not term:
                break
            if n > bound:
                raise InternalError("derivation exponential failed to terminate")
            f = Fraction(1, factorial(n))
            for key, c in term.items():
                val = out.get(key, 0) + c * f
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
            n += 1
        return out

    def verify(self) -> CheckReport:
        """Multiplicativity on basis pairs, identity mod m_A, and
        e^d e^{-d} = id."""
        rep = CheckReport("exp-der")
        nR = len(self.R.basis)
        for i in range(nR):
            for j in range(nR):
                lhs = self.apply(
                    self._mul(self.embed(i), self.embed(j))
                )
                rhs = self._mul(self.apply(self.embed(i)), self.apply(self.embed(j)))
                diff = dict(lhs)
                for key, c in rhs.items():
                    val = diff.get(key, 0) - c
                    if val:
                        diff[key] = val
                    else:
                        diff.pop(key, None)
                if diff:
                    rep.add(
                        f"mult({self.R.basis.names[i]},{self.R.basis.names[j]})",
                        str(diff),
                        "e^d is not multiplicative",
                    )
        inverse = ExpDerivation(
            self.R,
            self.A,
            {r: {k: -c for k, c in v.items()} for r, v in self.values.items()},
        )
        for i in range(nR):
            once = self.apply(self.embed(i))
            back = inverse.apply(once)
            if back != self.embed(i):
                rep.add(
                    f"inverse({self.R.basis.names[i]})",
                    str(back),
                    "e^d e^{-d} != id",
                )
            reduced = {k: c for k, c in once.items() if k[1] == self.UNIT}
            if reduced != self.embed(i):
                rep.add(
                    f"reduction({self.R.basis.names[i]})",
                    str(reduced),
                    "e^d is not the identity mod m_A",
                )
        return rep


# ---------------------------------------------------------------------------
# Homotopies valued in B[t, dt]
# ---------------------------------------------------------------------------


class DtPolynomial:
    """Element of B[t,dt]: sparse map {(b_index, t_power, has_dt): coeff}."""

    __slots__ = ("B", "terms")

    def __init__(self, B: ArtinDg, terms=None):
        self.B = B
        self.terms = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = v

    def add_term(self, key, coeff):
        val = self.terms.get(key, 0) + coeff
        if val:
            self.terms[key] = val
        else:
            self.terms.pop(key, None)

    def __add__(self, other):
        out = DtPolynomial(self.B, dict(self.terms))
        for k, v in other.terms.items():
            out.add_term(k, v)
        return out

    def __sub__(self, other):
        out = DtPolynomial(self.B, dict(self.terms))
        for k, v in other.terms.items():
            out.add_term(k, -v)
        return out

    def scale(self, c):
        return DtPolynomial(self.B, {k: v * c for k, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, DtPolynomial) and self.terms == other.terms

    def mul(self, other) -> "DtPolynomial":
        out = DtPolynomial(self.B)
        for (b1, k1, dt1), c1 in self.terms.items():
            for (b2, k2, dt2), c2 in other.terms.items():
                if dt1 and dt2:
                    continue
                # move the dt (degree 1) in the first factor past b2
                sign = 1
                if dt1 and self.B.basis.degree(b2) % 2:
                    sign = -1
                prod = self.B.product(
                    Element.basis_vector(b1), Element.basis_vector(b2)
                )
                for bk, bv in prod.terms.items():
                    out.add_term((bk, k1 + k2, dt1 or dt2), c1 * c2 * bv * sign)
        return out

    def d(self) -> "DtPolynomial":
        """Total differential: d_B (x) 1 + sign (x) d_{K[t,dt]}."""
        out = DtPolynomial(self.B)
        for (b, k, dt), c in self.terms.items():
            for bk, bv in self.B.diff.get(b, Element()).terms.items():
                out.add_term((bk, k, dt), c * bv)
            if not dt and k > 0:
                sign = -1 if self.B.basis.degree(b) % 2 else 1
                out.add_term((b, k - 1, True), c * k * sign)
        return out

    def eval_at(self, s: Fraction) -> Element:
        """Substitute t = s, dt = 0."""
        out = Element()
        for (b, k, dt), c in self.terms.items():
            if dt:
                continue
            out.add_term(b, c * (s ** k))
        return out


class Homotopy:
    """A candidate dg-algebra morphism H: A -> B[t,dt], one DtPolynomial per
    basis element of A."""

    def __init__(self, source: ArtinDg, target: ArtinDg, entries):
        self.A = source
        self.B = target
        self.entries = {}
        for i, poly in entries.items():
            self.entries[i] = (
                poly if isinstance(poly, DtPolynomial) else DtPolynomial(target, poly)
            )

    def apply(self, x: Element) -> DtPolynomial:
        out = DtPolynomial(self.B)
        for i, c in x.terms.items():
            if i in self.entries:
                out = out + self.entries[i].scale(c)
        return out

    def verify(self) -> CheckReport:
        """Multiplicativity and commutation with the differentials."""
        rep = CheckReport("homotopy-eval")
        n = len(self.A.basis)
        for i in range(n):
            lhs = self.apply(self.A.d(Element.basis_vector(i)))
            rhs = self.apply(Element.basis_vector(i)).d()
            if not (lhs - rhs).is_zero():
                rep.add(
                    f"chain({self.A.basis.names[i]})",
                    str((lhs - rhs).terms),
                    "H does not commute with the differentials",
                )
        for i in range(n):
            for j in range(n):
                prod = self.A.product(Element.basis_vector(i), Element.basis_vector(j))
                lhs = self.apply(prod)
                rhs = self.apply(Element.basis_vector(i)).mul(
                    self.apply(Element.basis_vector(j))
                )
                if not (lhs - rhs).is_zero():
                    rep.add(
                        f"mult({self.A.basis.names[i]},{self.A.basis.names[j]})",
                        str((lhs - rhs).terms),
                        "H is not multiplicative",
                    )
        return rep

    def eval_at(self, s) -> dict:
        """The algebra map e_s o H: A -> B as a basis-indexed table."""
        return {i: self.entries[i].eval_at(Fraction(s)) for i in self.entries}
