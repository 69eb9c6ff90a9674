"""Vectors, canonical subspaces, forms, and isotropic-subspace enumeration.

Vectors over GF(q) are tuples of packed field-element ints; matrices are
tuples of such rows.  A subspace is always handled through its reduced
row-echelon (Hermite normal form) matrix, which is the unique canonical
representative, and subspaces are ordered by comparing those matrices
lexicographically row by row with entries ordered by ``GF.gap_rank`` --
the same convention GAP uses, which the bundled table fixtures depend on.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .errors import DomainError, FormEquivalenceError
from .gf import GF

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]


# ---------------------------------------------------------------------------
# vector/matrix arithmetic


def vec_add(F: GF, u: Vec, v: Vec) -> Vec:
    return tuple(F.add(a, b) for a, b in zip(u, v))


def vec_sub(F: GF, u: Vec, v: Vec) -> Vec:
    return tuple(F.sub(a, b) for a, b in zip(u, v))


def vec_scale(F: GF, c: int, u: Vec) -> Vec:
    return tuple(F.mul(c, a) for a in u)


def vec_dot(F: GF, u: Vec, v: Vec) -> int:
    acc = 0
    for a, b in zip(u, v):
        acc = F.add(acc, F.mul(a, b))
    return acc


def mat_vec(F: GF, A: Mat, v: Vec) -> Vec:
    return tuple(vec_dot(F, row, v) for row in A)


def vec_mat(F: GF, v: Vec, A: Mat) -> Vec:
    n = len(A[0])
    out = [0] * n
    for c, row in zip(v, A):
        if c:
            for j, a in enumerate(row):
                out[j] = F.add(out[j], F.mul(c, a))
    return tuple(out)


def mat_mul(F: GF, A: Mat, B: Mat) -> Mat:
    return tuple(vec_mat(F, row, B) for row in A)


def mat_transpose(A: Mat) -> Mat:
    return tuple(zip(*A))


def mat_identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def rref(F: GF, rows) -> list[list[int]]:
    """Reduced row-echelon form; zero rows dropped."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, a) for a in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[i], m[r])]
        r += 1
        if r == nrows:
            break
    return [row for row in m[:r]]


def mat_rank(F: GF, rows) -> int:
    return len(rref(F, rows))


def mat_inv(F: GF, A: Mat) -> Mat:
    n = len(A)
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    red = rref(F, aug)
    if len(red) < n or any(red[i][i] != 1 for i in range(n)):
        raise DomainError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def nullspace(F: GF, A) -> list[Vec]:
    """Basis (RREF rows) of {x : A x^T = 0}."""
    if not A:
        return []
    red = rref(F, A)
    ncols = len(A[0])
    pivots = []
    for row in red:
        pivots.append(next(j for j, a in enumerate(row) if a))
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        v = [0] * ncols
        v[j] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(red[i][j])
        basis.append(tuple(v))
    return rref(F, basis) if basis else []


# ---------------------------------------------------------------------------
# canonical subspaces


@dataclass(frozen=True)
class Subspace:
    """A subspace held as its unique reduced-echelon matrix."""

    n: int
    k: int
    rows: Mat

    def contains_vector(self, F: GF, v: Vec) -> bool:
        return mat_rank(F, list(self.rows) + [list(v)]) == self.k

    def contains(self, F: GF, other: "Subspace") -> bool:
        return mat_rank(F, list(self.rows) + list(other.rows)) == self.k

    def sort_key(self, F: GF):
        return tuple(F.gap_rank(a) for row in self.rows for a in row)

    def vectors(self, F: GF):
        """All q^k vectors, zero included."""
        for coeffs in product(range(F.order), repeat=self.k):
            v = (0,) * self.n
            for c, row in zip(coeffs, self.rows):
                if c:
                    v = vec_add(F, v, vec_scale(F, c, row))
            yield v


def canonicalize(F: GF, rows) -> Subspace:
    red = rref(F, rows)
    if not red:
        raise DomainError("zero matrix spans no projective subspace")
    n = len(rows[0])
    return Subspace(n, len(red), tuple(tuple(r) for r in red))


def zero_subspace(n: int) -> Subspace:
    return Subspace(n, 0, ())


def intersection(F: GF, A: Subspace, B: Subspace) -> Subspace:
    """A cap B via the nullspace of the stacked coefficient relation."""
    stacked = list(A.rows) + list(B.rows)
    rel = nullspace(F, mat_transpose(tuple(tuple(r) for r in stacked)))
    # each relation c with sum c_i row_i = 0 gives the vector from A's part
    vecs = []
    for c in rel:
        v = (0,) * A.n
        for ci, row in zip(c[: A.k], A.rows):
            if ci:
                v = vec_add(F, v, vec_scale(F, ci, row))
        if any(v):
            vecs.append(v)
    if not vecs:
        return zero_subspace(A.n)
    return canonicalize(F, vecs)


def intersection_dim(F: GF, A: Subspace, B: Subspace) -> int:
    return A.k + B.k - mat_rank(F, list(A.rows) + list(B.rows))


# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True)
class BilinearForm:
    gram: Mat
    kind: str  # "symplectic" | "symmetric"

    def validate(self, F: GF):
        n = len(self.gram)
        G = self.gram
        if self.kind == "symplectic":
            ok = all(G[i][i] == 0 for i in range(n)) and all(
                G[i][j] == F.neg(G[j][i]) for i in range(n) for j in range(n)
            )
        elif self.kind == "symmetric":
            ok = all(G[i][j] == G[j][i] for i in range(n) for j in range(n))
        else:
            raise DomainError(f"unknown form kind {self.kind!r}")
        if not ok:
            raise DomainError(f"gram matrix is not {self.kind}")
        if mat_rank(F, G) != n:
            raise DomainError("form is degenerate")


def beta(F: GF, gram: Mat, u: Vec, v: Vec) -> int:
    return vec_dot(F, vec_mat(F, u, gram), v)


def symplectic_j6(F: GF) -> BilinearForm:
    """beta(x,y) = x1 y6 - x6 y1 + x2 y5 - x5 y2 + x3 y4 - x4 y3."""
    n = 6
    g = [[0] * n for _ in range(n)]
    for i in range(3):
        g[i][n - 1 - i] = 1
        g[n - 1 - i][i] = F.neg(1)
    return BilinearForm(tuple(tuple(r) for r in g), "symplectic")


def symplectic_j4(F: GF) -> BilinearForm:
    """beta(x,y) = x1 y4 - x4 y1 + x2 y3 - x3 y2."""
    n = 4
    g = [[0] * n for _ in range(n)]
    for i in range(2):
        g[i][n - 1 - i] = 1
        g[n - 1 - i][i] = F.neg(1)
    return BilinearForm(tuple(tuple(r) for r in g), "symplectic")


@dataclass(frozen=True)
class QuadraticForm:
    coeffs: Mat  # upper triangular

    def evaluate(self, F: GF, x: Vec) -> int:
        acc = 0
        for i, row in enumerate(self.coeffs):
            if x[i]:
                for j in range(i, len(row)):
                    if row[j] and x[j]:
                        acc = F.add(acc, F.mul(row[j], F.mul(x[i], x[j])))
        return acc

    def gram(self, F: GF) -> Mat:
        """Symmetric G with Q(x) = x G x^T (odd characteristic)."""
        n = len(self.coeffs)
        half = F.inv(2)
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                c = self.coeffs[i][j]
                if i == j:
                    g[i][i] = c
                elif c:
                    g[i][j] = F.mul(half, c)
                    g[j][i] = g[i][j]
        return tuple(tuple(r) for r in g)

    def polar_form(self, F: GF) -> BilinearForm:
        return BilinearForm(self.gram(F), "symmetric")


def quadratic_from_upper(rows) -> QuadraticForm:
    return QuadraticForm(tuple(tuple(r) for r in rows))


def perp(F: GF, U: Subspace, form: BilinearForm) -> Subspace:
    """The polar space U^perp = {v : beta(u, v) = 0 for all u in U}."""
    if U.n != len(form.gram):
        raise DomainError("dimension mismatch between subspace and form")
    if U.k == 0:
        raise DomainError("perp of the zero subspace is the full space")
    rows = mat_mul(F, U.rows, form.gram)
    basis = nullspace(F, rows)
    if not basis:
        return zero_subspace(U.n)
    return canonicalize(F, basis)


# ---------------------------------------------------------------------------
# enumeration of isotropic / singular subspaces


def projective_point_reps(F: GF, n: int):
    """One vector per projective point, leading coordinate 1."""
    for lead in range(n):
        prefix = (0,) * lead + (1,)
        for tail in product(range(F.order), repeat=n - lead - 1):
            yield prefix + tail


def _is_isotropic_point(F: GF, form, v: Vec) -> bool:
    if isinstance(form, QuadraticForm):
        return form.evaluate(F, v) == 0
    if form.kind == "symplectic":
        return True
    return beta(F, form.gram, v, v) == 0


def _polar_gram(F: GF, form) -> Mat:
    return form.gram(F) if isinstance(form, QuadraticForm) else form.gram


def isotropic_points(F: GF, form, n: int) -> list[Subspace]:
    pts = [
        Subspace(n, 1, (v,))
        for v in projective_point_reps(F, n)
        if _is_isotropic_point(F, form, v)
    ]
    pts.sort(key=lambda s: s.sort_key(F))
    return pts


def _extensions(F: GF, form, space: Subspace):
    """Last-RREF-row extensions of a totally isotropic space, each child once.

    A child is the parent plus one extra RREF row whose pivot exceeds every
    parent pivot and whose pivot column is zero in all parent rows.  The
    parent is then exactly the span of the child's first k-1 echelon rows,
    so every child arises from a unique parent and is produced once.
    """
    gram = _polar_gram(F, form)
    pivots = [next(j for j, a in enumerate(row) if a) for row in space.rows]
    top = pivots[-1]
    # candidate rows: x in space^perp with zeros at parent pivots
    eqs = list(mat_mul(F, space.rows, gram))
    for pcol in pivots:
        eqs.append(tuple(1 if j == pcol else 0 for j in range(space.n)))
    basis = nullspace(F, eqs)
    if not basis:
        return
    W = Subspace(space.n, len(basis), tuple(basis))
    for v in W.vectors(F):
        lead = next((j for j, a in enumerate(v) if a), None)
        if lead is None or lead <= top or v[lead] != 1:
            continue
        if any(row[lead] for row in space.rows):
            continue
        if not _is_isotropic_point(F, form, v):
            continue
        yield Subspace(space.n, space.k + 1, space.rows + (v,))


def isotropic_subspaces(F: GF, form, k: int, n: int,
                        containing: Subspace | None = None) -> list[Subspace]:
    """All totally isotropic (or totally singular) k-subspaces.

    With ``containing`` given, only subspaces through it are produced (by
    direct extension with canonical de-duplication).  The result is sorted
    in the canonical matrix order; an empty list signals that k exceeds the
    Witt index.
    """
    if containing is not None:
        out = {containing} if containing.k == k else set()
        frontier = [containing]
        for _ in range(k - containing.k):
            nxt = set()
            for space in frontier:
                gram = _polar_gram(F, form)
                eqs = list(mat_mul(F, space.rows, gram))
                basis = nullspace(F, eqs)
                if not basis:
                    continue
                W = Subspace(space.n, len(basis), tuple(basis))
                for v in W.vectors(F):
                    if not any(v) or space.contains_vector(F, v):
                        continue
                    if not _is_isotropic_point(F, form, v):
                        continue
                    nxt.add(canonicalize(F, list(space.rows) + [v]))
            frontier = list(nxt)
        out |= set(frontier)
        res = list(out)
        res.sort(key=lambda s: s.sort_key(F))
        return res

    level = isotropic_points(F, form, n)
    for _ in range(k - 1):
        nxt = []
        for space in level:
            nxt.extend(_extensions(F, form, space))
        level = nxt
    level.sort(key=lambda s: s.sort_key(F))
    return level


def verify_totally_isotropic(F: GF, form, spaces) -> bool:
    """Re-check beta(u,v)=0 on all basis pairs of every listed subspace."""
    gram = _polar_gram(F, form)
    for s in spaces:
        for u in s.rows:
            for v in s.rows:
                if beta(F, gram, u, v) != 0:
                    return False
            if isinstance(form, QuadraticForm) and form.evaluate(F, u) != 0:
                return False
    return True


def subspaces_within(F: GF, space: Subspace, k: int) -> list[Subspace]:
    """All k-subspaces of a given subspace (small dimensions only)."""
    out = set()
    for rows in combinations(list(space.vectors(F)), k):
        if all(any(r) for r in rows) and mat_rank(F, rows) == k:
            out.add(canonicalize(F, rows))
    res = list(out)
    res.sort(key=lambda s: s.sort_key(F))
    return res


# ---------------------------------------------------------------------------
# point-line geometries


class PointLineGeometry:
    """Indexed points (dim-1) and lines (dim-2) with containment incidence."""

    def __init__(self, F: GF, points: list[Subspace], lines: list[Subspace]):
        self.F = F
        self.points = points
        self.lines = lines
        self.point_index = {s.rows: i for i, s in enumerate(points)}
        self.line_index = {s.rows: i for i, s in enumerate(lines)}
        self._lines_points: list[tuple[int, ...]] | None = None

    @property
    def lines_points(self) -> list[tuple[int, ...]]:
        if self._lines_points is None:
            out = []
            for ln in self.lines:
                ids = []
                for v in _projective_reps_of(self.F, ln):
                    ids.append(self.point_index[(v,)])
                out.append(tuple(sorted(ids)))
            self._lines_points = out
        return self._lines_points


def _projective_reps_of(F: GF, space: Subspace):
    """Canonical (leading-1) vector of every projective point of a subspace."""
    seen = set()
    for v in space.vectors(F):
        lead = next((j for j, a in enumerate(v) if a), None)
        if lead is None:
            continue
        w = vec_scale(F, F.inv(v[lead]), v)
        if w not in seen:
            seen.add(w)
            yield w


# ---------------------------------------------------------------------------
# form equivalence up to similarity


def _diagonalize(F: GF, G: Mat) -> Mat:
    """E with E G E^T diagonal and no zero diagonal entries (G nondegenerate)."""
    n = len(G)
    basis: list[Vec] = []
    complement = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    Gm = G

    def bform(u, v):
        return beta(F, Gm, u, v)

    while complement:
        v = next((w for w in complement if bform(w, w) != 0), None)
        if v is None:
            # characteristic is odd and the restriction is nondegenerate, so
            # some u+w is anisotropic
            found = None
            for u, w in combinations(complement, 2):
                s = vec_add(F, u, w)
                if bform(s, s) != 0:
                    found = s
                    break
            if found is None:
                raise DomainError("form is degenerate on the residual space")
            v = found
        basis.append(v)
        dv = bform(v, v)
        new_comp = []
        for w in complement:
            coef = F.div(bform(w, v), dv)
            w2 = vec_sub(F, w, vec_scale(F, coef, v))
            if any(w2):
                w2_red = rref(F, list(r for r in [w2]))
                new_comp.append(tuple(w2_red[0]))
        # re-reduce to an independent set
        red = rref(F, new_comp) if new_comp else []
        complement = [tuple(r) for r in red]
    E = tuple(basis)
    return E


def _normalize_diagonal(F: GF, E: Mat, G: Mat) -> tuple[Mat, Vec]:
    """Rescale/merge rows of E so E G E^T = diag(1,...,1,d), d in {1, ns}."""
    n = len(E)
    rows = [list(r) for r in E]

    def d(i):
        return beta(F, G, tuple(rows[i]), tuple(rows[i]))

    ns = min((a for a in range(1, F.order) if not F.is_square(a)), key=F.gap_rank)
    # scale each row by 1/sqrt of the square part
    for i in range(n):
        di = d(i)
        if F.is_square(di):
            s = _sqrt(F, di)
            rows[i] = [F.div(a, s) for a in rows[i]]
        else:
            s = _sqrt(F, F.div(di, ns))
            rows[i] = [F.div(a, s) for a in rows[i]]
    # now each diagonal entry is 1 or ns; clear ns-pairs to (1,1)
    while True:
        bad = [i for i in range(n) if d(i) != 1]
        if len(bad) < 2:
            break
        i, j = bad[0], bad[1]
        # find x,y with ns x^2 + ns y^2 = 1, then rotate the pair
        sol = None
        for x in range(1, F.order):
            rhs = F.sub(1, F.mul(ns, F.mul(x, x)))
            yy = F.div(rhs, ns)
            if F.is_square(yy):
                y = _sqrt(F, yy)
                sol = (x, y)
                break
        x, y = sol
        u = vec_add(F, vec_scale(F, x, tuple(rows[i])), vec_scale(F, y, tuple(rows[j])))
        # complete the pair orthogonally
        w = vec_sub(F, vec_scale(F, F.neg(y), tuple(rows[i])), vec_scale(F, F.neg(x), tuple(rows[j])))
        # w = -y e_i + x e_j has d(w) = ns(y^2 + x^2); make orthogonal complement of u in the pair-plane
        gu = beta(F, G, u, w)
        if gu != 0:
            coef = F.div(gu, beta(F, G, u, u))
            w = vec_sub(F, w, vec_scale(F, coef, u))
        rows[i] = list(u)
        dj = beta(F, G, tuple(w), tuple(w))
        if F.is_square(dj):
            s = _sqrt(F, dj)
            w = tuple(F.div(a, s) for a in w)
        else:
            s = _sqrt(F, F.div(dj, ns))
            w = tuple(F.div(a, s) for a in w)
        rows[j] = list(w)
    # move the odd entry (if any) to the end
    bad = [i for i in range(n) if d(i) != 1]
    if bad and bad[0] != n - 1:
        i = bad[0]
        rows[i], rows[n - 1] = rows[n - 1], rows[i]
    E2 = tuple(tuple(r) for r in rows)
    diag = tuple(beta(F, G, r, r) for r in E2)
    return E2, diag


def _sqrt(F: GF, a: int) -> int:
    if a == 0:
        return 0
    k = F.log[a]
    if k % 2:
        raise DomainError("not a square")
    return F.exp[k // 2]


def isometry_between(F: GF, Q1: QuadraticForm, Q2: QuadraticForm):
    """M, c with Q2(x M) = c * Q1(x) for all x; exact matrix identity check.

    Raises FormEquivalenceError when the forms are not similar.
    """
    G1, G2 = Q1.gram(F), Q2.gram(F)
    n = len(G1)
    if len(G2) != n:
        raise FormEquivalenceError("forms have different dimensions")
    if mat_rank(F, G1) != n or mat_rank(F, G2) != n:
        raise FormEquivalenceError("forms must be nondegenerate")
    E1, d1 = _normalize_diagonal(F, _diagonalize(F, G1), G1)
    ns = min((a for a in range(1, F.order) if not F.is_square(a)), key=F.gap_rank)
    for c in (1, ns):
        G2c = tuple(tuple(F.mul(F.inv(c), a) for a in row) for row in G2)
        try:
            E2, d2 = _normalize_diagonal(F, _diagonalize(F, G2c), G2c)
        except DomainError:
            continue
        if d1 == d2:
            # E1 G1 E1^T = D = E2 (G2/c) E2^T  =>  M = E1^{-1} E2
            M = mat_mul(F, mat_inv(F, E1), E2)
            MG2MT = mat_mul(F, mat_mul(F, M, G2), mat_transpose(M))
            target = tuple(tuple(F.mul(c, a) for a in row) for row in G1)
            if MG2MT != target:
                raise AssertionError("isometry construction failed verification")
            return M, c
    raise FormEquivalenceError("forms are not equivalent up to similarity")


# ---------------------------------------------------------------------------
# Pluecker correspondence for lines of PG(3,q)


def plucker_embed(F: GF, line: Subspace) -> Vec:
    """(p12, p13, p14, p23, p24, p34) of a line of PG(3,q), normalized."""
    if line.k != 2 or line.n != 4:
        raise DomainError("pluecker embedding needs a line of PG(3,q)")
    u, v = line.rows
    p = []
    for i, j in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
        p.append(F.sub(F.mul(u[i], v[j]), F.mul(u[j], v[i])))
    lead = next(a for a in p if a)
    inv = F.inv(lead)
    return tuple(F.mul(inv, a) for a in p)


def plucker_line(F: GF, p: Vec) -> Subspace:
    """Inverse of the embedding: rows of the rank-2 antisymmetric matrix."""
    p12, p13, p14, p23, p24, p34 = p
    m = [
        [0, p12, p13, p14],
        [F.neg(p12), 0, p23, p24],
        [F.neg(p13), F.neg(p23), 0, p34],
        [F.neg(p14), F.neg(p24), F.neg(p34), 0],
    ]
    rows = rref(F, m)
    if len(rows) != 2:
        raise DomainError("pluecker coordinates do not satisfy the Klein relation")
    return Subspace(4, 2, tuple(tuple(r) for r in rows))


def klein_section(F: GF) -> QuadraticForm:
    """Parabolic form q(p12,p13,p14,p24,p34) = p12 p34 - p13 p24 - p14^2.

    The Klein quadric restricted to the hyperplane p23 = -p14, which is the
    section carrying the totally isotropic lines of W(3,q).
    """
    c = [[0] * 5 for _ in range(5)]
    c[0][4] = 1
    c[1][3] = F.neg(1)
    c[2][2] = F.neg(1)
    return QuadraticForm(tuple(tuple(r) for r in c))


def w3_line_to_section_point(F: GF, line: Subspace) -> Vec:
    p = plucker_embed(F, line)
    p12, p13, p14, p23, p24, p34 = p
    if p23 != F.neg(p14):
        raise DomainError("line is not totally isotropic for the W(3,q) form")
    return (p12, p13, p14, p24, p34)


def section_point_to_w3_line(F: GF, v: Vec) -> Subspace:
    p12, p13, p14, p24, p34 = v
    return plucker_line(F, (p12, p13, p14, F.neg(p14), p24, p34))
