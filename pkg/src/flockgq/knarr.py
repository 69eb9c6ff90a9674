"""The Knarr model: a flock generalized quadrangle from a BLT-set.

Inside W(5,q) with the form x1 y6 - x6 y1 + x2 y5 - x5 y2 + x3 y4 - x4 y3
and the base point P = <(1,0,0,0,0,0)>, a BLT line <u1, u2> lifts to the
plane <P, [0,u1,0], [0,u2,0]>.  Points of the quadrangle are the affine
points off P-perp (type i), the lines inside a BLT plane missing P
(type ii) and P itself (type iii); lines are the totally isotropic planes
meeting a BLT plane in a line but not lying in P-perp (type a) together
with the BLT planes (type b).  Indexing is canonical: objects sort by
(type, echelon matrix) so rebuilt quadrangles index identically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .blt import BLTSet, verify_blt
from .errors import DomainError
from .gf import GF, field_for_order
from . import linalg as la
from .linalg import Subspace
from .maps import SemilinearMap, check_incidence_preserved, induced_permutations

POINT_AFFINE, POINT_SPREAD, POINT_BASE = 0, 1, 2  # (i), (ii), (iii)
LINE_A, LINE_B = 0, 1

P_VECTOR = (1, 0, 0, 0, 0, 0)


def lift_w3_vector(u) -> tuple[int, ...]:
    return (0, u[0], u[1], u[2], u[3], 0)


def project_w5_vector(v) -> tuple[int, ...]:
    return (v[1], v[2], v[3], v[4])


class FlockGQ:
    def __init__(self, q: int, blt: BLTSet, points, lines):
        self.q = q
        self.blt = blt
        self.F = field_for_order(q)
        self.point_types, self.points = zip(*points)
        self.line_types, self.lines = zip(*lines)
        self.points = list(self.points)
        self.lines = list(self.lines)
        self.point_index = {s.rows: i for i, s in enumerate(self.points)}
        self.line_index = {s.rows: i for i, s in enumerate(self.lines)}
        # per type-(a) line: id of the BLT plane met in a line, and that line
        self.attached_plane: list = [None] * len(self.lines)
        self.attached_line: list = [None] * len(self.lines)
        self._lines_points = None
        self._points_lines = None

    @property
    def order(self) -> tuple[int, int]:
        return (self.q * self.q, self.q)

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    def blt_plane_line_ids(self) -> list[int]:
        return [j for j, t in enumerate(self.line_types) if t == LINE_B]

    @property
    def lines_points(self):
        if self._lines_points is None:
            self._build_incidence()
        return self._lines_points

    @property
    def points_lines(self):
        if self._points_lines is None:
            self._build_incidence()
        return self._points_lines

    def _build_incidence(self):
        F = self.F
        q = self.q
        lines_points = []
        for j, plane in enumerate(self.lines):
            ids = []
            if self.line_types[j] == LINE_B:
                ids.append(self.point_index[((tuple(P_VECTOR)),)])
                for m in _lines_of_plane_missing_point(F, plane, P_VECTOR):
                    ids.append(self.point_index[m.rows])
            else:
                ids.append(self.point_index[self.attached_line[j].rows])
                for v in _affine_vectors(F, plane):
                    lead = next(i for i, c in enumerate(v) if c)
                    w = la.vec_scale(F, F.inv(v[lead]), v)
                    ids.append(self.point_index[(w,)])
            assert len(ids) == q * q + 1, (j, len(ids))
            lines_points.append(tuple(sorted(ids)))
        points_lines = [[] for _ in range(self.n_points)]
        for j, pts in enumerate(lines_points):
            for i in pts:
                points_lines[i].append(j)
        self._lines_points = lines_points
        self._points_lines = [tuple(ls) for ls in points_lines]


def _lines_of_plane_missing_point(F: GF, plane: Subspace, pvec) -> list[Subspace]:
    """2-subspaces of a 3-space avoiding a given 1-space, canonical order."""
    q = F.order
    out = []
    cells = (
        [((1, 0, a), (0, 1, b)) for a in range(q) for b in range(q)]
        + [((1, a, 0), (0, 0, 1)) for a in range(q)]
        + [((0, 1, 0), (0, 0, 1))]
    )
    rows = plane.rows
    for c1, c2 in cells:
        r1 = _combine(F, c1, rows)
        r2 = _combine(F, c2, rows)
        m = la.canonicalize(F, [r1, r2])
        if not m.contains_vector(F, pvec):
            out.append(m)
    out.sort(key=lambda s: s.sort_key(F))
    return out


def _combine(F: GF, coeffs, rows):
    v = (0,) * len(rows[0])
    for c, r in zip(coeffs, rows):
        if c:
            v = la.vec_add(F, v, la.vec_scale(F, c, r))
    return v


def _affine_vectors(F: GF, plane: Subspace):
    """Vectors of a plane with last coordinate 1 (the plane is off x6=0)."""
    rows = plane.rows
    last = [r[-1] for r in rows]
    piv = next(i for i, a in enumerate(last) if a)
    base = la.vec_scale(F, F.inv(last[piv]), rows[piv])
    others = [
        la.vec_sub(F, r, la.vec_scale(F, r[-1], base))
        for i, r in enumerate(rows)
        if i != piv
    ]
    for c1 in range(F.order):
        for c2 in range(F.order):
            v = base
            if c1:
                v = la.vec_add(F, v, la.vec_scale(F, c1, others[0]))
            if c2:
                v = la.vec_add(F, v, la.vec_scale(F, c2, others[1]))
            yield v


def ti_planes_on_line(F: GF, form: la.BilinearForm, line: Subspace) -> list[Subspace]:
    """The q+1 totally isotropic planes through a t.i. line of W(5,q)."""
    perp = la.perp(F, line, form)
    comp = [r for r in perp.rows if not line.contains_vector(F, r)]
    basis = []
    for r in comp:
        if la.mat_rank(F, list(line.rows) + basis + [r]) == 2 + len(basis) + 1:
            basis.append(list(r))
        if len(basis) == 2:
            break
    c1, c2 = (tuple(b) for b in basis)
    planes = [la.canonicalize(F, list(line.rows) + [c2])]
    for t in range(F.order):
        w = la.vec_add(F, c1, la.vec_scale(F, t, c2)) if t else c1
        planes.append(la.canonicalize(F, list(line.rows) + [w]))
    planes.sort(key=lambda s: s.sort_key(F))
    return planes


def blt_planes(F: GF, B: BLTSet) -> list[Subspace]:
    planes = []
    for ln in B.lines:
        rows = [P_VECTOR] + [lift_w3_vector(u) for u in ln.rows]
        planes.append(la.canonicalize(F, rows))
    return planes


def knarr_build(B: BLTSet, check_blt: bool = True) -> FlockGQ:
    q = B.q
    F = field_for_order(q)
    if check_blt:
        rep = verify_blt(B)
        if not rep.direct_ok:
            raise DomainError("input is not a BLT-set")
    J6 = la.symplectic_j6(F)
    planes_b = blt_planes(F, B)

    pts: list[tuple[int, Subspace]] = []
    base_point = Subspace(6, 1, (tuple(P_VECTOR),))
    pts.append((POINT_BASE, base_point))

    # type (ii): lines in BLT planes missing P, also feed type (a) construction
    spread_lines = []
    for pi in planes_b:
        spread_lines.append(_lines_of_plane_missing_point(F, pi, P_VECTOR))
    for group in spread_lines:
        pts.extend((POINT_SPREAD, m) for m in group)

    # type (i): affine points (x6 != 0)
    for combo_head in range(F.order):
        for a1 in range(F.order):
            for a2 in range(F.order):
                for a3 in range(F.order):
                    for a4 in range(F.order):
                        v = (combo_head, a1, a2, a3, a4, 1)
                        lead = next(i for i, c in enumerate(v) if c)
                        w = la.vec_scale(F, F.inv(v[lead]), v) if v[lead] != 1 else v
                        pts.append((POINT_AFFINE, Subspace(6, 1, (w,))))

    # type (a) lines: t.i. planes on a spread line, other than the BLT plane
    lines: list[tuple[int, Subspace]] = [(LINE_B, pi) for pi in planes_b]
    attach: dict[Subspace, tuple[int, Subspace]] = {}
    for b_idx, (pi, group) in enumerate(zip(planes_b, spread_lines)):
        for m in group:
            for rho in ti_planes_on_line(F, J6, m):
                if rho == pi:
                    continue
                if all(r[-1] == 0 for r in rho.rows):
                    raise AssertionError("type (a) plane inside P-perp")
                if rho in attach:
                    raise AssertionError("type (a) plane met two spread lines")
                attach[rho] = (b_idx, m)
                lines.append((LINE_A, rho))

    assert len(pts) == (q * q + 1) * (q**3 + 1), len(pts)
    assert len(lines) == (q**3 + 1) * (q + 1), len(lines)

    pts.sort(key=lambda t: (t[0], t[1].sort_key(F)))
    lines.sort(key=lambda t: (t[0], t[1].sort_key(F)))

    gq = FlockGQ(q, B, pts, lines)
    for j, (t, s) in enumerate(lines):
        if t == LINE_A:
            b_idx, m = attach[s]
            gq.attached_plane[j] = gq.line_index[planes_b[b_idx].rows]
            gq.attached_line[j] = m
    return gq


@dataclass
class GQReport:
    order: tuple[int, int]
    axiom_holds: bool
    witness: tuple | None
    checked_pairs: int


def verify_gq(G: FlockGQ, sample_pairs: int | None = None) -> GQReport:
    """Degree/size invariants always; the one-transversal axiom exhaustively
    or on a deterministic sample of non-incident pairs."""
    q = G.q
    s, t = q * q, q
    for j, pts in enumerate(G.lines_points):
        if len(pts) != s + 1:
            return GQReport((s, t), False, ("line size", j, len(pts)), 0)
    for i, ls in enumerate(G.points_lines):
        if len(ls) != t + 1:
            return GQReport((s, t), False, ("point degree", i, len(ls)), 0)

    line_sets = [frozenset(pts) for pts in G.lines_points]
    checked = 0
    if sample_pairs is None:
        for j, pts in enumerate(line_sets):
            for x in range(G.n_points):
                if x in pts:
                    continue
                hits = sum(len(line_sets[l] & pts) for l in G.points_lines[x])
                checked += 1
                if hits != 1:
                    return GQReport((s, t), False, ("axiom", x, j, hits), checked)
    else:
        rng = random.Random(0xF10C)
        for _ in range(sample_pairs):
            x = rng.randrange(G.n_points)
            j = rng.randrange(G.n_lines)
            if x in line_sets[j]:
                continue
            hits = sum(len(line_sets[l] & line_sets[j]) for l in G.points_lines[x])
            checked += 1
            if hits != 1:
                return GQReport((s, t), False, ("axiom", x, j, hits), checked)
    return GQReport((s, t), True, None, checked)


def incidence_matrix(G: FlockGQ):
    """Sparse point x line 0/1 matrix."""
    from scipy.sparse import csr_matrix

    rows, cols = [], []
    for j, pts in enumerate(G.lines_points):
        for i in pts:
            rows.append(i)
            cols.append(j)
    data = [1] * len(rows)
    return csr_matrix((data, (rows, cols)), shape=(G.n_points, G.n_lines), dtype="int8")


def write_matrixmarket(G: FlockGQ, path: str):
    """Deterministic MatrixMarket coordinate text of the incidence matrix."""
    entries = []
    for j, pts in enumerate(G.lines_points):
        for i in pts:
            entries.append((i + 1, j + 1))
    entries.sort()
    with open(path, "w") as fh:
        fh.write("%%MatrixMarket matrix coordinate integer general\n")
        fh.write(f"{G.n_points} {G.n_lines} {len(entries)}\n")
        for i, j in entries:
            fh.write(f"{i} {j} 1\n")


# ---------------------------------------------------------------------------
# automorphisms of the model


def e_matrix(F: GF, a, z: int) -> tuple[tuple[int, ...], ...]:
    """Member of the elation group E for a in GF(q)^4, z in GF(q)."""
    J4 = la.symplectic_j4(F).gram
    col = la.mat_vec(F, la.mat_transpose(J4), a)  # J'^T a^T, the middle block's first column
    m = [[0] * 6 for _ in range(6)]
    m[0][0] = 1
    for i in range(4):
        m[1 + i][0] = col[i]
        m[1 + i][1 + i] = 1
    m[5][0] = z
    for i in range(4):
        m[5][1 + i] = a[i]
    m[5][5] = 1
    return tuple(tuple(r) for r in m)


def q_matrix(F: GF, lam: int) -> tuple[tuple[int, ...], ...]:
    m = [[0] * 6 for _ in range(6)]
    m[0][0] = lam
    for i in range(1, 5):
        m[i][i] = 1
    m[5][5] = F.inv(lam)
    return tuple(tuple(r) for r in m)


def r_matrix(F: GF, A) -> tuple[tuple[int, ...], ...]:
    """Block embedding of a 4x4 symplectic similarity into the model."""
    J4 = la.symplectic_j4(F).gram
    AJA = la.mat_mul(F, la.mat_mul(F, A, J4), la.mat_transpose(A))
    lam = None
    for i in range(4):
        for j in range(4):
            if J4[i][j]:
                lam = F.div(AJA[i][j], J4[i][j])
                break
        if lam is not None:
            break
    if AJA != tuple(tuple(F.mul(lam, c) for c in row) for row in J4):
        raise DomainError("matrix is not a symplectic similarity of W(3,q)")
    m = [[0] * 6 for _ in range(6)]
    m[0][0] = lam
    for i in range(4):
        for j in range(4):
            m[1 + i][1 + j] = A[i][j]
    m[5][5] = 1
    return tuple(tuple(r) for r in m)


def knarr_autos(G: FlockGQ, r_candidates=None, verify: bool = True):
    """Generators of E and Q, the Frobenius map, and accepted R-candidates.

    Every returned generator is checked to induce an incidence-preserving
    permutation of the quadrangle.  R-candidates (4x4 similarities of the
    W(3,q) form) are additionally required to stabilize the BLT line set;
    offenders raise with a witness.
    """
    F = G.F
    gens: list[SemilinearMap] = []
    unit = [tuple(1 if j == i else 0 for j in range(4)) for i in range(4)]
    for a in unit:
        gens.append(SemilinearMap(e_matrix(F, a, 0)))
    gens.append(SemilinearMap(e_matrix(F, (0, 0, 0, 0), 1)))
    if F.order > 2:
        gens.append(SemilinearMap(q_matrix(F, F.primitive)))
    if F.f > 1:
        gens.append(SemilinearMap(la.mat_identity(6), frob=1))
    for A in r_candidates or ():
        blt_lines = set(G.blt.lines)
        image = {
            la.canonicalize(F, [la.vec_mat(F, r, A) for r in ln.rows])
            for ln in G.blt.lines
        }
        if image != blt_lines:
            bad = next(iter(image - blt_lines))
            raise DomainError(f"R-candidate does not stabilize the BLT-set: {bad.rows}")
        gens.append(SemilinearMap(r_matrix(F, A)))
    if verify:
        for g in gens:
            pperm, lperm = induced_permutations(G, g)
            if not check_incidence_preserved(G, pperm, lperm):
                raise AssertionError("generator does not preserve incidence")
    return gens
